//! Coherence policies and the definition-site checks each one imposes.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::diag::{Code, Diagnostic};
use crate::enumerate::count_derivations;
use crate::sema::{CheckedModule, ModelDecl, ModelId};
use crate::types::{freshening, match_all, normalize, unify_all, Constraint, Subst, Type};
use crate::world::ModelWorld;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PolicyKind {
    #[default]
    UseSite,
    DefSiteStrict,
    DefSiteDisjoint,
    Scoped,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] =
        [PolicyKind::UseSite, PolicyKind::DefSiteStrict, PolicyKind::DefSiteDisjoint, PolicyKind::Scoped];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::UseSite => "use-site",
            PolicyKind::DefSiteStrict => "def-site-strict",
            PolicyKind::DefSiteDisjoint => "def-site-disjoint",
            PolicyKind::Scoped => "scoped",
        }
    }

    /// Policies that rely on at most one model per (concept, type).
    pub fn is_uniqueness(self) -> bool {
        self != PolicyKind::Scoped
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown policy `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Policy {
    pub kind: PolicyKind,
    /// Use-site only: prefer a unique strictly most specific candidate.
    pub prioritize_specific: bool,
    /// Use-site only: on ambiguity take the first candidate and warn.
    pub incoherent_ok: bool,
}

impl Policy {
    pub fn new(kind: PolicyKind) -> Self {
        Policy { kind, ..Policy::default() }
    }
}

/// Two model heads that unify once both are freshened.
#[derive(Debug, Clone)]
pub struct OverlapWitness {
    pub models: (ModelId, ModelId),
    /// Instantiation of each model's own variables at the unified head.
    pub left: Subst,
    pub right: Subst,
    pub head: Vec<Type>,
}

pub fn heads_overlap(m1: &ModelDecl, m2: &ModelDecl) -> Option<OverlapWitness> {
    if m1.concept != m2.concept || m1.head.len() != m2.head.len() {
        return None;
    }
    let f1 = freshening(m1.vars.iter().cloned());
    let f2 = freshening(m2.vars.iter().cloned());
    let pairs: Vec<(Type, Type)> =
        m1.head.iter().zip(&m2.head).map(|(a, b)| (f1.apply(a), f2.apply(b))).collect();
    let mgu = unify_all(&pairs).ok()?;
    let inst = |m: &ModelDecl, f: &Subst| {
        Subst::from_pairs(m.vars.iter().map(|v| (v.clone(), mgu.apply(&f.apply(&Type::Var(v.clone()))))))
    };
    Some(OverlapWitness {
        models: (m1.id.clone(), m2.id.clone()),
        left: inst(m1, &f1),
        right: inst(m2, &f2),
        head: pairs.iter().map(|(a, _)| mgu.apply(a)).collect(),
    })
}

/// Heads equal up to variable renaming; contexts are ignored.
pub fn is_duplicate(m1: &ModelDecl, m2: &ModelDecl) -> bool {
    if m1.concept != m2.concept {
        return false;
    }
    let f1 = freshening(m1.vars.iter().cloned());
    let f2 = freshening(m2.vars.iter().cloned());
    let h1: Vec<Type> = m1.head.iter().map(|t| f1.apply(t)).collect();
    let h2: Vec<Type> = m2.head.iter().map(|t| f2.apply(t)).collect();
    match_all(&h1, &h2).is_some() && match_all(&h2, &h1).is_some()
}

/// Depth budget used when refuting a ground bound.
const REFUTE_DEPTH: usize = 32;

/// True when some ground context constraint of either model, instantiated
/// at the overlap, has no derivation in `visible`.
pub fn disjoint_by_bounds(w: &OverlapWitness, m1: &ModelDecl, m2: &ModelDecl, visible: &ModelWorld) -> bool {
    let ctx = m1.context.iter().map(|c| c.apply(&w.left)).chain(m2.context.iter().map(|c| c.apply(&w.right)));
    ctx.filter(Constraint::is_ground).any(|c| match &c {
        Constraint::Conf { .. } => count_derivations(&c, visible, REFUTE_DEPTH, 1) == 0,
        Constraint::Eq(a, b) => match (normalize(a, &[], visible), normalize(b, &[], visible)) {
            (Ok(x), Ok(y)) => x != y && x.is_ground() && !x.has_assoc() && !y.has_assoc(),
            _ => false,
        },
    })
}

fn self_con(m: &ModelDecl) -> Option<&crate::types::TyCon> {
    m.head.first().and_then(Type::head_con)
}

/// The policy's pairwise verdict for two distinct models of one concept.
pub fn pair_conflict(m1: &ModelDecl, m2: &ModelDecl, visible: &ModelWorld, policy: Policy) -> Option<(Code, String)> {
    if m1.concept != m2.concept {
        return None;
    }
    match policy.kind {
        PolicyKind::UseSite => is_duplicate(m1, m2).then(|| {
            (Code::Duplicate, format!("{} duplicates {} (heads equal up to renaming)", m2.label(), m1.label()))
        }),
        PolicyKind::DefSiteStrict => {
            let (a, b) = (self_con(m1)?, self_con(m2)?);
            (a == b).then(|| {
                (
                    Code::ConstructorDup,
                    format!(
                        "second model of {} for type constructor `{}`: {} conflicts with {}",
                        m1.concept.name,
                        a.name.name,
                        m2.label(),
                        m1.label()
                    ),
                )
            })
        }
        PolicyKind::DefSiteDisjoint => {
            let w = heads_overlap(m1, m2)?;
            if disjoint_by_bounds(&w, m1, m2, visible) {
                return None;
            }
            if m1.is_blanket() && m2.is_blanket() {
                Some((Code::BlanketDup, format!("more than one blanket model of {}", m1.concept.name)))
            } else {
                Some((
                    Code::Overlap,
                    format!(
                        "{} overlaps {} at {}[{}]",
                        m2.label(),
                        m1.label(),
                        m1.concept.name,
                        crate::types::join(&w.head)
                    ),
                ))
            }
        }
        PolicyKind::Scoped => None,
    }
}

/// Definition-site checks for the models declared in `module`.
pub fn check_def_site(module: &CheckedModule, visible: &ModelWorld, policy: Policy) -> Vec<Diagnostic> {
    crate::par::flat_map(&module.models, |m| check_one(m, module, visible, policy))
}

fn check_one(m: &Arc<ModelDecl>, module: &CheckedModule, visible: &ModelWorld, policy: Policy) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let here = &module.name;
    match policy.kind {
        PolicyKind::Scoped => {
            if m.name.is_none() {
                out.push(Diagnostic::new(
                    Code::NeedsName,
                    here.clone(),
                    m.span.clone(),
                    format!("{} must be named under the scoped policy", m.label()),
                ));
            }
            return out;
        }
        PolicyKind::DefSiteStrict if m.is_blanket() => {
            out.push(Diagnostic::new(
                Code::BlanketSelf,
                here.clone(),
                m.head_span.clone(),
                format!("{} introduces a bare type variable as Self", m.label()),
            ));
        }
        PolicyKind::DefSiteDisjoint => out.extend(check_orphan(m, visible)),
        _ => {}
    }
    // Pair with every model visible before this one, so each pair is
    // reported once, at the later declaration.
    for e in visible.entries.iter() {
        let n = &e.model;
        if Arc::ptr_eq(n, m) {
            break;
        }
        if policy.kind == PolicyKind::DefSiteStrict && (n.is_blanket() || m.is_blanket()) {
            continue;
        }
        if let Some((code, msg)) = pair_conflict(n, m, visible, policy) {
            out.push(
                Diagnostic::new(code, here.clone(), m.span.clone(), msg)
                    .with_related(n.span.clone(), format!("conflicting {}", n.label())),
            );
        }
    }
    out
}

pub fn check_orphan(m: &ModelDecl, _visible: &ModelWorld) -> Vec<Diagnostic> {
    let here = m.origin();
    if m.concept.module == here {
        return vec![];
    }
    for (i, t) in m.head.iter().enumerate() {
        match t {
            Type::Var(v) => {
                return vec![Diagnostic::new(
                    Code::Orphan,
                    here,
                    m.head_span.clone(),
                    format!(
                        "orphan {}: type parameter `{}` at head position {i} is uncovered before any local type",
                        m.label(),
                        v.name
                    ),
                )];
            }
            _ if t.head_con().is_some_and(|c| c.origin() == here) => return vec![],
            _ => {}
        }
    }
    vec![Diagnostic::new(
        Code::Orphan,
        here,
        m.head_span.clone(),
        format!(
            "orphan {}: neither concept {} nor any head type constructor is defined in module {here}",
            m.label(),
            m.concept
        ),
    )]
}
