//! Implicit resolution: commit-by-head search for a derivation of a goal
//! from the given constraints and the visible models.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::coherence::{Policy, PolicyKind};
use crate::diag::{Code, Related, Span};
use crate::sema::{ModelDecl, ModelId};
use crate::types::{freshening, match_all, normalize, Constraint, QualName, Subst, TyVar, Type};
use crate::world::ModelWorld;

pub const DEFAULT_DEPTH: usize = 64;

/// A given constraint, possibly reached through superclass projections
/// from the enclosing context entry `index`.
#[derive(Debug, Clone, PartialEq)]
pub struct Given {
    pub constraint: Constraint,
    pub index: usize,
    pub path: Vec<usize>,
}

/// The context together with everything its superclasses imply, in
/// breadth-first order so direct entries win over derived ones.
pub fn given_closure(context: &[Constraint], world: &ModelWorld) -> Vec<Given> {
    let mut out: Vec<Given> = context
        .iter()
        .enumerate()
        .map(|(i, c)| Given { constraint: c.clone(), index: i, path: vec![] })
        .collect();
    let mut next = 0;
    while next < out.len() {
        let g = out[next].clone();
        next += 1;
        if g.path.len() >= 16 {
            continue;
        }
        let Constraint::Conf { concept, subjects } = &g.constraint else { continue };
        let Some(cd) = world.concept(concept) else { continue };
        let s = Subst::from_pairs(cd.params.iter().cloned().zip(subjects.iter().cloned()));
        for (k, sup) in cd.supers.iter().enumerate() {
            let c = sup.apply(&s);
            if out.iter().any(|o| o.constraint == c) {
                continue;
            }
            let mut path = g.path.clone();
            path.push(k);
            out.push(Given { constraint: c, index: g.index, path });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Resolution {
    Model { model: ModelId, args: Vec<Type>, children: Vec<Resolution> },
    Given { index: usize, path: Vec<usize>, constraint: Constraint },
    Eq { lhs: Type, rhs: Type },
}

/// The model-identity skeleton of a resolution, used to compare two
/// derivations of the same goal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Model(ModelId, Vec<Shape>),
    Given(usize, Vec<usize>),
    Eq,
}

impl Resolution {
    pub fn shape(&self) -> Shape {
        match self {
            Resolution::Model { model, children, .. } => {
                Shape::Model(model.clone(), children.iter().map(Resolution::shape).collect())
            }
            Resolution::Given { index, path, .. } => Shape::Given(*index, path.clone()),
            Resolution::Eq { .. } => Shape::Eq,
        }
    }

    pub fn models(&self, out: &mut BTreeSet<ModelId>) {
        if let Resolution::Model { model, children, .. } = self {
            out.insert(model.clone());
            children.iter().for_each(|c| c.models(out));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceCandidate {
    pub model: String,
    pub span: Span,
    pub subst: String,
}

/// One goal's step in a resolution: what was considered and what happened.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceNode {
    pub goal: String,
    pub depth: usize,
    pub candidates: Vec<TraceCandidate>,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub committed: Option<String>,
    pub children: Vec<TraceNode>,
}

impl TraceNode {
    fn new(goal: &Constraint, depth: usize) -> Self {
        TraceNode {
            goal: goal.to_string(),
            depth,
            candidates: vec![],
            outcome: String::new(),
            committed: None,
            children: vec![],
        }
    }

    /// Indented text rendering for `explain`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        out.push_str(&format!("{pad}goal {} (depth {})\n", self.goal, self.depth));
        for c in &self.candidates {
            out.push_str(&format!("{pad}  candidate {} at {} with {}\n", c.model, c.span, c.subst));
        }
        match &self.committed {
            Some(m) => out.push_str(&format!("{pad}  {}: {m}\n", self.outcome)),
            None => out.push_str(&format!("{pad}  {}\n", self.outcome)),
        }
        for c in &self.children {
            c.render_into(out, indent + 1);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolveError {
    pub code: Code,
    pub message: String,
    pub related: Vec<Related>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: Result<Resolution, ResolveError>,
    pub trace: TraceNode,
    /// W-INCOHERENT notes: message and the competing model spans.
    pub warnings: Vec<(String, Vec<Related>)>,
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub model: Arc<ModelDecl>,
    /// Maps the model's own variables to the goal's types.
    pub subst: Subst,
    pub scope: u8,
}

/// Every visible model whose (freshened) head one-way-matches `subjects`.
pub fn candidates(concept: &QualName, subjects: &[Type], world: &ModelWorld) -> Vec<Candidate> {
    world
        .models_of(concept)
        .filter_map(|e| {
            let m = &e.model;
            let fr = freshening(m.vars.iter().cloned());
            let head: Vec<Type> = m.head.iter().map(|t| fr.apply(t)).collect();
            let s = match_all(&head, subjects)?;
            let subst = Subst::from_pairs(m.vars.iter().map(|v| (v.clone(), s.apply(&fr.apply(&Type::Var(v.clone()))))));
            Some(Candidate { model: m.clone(), subst, scope: e.scope })
        })
        .collect()
}

/// True when `a`'s head is an instance of `b`'s but not vice versa.
pub fn strictly_more_specific(a: &ModelDecl, b: &ModelDecl) -> bool {
    let fa = freshening(a.vars.iter().cloned());
    let fb = freshening(b.vars.iter().cloned());
    let ha: Vec<Type> = a.head.iter().map(|t| fa.apply(t)).collect();
    let hb: Vec<Type> = b.head.iter().map(|t| fb.apply(t)).collect();
    match_all(&hb, &ha).is_some() && match_all(&ha, &hb).is_none()
}

pub struct Resolver<'a> {
    pub world: &'a ModelWorld,
    pub givens: &'a [Given],
    pub policy: Policy,
    pub depth: usize,
}

impl<'a> Resolver<'a> {
    pub fn new(world: &'a ModelWorld, givens: &'a [Given], policy: Policy, depth: usize) -> Self {
        Resolver { world, givens, policy, depth }
    }

    pub fn resolve(&self, goal: &Constraint) -> Outcome {
        let given_cs: Vec<Constraint> = self.givens.iter().map(|g| g.constraint.clone()).collect();
        let mut st = State { r: self, given_cs, warnings: vec![] };
        let (result, trace) = st.go(goal, self.depth);
        Outcome { result, trace, warnings: st.warnings }
    }
}

/// Succeeds iff `wanted` follows from `givens` and the world, rigid
/// variables treated as opaque constants.
pub fn entails(givens: &[Given], wanted: &Constraint, world: &ModelWorld, policy: Policy) -> Option<Resolution> {
    Resolver::new(world, givens, policy, DEFAULT_DEPTH).resolve(wanted).result.ok()
}

struct State<'r, 'a> {
    r: &'r Resolver<'a>,
    given_cs: Vec<Constraint>,
    warnings: Vec<(String, Vec<Related>)>,
}

fn err(code: Code, message: impl Into<String>) -> ResolveError {
    ResolveError { code, message: message.into(), related: vec![] }
}

impl State<'_, '_> {
    fn norm(&self, t: &Type) -> Result<Type, ResolveError> {
        normalize(t, &self.given_cs, self.r.world).map_err(|d| {
            err(Code::NormDiverge, format!("normalizing `{}` exceeded {} rewrite steps", d.term, d.steps))
        })
    }

    fn norm_all(&self, ts: &[Type]) -> Result<Vec<Type>, ResolveError> {
        ts.iter().map(|t| self.norm(t)).collect()
    }

    fn go(&mut self, goal: &Constraint, depth: usize) -> (Result<Resolution, ResolveError>, TraceNode) {
        let mut trace = TraceNode::new(goal, depth);
        let res = self.step(goal, depth, &mut trace);
        if let Err(e) = &res {
            if trace.outcome.is_empty() {
                trace.outcome = format!("failed: {}", e.code);
            }
        }
        (res, trace)
    }

    fn step(&mut self, goal: &Constraint, depth: usize, trace: &mut TraceNode) -> Result<Resolution, ResolveError> {
        let (concept, subjects) = match goal {
            Constraint::Eq(a, b) => {
                let (na, nb) = (self.norm(a)?, self.norm(b)?);
                if na == nb {
                    trace.outcome = "equal after normalization".into();
                    return Ok(Resolution::Eq { lhs: na, rhs: nb });
                }
                trace.outcome = "types differ".into();
                return Err(err(
                    Code::TypeMismatch,
                    format!("cannot prove `{a} == {b}`: found '{na}', required '{nb}'"),
                ));
            }
            Constraint::Conf { concept, subjects } => (concept, self.norm_all(subjects)?),
        };
        let wanted = Constraint::Conf { concept: concept.clone(), subjects: subjects.clone() };
        for g in self.r.givens {
            let Constraint::Conf { concept: gc, subjects: gs } = &g.constraint else { continue };
            if gc == concept && self.norm_all(gs)? == subjects {
                trace.outcome = "given".into();
                trace.committed = Some(format!("context entry {} {:?}", g.index, g.path));
                return Ok(Resolution::Given { index: g.index, path: g.path.clone(), constraint: g.constraint.clone() });
            }
        }
        let cands = candidates(concept, &subjects, self.r.world);
        trace.candidates = cands
            .iter()
            .map(|c| TraceCandidate { model: c.model.label(), span: c.model.span.clone(), subst: c.subst.to_string() })
            .collect();
        let order = self.select(&wanted, &cands, trace)?;
        if depth == 0 {
            trace.outcome = "depth limit reached".into();
            return Err(err(Code::Depth, format!("resolution of `{wanted}` exceeded the depth limit {}", self.r.depth)));
        }
        // Only an incoherent commit offers more than one candidate: they are
        // tried in declaration order and the first whose context holds wins.
        let mut last = None;
        for (k, chosen) in order.iter().enumerate() {
            let saved = self.warnings.len();
            let m = &chosen.model;
            let mut children = Vec::with_capacity(m.context.len());
            let mut traces = Vec::with_capacity(m.context.len());
            let mut failed = None;
            for c in &m.context {
                let sub = c.apply(&chosen.subst);
                let (res, t) = self.go(&sub, depth - 1);
                traces.push(t);
                match res {
                    Ok(r) => children.push(r),
                    Err(e) => {
                        failed = Some(e);
                        break;
                    }
                }
            }
            trace.committed = Some(m.label());
            trace.children = traces;
            if trace.outcome.is_empty() {
                trace.outcome = "commit".into();
            }
            if let Some(e) = failed {
                self.warnings.truncate(saved);
                last = Some(e);
                continue;
            }
            if order.len() > 1 {
                let related: Vec<Related> = order
                    .iter()
                    .map(|c| Related { span: c.model.span.clone(), message: format!("candidate {}", c.model.label()) })
                    .collect();
                let skipped = if k == 0 { "" } else { " (earlier candidates could not be completed)" };
                self.warnings.insert(
                    saved,
                    (
                        format!(
                            "`{wanted}` has {} candidates; picked {} by declaration order{skipped}",
                            order.len(),
                            m.label()
                        ),
                        related,
                    ),
                );
            }
            let args = m.vars.iter().map(|v| chosen.subst.apply(&Type::Var(v.clone()))).collect();
            return Ok(Resolution::Model { model: m.id.clone(), args, children });
        }
        Err(last.expect("at least one candidate was tried"))
    }

    fn select(&mut self, goal: &Constraint, cands: &[Candidate], trace: &mut TraceNode) -> Result<Vec<Candidate>, ResolveError> {
        let policy = self.r.policy;
        let pool: Vec<&Candidate> = if policy.kind == PolicyKind::Scoped {
            match cands.iter().map(|c| c.scope).min() {
                Some(inner) => cands.iter().filter(|c| c.scope == inner).collect(),
                None => vec![],
            }
        } else {
            cands.iter().collect()
        };
        match pool.as_slice() {
            [] => {
                trace.outcome = "no candidate".into();
                let rigid = goal.vars();
                Err(if rigid.is_empty() {
                    err(Code::NoModel, format!("no model of `{goal}`"))
                } else {
                    err(
                        Code::TypeMismatch,
                        format!("`{goal}` is not implied by the context over {}", names(&rigid)),
                    )
                })
            }
            [one] => Ok(vec![(*one).clone()]),
            many => {
                let use_site = policy.kind == PolicyKind::UseSite;
                if use_site && policy.prioritize_specific {
                    let best: Vec<&&Candidate> = many
                        .iter()
                        .filter(|c| {
                            many.iter().all(|d| Arc::ptr_eq(&c.model, &d.model) || strictly_more_specific(&c.model, &d.model))
                        })
                        .collect();
                    if let [b] = best.as_slice() {
                        trace.outcome = "commit (most specific)".into();
                        return Ok(vec![(**b).clone()]);
                    }
                }
                let related: Vec<Related> = many
                    .iter()
                    .map(|c| Related { span: c.model.span.clone(), message: format!("candidate {}", c.model.label()) })
                    .collect();
                if use_site && policy.incoherent_ok {
                    trace.outcome = "incoherent commit (first viable candidate)".into();
                    return Ok(many.iter().map(|c| (*c).clone()).collect());
                }
                trace.outcome = "ambiguous: E-AMBIGUOUS".into();
                Err(ResolveError {
                    code: Code::Ambiguous,
                    message: format!("`{goal}` is ambiguous: {} models apply", many.len()),
                    related,
                })
            }
        }
    }
}

fn names(vs: &BTreeSet<TyVar>) -> String {
    vs.iter().map(|v| v.name.as_str()).collect::<Vec<_>>().join(", ")
}
