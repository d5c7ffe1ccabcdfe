//! Brute-force companions to the resolver: an exhaustive, backtracking
//! derivation counter, the small ground-type universe it is run over, and
//! the stability analysis.

use std::collections::BTreeSet;

use crate::coherence::Policy;
use crate::diag::Span;
use crate::resolver::{Resolution, Resolver};
use crate::sema::FunDecl;
use crate::types::{freshening, match_all, normalize, Constraint, Subst, TyCon, Type};
use crate::world::ModelWorld;

/// Counts distinct derivations of a ground goal, exploring every model
/// whose head matches (no commitment). Saturates at `cap`; derivations
/// deeper than `depth` are not counted.
pub fn count_derivations(goal: &Constraint, world: &ModelWorld, depth: usize, cap: u32) -> u32 {
    match goal {
        Constraint::Eq(a, b) => match (normalize(a, &[], world), normalize(b, &[], world)) {
            (Ok(x), Ok(y)) if x == y => 1,
            _ => 0,
        },
        Constraint::Conf { concept, subjects } => {
            if depth == 0 {
                return 0;
            }
            let Ok(subjects) = subjects.iter().map(|t| normalize(t, &[], world)).collect::<Result<Vec<_>, _>>() else {
                return 0;
            };
            let mut total = 0u32;
            for e in world.models_of(concept) {
                let m = &e.model;
                let fr = freshening(m.vars.iter().cloned());
                let head: Vec<Type> = m.head.iter().map(|t| fr.apply(t)).collect();
                let Some(s) = match_all(&head, &subjects) else { continue };
                let mut ways = 1u32;
                for c in &m.context {
                    let sub = c.apply(&fr).apply(&s);
                    ways = ways.saturating_mul(count_derivations(&sub, world, depth - 1, cap));
                    if ways == 0 {
                        break;
                    }
                }
                total = total.saturating_add(ways).min(cap);
                if total >= cap {
                    return cap;
                }
            }
            total
        }
    }
}

/// Ground types of depth at most `max_depth` over `cons` (excluding `Fn`).
pub fn ground_universe(cons: &[TyCon], max_depth: usize) -> Vec<Type> {
    let cons: Vec<&TyCon> = cons.iter().filter(|c| !(c.name.module == crate::types::STD && c.name.name == "Fn")).collect();
    let mut levels: Vec<Type> = cons.iter().filter(|c| c.arity == 0).map(|c| Type::Con((*c).clone())).collect();
    for _ in 1..max_depth {
        let prev = levels.clone();
        let mut next: BTreeSet<Type> = prev.iter().cloned().collect();
        for c in cons.iter().filter(|c| c.arity > 0) {
            for args in tuples(&prev, c.arity) {
                next.insert(Type::App((*c).clone(), args));
            }
        }
        levels = next.into_iter().collect();
    }
    levels
}

/// All `n`-tuples drawn from `xs`, in lexicographic order.
pub fn tuples(xs: &[Type], n: usize) -> Vec<Vec<Type>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                xs.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityEntry {
    pub site: Span,
    pub goal: String,
    pub stable: bool,
    pub reason: String,
}

/// Compares each goal's generic-time resolution, instantiated by
/// `assignment`, against a fresh resolution of the instantiated goal.
pub fn check_stability(
    fun: &FunDecl,
    assignment: &Subst,
    world: &ModelWorld,
    policy: Policy,
    depth: usize,
) -> Vec<StabilityEntry> {
    let tparams: BTreeSet<_> = fun.tparams.iter().cloned().collect();
    fun.body
        .goals
        .iter()
        .map(|g| {
            let entry = |stable: bool, reason: String| StabilityEntry {
                site: g.span.clone(),
                goal: g.constraint.to_string(),
                stable,
                reason,
            };
            if g.constraint.vars().is_disjoint(&tparams) {
                return entry(true, "goal does not mention type parameters".into());
            }
            let Some(generic) = &g.resolution else {
                return entry(false, "goal had no resolution when checked".into());
            };
            let goal = g.constraint.apply(assignment);
            let fresh = Resolver::new(world, &[], policy, depth).resolve(&goal);
            let fresh_res = match fresh.result {
                Ok(r) if fresh.warnings.is_empty() => r,
                Ok(_) => return entry(false, format!("`{goal}` resolves only incoherently")),
                Err(e) => return entry(false, format!("`{goal}` fails after substitution: {}", e.code)),
            };
            match instantiate(generic, assignment, world, policy, depth) {
                Some(inst) if inst.shape() == fresh_res.shape() => entry(true, "same derivation".into()),
                Some(_) => entry(false, format!("`{goal}` resolves to a different model after substitution")),
                None => entry(false, format!("context of `{goal}` fails after substitution")),
            }
        })
        .collect()
}

/// Substitutes into a generic derivation, replacing given leaves by fresh
/// derivations of the substituted given.
fn instantiate(
    r: &Resolution,
    a: &Subst,
    world: &ModelWorld,
    policy: Policy,
    depth: usize,
) -> Option<Resolution> {
    Some(match r {
        Resolution::Model { model, args, children } => Resolution::Model {
            model: model.clone(),
            args: args.iter().map(|t| a.apply(t)).collect(),
            children: children
                .iter()
                .map(|c| instantiate(c, a, world, policy, depth))
                .collect::<Option<_>>()?,
        },
        Resolution::Given { constraint, .. } => {
            let out = Resolver::new(world, &[], policy, depth).resolve(&constraint.apply(a));
            if !out.warnings.is_empty() {
                return None;
            }
            out.result.ok()?
        }
        Resolution::Eq { lhs, rhs } => Resolution::Eq { lhs: a.apply(lhs), rhs: a.apply(rhs) },
    })
}

/// Ground assignments of `fun`'s type params over `universe` that satisfy
/// its context (each constraint has a derivation).
pub fn satisfying_assignments(fun: &FunDecl, universe: &[Type], world: &ModelWorld, depth: usize) -> Vec<Subst> {
    tuples(universe, fun.tparams.len())
        .into_iter()
        .map(|ts| Subst::from_pairs(fun.tparams.iter().cloned().zip(ts)))
        .filter(|s| fun.context.iter().all(|c| count_derivations(&c.apply(s), world, depth, 1) >= 1))
        .collect()
}
