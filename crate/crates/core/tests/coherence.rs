use std::sync::Arc;

use proptest::prelude::*;
use sl_core::coherence::{heads_overlap, is_duplicate, Policy, PolicyKind};
use sl_core::diag::Code;
use sl_core::linker::{link, LinkOptions, SourceFile};
use sl_core::resolver::{strictly_more_specific, DEFAULT_DEPTH};
use sl_core::sema::ModelDecl;
use sl_core::types::{Subst, Type};

/// Head types in source syntax, variables `A` and `B`.
fn head() -> impl Strategy<Value = String> {
    let leaf = prop::sample::select(vec!["A", "B", "U64", "Bool"]).prop_map(String::from);
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (prop::sample::select(vec!["Option", "List"]), inner.clone()).prop_map(|(c, t)| format!("{c}[{t}]")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("Pair[{a}, {b}]")),
        ]
    })
}

fn models(h1: &str, h2: &str, kind: PolicyKind) -> (Vec<Arc<ModelDecl>>, Vec<Code>) {
    let src = format!("module t\n\nconcept C[Self] {{\n}}\n\nmodel m1: C[{h1}] {{\n}}\n\nmodel m2: C[{h2}] {{\n}}\n");
    let p = link(&[SourceFile::new("t.sl", src)], LinkOptions { policy: Policy::new(kind), depth: DEFAULT_DEPTH });
    let codes = p.diags.iter().filter(|d| d.is_error()).map(|d| d.code).collect();
    let ms = p.module("t").map(|m| m.models.clone()).unwrap_or_default();
    (ms, codes)
}

/// Ground types of depth at most 3, enough to witness any overlap of
/// heads of depth at most 3 with two variables each.
fn grounds() -> &'static [Type] {
    static GS: std::sync::OnceLock<Vec<Type>> = std::sync::OnceLock::new();
    GS.get_or_init(compute_grounds)
}

fn compute_grounds() -> Vec<Type> {
    let p = link(&[], LinkOptions { policy: Policy::default(), depth: DEFAULT_DEPTH });
    let std = p.module(sl_core::types::STD).unwrap();
    let mut cons: Vec<_> = ["U64", "Bool"].iter().map(|n| sl_core::types::TyCon::new(sl_core::types::STD, n, 0)).collect();
    cons.extend(std.datas.iter().filter(|d| ["Option", "List", "Pair"].contains(&d.id.name.as_str())).map(|d| d.con()));
    sl_core::enumerate::ground_universe(&cons, 3)
}

/// Brute force: some ground instance of each head coincides.
fn overlap_oracle(m1: &ModelDecl, m2: &ModelDecl, gs: &[Type]) -> bool {
    let inst = |m: &ModelDecl| -> Vec<Type> {
        sl_core::enumerate::tuples(gs, m.vars.len())
            .into_iter()
            .map(|ts| Subst::from_pairs(m.vars.iter().cloned().zip(ts)).apply(&m.head[0]))
            .collect()
    };
    let a: std::collections::BTreeSet<Type> = inst(m1).into_iter().collect();
    inst(m2).iter().any(|t| a.contains(t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn overlap_matches_ground_oracle(h1 in head(), h2 in head()) {
        let (ms, _) = models(&h1, &h2, PolicyKind::Scoped);
        prop_assert_eq!(ms.len(), 2);
        let got = heads_overlap(&ms[0], &ms[1]).is_some();
        let gs = grounds();
        prop_assert_eq!(got, overlap_oracle(&ms[0], &ms[1], gs), "{} vs {}", h1, h2);
        prop_assert_eq!(got, heads_overlap(&ms[1], &ms[0]).is_some());
    }

    #[test]
    fn duplicates_are_mutual_instances(h1 in head(), h2 in head()) {
        let (ms, _) = models(&h1, &h2, PolicyKind::Scoped);
        let dup = is_duplicate(&ms[0], &ms[1]);
        prop_assert_eq!(dup, is_duplicate(&ms[1], &ms[0]));
        prop_assert!(is_duplicate(&ms[0], &ms[0]));
        if dup {
            prop_assert!(heads_overlap(&ms[0], &ms[1]).is_some());
            prop_assert!(!strictly_more_specific(&ms[0], &ms[1]) && !strictly_more_specific(&ms[1], &ms[0]));
        }
    }

    #[test]
    fn specificity_is_a_strict_order(h1 in head(), h2 in head()) {
        let (ms, _) = models(&h1, &h2, PolicyKind::Scoped);
        prop_assert!(!strictly_more_specific(&ms[0], &ms[0]));
        if strictly_more_specific(&ms[0], &ms[1]) {
            prop_assert!(!strictly_more_specific(&ms[1], &ms[0]));
            prop_assert!(heads_overlap(&ms[0], &ms[1]).is_some());
        }
    }

    /// Use-site rejects exactly the duplicates; disjointness rejects every
    /// overlap, since these models have empty contexts.
    #[test]
    fn policies_reject_what_they_promise(h1 in head(), h2 in head()) {
        let (ms, _) = models(&h1, &h2, PolicyKind::Scoped);
        let dup = is_duplicate(&ms[0], &ms[1]);
        let overlap = heads_overlap(&ms[0], &ms[1]).is_some();
        let (_, use_site) = models(&h1, &h2, PolicyKind::UseSite);
        prop_assert_eq!(use_site.contains(&Code::Duplicate), dup);
        let (_, disjoint) = models(&h1, &h2, PolicyKind::DefSiteDisjoint);
        let rejected = disjoint.iter().any(|c| matches!(c, Code::Duplicate | Code::Overlap | Code::BlanketDup));
        prop_assert_eq!(rejected, overlap, "{} vs {}: {:?}", h1, h2, disjoint);
    }
}
