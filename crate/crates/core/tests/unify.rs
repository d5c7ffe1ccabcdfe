use proptest::prelude::*;
use sl_core::types::{match_one_way, unify, TyCon, TyVar, Type, UnifyError};

fn vars() -> Vec<TyVar> {
    thread_local!(static VS: Vec<TyVar> = ["a", "b", "c"].iter().map(|n| TyVar::fresh(*n)).collect());
    VS.with(|v| v.clone())
}

/// Pattern variables, kept apart from the target's as the resolver does.
fn pattern_vars() -> Vec<TyVar> {
    thread_local!(static VS: Vec<TyVar> = ["p", "q", "r"].iter().map(|n| TyVar::fresh(*n)).collect());
    VS.with(|v| v.clone())
}

fn con(name: &str, args: Vec<Type>) -> Type {
    let c = TyCon::new(sl_core::types::STD, name, args.len());
    if args.is_empty() {
        Type::Con(c)
    } else {
        Type::App(c, args)
    }
}

fn ty() -> impl Strategy<Value = Type> {
    ty_over(vars)
}

fn ty_over(vs: fn() -> Vec<TyVar>) -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![
        (0..3usize).prop_map(move |i| Type::Var(vs()[i].clone())),
        prop::sample::select(vec!["U64", "Bool"]).prop_map(|n| con(n, vec![])),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (prop::sample::select(vec!["Option", "List"]), inner.clone()).prop_map(|(n, t)| con(n, vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| con("Pair", vec![a, b])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn unifier_equates_and_is_idempotent(a in ty(), b in ty()) {
        if let Ok(s) = unify(&a, &b) {
            prop_assert_eq!(s.apply(&a), s.apply(&b));
            for t in [&a, &b] {
                prop_assert_eq!(s.apply(&s.apply(t)), s.apply(t));
            }
            let mut seen = a.vars();
            seen.extend(b.vars());
            for (v, t) in s.iter() {
                prop_assert!(seen.contains(v));
                prop_assert!(t.vars().is_subset(&seen));
            }
        }
    }

    #[test]
    fn unifiability_is_symmetric(a in ty(), b in ty()) {
        prop_assert_eq!(unify(&a, &b).is_ok(), unify(&b, &a).is_ok());
    }

    /// A match is a unifier that leaves the target alone.
    #[test]
    fn matching_is_one_sided_unification(p in ty_over(pattern_vars), t in ty()) {
        match match_one_way(&p, &t) {
            Some(s) => {
                prop_assert_eq!(s.apply(&p), t.clone());
                prop_assert!(s.iter().all(|(v, _)| pattern_vars().contains(v)));
            }
            None => {
                // Failing to match while unifying means the target would
                // have to be instantiated.
                if let Ok(u) = unify(&p, &t) {
                    prop_assert!(u.apply(&t) != t);
                }
            }
        }
    }

    /// Unifying a type with itself needs no bindings.
    #[test]
    fn self_unification_is_trivial(a in ty()) {
        prop_assert!(unify(&a, &a).unwrap().is_empty());
    }

    #[test]
    fn occurs_check_rejects_cycles(a in ty()) {
        let v = vars()[0].clone();
        let wrapped = con("List", vec![con("Pair", vec![Type::Var(v.clone()), a])]);
        prop_assert!(matches!(unify(&Type::Var(v), &wrapped), Err(UnifyError::Occurs(..))));
    }
}
