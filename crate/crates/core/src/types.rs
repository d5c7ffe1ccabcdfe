//! Semantic types, substitutions, unification, one-way matching and
//! associated-type normalization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use serde::Serialize;

use crate::world::ModelWorld;

pub const STD: &str = "std";

/// Module-qualified name of a declaration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QualName {
    pub module: String,
    pub name: String,
}

impl QualName {
    pub fn new(module: impl Into<String>, name: impl Into<String>) -> Self {
        QualName { module: module.into(), name: name.into() }
    }
}

impl fmt::Display for QualName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.module, self.name)
    }
}

impl Serialize for QualName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

static NEXT_VAR: AtomicU32 = AtomicU32::new(1);

/// A type variable. Identity is the id; the name is for display only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TyVar {
    pub name: String,
    pub id: u32,
}

impl TyVar {
    pub fn fresh(name: impl Into<String>) -> Self {
        TyVar { name: name.into(), id: NEXT_VAR.fetch_add(1, Ordering::Relaxed) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TyCon {
    pub name: QualName,
    pub arity: usize,
}

impl TyCon {
    pub fn new(module: &str, name: &str, arity: usize) -> Self {
        TyCon { name: QualName::new(module, name), arity }
    }

    pub fn origin(&self) -> &str {
        &self.name.module
    }

    fn is_std(&self, name: &str) -> bool {
        self.name.module == STD && self.name.name == name
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AssocTy {
    pub concept: QualName,
    pub member: String,
    pub subjects: Vec<Type>,
    /// The named model this projection selects from (scoped policy only).
    pub path: Option<QualName>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Var(TyVar),
    /// A nullary constructor (`U64`) or the head of an application.
    Con(TyCon),
    App(TyCon, Vec<Type>),
    Assoc(Box<AssocTy>),
}

impl Type {
    pub fn std(name: &str) -> Type {
        Type::Con(TyCon::new(STD, name, 0))
    }

    pub fn unit() -> Type {
        Type::std("Unit")
    }

    pub fn app(con: TyCon, args: Vec<Type>) -> Type {
        if args.is_empty() {
            Type::Con(con)
        } else {
            Type::App(con, args)
        }
    }

    pub fn pair(a: Type, b: Type) -> Type {
        Type::App(TyCon::new(STD, "Pair", 2), vec![a, b])
    }

    pub fn func(params: Vec<Type>, ret: Type) -> Type {
        let mut args = params;
        args.push(ret);
        Type::App(TyCon::new(STD, "Fn", args.len()), args)
    }

    pub fn assoc(concept: QualName, member: impl Into<String>, subjects: Vec<Type>) -> Type {
        Type::Assoc(Box::new(AssocTy { concept, member: member.into(), subjects, path: None }))
    }

    /// Splits a function type into parameter and result types.
    pub fn as_fn(&self) -> Option<(&[Type], &Type)> {
        match self {
            Type::App(c, args) if c.is_std("Fn") => {
                let (ret, params) = args.split_last()?;
                Some((params, ret))
            }
            _ => None,
        }
    }

    pub fn head_con(&self) -> Option<&TyCon> {
        match self {
            Type::Con(c) | Type::App(c, _) => Some(c),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Type::Var(_))
    }

    pub fn free_vars(&self, out: &mut BTreeSet<TyVar>) {
        match self {
            Type::Var(v) => {
                out.insert(v.clone());
            }
            Type::Con(_) => {}
            Type::App(_, args) => args.iter().for_each(|a| a.free_vars(out)),
            Type::Assoc(a) => a.subjects.iter().for_each(|s| s.free_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<TyVar> {
        let mut s = BTreeSet::new();
        self.free_vars(&mut s);
        s
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Type::Var(_) => false,
            Type::Con(_) => true,
            Type::App(_, args) => args.iter().all(Type::is_ground),
            Type::Assoc(a) => a.subjects.iter().all(Type::is_ground),
        }
    }

    pub fn has_assoc(&self) -> bool {
        match self {
            Type::Var(_) | Type::Con(_) => false,
            Type::App(_, args) => args.iter().any(Type::has_assoc),
            Type::Assoc(_) => true,
        }
    }

    pub fn occurs(&self, v: &TyVar) -> bool {
        match self {
            Type::Var(w) => w == v,
            Type::Con(_) => false,
            Type::App(_, args) => args.iter().any(|a| a.occurs(v)),
            Type::Assoc(a) => a.subjects.iter().any(|s| s.occurs(v)),
        }
    }

    /// Nesting depth: constructors and variables count 1.
    pub fn depth(&self) -> usize {
        match self {
            Type::Var(_) | Type::Con(_) => 1,
            Type::App(_, args) => 1 + args.iter().map(Type::depth).max().unwrap_or(0),
            Type::Assoc(a) => 1 + a.subjects.iter().map(Type::depth).max().unwrap_or(0),
        }
    }

    /// Structural map over every subterm, bottom-up.
    pub fn map_bottom_up(&self, f: &mut impl FnMut(Type) -> Type) -> Type {
        let t = match self {
            Type::Var(_) | Type::Con(_) => self.clone(),
            Type::App(c, args) => Type::App(c.clone(), args.iter().map(|a| a.map_bottom_up(f)).collect()),
            Type::Assoc(a) => Type::Assoc(Box::new(AssocTy {
                concept: a.concept.clone(),
                member: a.member.clone(),
                subjects: a.subjects.iter().map(|s| s.map_bottom_up(f)).collect(),
                path: a.path.clone(),
            })),
        };
        f(t)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(v) => f.write_str(&v.name),
            Type::Con(c) if c.is_std("Unit") => f.write_str("()"),
            Type::Con(c) => f.write_str(&c.name.name),
            Type::App(c, args) if c.is_std("Pair") => write!(f, "({}, {})", args[0], args[1]),
            Type::App(c, _) if c.is_std("Fn") => {
                let (params, ret) = self.as_fn().expect("fn type");
                write!(f, "({}) -> {}", join(params), ret)
            }
            Type::App(c, args) => write!(f, "{}[{}]", c.name.name, join(args)),
            Type::Assoc(a) => {
                if let Some(p) = &a.path {
                    return write!(f, "{}.{}", p, a.member);
                }
                match a.subjects.as_slice() {
                    [s] if s.as_fn().is_some() => write!(f, "({s}).{}", a.member),
                    [s] => write!(f, "{s}.{}", a.member),
                    ss => write!(f, "{}[{}].{}", a.concept.name, join(ss), a.member),
                }
            }
        }
    }
}

impl Serialize for Type {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    Conf { concept: QualName, subjects: Vec<Type> },
    Eq(Type, Type),
}

impl Constraint {
    pub fn conf(concept: QualName, subjects: Vec<Type>) -> Self {
        Constraint::Conf { concept, subjects }
    }

    pub fn free_vars(&self, out: &mut BTreeSet<TyVar>) {
        match self {
            Constraint::Conf { subjects, .. } => subjects.iter().for_each(|s| s.free_vars(out)),
            Constraint::Eq(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<TyVar> {
        let mut s = BTreeSet::new();
        self.free_vars(&mut s);
        s
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Constraint::Conf { subjects, .. } => subjects.iter().all(Type::is_ground),
            Constraint::Eq(a, b) => a.is_ground() && b.is_ground(),
        }
    }

    pub fn apply(&self, s: &Subst) -> Constraint {
        match self {
            Constraint::Conf { concept, subjects } => Constraint::Conf {
                concept: concept.clone(),
                subjects: subjects.iter().map(|t| s.apply(t)).collect(),
            },
            Constraint::Eq(a, b) => Constraint::Eq(s.apply(a), s.apply(b)),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Conf { concept, subjects } => write!(f, "{}[{}]", concept.name, join(subjects)),
            Constraint::Eq(a, b) => write!(f, "{a} == {b}"),
        }
    }
}

impl Serialize for Constraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Finite map from variable ids to types.
///
/// Bindings may be triangular while a unifier is being built; [`Subst::apply`]
/// follows chains, and [`Subst::idempotent`] flattens them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Subst {
    map: BTreeMap<u32, (TyVar, Type)>,
}

impl Subst {
    pub fn new() -> Self {
        Subst::default()
    }

    pub fn singleton(v: TyVar, t: Type) -> Self {
        let mut s = Subst::new();
        s.bind(v, t);
        s
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (TyVar, Type)>) -> Self {
        let mut s = Subst::new();
        for (v, t) in pairs {
            s.bind(v, t);
        }
        s
    }

    pub fn bind(&mut self, v: TyVar, t: Type) {
        self.map.insert(v.id, (v, t));
    }

    pub fn get(&self, v: &TyVar) -> Option<&Type> {
        self.map.get(&v.id).map(|(_, t)| t)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TyVar, &Type)> {
        self.map.values().map(|(v, t)| (v, t))
    }

    pub fn apply(&self, t: &Type) -> Type {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            Type::Var(v) => match self.map.get(&v.id) {
                Some((_, bound)) if bound != t => self.apply(bound),
                _ => t.clone(),
            },
            Type::Con(_) => t.clone(),
            Type::App(c, args) => Type::App(c.clone(), args.iter().map(|a| self.apply(a)).collect()),
            Type::Assoc(a) => Type::Assoc(Box::new(AssocTy {
                concept: a.concept.clone(),
                member: a.member.clone(),
                subjects: a.subjects.iter().map(|x| self.apply(x)).collect(),
                path: a.path.clone(),
            })),
        }
    }

    /// Flattens triangular bindings so that applying once is a fixpoint.
    pub fn idempotent(&self) -> Subst {
        let mut out = Subst::new();
        for (v, t) in self.iter() {
            out.bind(v.clone(), self.apply(t));
        }
        out
    }

    /// Restricts the domain to the given variables.
    pub fn restrict(&self, vars: &[TyVar]) -> Subst {
        let mut out = Subst::new();
        for v in vars {
            if let Some(t) = self.get(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(v, t)| format!("{} := {}", v.name, t)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnifyError {
    Clash(Type, Type),
    Occurs(TyVar, Type),
}

impl fmt::Display for UnifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifyError::Clash(a, b) => write!(f, "cannot unify `{a}` with `{b}`"),
            UnifyError::Occurs(v, t) => write!(f, "`{}` occurs in `{t}`", v.name),
        }
    }
}

/// Most general unifier of two types, every variable flexible.
pub fn unify(a: &Type, b: &Type) -> Result<Subst, UnifyError> {
    let mut s = Subst::new();
    unify_in(&mut s, a, b, &|_| true)?;
    Ok(s.idempotent())
}

/// Unifies pairwise, as one problem.
pub fn unify_all(pairs: &[(Type, Type)]) -> Result<Subst, UnifyError> {
    let mut s = Subst::new();
    for (a, b) in pairs {
        unify_in(&mut s, a, b, &|_| true)?;
    }
    Ok(s.idempotent())
}

/// Extends `s` to unify `a` and `b`, binding only variables accepted by
/// `flexible`; all others are rigid constants.
pub fn unify_in(s: &mut Subst, a: &Type, b: &Type, flexible: &dyn Fn(&TyVar) -> bool) -> Result<(), UnifyError> {
    let a = s.apply(a);
    let b = s.apply(b);
    match (&a, &b) {
        _ if a == b => Ok(()),
        (Type::Var(v), _) if flexible(v) => bind_var(s, v, &b),
        (_, Type::Var(v)) if flexible(v) => bind_var(s, v, &a),
        (Type::App(c1, xs), Type::App(c2, ys)) if c1 == c2 && xs.len() == ys.len() => {
            for (x, y) in xs.iter().zip(ys) {
                unify_in(s, x, y, flexible)?;
            }
            Ok(())
        }
        (Type::Assoc(x), Type::Assoc(y))
            if x.concept == y.concept
                && x.member == y.member
                && x.path == y.path
                && x.subjects.len() == y.subjects.len() =>
        {
            for (p, q) in x.subjects.iter().zip(&y.subjects) {
                unify_in(s, p, q, flexible)?;
            }
            Ok(())
        }
        _ => Err(UnifyError::Clash(a.clone(), b.clone())),
    }
}

fn bind_var(s: &mut Subst, v: &TyVar, t: &Type) -> Result<(), UnifyError> {
    if t.occurs(v) {
        return Err(UnifyError::Occurs(v.clone(), t.clone()));
    }
    s.bind(v.clone(), t.clone());
    Ok(())
}

/// One-way matching: finds `s` with `s(pattern) == target`, binding only
/// variables of the pattern. Variables in the target are rigid.
pub fn match_one_way(pattern: &Type, target: &Type) -> Option<Subst> {
    let mut s = Subst::new();
    match_into(&mut s, pattern, target).then_some(s)
}

pub fn match_all(patterns: &[Type], targets: &[Type]) -> Option<Subst> {
    if patterns.len() != targets.len() {
        return None;
    }
    let mut s = Subst::new();
    for (p, t) in patterns.iter().zip(targets) {
        if !match_into(&mut s, p, t) {
            return None;
        }
    }
    Some(s)
}

fn match_into(s: &mut Subst, p: &Type, t: &Type) -> bool {
    match (p, t) {
        (Type::Var(v), _) => match s.get(v) {
            Some(bound) => bound == t,
            None => {
                s.bind(v.clone(), t.clone());
                true
            }
        },
        (Type::Con(a), Type::Con(b)) => a == b,
        (Type::App(c1, xs), Type::App(c2, ys)) => {
            c1 == c2 && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_into(s, x, y))
        }
        (Type::Assoc(x), Type::Assoc(y)) => {
            x.concept == y.concept
                && x.member == y.member
                && x.path == y.path
                && x.subjects.len() == y.subjects.len()
                && x.subjects.iter().zip(&y.subjects).all(|(a, b)| match_into(s, a, b))
        }
        _ => false,
    }
}

/// Renames every variable in `vars` to a fresh one.
pub fn freshening(vars: impl IntoIterator<Item = TyVar>) -> Subst {
    Subst::from_pairs(vars.into_iter().map(|v| {
        let f = TyVar::fresh(v.name.clone());
        (v, Type::Var(f))
    }))
}

/// Upper bound on rewrite steps for a single normalization.
pub const NORMALIZE_STEP_LIMIT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormDiverge {
    pub term: Type,
    pub steps: usize,
}

/// Rewrites `t` to normal form: oriented equality givens apply left to
/// right, and projections with a unique determining model reduce to that
/// model's binding.
pub fn normalize(t: &Type, givens: &[Constraint], world: &ModelWorld) -> Result<Type, NormDiverge> {
    normalize_with(t, givens, world, &|_| false)
}

/// As [`normalize`], but projections for which `blocked` holds are left
/// alone by model reduction (used while their subjects are still unsolved).
pub fn normalize_with(
    t: &Type,
    givens: &[Constraint],
    world: &ModelWorld,
    blocked: &dyn Fn(&AssocTy) -> bool,
) -> Result<Type, NormDiverge> {
    let eqs: Vec<(&Type, &Type)> = givens
        .iter()
        .filter_map(|c| match c {
            Constraint::Eq(l, r) => Some((l, r)),
            _ => None,
        })
        .collect();
    // A non-ground conformance given shadows the models for its own
    // projections: `A.Element` under `Iterator[A]` stays abstract.
    let confs: Vec<(&QualName, &[Type])> = givens
        .iter()
        .filter_map(|c| match c {
            Constraint::Conf { concept, subjects } if !subjects.iter().all(Type::is_ground) => {
                Some((concept, subjects.as_slice()))
            }
            _ => None,
        })
        .collect();
    let blocked = |a: &AssocTy| blocked(a) || confs.iter().any(|(c, s)| **c == a.concept && *s == a.subjects.as_slice());
    let mut steps = 0;
    norm(t, &eqs, world, &blocked, &mut steps).map_err(|_| NormDiverge { term: t.clone(), steps })
}

pub fn normalize_constraint(c: &Constraint, givens: &[Constraint], world: &ModelWorld) -> Result<Constraint, NormDiverge> {
    Ok(match c {
        Constraint::Conf { concept, subjects } => Constraint::Conf {
            concept: concept.clone(),
            subjects: subjects.iter().map(|s| normalize(s, givens, world)).collect::<Result<_, _>>()?,
        },
        Constraint::Eq(a, b) => Constraint::Eq(normalize(a, givens, world)?, normalize(b, givens, world)?),
    })
}

fn norm(
    t: &Type,
    eqs: &[(&Type, &Type)],
    world: &ModelWorld,
    blocked: &dyn Fn(&AssocTy) -> bool,
    steps: &mut usize,
) -> Result<Type, ()> {
    let t = match t {
        Type::Var(_) | Type::Con(_) => t.clone(),
        Type::App(c, args) => Type::App(
            c.clone(),
            args.iter().map(|a| norm(a, eqs, world, blocked, steps)).collect::<Result<_, _>>()?,
        ),
        Type::Assoc(a) => Type::Assoc(Box::new(AssocTy {
            concept: a.concept.clone(),
            member: a.member.clone(),
            subjects: a.subjects.iter().map(|x| norm(x, eqs, world, blocked, steps)).collect::<Result<_, _>>()?,
            path: a.path.clone(),
        })),
    };
    if let Some((_, rhs)) = eqs.iter().find(|(lhs, _)| **lhs == t) {
        return tick(steps).and_then(|_| norm(rhs, eqs, world, blocked, steps));
    }
    if let Type::Assoc(a) = &t {
        if blocked(a) {
            return Ok(t);
        }
        if let Some(next) = world.reduce_assoc(a) {
            return tick(steps).and_then(|_| norm(&next, eqs, world, blocked, steps));
        }
    }
    Ok(t)
}

fn tick(steps: &mut usize) -> Result<(), ()> {
    *steps += 1;
    if *steps > NORMALIZE_STEP_LIMIT {
        Err(())
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> (TyVar, Type) {
        let tv = TyVar::fresh(n);
        (tv.clone(), Type::Var(tv))
    }

    fn opt(t: Type) -> Type {
        Type::App(TyCon::new(STD, "Option", 1), vec![t])
    }

    #[test]
    fn unify_var_with_con() {
        let (a, ta) = v("a");
        let s = unify(&ta, &Type::std("U64")).unwrap();
        assert_eq!(s.get(&a), Some(&Type::std("U64")));
    }

    #[test]
    fn unify_under_constructor() {
        let (a, ta) = v("a");
        let s = unify(&opt(ta), &opt(Type::std("U64"))).unwrap();
        assert_eq!(s.get(&a), Some(&Type::std("U64")));
    }

    #[test]
    fn occurs_check_fails() {
        let (_, ta) = v("a");
        assert!(matches!(unify(&ta, &opt(ta.clone())), Err(UnifyError::Occurs(..))));
    }

    #[test]
    fn one_way_matching_treats_target_vars_as_rigid() {
        let (a, ta) = v("a");
        let s = match_one_way(&opt(ta.clone()), &opt(Type::std("U64"))).unwrap();
        assert_eq!(s.get(&a), Some(&Type::std("U64")));
        assert!(match_one_way(&opt(Type::std("U64")), &opt(ta)).is_none());
    }

    #[test]
    fn range_pattern_matches_range_int() {
        let range = TyCon::new("Main", "Range", 1);
        let (a, ta) = v("a");
        let s = match_one_way(&Type::App(range.clone(), vec![ta]), &Type::App(range, vec![Type::std("Int")])).unwrap();
        assert_eq!(s.get(&a), Some(&Type::std("Int")));
    }

    #[test]
    fn pathed_projections_do_not_unify() {
        let p = QualName::new("A", "P");
        let mk = |m: &str| {
            Type::Assoc(Box::new(AssocTy {
                concept: p.clone(),
                member: "X".into(),
                subjects: vec![Type::std("Int")],
                path: Some(QualName::new(m, "m")),
            }))
        };
        assert!(unify(&mk("B"), &mk("C")).is_err());
        assert!(unify(&mk("B"), &mk("B")).is_ok());
    }

    #[test]
    fn display_forms() {
        let (_, a) = v("a");
        assert_eq!(Type::pair(Type::std("U8"), a.clone()).to_string(), "(U8, a)");
        assert_eq!(Type::func(vec![a.clone()], Type::unit()).to_string(), "(a) -> ()");
        let it = QualName::new("Main", "Iterator");
        assert_eq!(Type::assoc(it, "Element", vec![a]).to_string(), "a.Element");
    }
}
