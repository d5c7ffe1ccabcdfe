//! Surface type expressions to checked types.

use std::sync::Arc;

use super::{ConceptDecl, ModCx};
use crate::diag::{Code, Span};
use crate::surface::{Ident, TypeExpr};
use crate::types::{AssocTy, Constraint, TyVar, Type};

/// What type-level names mean at one point in the program.
#[derive(Default)]
pub(crate) struct TyScope {
    pub vars: Vec<(String, TyVar)>,
    /// Conformances in scope, used to resolve `T.Name`.
    pub constraints: Vec<Constraint>,
    /// Inside a concept body: bare member names project from it.
    pub self_concept: Option<Arc<ConceptDecl>>,
    /// Model heads: unknown single names become new variables.
    pub allow_new_vars: bool,
}

impl TyScope {
    pub fn with_vars(vs: &[TyVar]) -> Self {
        TyScope { vars: vs.iter().map(|v| (v.name.clone(), v.clone())).collect(), ..Default::default() }
    }

    fn var(&self, name: &str) -> Option<&TyVar> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

pub(crate) fn resolve(cx: &mut ModCx, te: &TypeExpr, scope: &mut TyScope) -> Type {
    match te {
        TypeExpr::Tuple { elems, .. } => {
            let ts: Vec<Type> = elems.iter().map(|e| resolve(cx, e, scope)).collect();
            tuple_type(ts)
        }
        TypeExpr::Fn { params, ret, .. } => {
            let ps = params.iter().map(|p| resolve(cx, p, scope)).collect();
            Type::func(ps, resolve(cx, ret, scope))
        }
        TypeExpr::Proj { base, member, .. } => {
            let b = resolve(cx, base, scope);
            project(cx, b, member, scope)
        }
        TypeExpr::Name { path, args, span } => {
            let args: Vec<Type> = args.iter().map(|a| resolve(cx, a, scope)).collect();
            resolve_path(cx, path, args, span, scope)
        }
    }
}

/// `()`, a single type, or right-nested pairs.
pub(crate) fn tuple_type(mut ts: Vec<Type>) -> Type {
    match ts.len() {
        0 => Type::unit(),
        1 => ts.pop().unwrap(),
        _ => {
            let last = ts.pop().unwrap();
            ts.into_iter().rev().fold(last, |acc, t| Type::pair(t, acc))
        }
    }
}

fn resolve_path(cx: &mut ModCx, path: &[Ident], args: Vec<Type>, span: &Span, scope: &mut TyScope) -> Type {
    match path {
        [x] => named_type(cx, None, x, args, span, scope),
        [m, x] if cx.is_module(&m.name) && cx.lookup_data(Some(&m.name), &x.name).is_some() => {
            named_type(cx, Some(&m.name), x, args, span, scope)
        }
        [m, model, member] if cx.is_module(&m.name) && cx.world.model_by_path(&qual(&m.name, &model.name)).is_some() => {
            no_args(cx, &args, span);
            let md = cx.world.model_by_path(&qual(&m.name, &model.name)).unwrap().clone();
            if !md.assoc.iter().any(|(n, _)| n == &member.name) {
                cx.err(Code::UnboundAssoc, &member.span, format!("{} has no associated type `{}`", md.label(), member.name));
                return Type::error();
            }
            if !md.vars.is_empty() {
                cx.err(Code::UnboundAssoc, &member.span, format!("{} is generic; project from its type instead", md.label()));
                return Type::error();
            }
            Type::Assoc(Box::new(AssocTy {
                concept: md.concept.clone(),
                member: member.name.clone(),
                subjects: md.head.clone(),
                path: md.path(),
            }))
        }
        [.., member] => {
            no_args(cx, &args, span);
            let base = resolve_path(cx, &path[..path.len() - 1], vec![], span, scope);
            if base.is_error() {
                return base;
            }
            project(cx, base, member, scope)
        }
        [] => Type::error(),
    }
}

fn qual(m: &str, n: &str) -> crate::types::QualName {
    crate::types::QualName::new(m, n)
}

fn no_args(cx: &mut ModCx, args: &[Type], span: &Span) {
    if !args.is_empty() {
        cx.err(Code::Arity, span, "an associated-type projection takes no type arguments");
    }
}

fn named_type(cx: &mut ModCx, module: Option<&str>, x: &Ident, args: Vec<Type>, span: &Span, scope: &mut TyScope) -> Type {
    if module.is_none() {
        if let Some(v) = scope.var(&x.name) {
            let v = v.clone();
            if !args.is_empty() {
                cx.err(Code::Arity, span, format!("type variable `{}` takes no arguments", x.name));
            }
            return Type::Var(v);
        }
        if let Some(c) = scope.self_concept.clone() {
            if c.assoc.contains(&x.name) {
                no_args(cx, &args, span);
                let subjects = c.params.iter().cloned().map(Type::Var).collect();
                return Type::assoc(c.id.clone(), x.name.clone(), subjects);
            }
        }
    }
    if let Some(d) = cx.lookup_data(module, &x.name) {
        if d.params.len() != args.len() {
            cx.err(
                Code::Arity,
                span,
                format!("type {} takes {} type arguments, got {}", d.id, d.params.len(), args.len()),
            );
            return Type::error();
        }
        return Type::app(d.con(), args);
    }
    if module.is_none_or(|m| m == crate::types::STD) {
        if let Some(t) = cx.prim_type(&x.name) {
            if !args.is_empty() {
                cx.err(Code::Arity, span, format!("type {} takes no type arguments", x.name));
            }
            return t;
        }
    }
    if module.is_none() && scope.allow_new_vars && args.is_empty() {
        let v = TyVar::fresh(x.name.clone());
        scope.vars.push((x.name.clone(), v.clone()));
        return Type::Var(v);
    }
    cx.err(Code::Name, &x.span, format!("unknown type `{}`", x.name));
    Type::error()
}

/// `base.member`: through a conformance in scope, the enclosing concept, or
/// the unique visible concept that declares `member`.
pub(crate) fn project(cx: &mut ModCx, base: Type, member: &Ident, scope: &TyScope) -> Type {
    for c in &scope.constraints {
        if let Constraint::Conf { concept, subjects } = c {
            if subjects.first() == Some(&base) {
                if let Some(cd) = cx.concept_by_id(concept) {
                    if cd.assoc.contains(&member.name) {
                        return Type::assoc(concept.clone(), member.name.clone(), subjects.clone());
                    }
                }
            }
        }
    }
    if let Some(c) = &scope.self_concept {
        if c.assoc.contains(&member.name) && c.params.first().is_some_and(|p| Type::Var(p.clone()) == base) {
            let subjects = c.params.iter().cloned().map(Type::Var).collect();
            return Type::assoc(c.id.clone(), member.name.clone(), subjects);
        }
    }
    let decl = cx.concepts_declaring(&member.name);
    match decl.as_slice() {
        [c] if c.params.len() == 1 => Type::assoc(c.id.clone(), member.name.clone(), vec![base]),
        [c] => {
            cx.err(
                Code::UnboundAssoc,
                &member.span,
                format!("`{base}.{}` is ambiguous: {} has several parameters; add a constraint", member.name, c.id),
            );
            Type::error()
        }
        [] => {
            cx.err(Code::UnboundAssoc, &member.span, format!("no concept declares associated type `{}`", member.name));
            Type::error()
        }
        many => {
            let names: Vec<String> = many.iter().map(|c| c.id.to_string()).collect();
            cx.err(
                Code::UnboundAssoc,
                &member.span,
                format!("`{base}.{}` is ambiguous between {}; add a constraint", member.name, names.join(", ")),
            );
            Type::error()
        }
    }
}
