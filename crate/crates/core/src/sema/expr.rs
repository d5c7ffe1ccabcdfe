//! Bidirectional checking of function and requirement bodies.
//!
//! Type parameters are rigid; instantiation introduces flexible metas that
//! unify first-order. A projection whose subjects are still unsolved is
//! postponed rather than compared.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::tyexpr::{self, TyScope};
use super::{push_warnings, Body, ConceptDecl, FunDecl, GoalSite, LitVal, ModCx, ModelDecl, ReqBody, ReqSig, TExpr, TPat, ValueRef};
use crate::builtins::Prim;
use crate::diag::{Code, Diagnostic, Span};
use crate::resolver::{given_closure, Given, Resolver};
use crate::surface::{Expr, FunAst, Ident, LamParam, Lit, Pat, ReqImpl, Width};
use crate::types::{normalize_with, AssocTy, Constraint, Subst, TyVar, Type};

struct Infer<'c> {
    cx: &'c mut ModCx,
    givens: Vec<Given>,
    given_cs: Vec<Constraint>,
    scope: TyScope,
    rigid: Vec<TyVar>,
    subst: Subst,
    metas: BTreeSet<u32>,
    postponed: Vec<(Type, Type, Span)>,
    goals: Vec<(Constraint, Span)>,
    prim_checks: Vec<(Prim, Type, Span)>,
    locals: Vec<(String, Type)>,
    diverged: bool,
}

pub(crate) fn check_fun(cx: &mut ModCx, f: &FunDecl, ast: &FunAst) -> Body {
    let mut inf = Infer::new(cx, f.context.clone(), &f.tparams);
    inf.locals = f.params.clone();
    let e = inf.check(&ast.body, Some(&f.ret));
    inf.finish(e)
}

pub(crate) fn check_requirement(
    cx: &mut ModCx,
    m: &ModelDecl,
    cd: &ConceptDecl,
    sig: &ReqSig,
    imp: &ReqImpl,
) -> Option<ReqBody> {
    let at_head = Subst::from_pairs(cd.params.iter().cloned().zip(m.head.iter().cloned()));
    let own = |t: &Type| {
        at_head.apply(t).map_bottom_up(&mut |t| match &t {
            Type::Assoc(a) if a.concept == m.concept && a.subjects == m.head && a.path.is_none() => {
                m.assoc.iter().find(|(n, _)| n == &a.member).map(|(_, b)| b.clone()).unwrap_or(t)
            }
            _ => t,
        })
    };
    let ty = own(&sig.ty);
    let (ps, ret) = ty.as_fn().map(|(p, r)| (p.to_vec(), r.clone()))?;
    if imp.params.len() != ps.len() {
        cx.err(
            Code::Arity,
            &imp.span,
            format!("requirement `{}` takes {} parameters, implementation has {}", sig.name, ps.len(), imp.params.len()),
        );
        return None;
    }
    let mut context = m.context.clone();
    context.extend(cd.supers.iter().map(|s| s.apply(&at_head)));
    let mut inf = Infer::new(cx, context, &m.vars);
    let mut params = Vec::new();
    for (p, t) in imp.params.iter().zip(&ps) {
        if let Some(ann) = &p.ty {
            let a = tyexpr::resolve(inf.cx, ann, &mut inf.scope);
            inf.unify(&a, t, ann.span());
        }
        params.push((p.name.name.clone(), t.clone()));
    }
    if let Some(r) = &imp.ret {
        let a = tyexpr::resolve(inf.cx, r, &mut inf.scope);
        inf.unify(&a, &ret, r.span());
    }
    inf.locals = params.clone();
    let e = inf.check(&imp.body, Some(&ret));
    let body = inf.finish(e);
    Some(ReqBody { name: sig.name.clone(), params, ty, body, span: imp.span.clone() })
}

fn is_numeric(t: &Type) -> Option<&'static str> {
    let Type::Con(c) = t else { return None };
    if c.name.module != crate::types::STD {
        return None;
    }
    ["U64", "U8", "Int"].into_iter().find(|n| *n == c.name.name)
}

impl<'c> Infer<'c> {
    fn new(cx: &'c mut ModCx, context: Vec<Constraint>, rigid: &[TyVar]) -> Self {
        let givens = given_closure(&context, &cx.world);
        let given_cs: Vec<Constraint> = givens.iter().map(|g| g.constraint.clone()).collect();
        let mut scope = TyScope::with_vars(rigid);
        scope.constraints = given_cs.clone();
        Infer {
            cx,
            givens,
            given_cs,
            scope,
            rigid: rigid.to_vec(),
            subst: Subst::new(),
            metas: BTreeSet::new(),
            postponed: vec![],
            goals: vec![],
            prim_checks: vec![],
            locals: vec![],
            diverged: false,
        }
    }

    fn meta(&mut self) -> Type {
        let v = TyVar::fresh("?");
        self.metas.insert(v.id);
        Type::Var(v)
    }

    fn metas_for(&mut self, vs: &[TyVar]) -> (Subst, Vec<Type>) {
        let ts: Vec<Type> = vs.iter().map(|_| self.meta()).collect();
        (Subst::from_pairs(vs.iter().cloned().zip(ts.iter().cloned())), ts)
    }

    fn has_meta(&self, t: &Type) -> bool {
        t.vars().iter().any(|v| self.metas.contains(&v.id))
    }

    /// Applies the current solution and normalizes what can be.
    fn zn(&mut self, t: &Type) -> Type {
        let t = self.subst.apply(t);
        let metas = &self.metas;
        // An unsolved projection may still reduce through a model (the
        // world refuses when a rival head could match later), but not when
        // a generic given of the same concept might end up supplying it.
        let givens = &self.given_cs;
        let blocked = |a: &AssocTy| {
            a.subjects.iter().any(|s| s.vars().iter().any(|v| metas.contains(&v.id)))
                && givens.iter().any(|g| matches!(g, Constraint::Conf { concept, subjects } if *concept == a.concept && !subjects.iter().all(Type::is_ground)))
        };
        match normalize_with(&t, &self.given_cs, &self.cx.world, &blocked) {
            Ok(n) => n,
            Err(d) => {
                if !self.diverged {
                    self.diverged = true;
                    let span = self.cx.own.funs.last().map(|f| f.span.clone()).unwrap_or_else(|| Span::synthetic(&self.cx.file));
                    self.cx.err(Code::NormDiverge, &span, format!("normalizing `{}` did not terminate after {} steps", d.term, d.steps));
                }
                t
            }
        }
    }

    fn unify_raw(&mut self, a: &Type, b: &Type, span: &Span) -> bool {
        let a = self.zn(a);
        let b = self.zn(b);
        if a == b || a.is_error() || b.is_error() {
            return true;
        }
        match (&a, &b) {
            (Type::Var(v), _) if self.metas.contains(&v.id) => self.bind(v, &b),
            (_, Type::Var(v)) if self.metas.contains(&v.id) => self.bind(v, &a),
            (Type::App(c1, xs), Type::App(c2, ys)) if c1 == c2 && xs.len() == ys.len() => {
                let (xs, ys) = (xs.clone(), ys.clone());
                xs.iter().zip(&ys).all(|(x, y)| self.unify_raw(x, y, span))
            }
            (Type::Assoc(_), _) | (_, Type::Assoc(_)) if self.has_meta(&a) || self.has_meta(&b) => {
                self.postponed.push((a, b, span.clone()));
                true
            }
            _ => false,
        }
    }

    fn bind(&mut self, v: &TyVar, t: &Type) -> bool {
        if t.occurs(v) {
            return false;
        }
        self.subst.bind(v.clone(), t.clone());
        true
    }

    /// Unifies or rolls back, without reporting.
    fn try_unify(&mut self, a: &Type, b: &Type, span: &Span) -> bool {
        let saved = (self.subst.clone(), self.postponed.len());
        if self.unify_raw(a, b, span) {
            return true;
        }
        self.subst = saved.0;
        self.postponed.truncate(saved.1);
        false
    }

    fn unify(&mut self, found: &Type, required: &Type, span: &Span) -> bool {
        if self.try_unify(found, required, span) {
            return true;
        }
        let (f, r) = (self.zn(found), self.zn(required));
        self.cx.err(Code::TypeMismatch, span, format!("type mismatch: found '{f}', required '{r}'"));
        false
    }

    fn retry_postponed(&mut self) {
        loop {
            let pending = std::mem::take(&mut self.postponed);
            let before = pending.len();
            for (a, b, span) in pending {
                let (za, zb) = (self.zn(&a), self.zn(&b));
                if (self.has_meta(&za) || self.has_meta(&zb)) && (za.has_assoc() || zb.has_assoc()) && za != zb {
                    // Unify the non-projection parts as far as possible later.
                    self.postponed.push((za, zb, span));
                } else if !self.try_unify(&za, &zb, &span) {
                    self.cx.err(Code::TypeMismatch, &span, format!("type mismatch: found '{za}', required '{zb}'"));
                }
            }
            if self.postponed.len() >= before {
                break;
            }
        }
    }

    fn check(&mut self, e: &Expr, expected: Option<&Type>) -> TExpr {
        let te = self.infer(e, expected);
        if let Some(exp) = expected {
            let ty = te.ty();
            self.unify(&ty, exp, e.span());
        }
        te
    }

    fn infer(&mut self, e: &Expr, expected: Option<&Type>) -> TExpr {
        match e {
            Expr::Lit { lit, span } => TExpr::Lit { lit: self.lit(lit, expected, span) },
            Expr::Var { path, span } => self.var(path, span),
            Expr::Call { func, args, span } => {
                let f = self.check(func, None);
                self.call(f, args, expected, span)
            }
            Expr::Lambda { params, body, .. } => self.lambda(params, body, expected),
            Expr::Match { scrutinee, arms, .. } => {
                let scrut = self.check(scrutinee, None);
                let sty = scrut.ty();
                let res = match expected {
                    Some(t) => t.clone(),
                    None => self.meta(),
                };
                let mut tarms = Vec::new();
                for arm in arms {
                    let mut binds = Vec::new();
                    let p = self.pat(&arm.pat, &sty, &mut binds);
                    let n = self.locals.len();
                    self.locals.extend(binds);
                    let b = self.check(&arm.body, Some(&res));
                    self.locals.truncate(n);
                    tarms.push((p, b));
                }
                TExpr::Match { scrut: Box::new(scrut), arms: tarms, ty: res }
            }
            Expr::Let { name, ty, value, body, .. } => {
                let ann = ty.as_ref().map(|t| tyexpr::resolve(self.cx, t, &mut self.scope));
                let v = self.check(value, ann.as_ref());
                let vty = ann.unwrap_or_else(|| v.ty());
                self.locals.push((name.name.clone(), vty));
                let b = self.check(body, expected);
                self.locals.pop();
                TExpr::Let { name: name.name.clone(), value: Box::new(v), body: Box::new(b) }
            }
            Expr::Tuple { elems, span } => match elems.len() {
                0 => TExpr::Lit { lit: LitVal::Unit },
                1 => self.check(&elems[0], expected),
                _ => {
                    let Some(pair) = self.pair_ctor(span) else { return self.error_expr() };
                    let rest = if elems.len() == 2 {
                        elems[1].clone()
                    } else {
                        let sp = elems[1].span().to(elems[elems.len() - 1].span());
                        Expr::Tuple { elems: elems[1..].to_vec(), span: sp }
                    };
                    self.call(pair, &[elems[0].clone(), rest], expected, span)
                }
            },
            Expr::If { cond, then, els, .. } => {
                let c = self.check(cond, Some(&Type::std("Bool")));
                let res = match expected {
                    Some(t) => t.clone(),
                    None => self.meta(),
                };
                let t = self.check(then, Some(&res));
                let f = self.check(els, Some(&res));
                TExpr::If { cond: Box::new(c), then: Box::new(t), els: Box::new(f) }
            }
            Expr::Annot { expr, ty, .. } => {
                let t = tyexpr::resolve(self.cx, ty, &mut self.scope);
                self.check(expr, Some(&t))
            }
        }
    }

    fn error_expr(&self) -> TExpr {
        TExpr::Prim { op: Prim::Print, targs: vec![], ty: Type::error() }
    }

    fn pair_ctor(&mut self, span: &Span) -> Option<TExpr> {
        let d = self.cx.lookup_data(Some(crate::types::STD), "Pair")?;
        Some(self.instantiate(ValueRef::Ctor(d, 0), span))
    }

    fn lit(&mut self, lit: &Lit, expected: Option<&Type>, span: &Span) -> LitVal {
        match lit {
            Lit::Int { value, width: Some(Width::U64) } => LitVal::U64(*value),
            Lit::Int { value, width: Some(Width::U8) } => self.u8_lit(*value, span),
            Lit::Int { value, width: None } => {
                let exp = expected.map(|t| self.zn(t));
                match exp.as_ref().and_then(is_numeric) {
                    Some("U8") => self.u8_lit(*value, span),
                    Some("Int") => match i64::try_from(*value) {
                        Ok(v) => LitVal::Int(v),
                        Err(_) => {
                            self.cx.err(Code::TypeMismatch, span, format!("literal {value} does not fit in Int"));
                            LitVal::Int(0)
                        }
                    },
                    Some(_) => LitVal::U64(*value),
                    None => {
                        let concrete = exp.as_ref().is_some_and(|t| !self.has_meta(t) && !t.has_assoc());
                        if !concrete && !exp.as_ref().is_some_and(Type::is_error) {
                            self.cx.err(
                                Code::CannotInfer,
                                span,
                                format!("cannot infer the type of literal {value}; add a width suffix (u8, u64) or an annotation"),
                            );
                        }
                        // A concrete non-numeric expectation reports a
                        // mismatch in the caller.
                        LitVal::U64(*value)
                    }
                }
            }
            Lit::Float(s) => LitVal::F64(s.clone()),
            Lit::Str(s) => LitVal::Str(s.clone()),
            Lit::Bool(b) => LitVal::Bool(*b),
            Lit::Unit => LitVal::Unit,
        }
    }

    fn u8_lit(&mut self, value: u64, span: &Span) -> LitVal {
        match u8::try_from(value) {
            Ok(v) => LitVal::U8(v),
            Err(_) => {
                self.cx.err(Code::TypeMismatch, span, format!("literal {value} does not fit in U8"));
                LitVal::U8(0)
            }
        }
    }

    fn var(&mut self, path: &[Ident], span: &Span) -> TExpr {
        if let [x] = path {
            if let Some((_, t)) = self.locals.iter().rev().find(|(n, _)| n == &x.name) {
                return TExpr::Local { name: x.name.clone(), ty: t.clone() };
            }
        }
        match self.cx.lookup_value(path) {
            Some(v) => self.instantiate(v, span),
            None => self.error_expr(),
        }
    }

    fn goal(&mut self, c: Constraint, span: &Span) -> usize {
        self.goals.push((c, span.clone()));
        self.goals.len() - 1
    }

    fn instantiate(&mut self, v: ValueRef, span: &Span) -> TExpr {
        match v {
            ValueRef::Fun(f) => {
                let (s, targs) = self.metas_for(&f.tparams);
                let mut dicts = Vec::new();
                for c in &f.context {
                    let c = c.apply(&s);
                    let is_conf = matches!(c, Constraint::Conf { .. });
                    let i = self.goal(c, span);
                    if is_conf {
                        dicts.push(i);
                    }
                }
                TExpr::Global { fun: f.id.clone(), targs, dicts, ty: s.apply(&f.ty()) }
            }
            ValueRef::Ctor(d, i) => {
                let (s, targs) = self.metas_for(&d.params);
                let c = &d.ctors[i];
                let res = s.apply(&d.ty());
                let ty = if c.fields.is_empty() {
                    res
                } else {
                    Type::func(c.fields.iter().map(|f| s.apply(f)).collect(), res)
                };
                TExpr::Ctor { data: d.id.clone(), ctor: c.name.clone(), tag: i, targs, ty }
            }
            ValueRef::Req(c, i) => self.req(&c, i, span),
            ValueRef::Prim(p) => {
                let (tvs, ty) = p.signature();
                let (s, targs) = self.metas_for(&tvs);
                if let Some(t) = targs.first() {
                    self.prim_checks.push((p, t.clone(), span.clone()));
                }
                TExpr::Prim { op: p, targs, ty: s.apply(&ty) }
            }
        }
    }

    fn req(&mut self, c: &Arc<ConceptDecl>, i: usize, span: &Span) -> TExpr {
        let (s, targs) = self.metas_for(&c.params);
        let goal = self.goal(Constraint::Conf { concept: c.id.clone(), subjects: targs }, span);
        TExpr::Req { concept: c.id.clone(), req: c.reqs[i].name.clone(), goal, ty: s.apply(&c.reqs[i].ty) }
    }

    fn call(&mut self, f: TExpr, args: &[Expr], expected: Option<&Type>, span: &Span) -> TExpr {
        let fty = self.zn(&f.ty());
        let (params, ret) = match fty.as_fn() {
            Some((p, r)) => (p.to_vec(), r.clone()),
            None if matches!(&fty, Type::Var(v) if self.metas.contains(&v.id)) => {
                let ps: Vec<Type> = args.iter().map(|_| self.meta()).collect();
                let r = self.meta();
                self.unify(&fty, &Type::func(ps.clone(), r.clone()), span);
                (ps, r)
            }
            None => {
                if !fty.is_error() {
                    self.cx.err(Code::TypeMismatch, span, format!("type mismatch: found '{fty}', required a function"));
                }
                let args = args.iter().map(|a| self.check(a, None)).collect();
                return TExpr::Call { func: Box::new(f), args, ty: Type::error() };
            }
        };
        if params.len() != args.len() {
            self.cx.err(Code::Arity, span, format!("function expects {} arguments, got {}", params.len(), args.len()));
            let args = args.iter().map(|a| self.check(a, None)).collect();
            return TExpr::Call { func: Box::new(f), args, ty: ret };
        }
        if let Some(exp) = expected {
            self.try_unify(&ret, exp, span);
        }
        let mut targs = Vec::new();
        for (a, p) in args.iter().zip(&params) {
            targs.push(self.check(a, Some(p)));
            self.retry_postponed();
        }
        TExpr::Call { func: Box::new(f), args: targs, ty: ret }
    }

    fn lambda(&mut self, params: &[LamParam], body: &Expr, expected: Option<&Type>) -> TExpr {
        let exp = expected.map(|t| self.zn(t));
        let exp_fn = exp.as_ref().and_then(|t| t.as_fn()).filter(|(ps, _)| ps.len() == params.len());
        let (exp_ps, exp_ret) = match exp_fn {
            Some((ps, r)) => (Some(ps.to_vec()), Some(r.clone())),
            None => (None, None),
        };
        let mut ps = Vec::new();
        for (i, p) in params.iter().enumerate() {
            let t = match (&p.ty, &exp_ps) {
                (Some(ann), e) => {
                    let a = tyexpr::resolve(self.cx, ann, &mut self.scope);
                    if let Some(e) = e {
                        self.unify(&e[i], &a, ann.span());
                    }
                    a
                }
                (None, Some(e)) => e[i].clone(),
                (None, None) => self.meta(),
            };
            ps.push((p.name.name.clone(), t));
        }
        let n = self.locals.len();
        self.locals.extend(ps.iter().cloned());
        let b = self.check(body, exp_ret.as_ref());
        self.locals.truncate(n);
        let ty = Type::func(ps.iter().map(|(_, t)| t.clone()).collect(), b.ty());
        TExpr::Lambda { params: ps, body: Box::new(b), ty }
    }

    fn pat(&mut self, p: &Pat, ty: &Type, binds: &mut Vec<(String, Type)>) -> TPat {
        match p {
            Pat::Wild { .. } => TPat::Wild,
            Pat::Ident { name } => match self.cx.lookup_nullary_ctor(&name.name) {
                Some((d, i)) => self.ctor_pat(d, i, &[], ty, &name.span, binds),
                None => {
                    binds.push((name.name.clone(), ty.clone()));
                    TPat::Bind(name.name.clone(), ty.clone())
                }
            },
            Pat::Ctor { name, args, span } => match self.cx.lookup_ctor(name) {
                Some((d, i)) => self.ctor_pat(d, i, args, ty, span, binds),
                None => TPat::Wild,
            },
            Pat::Tuple { elems, span } => match elems.len() {
                0 => {
                    self.unify(&Type::unit(), ty, span);
                    TPat::Lit(LitVal::Unit)
                }
                1 => self.pat(&elems[0], ty, binds),
                _ => {
                    let Some(d) = self.cx.lookup_data(Some(crate::types::STD), "Pair") else { return TPat::Wild };
                    let rest = if elems.len() == 2 {
                        elems[1].clone()
                    } else {
                        let sp = elems[1].span().to(elems[elems.len() - 1].span());
                        Pat::Tuple { elems: elems[1..].to_vec(), span: sp }
                    };
                    self.ctor_pat(d, 0, &[elems[0].clone(), rest], ty, span, binds)
                }
            },
            Pat::Lit { lit, span } => {
                let v = self.lit(lit, Some(ty), span);
                self.unify(&v.ty(), ty, span);
                TPat::Lit(v)
            }
        }
    }

    fn ctor_pat(
        &mut self,
        d: Arc<super::DataDecl>,
        i: usize,
        args: &[Pat],
        ty: &Type,
        span: &Span,
        binds: &mut Vec<(String, Type)>,
    ) -> TPat {
        let (s, _) = self.metas_for(&d.params);
        self.unify(&s.apply(&d.ty()), ty, span);
        let c = &d.ctors[i];
        if c.fields.len() != args.len() {
            self.cx.err(
                Code::Arity,
                span,
                format!("constructor {} has {} fields, pattern has {}", c.name, c.fields.len(), args.len()),
            );
            return TPat::Wild;
        }
        let fields: Vec<Type> = c.fields.iter().map(|f| s.apply(f)).collect();
        let args = args.iter().zip(&fields).map(|(a, f)| self.pat(a, f, binds)).collect();
        TPat::Ctor { data: d.id.clone(), ctor: c.name.clone(), tag: i, args }
    }

    fn finish(mut self, e: TExpr) -> Body {
        // Wanted equalities may determine what the arguments left open.
        let wanted: Vec<(Type, Type, Span)> = self
            .goals
            .iter()
            .filter_map(|(c, span)| match c {
                Constraint::Eq(a, b) if self.has_meta(&self.subst.apply(a)) || self.has_meta(&self.subst.apply(b)) => {
                    Some((a.clone(), b.clone(), span.clone()))
                }
                _ => None,
            })
            .collect();
        for (a, b, span) in wanted {
            self.try_unify(&a, &b, &span);
        }
        self.retry_postponed();
        for (a, b, span) in std::mem::take(&mut self.postponed) {
            let (a, b) = (self.zn(&a), self.zn(&b));
            self.cx.err(Code::CannotInfer, &span, format!("cannot infer enough to compare '{a}' with '{b}'"));
        }
        for (p, t, span) in std::mem::take(&mut self.prim_checks) {
            let t = self.zn(&t);
            if t.is_error() {
                continue;
            }
            if self.has_meta(&t) {
                self.cx.err(Code::CannotInfer, &span, format!("cannot infer the operand type of `{}`", p.name()));
            } else if !p.restriction().admits(&t) {
                self.cx.err(
                    Code::TypeMismatch,
                    &span,
                    format!("`{}` is not defined at type '{t}'; expected {}", p.name(), p.restriction().describe()),
                );
            }
        }
        let mut goals = Vec::new();
        for (c, span) in std::mem::take(&mut self.goals) {
            let c = c.apply(&self.subst);
            let mut site = GoalSite { constraint: c.clone(), span: span.clone(), rigid: self.rigid.clone(), resolution: None, trace: None };
            let has_error = match &c {
                Constraint::Conf { subjects, .. } => subjects.iter().any(contains_error),
                Constraint::Eq(a, b) => contains_error(a) || contains_error(b),
            };
            if has_error {
                goals.push(site);
                continue;
            }
            if c.vars().iter().any(|v| self.metas.contains(&v.id)) {
                self.cx.err(Code::CannotInfer, &span, format!("cannot infer type arguments for `{c}`"));
                goals.push(site);
                continue;
            }
            let out = Resolver::new(&self.cx.world, &self.givens, self.cx.policy, self.cx.depth).resolve(&c);
            site.trace = Some(out.trace);
            match out.result {
                Ok(r) => site.resolution = Some(r),
                Err(err) => {
                    let mut d = Diagnostic::new(err.code, self.cx.name.clone(), span.clone(), err.message);
                    d.related = err.related;
                    self.cx.diags.push(d);
                }
            }
            push_warnings(self.cx, &span, out.warnings);
            goals.push(site);
        }
        let subst = self.subst.clone();
        let metas = self.metas.clone();
        let mut z = |t: &Type| {
            subst.apply(t).map_bottom_up(&mut |t| match &t {
                Type::Var(v) if metas.contains(&v.id) => Type::unit(),
                _ => t,
            })
        };
        for g in goals.iter_mut() {
            g.constraint = match &g.constraint {
                Constraint::Conf { concept, subjects } => {
                    Constraint::Conf { concept: concept.clone(), subjects: subjects.iter().map(&mut z).collect() }
                }
                Constraint::Eq(a, b) => Constraint::Eq(z(a), z(b)),
            };
        }
        Body { expr: map_types(e, &mut z), goals }
    }
}

fn contains_error(t: &Type) -> bool {
    let mut found = false;
    t.map_bottom_up(&mut |t| {
        found |= t.is_error();
        t
    });
    found
}

fn map_pat(p: TPat, f: &mut impl FnMut(&Type) -> Type) -> TPat {
    match p {
        TPat::Bind(n, t) => TPat::Bind(n, f(&t)),
        TPat::Ctor { data, ctor, tag, args } => {
            TPat::Ctor { data, ctor, tag, args: args.into_iter().map(|a| map_pat(a, f)).collect() }
        }
        p => p,
    }
}

/// Applies `f` to every type annotation in `e`.
pub(crate) fn map_types(e: TExpr, f: &mut impl FnMut(&Type) -> Type) -> TExpr {
    let ts = |xs: Vec<Type>, f: &mut dyn FnMut(&Type) -> Type| xs.iter().map(f).collect::<Vec<_>>();
    match e {
        TExpr::Local { name, ty } => TExpr::Local { name, ty: f(&ty) },
        TExpr::Global { fun, targs, dicts, ty } => TExpr::Global { fun, targs: ts(targs, f), dicts, ty: f(&ty) },
        TExpr::Req { concept, req, goal, ty } => TExpr::Req { concept, req, goal, ty: f(&ty) },
        TExpr::Prim { op, targs, ty } => TExpr::Prim { op, targs: ts(targs, f), ty: f(&ty) },
        TExpr::Ctor { data, ctor, tag, targs, ty } => TExpr::Ctor { data, ctor, tag, targs: ts(targs, f), ty: f(&ty) },
        TExpr::Lit { lit } => TExpr::Lit { lit },
        TExpr::Call { func, args, ty } => TExpr::Call {
            func: Box::new(map_types(*func, f)),
            args: args.into_iter().map(|a| map_types(a, f)).collect(),
            ty: f(&ty),
        },
        TExpr::Lambda { params, body, ty } => TExpr::Lambda {
            params: params.into_iter().map(|(n, t)| (n, f(&t))).collect(),
            body: Box::new(map_types(*body, f)),
            ty: f(&ty),
        },
        TExpr::Match { scrut, arms, ty } => TExpr::Match {
            scrut: Box::new(map_types(*scrut, f)),
            arms: arms.into_iter().map(|(p, b)| (map_pat(p, f), map_types(b, f))).collect(),
            ty: f(&ty),
        },
        TExpr::Let { name, value, body } => {
            TExpr::Let { name, value: Box::new(map_types(*value, f)), body: Box::new(map_types(*body, f)) }
        }
        TExpr::If { cond, then, els } => TExpr::If {
            cond: Box::new(map_types(*cond, f)),
            then: Box::new(map_types(*then, f)),
            els: Box::new(map_types(*els, f)),
        },
    }
}
