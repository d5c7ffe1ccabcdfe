//! Dictionary-passing elaboration of a checked program.
//!
//! Every conformance constraint in a context becomes a leading dictionary
//! parameter; every associated type the context can project becomes an
//! extra type parameter (a slot), so core types never mention projections
//! that could still be refined.

use std::collections::BTreeMap;

use super::syntax::*;
use crate::linker::Program;
use crate::resolver::{given_closure, Resolution};
use crate::sema::{
    CheckedModule, ConceptDecl, FunDecl, GoalSite, ModelDecl, ModelId, TExpr, TPat,
};
use crate::types::{normalize, Constraint, QualName, Subst, Type};
use crate::world::ModelWorld;

/// How one declaration's types and givens translate.
struct Env<'a> {
    world: &'a ModelWorld,
    link: &'a ModelWorld,
    givens: Vec<Constraint>,
    slots: Vec<(Type, CTyVar)>,
    /// Dictionary for each context entry (None for equalities).
    given_dicts: Vec<Option<CExpr>>,
}

impl Env<'_> {
    fn ty(&self, t: &Type) -> CType {
        let n = normalize(t, &self.givens, self.world).unwrap_or_else(|_| t.clone());
        self.convert(&n)
    }

    fn convert(&self, t: &Type) -> CType {
        lower(t, &mut |t| {
            if let Some((_, v)) = self.slots.iter().find(|(a, _)| a == t) {
                return CType::Var { var: v.clone() };
            }
            // Whole-program view: a path-tagged projection is known.
            match normalize(t, &[], self.link) {
                Ok(n) if !matches!(n, Type::Assoc(_)) => self.convert(&n),
                _ => CType::Opaque { name: t.to_string() },
            }
        })
    }

    fn slot_vars(&self) -> Vec<CTyVar> {
        self.slots.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// Projections reachable from a context, normalized and deduplicated.
fn slot_terms(context: &[Constraint], world: &ModelWorld) -> Vec<Type> {
    let closure: Vec<Constraint> = given_closure(context, world).into_iter().map(|g| g.constraint).collect();
    let mut out: Vec<Type> = Vec::new();
    for c in &closure {
        let Constraint::Conf { concept, subjects } = c else { continue };
        let Some(cd) = world.concept(concept) else { continue };
        for m in &cd.assoc {
            let a = Type::assoc(concept.clone(), m.clone(), subjects.clone());
            let n = normalize(&a, &closure, world).unwrap_or(a);
            if matches!(n, Type::Assoc(_)) && !out.contains(&n) {
                out.push(n);
            }
        }
    }
    out
}

struct Elab<'p> {
    prog: &'p Program,
    concept_slots: BTreeMap<QualName, Vec<Type>>,
    fun_slots: BTreeMap<QualName, Vec<Type>>,
    model_slots: BTreeMap<ModelId, Vec<Type>>,
}

pub fn elaborate(prog: &Program) -> CoreProgram {
    let link = &prog.link_world;
    let mut e = Elab { prog, concept_slots: BTreeMap::new(), fun_slots: BTreeMap::new(), model_slots: BTreeMap::new() };
    for c in link.concepts.values() {
        let own = Constraint::Conf { concept: c.id.clone(), subjects: c.params.iter().cloned().map(Type::Var).collect() };
        e.concept_slots.insert(c.id.clone(), slot_terms(&[own], link));
    }
    for m in &prog.modules {
        let w = e.world(&m.name);
        for f in &m.funs {
            e.fun_slots.insert(f.id.clone(), slot_terms(&f.context, w));
        }
        for md in &m.models {
            e.model_slots.insert(md.id.clone(), slot_terms(&md.context, w));
        }
    }
    let mut out = CoreProgram::default();
    for m in &prog.modules {
        for d in &m.datas {
            let env = e.env(&m.name, &[], &[]);
            out.datas.push(CoreData {
                id: d.id.clone(),
                params: d.params.iter().map(Into::into).collect(),
                ctors: d.ctors.iter().map(|c| (c.name.clone(), c.fields.iter().map(|f| env.ty(f)).collect())).collect(),
            });
        }
        for c in &m.concepts {
            out.dicts.push(e.dict_decl(c));
        }
    }
    let items: Vec<(&CheckedModule, &std::sync::Arc<ModelDecl>)> =
        prog.modules.iter().flat_map(|m| m.models.iter().map(move |md| (&**m, md))).collect();
    out.models = crate::par::map(&items, |(m, md)| e.model(m, md));
    let funs: Vec<(&CheckedModule, &std::sync::Arc<FunDecl>)> =
        prog.modules.iter().flat_map(|m| m.funs.iter().map(move |f| (&**m, f))).collect();
    out.funs = crate::par::map(&funs, |(m, f)| e.fun(m, f));
    out.entry = entry_points(prog).into_iter().next();
    out
}

/// Every user function `main() -> Unit`, in module order.
pub fn entry_points(prog: &Program) -> Vec<QualName> {
    prog.user_modules()
        .filter_map(|m| m.fun("main"))
        .filter(|f| f.tparams.is_empty() && f.params.is_empty() && f.ret == Type::unit())
        .map(|f| f.id.clone())
        .collect()
}

impl<'p> Elab<'p> {
    fn world(&self, module: &str) -> &'p ModelWorld {
        self.prog.worlds.get(module).unwrap_or(&self.prog.link_world)
    }

    fn env(&self, module: &str, context: &[Constraint], slots: &[Type]) -> Env<'p> {
        let world = self.world(module);
        Env {
            world,
            link: &self.prog.link_world,
            givens: given_closure(context, world).into_iter().map(|g| g.constraint).collect(),
            slots: slots.iter().map(|t| (t.clone(), CTyVar::fresh(t.to_string()))).collect(),
            given_dicts: context
                .iter()
                .enumerate()
                .map(|(i, c)| matches!(c, Constraint::Conf { .. }).then(|| CExpr::Var { name: dict_param(i) }))
                .collect(),
        }
    }

    fn concept(&self, id: &QualName) -> &'p ConceptDecl {
        self.prog.link_world.concept(id).expect("concepts of a linked program are known")
    }

    fn dict_ty(&self, env: &Env<'_>, concept: &QualName, subjects: &[Type]) -> CType {
        let cd = self.concept(concept);
        let s = Subst::from_pairs(cd.params.iter().cloned().zip(subjects.iter().cloned()));
        let mut args: Vec<CType> = subjects.iter().map(|t| env.ty(t)).collect();
        args.extend(self.concept_slots[concept].iter().map(|a| env.ty(&s.apply(a))));
        CType::Dict { concept: concept.clone(), args }
    }

    fn dict_params(&self, env: &Env<'_>, context: &[Constraint]) -> Vec<(String, CType)> {
        context
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c {
                Constraint::Conf { concept, subjects } => Some((dict_param(i), self.dict_ty(env, concept, subjects))),
                Constraint::Eq(..) => None,
            })
            .collect()
    }

    fn dict_decl(&self, c: &ConceptDecl) -> DictDecl {
        let own = Constraint::Conf { concept: c.id.clone(), subjects: c.params.iter().cloned().map(Type::Var).collect() };
        let mut env = self.env(&c.id.module, std::slice::from_ref(&own), &self.concept_slots[&c.id]);
        env.world = &self.prog.link_world;
        let mut fields = Vec::new();
        for (k, s) in c.supers.iter().enumerate() {
            if let Constraint::Conf { concept, subjects } = s {
                fields.push((super_field(k), self.dict_ty(&env, concept, subjects)));
            }
        }
        for r in &c.reqs {
            fields.push((r.name.clone(), env.ty(&r.ty)));
        }
        let mut params: Vec<CTyVar> = c.params.iter().map(Into::into).collect();
        params.extend(env.slot_vars());
        DictDecl { concept: c.id.clone(), params, fields }
    }

    fn dict(&self, env: &Env<'_>, r: Option<&Resolution>) -> CExpr {
        match r {
            Some(Resolution::Model { model, args, children }) => {
                let md = self.prog.link_world.model(model).expect("resolved models exist");
                let s = Subst::from_pairs(md.vars.iter().cloned().zip(args.iter().cloned()));
                let mut tys: Vec<CType> = args.iter().map(|t| env.ty(t)).collect();
                tys.extend(self.model_slots[model].iter().map(|a| env.ty(&s.apply(a))));
                let head = CExpr::ty_app(CExpr::Model { id: model.clone() }, tys);
                let dicts: Vec<CExpr> = md
                    .context
                    .iter()
                    .zip(children)
                    .filter(|(c, _)| matches!(c, Constraint::Conf { .. }))
                    .map(|(_, ch)| self.dict(env, Some(ch)))
                    .collect();
                if dicts.is_empty() {
                    head
                } else {
                    CExpr::app(head, dicts)
                }
            }
            Some(Resolution::Given { index, path, .. }) => {
                let base = env.given_dicts.get(*index).cloned().flatten();
                let base = base.unwrap_or(CExpr::Var { name: "$missing-given".into() });
                path.iter().fold(base, |e, k| CExpr::proj(e, super_field(*k)))
            }
            // Equalities carry no runtime content; a missing resolution only
            // arises for rejected programs and is caught by the core checker.
            Some(Resolution::Eq { .. }) | None => CExpr::Var { name: "$missing-dict".into() },
        }
    }

    fn fun(&self, m: &CheckedModule, f: &FunDecl) -> CoreFun {
        let env = self.env(&m.name, &f.context, &self.fun_slots[&f.id]);
        let mut vars: Vec<CTyVar> = f.tparams.iter().map(Into::into).collect();
        vars.extend(env.slot_vars());
        let dps = self.dict_params(&env, &f.context);
        let ps: Vec<(String, CType)> = f.params.iter().map(|(n, t)| (n.clone(), env.ty(t))).collect();
        let inner_ty = CType::func(ps.iter().map(|(_, t)| t.clone()).collect(), env.ty(&f.ret));
        let mut body = CExpr::Lam { params: ps, body: Box::new(self.expr(&env, &f.body.goals, &f.body.expr)) };
        let mut ty = inner_ty;
        if !dps.is_empty() {
            ty = CType::func(dps.iter().map(|(_, t)| t.clone()).collect(), ty);
            body = CExpr::Lam { params: dps, body: Box::new(body) };
        }
        CoreFun {
            name: f.id.clone(),
            ty: CType::forall(vars.clone(), ty),
            body: if vars.is_empty() { body } else { CExpr::TyLam { vars, body: Box::new(body) } },
        }
    }

    fn model(&self, m: &CheckedModule, md: &ModelDecl) -> CoreModel {
        let cd = self.concept(&md.concept);
        let env = self.env(&m.name, &md.context, &self.model_slots[&md.id]);
        let at_head = Subst::from_pairs(cd.params.iter().cloned().zip(md.head.iter().cloned()));
        let own = |t: &Type| {
            at_head.apply(t).map_bottom_up(&mut |t| match &t {
                Type::Assoc(a) if a.concept == md.concept && a.subjects == md.head && a.path.is_none() => {
                    md.assoc.iter().find(|(n, _)| n == &a.member).map(|(_, b)| b.clone()).unwrap_or(t)
                }
                _ => t,
            })
        };
        let mut args: Vec<CType> = md.head.iter().map(|t| env.ty(t)).collect();
        args.extend(self.concept_slots[&md.concept].iter().map(|a| env.ty(&own(a))));
        // Superclass dictionaries, one per conformance superclass.
        let supers: Vec<Option<CExpr>> = cd
            .supers
            .iter()
            .enumerate()
            .map(|(k, s)| matches!(s, Constraint::Conf { .. }).then(|| self.dict(&env, md.super_res.get(k))))
            .collect();
        let mut fields: Vec<(String, CExpr)> =
            supers.iter().enumerate().filter_map(|(k, d)| Some((super_field(k), d.clone()?))).collect();

        // Requirement bodies also see the superclass dictionaries at the head.
        let mut req_ctx = md.context.clone();
        req_ctx.extend(cd.supers.iter().map(|s| s.apply(&at_head)));
        let mut req_env = self.env(&m.name, &req_ctx, &[]);
        req_env.slots = env.slots.clone();
        for (k, d) in supers.into_iter().enumerate() {
            req_env.given_dicts[md.context.len() + k] = d;
        }
        for r in &cd.reqs {
            let Some(b) = md.reqs.iter().find(|b| b.name == r.name) else { continue };
            let ps = b.params.iter().map(|(n, t)| (n.clone(), req_env.ty(t))).collect();
            let body = self.expr(&req_env, &b.body.goals, &b.body.expr);
            fields.push((r.name.clone(), CExpr::Lam { params: ps, body: Box::new(body) }));
        }
        let rec_ty = CType::Dict { concept: md.concept.clone(), args: args.clone() };
        let mut body = CExpr::Record { concept: md.concept.clone(), args, fields };
        let mut ty = rec_ty;
        let dps = self.dict_params(&env, &md.context);
        if !dps.is_empty() {
            ty = CType::func(dps.iter().map(|(_, t)| t.clone()).collect(), ty);
            body = CExpr::Lam { params: dps, body: Box::new(body) };
        }
        let mut vars: Vec<CTyVar> = md.vars.iter().map(Into::into).collect();
        vars.extend(env.slot_vars());
        CoreModel {
            id: md.id.clone(),
            label: md.label(),
            ty: CType::forall(vars.clone(), ty),
            body: if vars.is_empty() { body } else { CExpr::TyLam { vars, body: Box::new(body) } },
        }
    }

    fn expr(&self, env: &Env<'_>, goals: &[GoalSite], e: &TExpr) -> CExpr {
        let go = |x: &TExpr| Box::new(self.expr(env, goals, x));
        match e {
            TExpr::Local { name, .. } => CExpr::Var { name: name.clone() },
            TExpr::Global { fun, targs, dicts, .. } => {
                let f = self
                    .prog
                    .module(&fun.module)
                    .and_then(|m| m.fun(&fun.name))
                    .expect("referenced functions exist");
                let s = Subst::from_pairs(f.tparams.iter().cloned().zip(targs.iter().cloned()));
                let mut tys: Vec<CType> = targs.iter().map(|t| env.ty(t)).collect();
                tys.extend(self.fun_slots[fun].iter().map(|a| env.ty(&s.apply(a))));
                let g = CExpr::ty_app(CExpr::Global { name: fun.clone() }, tys);
                if dicts.is_empty() {
                    g
                } else {
                    CExpr::app(g, dicts.iter().map(|i| self.dict(env, goals[*i].resolution.as_ref())).collect())
                }
            }
            TExpr::Req { req, goal, .. } => CExpr::proj(self.dict(env, goals[*goal].resolution.as_ref()), req.clone()),
            TExpr::Prim { op, targs, .. } => CExpr::Prim { op: *op, targs: targs.iter().map(|t| env.ty(t)).collect() },
            TExpr::Ctor { data, ctor, tag, targs, .. } => CExpr::Ctor {
                data: data.clone(),
                ctor: ctor.clone(),
                tag: *tag,
                targs: targs.iter().map(|t| env.ty(t)).collect(),
            },
            TExpr::Lit { lit } => CExpr::Lit { lit: lit.into() },
            TExpr::Call { func, args, .. } => {
                CExpr::App { func: go(func), args: args.iter().map(|a| self.expr(env, goals, a)).collect() }
            }
            TExpr::Lambda { params, body, .. } => CExpr::Lam {
                params: params.iter().map(|(n, t)| (n.clone(), env.ty(t))).collect(),
                body: go(body),
            },
            TExpr::Match { scrut, arms, .. } => CExpr::Match {
                scrut: go(scrut),
                arms: arms.iter().map(|(p, b)| (pat(env, p), self.expr(env, goals, b))).collect(),
            },
            TExpr::Let { name, value, body } => {
                CExpr::Let { name: name.clone(), ty: env.ty(&value.ty()), value: go(value), body: go(body) }
            }
            TExpr::If { cond, then, els } => CExpr::If { cond: go(cond), then: go(then), els: go(els) },
        }
    }
}

fn pat(env: &Env<'_>, p: &TPat) -> CPat {
    match p {
        TPat::Wild => CPat::Wild,
        TPat::Bind(n, t) => CPat::Bind { name: n.clone(), ty: env.ty(t) },
        TPat::Ctor { data, ctor, tag, args } => CPat::Ctor {
            data: data.clone(),
            ctor: ctor.clone(),
            tag: *tag,
            args: args.iter().map(|a| pat(env, a)).collect(),
        },
        TPat::Lit(l) => CPat::Lit { lit: l.into() },
    }
}

/// Structural translation; `assoc` decides what projections become.
pub fn lower(t: &Type, assoc: &mut dyn FnMut(&Type) -> CType) -> CType {
    match t {
        Type::Var(v) => CType::Var { var: v.into() },
        Type::Con(c) => CType::con(c.name.clone(), vec![]),
        Type::App(..) if t.as_fn().is_some() => {
            let (ps, ret) = t.as_fn().unwrap();
            CType::func(ps.iter().map(|p| lower(p, assoc)).collect(), lower(ret, assoc))
        }
        Type::App(c, args) => CType::con(c.name.clone(), args.iter().map(|a| lower(a, assoc)).collect()),
        Type::Assoc(_) => assoc(t),
    }
}

pub fn dict_param(i: usize) -> String {
    format!("$d{i}")
}
