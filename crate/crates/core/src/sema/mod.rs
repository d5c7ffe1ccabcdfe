//! Name resolution, declaration well-formedness and body type checking.

mod decls;
mod expr;
mod tyexpr;

use std::collections::BTreeSet;
use std::sync::Arc;

pub use decls::*;

use crate::builtins::{Prim, PRIM_TYPES};
use crate::coherence::{Policy, PolicyKind};
use crate::diag::{Code, Diagnostic, Span};
use crate::resolver::{given_closure, Resolver};
use crate::surface::{ConstraintAst, Decl, Ident, ModuleAst};
use crate::types::{Constraint, QualName, Subst, TyCon, TyVar, Type, STD};
use crate::world::{ModelWorld, WorldEntry, SCOPE_IMPORTED, SCOPE_LOCAL};

use tyexpr::TyScope;

/// Everything sema needs besides the module itself.
pub struct SemaInput<'a> {
    /// Directly imported modules (the implicit `std` excluded).
    pub imports: Vec<Arc<CheckedModule>>,
    /// The `std` module, or `None` when checking `std` itself.
    pub std: Option<Arc<CheckedModule>>,
    /// All transitively imported modules, in topological order.
    pub visible: Vec<Arc<CheckedModule>>,
    pub policy: Policy,
    pub depth: usize,
    pub file: &'a str,
}

pub struct SemaOutput {
    pub module: CheckedModule,
    pub world: ModelWorld,
    pub diags: Vec<Diagnostic>,
}

/// A value-level name after lookup.
#[derive(Clone)]
pub(crate) enum ValueRef {
    Fun(Arc<FunDecl>),
    Ctor(Arc<DataDecl>, usize),
    Req(Arc<ConceptDecl>, usize),
    Prim(Prim),
}

pub(crate) struct ModCx {
    pub name: String,
    pub file: String,
    pub policy: Policy,
    pub depth: usize,
    pub own: CheckedModule,
    pub imports: Vec<Arc<CheckedModule>>,
    pub std: Option<Arc<CheckedModule>>,
    pub world: ModelWorld,
    pub diags: Vec<Diagnostic>,
}

impl ModCx {
    pub fn err(&mut self, code: Code, span: &Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(code, self.name.clone(), span.clone(), msg));
    }

    /// Imported modules searched for unqualified names, nearest first.
    fn scopes(&self) -> Vec<&CheckedModule> {
        let mut v: Vec<&CheckedModule> = vec![&self.own];
        v.extend(self.imports.iter().map(|m| &**m));
        v.extend(self.std.iter().map(|m| &**m));
        v
    }

    fn module_named(&self, name: &str) -> Option<&CheckedModule> {
        self.scopes().into_iter().find(|m| m.name == name)
    }

    pub fn is_module(&self, name: &str) -> bool {
        self.module_named(name).is_some()
    }

    /// Finds `name` in the own module first, then uniquely among imports,
    /// then in std.
    fn lookup_unique<T: Clone>(
        &self,
        find: impl Fn(&CheckedModule) -> Option<T>,
    ) -> Result<Option<T>, Vec<String>> {
        if let Some(x) = find(&self.own) {
            return Ok(Some(x));
        }
        let hits: Vec<(String, T)> =
            self.imports.iter().filter_map(|m| find(m).map(|x| (m.name.clone(), x))).collect();
        match hits.len() {
            0 => Ok(self.std.as_ref().and_then(|s| find(s))),
            1 => Ok(hits.into_iter().next().map(|(_, x)| x)),
            _ => Err(hits.into_iter().map(|(m, _)| m).collect()),
        }
    }

    fn values_in(m: &CheckedModule, name: &str, is_std: bool) -> Option<ValueRef> {
        if let Some(f) = m.fun(name) {
            return Some(ValueRef::Fun(f.clone()));
        }
        if let Some((d, i)) = m.ctor(name) {
            return Some(ValueRef::Ctor(d.clone(), i));
        }
        for c in &m.concepts {
            if let Some((i, _)) = c.req(name) {
                return Some(ValueRef::Req(c.clone(), i));
            }
        }
        if is_std {
            return Prim::by_name(name).map(ValueRef::Prim);
        }
        None
    }

    pub fn lookup_value(&mut self, path: &[Ident]) -> Option<ValueRef> {
        let span = path[0].span.to(&path[path.len() - 1].span);
        let dotted = path.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(".");
        let found = match path {
            [x] => {
                let r = self.lookup_unique(|m| Self::values_in(m, &x.name, m.name == STD));
                match r {
                    Ok(Some(v)) => Some(v),
                    Ok(None) if self.std.is_none() => Prim::by_name(&x.name).map(ValueRef::Prim),
                    Ok(None) => None,
                    Err(mods) => {
                        self.err(
                            Code::Name,
                            &span,
                            format!("`{dotted}` is defined in several imported modules ({}); qualify it", mods.join(", ")),
                        );
                        return None;
                    }
                }
            }
            [m, x] => self.module_named(&m.name).and_then(|md| Self::values_in(md, &x.name, md.name == STD)),
            _ => None,
        };
        if found.is_none() {
            self.err(Code::Name, &span, format!("unresolved name `{dotted}`"));
        }
        found
    }

    /// Nullary constructor for a bare pattern identifier, if any.
    pub fn lookup_nullary_ctor(&self, name: &str) -> Option<(Arc<DataDecl>, usize)> {
        self.lookup_unique(|m| m.ctor(name).map(|(d, i)| (d.clone(), i)))
            .ok()
            .flatten()
            .filter(|(d, i)| d.ctors[*i].fields.is_empty())
    }

    pub fn lookup_ctor(&mut self, id: &Ident) -> Option<(Arc<DataDecl>, usize)> {
        match self.lookup_unique(|m| m.ctor(&id.name).map(|(d, i)| (d.clone(), i))) {
            Ok(Some(x)) => Some(x),
            Ok(None) => {
                self.err(Code::Name, &id.span, format!("unknown constructor `{}`", id.name));
                None
            }
            Err(mods) => {
                self.err(Code::Name, &id.span, format!("constructor `{}` is ambiguous between {}", id.name, mods.join(", ")));
                None
            }
        }
    }

    pub fn lookup_data(&self, module: Option<&str>, name: &str) -> Option<Arc<DataDecl>> {
        match module {
            Some(m) => self.module_named(m)?.data(name).cloned(),
            None => self.lookup_unique(|m| m.data(name).cloned()).ok().flatten(),
        }
    }

    pub fn lookup_concept(&mut self, path: &[Ident]) -> Option<Arc<ConceptDecl>> {
        let span = path[0].span.to(&path[path.len() - 1].span);
        let r = match path {
            [x] => match self.lookup_unique(|m| m.concept(&x.name).cloned()) {
                Ok(r) => r,
                Err(mods) => {
                    self.err(Code::Name, &span, format!("concept `{}` is ambiguous between {}", x.name, mods.join(", ")));
                    return None;
                }
            },
            [m, x] => self.module_named(&m.name).and_then(|md| md.concept(&x.name).cloned()),
            _ => None,
        };
        if r.is_none() {
            let dotted = path.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(".");
            self.err(Code::Name, &span, format!("unknown concept `{dotted}`"));
        }
        r
    }

    /// Concepts visible by name that declare associated type `member`.
    pub fn concepts_declaring(&self, member: &str) -> Vec<Arc<ConceptDecl>> {
        let mut out: Vec<Arc<ConceptDecl>> = Vec::new();
        for m in self.scopes() {
            for c in &m.concepts {
                if c.assoc.iter().any(|a| a == member) && !out.iter().any(|o| o.id == c.id) {
                    out.push(c.clone());
                }
            }
        }
        out
    }

    pub fn prim_type(&self, name: &str) -> Option<Type> {
        PRIM_TYPES.contains(&name).then(|| Type::std(name))
    }

    pub fn concept_by_id(&self, id: &QualName) -> Option<Arc<ConceptDecl>> {
        self.world.concept(id).cloned().or_else(|| self.own.concepts.iter().find(|c| &c.id == id).cloned())
    }
}

/// Type-checks one module against its already-checked imports.
pub fn check_module(ast: &ModuleAst, input: SemaInput<'_>) -> SemaOutput {
    let name = ast.name.name.clone();
    let mut cx = ModCx {
        name: name.clone(),
        file: input.file.to_string(),
        policy: input.policy,
        depth: input.depth,
        own: CheckedModule {
            name: name.clone(),
            file: input.file.to_string(),
            imports: ast.imports.iter().map(|i| i.name.clone()).collect(),
            ..CheckedModule::default()
        },
        imports: input.imports,
        std: input.std,
        world: ModelWorld { module: Some(name.clone()), scoped: input.policy.kind == PolicyKind::Scoped, ..Default::default() },
        diags: Vec::new(),
    };
    for m in &input.visible {
        for c in &m.concepts {
            cx.world.concepts.insert(c.id.clone(), c.clone());
        }
        for md in &m.models {
            cx.world.entries.push(WorldEntry { model: md.clone(), scope: SCOPE_IMPORTED });
        }
    }

    check_duplicates(&mut cx, ast);
    collect_datas(&mut cx, ast);
    collect_concepts(&mut cx, ast);
    collect_fun_sigs(&mut cx, ast);
    let model_asts = collect_models(&mut cx, ast);
    for m in &cx.own.models {
        cx.world.entries.push(WorldEntry { model: m.clone(), scope: SCOPE_LOCAL });
    }
    if cx.world.scoped {
        tag_signatures(&mut cx);
    }
    check_supers(&mut cx);
    check_model_bodies(&mut cx, &model_asts);
    check_fun_bodies(&mut cx, ast);

    // Publish the completed models in the world too.
    let own_ids: BTreeSet<ModelId> = cx.own.models.iter().map(|m| m.id.clone()).collect();
    cx.world.entries.retain(|e| !own_ids.contains(&e.model.id));
    for m in &cx.own.models {
        cx.world.entries.push(WorldEntry { model: m.clone(), scope: SCOPE_LOCAL });
    }
    SemaOutput { module: cx.own, world: cx.world, diags: cx.diags }
}

fn check_duplicates(cx: &mut ModCx, ast: &ModuleAst) {
    let mut seen: Vec<(&'static str, String)> = Vec::new();
    for d in &ast.decls {
        let (kind, id): (&'static str, &Ident) = match d {
            Decl::Concept(c) => ("concept", &c.name),
            Decl::Fun(f) => ("value", &f.name),
            Decl::Data(dd) => ("type", &dd.name),
            Decl::Model(m) => match &m.name {
                Some(n) => ("model", n),
                None => continue,
            },
        };
        let key = (kind, id.name.clone());
        if seen.contains(&key) {
            cx.err(Code::Name, &id.span, format!("duplicate {kind} `{}` in module {}", id.name, cx.name));
        } else {
            seen.push(key);
        }
        if let Decl::Data(dd) = d {
            for c in &dd.ctors {
                let key = ("value", c.name.name.clone());
                if seen.contains(&key) {
                    cx.err(Code::Name, &c.name.span, format!("duplicate value `{}` in module {}", c.name.name, cx.name));
                } else {
                    seen.push(key);
                }
            }
        }
    }
}

fn fresh_params(names: &[Ident]) -> Vec<TyVar> {
    names.iter().map(|n| TyVar::fresh(n.name.clone())).collect()
}

fn collect_datas(cx: &mut ModCx, ast: &ModuleAst) {
    let mut seen = BTreeSet::new();
    let asts: Vec<_> = ast
        .decls
        .iter()
        .filter_map(|d| match d {
            Decl::Data(dd) if seen.insert(dd.name.name.clone()) => Some(dd),
            _ => None,
        })
        .collect();
    // Register headers first so constructors may refer to any data type.
    for dd in &asts {
        let decl = DataDecl {
            id: QualName::new(cx.name.clone(), dd.name.name.clone()),
            params: fresh_params(&dd.params),
            ctors: vec![],
            span: dd.span.clone(),
        };
        cx.own.datas.push(Arc::new(decl));
    }
    for (i, dd) in asts.iter().enumerate() {
        let params = cx.own.datas[i].params.clone();
        let mut scope = TyScope::with_vars(&params);
        let ctors = dd
            .ctors
            .iter()
            .map(|c| CtorDecl {
                name: c.name.name.clone(),
                fields: c.fields.iter().map(|f| tyexpr::resolve(cx, f, &mut scope)).collect(),
                span: c.span.clone(),
            })
            .collect();
        let mut d = (*cx.own.datas[i]).clone();
        d.ctors = ctors;
        cx.own.datas[i] = Arc::new(d);
    }
}

fn collect_concepts(cx: &mut ModCx, ast: &ModuleAst) {
    for d in &ast.decls {
        let Decl::Concept(c) = d else { continue };
        let id = QualName::new(cx.name.clone(), c.name.name.clone());
        if cx.own.concept(&c.name.name).is_some() {
            continue;
        }
        let params = fresh_params(&c.params);
        let mut assoc = Vec::new();
        for a in &c.assoc {
            if assoc.contains(&a.name) {
                cx.err(Code::Name, &a.span, format!("duplicate associated type `{}`", a.name));
            } else {
                assoc.push(a.name.clone());
            }
        }
        let mut decl = ConceptDecl { id: id.clone(), params: params.clone(), supers: vec![], assoc, reqs: vec![], span: c.span.clone() };
        // Registered before its supers and requirements so they can name
        // its own projections.
        cx.own.concepts.push(Arc::new(decl.clone()));
        cx.world.concepts.insert(id.clone(), Arc::new(decl.clone()));
        let mut scope = TyScope::with_vars(&params);
        scope.self_concept = Some(Arc::new(decl.clone()));
        for s in &c.supers {
            if let Some(k) = resolve_constraint(cx, s, &mut scope) {
                if matches!(&k, Constraint::Conf { concept, .. } if concept == &id) {
                    cx.err(Code::Name, s.span(), format!("concept `{}` cannot refine itself", id.name));
                    continue;
                }
                decl.supers.push(k);
            }
        }
        scope.constraints = given_closure(&decl.supers, &cx.world).into_iter().map(|g| g.constraint).collect();
        for r in &c.reqs {
            if decl.reqs.iter().any(|x| x.name == r.name.name) {
                cx.err(Code::Name, &r.name.span, format!("duplicate requirement `{}`", r.name.name));
                continue;
            }
            let ps: Vec<Type> = r.params.iter().map(|p| tyexpr::resolve(cx, &p.ty, &mut scope)).collect();
            let ret = tyexpr::resolve(cx, &r.ret, &mut scope);
            decl.reqs.push(ReqSig {
                name: r.name.name.clone(),
                params: r.params.iter().map(|p| p.name.name.clone()).collect(),
                ty: Type::func(ps, ret),
                span: r.span.clone(),
            });
        }
        let decl = Arc::new(decl);
        let slot = cx.own.concepts.iter().position(|x| x.id == id).expect("registered");
        cx.own.concepts[slot] = decl.clone();
        cx.world.concepts.insert(id, decl);
    }
}

pub(crate) fn resolve_constraint(cx: &mut ModCx, c: &ConstraintAst, scope: &mut TyScope) -> Option<Constraint> {
    match c {
        ConstraintAst::Conf { concept, args, span } => {
            let cd = cx.lookup_concept(concept)?;
            let subjects: Vec<Type> = args.iter().map(|a| tyexpr::resolve(cx, a, scope)).collect();
            if subjects.len() != cd.params.len() {
                cx.err(
                    Code::Arity,
                    span,
                    format!("concept {} takes {} type arguments, got {}", cd.id.name, cd.params.len(), subjects.len()),
                );
                return None;
            }
            Some(Constraint::Conf { concept: cd.id.clone(), subjects })
        }
        ConstraintAst::Eq { lhs, rhs, .. } => {
            Some(Constraint::Eq(tyexpr::resolve(cx, lhs, scope), tyexpr::resolve(cx, rhs, scope)))
        }
    }
}

/// Resolves a `where` list left to right; later entries may project
/// through earlier ones.
fn resolve_context(cx: &mut ModCx, cs: &[ConstraintAst], scope: &mut TyScope) -> Vec<Constraint> {
    let mut out = Vec::new();
    for c in cs {
        if let Some(k) = resolve_constraint(cx, c, scope) {
            out.push(k.clone());
            scope.constraints = given_closure(&out, &cx.world).into_iter().map(|g| g.constraint).collect();
        }
    }
    out
}

fn placeholder_body() -> Body {
    Body { expr: TExpr::Lit { lit: LitVal::Unit }, goals: vec![] }
}

fn collect_fun_sigs(cx: &mut ModCx, ast: &ModuleAst) {
    for d in &ast.decls {
        let Decl::Fun(f) = d else { continue };
        if cx.own.fun(&f.name.name).is_some() {
            continue;
        }
        let tparams = fresh_params(&f.tparams);
        let mut scope = TyScope::with_vars(&tparams);
        // Pre-scan conformance constraints so that parameter projections
        // like `A.Element` resolve through the context.
        let context = resolve_context(cx, &f.context, &mut scope);
        let params = f.params.iter().map(|p| (p.name.name.clone(), tyexpr::resolve(cx, &p.ty, &mut scope))).collect();
        let ret = tyexpr::resolve(cx, &f.ret, &mut scope);
        let decl = FunDecl {
            id: QualName::new(cx.name.clone(), f.name.name.clone()),
            tparams,
            context,
            params,
            ret,
            body: placeholder_body(),
            span: f.span.clone(),
        };
        cx.own.funs.push(Arc::new(decl));
    }
}

fn collect_models(cx: &mut ModCx, ast: &ModuleAst) -> Vec<crate::surface::ModelAst> {
    let mut asts = Vec::new();
    for d in &ast.decls {
        let Decl::Model(m) = d else { continue };
        let Some(cd) = cx.lookup_concept(&m.concept) else { continue };
        let head_span = m.head.first().map(|h| h.span().to(m.head.last().unwrap().span())).unwrap_or(m.span.clone());
        let mut scope = TyScope { allow_new_vars: true, ..TyScope::default() };
        let head: Vec<Type> = m.head.iter().map(|h| tyexpr::resolve(cx, h, &mut scope)).collect();
        scope.allow_new_vars = false;
        if head.len() != cd.params.len() {
            cx.err(
                Code::Arity,
                &head_span,
                format!("concept {} takes {} type arguments, got {}", cd.id.name, cd.params.len(), head.len()),
            );
            continue;
        }
        if head.iter().any(Type::has_assoc) {
            cx.err(Code::TypeMismatch, &head_span, "associated-type projections cannot appear in a model head");
            continue;
        }
        let vars = scope.vars.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>();
        let context = resolve_context(cx, &m.context, &mut scope);
        let mut assoc = Vec::new();
        for b in &m.assoc {
            if !cd.assoc.contains(&b.name.name) {
                cx.err(Code::Name, &b.name.span, format!("`{}` is not an associated type of {}", b.name.name, cd.id.name));
                continue;
            }
            if assoc.iter().any(|(n, _): &(String, Type)| n == &b.name.name) {
                cx.err(Code::UnboundAssoc, &b.name.span, format!("associated type `{}` bound twice", b.name.name));
                continue;
            }
            assoc.push((b.name.name.clone(), tyexpr::resolve(cx, &b.ty, &mut scope)));
        }
        for a in &cd.assoc {
            if !assoc.iter().any(|(n, _)| n == a) {
                cx.err(Code::UnboundAssoc, &m.span, format!("model of {} does not bind associated type `{a}`", cd.id.name));
                assoc.push((a.clone(), Type::error()));
            }
        }
        assoc.sort_by_key(|(n, _)| cd.assoc.iter().position(|a| a == n));
        let decl = ModelDecl {
            id: ModelId { module: cx.name.clone(), index: cx.own.models.len() },
            name: m.name.as_ref().map(|n| n.name.clone()),
            concept: cd.id.clone(),
            vars,
            head,
            context,
            assoc,
            reqs: vec![],
            super_res: vec![],
            span: m.span.clone(),
            head_span,
        };
        cx.own.models.push(Arc::new(decl));
        asts.push(m.clone());
    }
    asts
}

/// Under the scoped policy, ground projections in signatures name the
/// model they were selected from.
fn tag_signatures(cx: &mut ModCx) {
    let world = cx.world.clone();
    let tag = |t: &Type| t.map_bottom_up(&mut |t| tag_assoc(t, &world));
    let funs: Vec<Arc<FunDecl>> = cx
        .own
        .funs
        .iter()
        .map(|f| {
            let mut g = (**f).clone();
            g.params = g.params.iter().map(|(n, t)| (n.clone(), tag(t))).collect();
            g.ret = tag(&g.ret);
            Arc::new(g)
        })
        .collect();
    cx.own.funs = funs;
}

fn tag_assoc(t: Type, world: &ModelWorld) -> Type {
    let Type::Assoc(a) = &t else { return t };
    if a.path.is_some() || !a.subjects.iter().all(Type::is_ground) {
        return t;
    }
    let cands = crate::resolver::candidates(&a.concept, &a.subjects, world);
    let Some(inner) = cands.iter().map(|c| c.scope).min() else { return t };
    let level: Vec<_> = cands.iter().filter(|c| c.scope == inner).collect();
    match level.as_slice() {
        [one] => match one.model.path() {
            Some(p) => Type::Assoc(Box::new(crate::types::AssocTy { path: Some(p), ..(**a).clone() })),
            None => t,
        },
        _ => t,
    }
}

fn check_supers(cx: &mut ModCx) {
    let models = cx.own.models.clone();
    let mut updated = Vec::new();
    for m in models {
        let Some(cd) = cx.concept_by_id(&m.concept) else {
            updated.push(m);
            continue;
        };
        let s = Subst::from_pairs(cd.params.iter().cloned().zip(m.head.iter().cloned()));
        let givens = given_closure(&m.context, &cx.world);
        let mut res = Vec::new();
        for sup in &cd.supers {
            let goal = sup.apply(&s);
            let out = Resolver::new(&cx.world, &givens, cx.policy, cx.depth).resolve(&goal);
            match out.result {
                Ok(r) => res.push(r),
                Err(e) => {
                    let code = if e.code == Code::TypeMismatch { Code::NoModel } else { e.code };
                    let mut d = Diagnostic::new(
                        code,
                        cx.name.clone(),
                        m.span.clone(),
                        format!("superclass obligation `{goal}` of {}: {}", m.label(), e.message),
                    );
                    d.related = e.related;
                    cx.diags.push(d);
                }
            }
            push_warnings(cx, &m.span, out.warnings);
        }
        let mut md = (*m).clone();
        md.super_res = res;
        updated.push(Arc::new(md));
    }
    cx.own.models = updated;
    refresh_world(cx);
}

pub(crate) fn push_warnings(cx: &mut ModCx, span: &Span, ws: Vec<(String, Vec<crate::diag::Related>)>) {
    for (msg, related) in ws {
        let mut d = Diagnostic::new(Code::Incoherent, cx.name.clone(), span.clone(), msg);
        d.related = related;
        cx.diags.push(d);
    }
}

fn refresh_world(cx: &mut ModCx) {
    let own: Vec<Arc<ModelDecl>> = cx.own.models.clone();
    for e in cx.world.entries.iter_mut() {
        if let Some(m) = own.iter().find(|m| m.id == e.model.id) {
            e.model = m.clone();
        }
    }
}

fn check_model_bodies(cx: &mut ModCx, asts: &[crate::surface::ModelAst]) {
    let models = cx.own.models.clone();
    let mut updated = Vec::new();
    for (m, ast) in models.iter().zip(asts) {
        let Some(cd) = cx.concept_by_id(&m.concept) else {
            updated.push(m.clone());
            continue;
        };
        let mut md = (**m).clone();
        for r in &ast.reqs {
            if cd.req(&r.name.name).is_none() {
                cx.err(Code::Name, &r.name.span, format!("`{}` is not a requirement of {}", r.name.name, cd.id.name));
            }
        }
        for sig in &cd.reqs {
            let imps: Vec<_> = ast.reqs.iter().filter(|r| r.name.name == sig.name).collect();
            let Some(imp) = imps.first() else {
                cx.err(Code::MissingReq, &m.span, format!("{} does not implement requirement `{}`", m.label(), sig.name));
                continue;
            };
            if imps.len() > 1 {
                cx.err(Code::Name, &imps[1].name.span, format!("requirement `{}` implemented twice", sig.name));
            }
            if let Some(b) = expr::check_requirement(cx, m, &cd, sig, imp) {
                md.reqs.push(b);
            }
        }
        updated.push(Arc::new(md));
    }
    cx.own.models = updated;
    refresh_world(cx);
}

fn check_fun_bodies(cx: &mut ModCx, ast: &ModuleAst) {
    let mut seen = BTreeSet::new();
    for d in &ast.decls {
        let Decl::Fun(f) = d else { continue };
        if !seen.insert(f.name.name.clone()) {
            continue;
        }
        let Some(idx) = cx.own.funs.iter().position(|g| g.id.name == f.name.name) else { continue };
        let decl = cx.own.funs[idx].clone();
        let body = expr::check_fun(cx, &decl, f);
        let mut nd = (*decl).clone();
        nd.body = body;
        cx.own.funs[idx] = Arc::new(nd);
    }
}

impl Type {
    /// Placeholder for an ill-formed type; unifies with everything so one
    /// mistake yields one diagnostic.
    pub fn error() -> Type {
        Type::Con(TyCon::new(STD, "<error>", 0))
    }

    pub fn is_error(&self) -> bool {
        matches!(self, Type::Con(c) if c.name.module == STD && c.name.name == "<error>")
    }
}
