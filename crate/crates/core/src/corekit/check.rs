//! Type checking of core programs. Elaboration is meant to produce only
//! well-typed terms; this checker is the independent confirmation.

use std::collections::BTreeMap;

use super::elab::lower;
use super::syntax::*;
use crate::diag::{Code, Diagnostic, Span};
use crate::types::QualName;

struct Cx<'a> {
    prog: &'a CoreProgram,
    globals: BTreeMap<&'a QualName, &'a CType>,
    owner: String,
}

type Locals = Vec<(String, CType)>;

pub fn core_check(prog: &CoreProgram) -> Result<(), Vec<Diagnostic>> {
    let globals = prog.funs.iter().map(|f| (&f.name, &f.ty)).collect();
    let mut diags = Vec::new();
    let mut cx = Cx { prog, globals, owner: String::new() };
    for f in &prog.funs {
        cx.owner = f.name.to_string();
        report(&mut diags, &cx, cx.check_top(&f.body, &f.ty), &f.name.module);
    }
    for m in &prog.models {
        cx.owner = m.label.clone();
        report(&mut diags, &cx, cx.check_top(&m.body, &m.ty), &m.id.module);
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

fn report(diags: &mut Vec<Diagnostic>, cx: &Cx<'_>, r: Result<(), String>, module: &str) {
    if let Err(msg) = r {
        diags.push(Diagnostic::new(
            Code::CoreIllTyped,
            module.to_string(),
            Span::synthetic(module),
            format!("elaborated {} is ill-typed: {msg}", cx.owner),
        ));
    }
}

fn same(found: &CType, want: &CType, what: &str) -> Result<(), String> {
    if found.alpha_eq(want) {
        Ok(())
    } else {
        Err(format!("{what}: found {found}, expected {want}"))
    }
}

fn inst(ty: &CType, args: &[CType]) -> Result<CType, String> {
    match ty {
        CType::Forall { vars, body } if vars.len() == args.len() => {
            let s = vars.iter().map(|v| v.id).zip(args.iter().cloned()).collect();
            Ok(body.subst(&s))
        }
        _ => Err(format!("cannot apply {ty} to {} type arguments", args.len())),
    }
}

impl Cx<'_> {
    fn check_top(&self, body: &CExpr, ty: &CType) -> Result<(), String> {
        let t = self.infer(&mut Vec::new(), body)?;
        same(&t, ty, "declared type")
    }

    fn model_ty(&self, id: &crate::sema::ModelId) -> Result<&CType, String> {
        self.prog.model(id).map(|m| &m.ty).ok_or_else(|| format!("unknown model {id:?}"))
    }

    fn dict_fields(&self, concept: &QualName, args: &[CType]) -> Result<Vec<(String, CType)>, String> {
        let d = self.prog.dict(concept).ok_or_else(|| format!("unknown dictionary {concept}"))?;
        if d.params.len() != args.len() {
            return Err(format!("dictionary {concept} takes {} arguments, got {}", d.params.len(), args.len()));
        }
        let s = d.params.iter().map(|v| v.id).zip(args.iter().cloned()).collect();
        Ok(d.fields.iter().map(|(n, t)| (n.clone(), t.subst(&s))).collect())
    }

    fn ctor_sig(&self, data: &QualName, tag: usize, targs: &[CType]) -> Result<(Vec<CType>, CType), String> {
        let d = self.prog.data(data).ok_or_else(|| format!("unknown data type {data}"))?;
        let (_, fields) = d.ctors.get(tag).ok_or_else(|| format!("{data} has no constructor #{tag}"))?;
        if d.params.len() != targs.len() {
            return Err(format!("{data} takes {} type arguments", d.params.len()));
        }
        let s = d.params.iter().map(|v| v.id).zip(targs.iter().cloned()).collect();
        Ok((fields.iter().map(|f| f.subst(&s)).collect(), CType::con(data.clone(), targs.to_vec())))
    }

    fn infer(&self, locals: &mut Locals, e: &CExpr) -> Result<CType, String> {
        match e {
            CExpr::Var { name } => locals
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| format!("unbound variable {name}")),
            CExpr::Global { name } => self.globals.get(name).map(|t| (*t).clone()).ok_or_else(|| format!("unknown function {name}")),
            CExpr::Model { id } => self.model_ty(id).cloned(),
            CExpr::Lit { lit } => Ok(lit.ty()),
            CExpr::Lam { params, body } => {
                let n = locals.len();
                locals.extend(params.iter().cloned());
                let r = self.infer(locals, body);
                locals.truncate(n);
                Ok(CType::func(params.iter().map(|(_, t)| t.clone()).collect(), r?))
            }
            CExpr::TyLam { vars, body } => Ok(CType::forall(vars.clone(), self.infer(locals, body)?)),
            CExpr::App { func, args } => {
                let ft = self.infer(locals, func)?;
                let CType::Fn { params, ret } = ft else { return Err(format!("applying a non-function of type {ft}")) };
                if params.len() != args.len() {
                    return Err(format!("function of type ({}) applied to {} arguments", CType::func(params, *ret), args.len()));
                }
                for (p, a) in params.iter().zip(args) {
                    let at = self.infer(locals, a)?;
                    same(&at, p, "argument")?;
                }
                Ok(*ret)
            }
            CExpr::TyApp { func, args } => inst(&self.infer(locals, func)?, args),
            CExpr::Record { concept, args, fields } => {
                let want = self.dict_fields(concept, args)?;
                if want.len() != fields.len() {
                    return Err(format!("dictionary {concept} needs {} fields, got {}", want.len(), fields.len()));
                }
                for ((wn, wt), (n, v)) in want.iter().zip(fields) {
                    if wn != n {
                        return Err(format!("dictionary {concept}: field {n} where {wn} belongs"));
                    }
                    let t = self.infer(locals, v)?;
                    same(&t, wt, &format!("field {n}"))?;
                }
                Ok(CType::Dict { concept: concept.clone(), args: args.clone() })
            }
            CExpr::Proj { record, field } => match self.infer(locals, record)? {
                CType::Dict { concept, args } => self
                    .dict_fields(&concept, &args)?
                    .into_iter()
                    .find(|(n, _)| n == field)
                    .map(|(_, t)| t)
                    .ok_or_else(|| format!("dictionary {concept} has no field {field}")),
                t => Err(format!("projecting {field} from a non-dictionary {t}")),
            },
            CExpr::Ctor { data, tag, targs, .. } => {
                let (fields, res) = self.ctor_sig(data, *tag, targs)?;
                Ok(if fields.is_empty() { res } else { CType::func(fields, res) })
            }
            CExpr::Match { scrut, arms } => {
                let st = self.infer(locals, scrut)?;
                let mut out: Option<CType> = None;
                for (p, b) in arms {
                    let n = locals.len();
                    self.pat(locals, p, &st)?;
                    let bt = self.infer(locals, b);
                    locals.truncate(n);
                    let bt = bt?;
                    match &out {
                        Some(t) => same(&bt, t, "match arm")?,
                        None => out = Some(bt),
                    }
                }
                out.ok_or_else(|| "match with no arms".to_string())
            }
            CExpr::Let { name, ty, value, body } => {
                let vt = self.infer(locals, value)?;
                same(&vt, ty, &format!("let {name}"))?;
                locals.push((name.clone(), ty.clone()));
                let r = self.infer(locals, body);
                locals.pop();
                r
            }
            CExpr::If { cond, then, els } => {
                same(&self.infer(locals, cond)?, &CType::std("Bool"), "condition")?;
                let t = self.infer(locals, then)?;
                same(&self.infer(locals, els)?, &t, "else branch")?;
                Ok(t)
            }
            CExpr::Prim { op, targs } => {
                let (vars, sig) = op.signature();
                if vars.len() != targs.len() {
                    return Err(format!("builtin {} takes {} type arguments", op.name(), vars.len()));
                }
                let s = vars.iter().map(|v| v.id).zip(targs.iter().cloned()).collect();
                Ok(lower(&sig, &mut |t| CType::Opaque { name: t.to_string() }).subst(&s))
            }
        }
    }

    fn pat(&self, locals: &mut Locals, p: &CPat, ty: &CType) -> Result<(), String> {
        match p {
            CPat::Wild => Ok(()),
            CPat::Bind { name, ty: bt } => {
                same(bt, ty, &format!("pattern {name}"))?;
                locals.push((name.clone(), bt.clone()));
                Ok(())
            }
            CPat::Lit { lit } => same(&lit.ty(), ty, "literal pattern"),
            CPat::Ctor { data, ctor, tag, args } => {
                let CType::Con { name, args: targs } = ty else {
                    return Err(format!("constructor pattern {ctor} against {ty}"));
                };
                if name != data {
                    return Err(format!("constructor pattern {ctor} against {ty}"));
                }
                let (fields, _) = self.ctor_sig(data, *tag, targs)?;
                if fields.len() != args.len() {
                    return Err(format!("{ctor} has {} fields, pattern has {}", fields.len(), args.len()));
                }
                for (a, f) in args.iter().zip(&fields) {
                    self.pat(locals, a, f)?;
                }
                Ok(())
            }
        }
    }
}
