//! Human-readable rendering of core programs, for `--emit-core`.

use std::fmt::Write;

use super::syntax::*;

pub fn render_program(p: &CoreProgram) -> String {
    let mut out = String::new();
    for d in &p.datas {
        let ps: Vec<&str> = d.params.iter().map(|v| v.name.as_str()).collect();
        let cs: Vec<String> = d
            .ctors
            .iter()
            .map(|(n, fs)| if fs.is_empty() { n.clone() } else { format!("{n}({})", list(fs)) })
            .collect();
        let _ = writeln!(out, "data {}[{}] = {}", d.id, ps.join(", "), cs.join(" | "));
    }
    for d in &p.dicts {
        let ps: Vec<&str> = d.params.iter().map(|v| v.name.as_str()).collect();
        let fs: Vec<String> = d.fields.iter().map(|(n, t)| format!("{n}: {t}")).collect();
        let _ = writeln!(out, "dict {}[{}] {{ {} }}", d.concept, ps.join(", "), fs.join("; "));
    }
    for m in &p.models {
        let _ = writeln!(out, "{} : {}\n  = {}", m.label, m.ty, expr(&m.body));
    }
    for f in &p.funs {
        let _ = writeln!(out, "{} : {}\n  = {}", f.name, f.ty, expr(&f.body));
    }
    if let Some(e) = &p.entry {
        let _ = writeln!(out, "entry {e}");
    }
    out
}

fn list(ts: &[CType]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

fn exprs(es: &[CExpr]) -> String {
    es.iter().map(expr).collect::<Vec<_>>().join(", ")
}

pub fn expr(e: &CExpr) -> String {
    match e {
        CExpr::Var { name } => name.clone(),
        CExpr::Global { name } => name.to_string(),
        CExpr::Model { id } => format!("<model {}#{}>", id.module, id.index),
        CExpr::Lit { lit } => match lit {
            CLit::U64(n) => format!("{n}u64"),
            CLit::U8(n) => format!("{n}u8"),
            CLit::Int(n) => n.to_string(),
            CLit::F64(s) => s.clone(),
            CLit::Str(s) => format!("{s:?}"),
            CLit::Bool(b) => b.to_string(),
            CLit::Unit => "()".into(),
        },
        CExpr::Lam { params, body } => {
            let ps: Vec<String> = params.iter().map(|(n, t)| format!("{n}: {t}")).collect();
            format!("\\({}) -> {}", ps.join(", "), expr(body))
        }
        CExpr::TyLam { vars, body } => {
            let vs: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
            format!("/\\{}. {}", vs.join(" "), expr(body))
        }
        CExpr::App { func, args } => format!("{}({})", atom(func), exprs(args)),
        CExpr::TyApp { func, args } => format!("{}[{}]", atom(func), list(args)),
        CExpr::Record { concept, fields, .. } => {
            let fs: Vec<String> = fields.iter().map(|(n, v)| format!("{n} = {}", expr(v))).collect();
            format!("{} {{ {} }}", concept.name, fs.join("; "))
        }
        CExpr::Proj { record, field } => format!("{}.{field}", atom(record)),
        CExpr::Ctor { ctor, targs, .. } if targs.is_empty() => ctor.clone(),
        CExpr::Ctor { ctor, targs, .. } => format!("{ctor}[{}]", list(targs)),
        CExpr::Match { scrut, arms } => {
            let arms: Vec<String> = arms.iter().map(|(p, b)| format!("{} => {}", pat(p), expr(b))).collect();
            format!("match {} {{ {} }}", expr(scrut), arms.join(", "))
        }
        CExpr::Let { name, ty, value, body } => format!("let {name}: {ty} = {} in {}", expr(value), expr(body)),
        CExpr::If { cond, then, els } => format!("if {} then {} else {}", expr(cond), expr(then), expr(els)),
        CExpr::Prim { op, targs } if targs.is_empty() => op.name().to_string(),
        CExpr::Prim { op, targs } => format!("{}[{}]", op.name(), list(targs)),
    }
}

fn atom(e: &CExpr) -> String {
    match e {
        CExpr::Lam { .. } | CExpr::TyLam { .. } | CExpr::Match { .. } | CExpr::Let { .. } | CExpr::If { .. } => {
            format!("({})", expr(e))
        }
        _ => expr(e),
    }
}

fn pat(p: &CPat) -> String {
    match p {
        CPat::Wild => "_".into(),
        CPat::Bind { name, .. } => name.clone(),
        CPat::Ctor { ctor, args, .. } if args.is_empty() => ctor.clone(),
        CPat::Ctor { ctor, args, .. } => {
            format!("{ctor}({})", args.iter().map(pat).collect::<Vec<_>>().join(", "))
        }
        CPat::Lit { lit } => expr(&CExpr::Lit { lit: lit.clone() }),
    }
}
