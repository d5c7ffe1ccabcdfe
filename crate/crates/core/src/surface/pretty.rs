//! Canonical text rendering of the surface AST.
//!
//! The output re-parses to a span-insensitively equal AST. Expressions that
//! cannot appear in callee or annotation position unparenthesized (lambda,
//! `if`, `let`, `match`) are wrapped there.

use std::fmt::Write;

use super::ast::*;

pub fn pretty_print(m: &ModuleAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "module {}", m.name.name);
    for i in &m.imports {
        let _ = writeln!(out, "import {}", i.name);
    }
    for d in &m.decls {
        out.push('\n');
        decl(&mut out, d);
    }
    out
}

fn path(p: &[Ident]) -> String {
    p.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(".")
}

fn comma<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(", ")
}

fn decl(out: &mut String, d: &Decl) {
    match d {
        Decl::Concept(c) => {
            let _ = write!(out, "concept {}[{}]", c.name.name, comma(&c.params, |p| p.name.clone()));
            if !c.supers.is_empty() {
                let _ = write!(out, " where {}", comma(&c.supers, constraint));
            }
            if c.assoc.is_empty() && c.reqs.is_empty() {
                out.push_str(" { }\n");
                return;
            }
            out.push_str(" {\n");
            for a in &c.assoc {
                let _ = writeln!(out, "  type {}", a.name);
            }
            for r in &c.reqs {
                let _ = writeln!(
                    out,
                    "  fn {}({}) -> {}",
                    r.name.name,
                    comma(&r.params, |p| format!("{}: {}", p.name.name, ty(&p.ty))),
                    ty(&r.ret)
                );
            }
            out.push_str("}\n");
        }
        Decl::Model(m) => {
            out.push_str("model ");
            if let Some(n) = &m.name {
                let _ = write!(out, "{}: ", n.name);
            }
            let _ = write!(out, "{}[{}]", path(&m.concept), comma(&m.head, ty));
            if !m.context.is_empty() {
                let _ = write!(out, " where {}", comma(&m.context, constraint));
            }
            if m.assoc.is_empty() && m.reqs.is_empty() {
                out.push_str(" { }\n");
                return;
            }
            out.push_str(" {\n");
            for a in &m.assoc {
                let _ = writeln!(out, "  type {} = {}", a.name.name, ty(&a.ty));
            }
            for r in &m.reqs {
                let _ = write!(out, "  fn {}({})", r.name.name, comma(&r.params, lam_param));
                if let Some(t) = &r.ret {
                    let _ = write!(out, " -> {}", ty(t));
                }
                let _ = writeln!(out, " =\n    {}", expr(&r.body));
            }
            out.push_str("}\n");
        }
        Decl::Fun(f) => {
            let _ = write!(out, "fn {}", f.name.name);
            if !f.tparams.is_empty() {
                let _ = write!(out, "[{}]", comma(&f.tparams, |p| p.name.clone()));
            }
            let _ = write!(
                out,
                "({}) -> {}",
                comma(&f.params, |p| format!("{}: {}", p.name.name, ty(&p.ty))),
                ty(&f.ret)
            );
            if !f.context.is_empty() {
                let _ = write!(out, " where {}", comma(&f.context, constraint));
            }
            let _ = writeln!(out, " =\n  {}", expr(&f.body));
        }
        Decl::Data(d) => {
            let _ = write!(out, "data {}", d.name.name);
            if !d.params.is_empty() {
                let _ = write!(out, "[{}]", comma(&d.params, |p| p.name.clone()));
            }
            let ctors: Vec<String> = d
                .ctors
                .iter()
                .map(|c| {
                    if c.fields.is_empty() {
                        c.name.name.clone()
                    } else {
                        format!("{}({})", c.name.name, comma(&c.fields, ty))
                    }
                })
                .collect();
            let _ = writeln!(out, " = {}", ctors.join(" | "));
        }
    }
}

fn lam_param(p: &LamParam) -> String {
    match &p.ty {
        Some(t) => format!("{}: {}", p.name.name, ty(t)),
        None => p.name.name.clone(),
    }
}

fn constraint(c: &ConstraintAst) -> String {
    match c {
        ConstraintAst::Conf { concept, args, .. } => format!("{}[{}]", path(concept), comma(args, ty)),
        ConstraintAst::Eq { lhs, rhs, .. } => format!("{} == {}", ty(lhs), ty(rhs)),
    }
}

pub fn ty(t: &TypeExpr) -> String {
    match t {
        TypeExpr::Name { path: p, args, .. } => {
            if args.is_empty() {
                path(p)
            } else {
                format!("{}[{}]", path(p), comma(args, ty))
            }
        }
        TypeExpr::Proj { base, member, .. } => {
            let b = match &**base {
                TypeExpr::Fn { .. } => format!("({})", ty(base)),
                _ => ty(base),
            };
            format!("{b}.{}", member.name)
        }
        TypeExpr::Tuple { elems, .. } => format!("({})", comma(elems, ty)),
        TypeExpr::Fn { params, ret, .. } => format!("({}) -> {}", comma(params, ty), ty(ret)),
    }
}

fn lit(l: &Lit) -> String {
    match l {
        Lit::Int { value, width } => match width {
            Some(Width::U8) => format!("{value}u8"),
            Some(Width::U64) => format!("{value}u64"),
            None => value.to_string(),
        },
        Lit::Float(s) => s.clone(),
        Lit::Str(s) => {
            let mut o = String::from("\"");
            for c in s.chars() {
                match c {
                    '"' => o.push_str("\\\""),
                    '\\' => o.push_str("\\\\"),
                    '\n' => o.push_str("\\n"),
                    '\t' => o.push_str("\\t"),
                    c => o.push(c),
                }
            }
            o.push('"');
            o
        }
        Lit::Bool(b) => b.to_string(),
        Lit::Unit => "()".into(),
    }
}

fn is_postfix_safe(e: &Expr) -> bool {
    matches!(e, Expr::Var { .. } | Expr::Lit { .. } | Expr::Call { .. } | Expr::Tuple { .. })
}

fn atom(e: &Expr) -> String {
    if is_postfix_safe(e) {
        expr(e)
    } else {
        format!("({})", expr(e))
    }
}

pub fn expr(e: &Expr) -> String {
    match e {
        Expr::Var { path: p, .. } => path(p),
        Expr::Lit { lit: l, .. } => lit(l),
        Expr::Call { func, args, .. } => format!("{}({})", atom(func), comma(args, expr)),
        Expr::Lambda { params, body, .. } => format!("\\({}) -> {}", comma(params, lam_param), expr(body)),
        Expr::Match { scrutinee, arms, .. } => {
            let arms = comma(arms, |a| format!("{} => {}", pat(&a.pat), expr(&a.body)));
            format!("match {} {{ {} }}", expr(scrutinee), arms)
        }
        Expr::Let { name, ty: t, value, body, .. } => match t {
            Some(t) => format!("let {}: {} = {} in {}", name.name, ty(t), expr(value), expr(body)),
            None => format!("let {} = {} in {}", name.name, expr(value), expr(body)),
        },
        Expr::Tuple { elems, .. } => format!("({})", comma(elems, expr)),
        Expr::If { cond, then, els, .. } => {
            format!("if {} then {} else {}", expr(cond), expr(then), expr(els))
        }
        Expr::Annot { expr: inner, ty: t, .. } => format!("({}: {})", atom(inner), ty(t)),
    }
}

fn pat(p: &Pat) -> String {
    match p {
        Pat::Wild { .. } => "_".into(),
        Pat::Ident { name } => name.name.clone(),
        Pat::Ctor { name, args, .. } => format!("{}({})", name.name, comma(args, pat)),
        Pat::Tuple { elems, .. } => format!("({})", comma(elems, pat)),
        Pat::Lit { lit: l, .. } => lit(l),
    }
}
