use proptest::prelude::*;
use sl_core::diag::Span;
use sl_core::surface::ast::*;
use sl_core::surface::{parse_module, pretty_print};

fn sp() -> Span {
    Span::synthetic("gen")
}

fn ident(name: &str) -> Ident {
    Ident { name: name.to_string(), span: sp() }
}

fn lower_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x", "y", "go", "acc", "next_one"]).prop_map(String::from)
}

fn upper_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["A", "Node", "Option", "Pair", "U64"]).prop_map(String::from)
}

fn type_expr() -> impl Strategy<Value = TypeExpr> {
    let leaf = prop_oneof![
        upper_name().prop_map(|n| TypeExpr::Name { path: vec![ident(&n)], args: vec![], span: sp() }),
        (upper_name(), upper_name()).prop_map(|(a, m)| TypeExpr::Name { path: vec![ident(&a), ident(&m)], args: vec![], span: sp() }),
        Just(TypeExpr::Tuple { elems: vec![], span: sp() }),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (upper_name(), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(n, args)| TypeExpr::Name { path: vec![ident(&n)], args, span: sp() }),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|elems| TypeExpr::Tuple { elems, span: sp() }),
            (prop::collection::vec(inner.clone(), 0..3), inner.clone())
                .prop_map(|(params, ret)| TypeExpr::Fn { params, ret: Box::new(ret), span: sp() }),
            (upper_name(), prop::collection::vec(inner, 1..2), upper_name()).prop_map(|(n, args, m)| TypeExpr::Proj {
                base: Box::new(TypeExpr::Name { path: vec![ident(&n)], args, span: sp() }),
                member: ident(&m),
                span: sp(),
            }),
        ]
    })
}

fn lit() -> impl Strategy<Value = Lit> {
    prop_oneof![
        (any::<u64>(), prop::option::of(prop_oneof![Just(Width::U8), Just(Width::U64)]))
            .prop_map(|(value, width)| Lit::Int { value: if width == Some(Width::U8) { value % 256 } else { value }, width }),
        (0u32..1000, 0u32..100).prop_map(|(a, b)| Lit::Float(format!("{a}.{b}"))),
        "[a-z \\\\\"\n\t]{0,8}".prop_map(Lit::Str),
        any::<bool>().prop_map(Lit::Bool),
        Just(Lit::Unit),
    ]
}

fn pat() -> impl Strategy<Value = Pat> {
    let leaf = prop_oneof![
        Just(Pat::Wild { span: sp() }),
        lower_name().prop_map(|n| Pat::Ident { name: ident(&n) }),
        lit().prop_filter("floats are not patterns", |l| !matches!(l, Lit::Float(_))).prop_map(|lit| Pat::Lit { lit, span: sp() }),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            (upper_name(), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(n, args)| Pat::Ctor { name: ident(&n), args, span: sp() }),
            prop::collection::vec(inner, 2..4).prop_map(|elems| Pat::Tuple { elems, span: sp() }),
        ]
    })
}

fn var(n: &str) -> Expr {
    Expr::Var { path: vec![ident(n)], span: sp() }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        lower_name().prop_map(|n| var(&n)),
        (upper_name(), lower_name()).prop_map(|(m, n)| Expr::Var { path: vec![ident(&m), ident(&n)], span: sp() }),
        lit().prop_map(|lit| Expr::Lit { lit, span: sp() }),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            (lower_name(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(f, args)| Expr::Call { func: Box::new(var(&f)), args, span: sp() }),
            (prop::collection::vec((lower_name(), prop::option::of(type_expr())), 0..3), inner.clone()).prop_map(
                move |(ps, body)| Expr::Lambda {
                    params: ps.into_iter().map(|(n, ty)| LamParam { name: ident(&n), ty }).collect(),
                    body: b(body),
                    span: sp(),
                }
            ),
            (inner.clone(), prop::collection::vec((pat(), inner.clone()), 1..3)).prop_map(move |(s, arms)| Expr::Match {
                scrutinee: b(s),
                arms: arms.into_iter().map(|(pat, body)| Arm { pat, body, span: sp() }).collect(),
                span: sp(),
            }),
            (lower_name(), prop::option::of(type_expr()), inner.clone(), inner.clone()).prop_map(move |(n, ty, v, body)| {
                Expr::Let { name: ident(&n), ty, value: b(v), body: b(body), span: sp() }
            }),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|elems| Expr::Tuple { elems, span: sp() }),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(move |(c, t, e)| Expr::If { cond: b(c), then: b(t), els: b(e), span: sp() }),
            (inner, type_expr()).prop_map(move |(e, ty)| Expr::Annot { expr: b(e), ty, span: sp() }),
        ]
    })
}

fn module_with(body: Expr, ret: TypeExpr) -> ModuleAst {
    let f = FunAst {
        name: ident("f"),
        tparams: vec![ident("A")],
        params: vec![Param { name: ident("x"), ty: TypeExpr::Name { path: vec![ident("A")], args: vec![], span: sp() } }],
        ret,
        context: vec![],
        body,
        span: sp(),
    };
    ModuleAst { name: ident("gen"), imports: vec![ident("other")], decls: vec![Decl::Fun(f)], span: sp() }
}

fn within(outer: &Span, inner: &Span, what: &str) -> Result<(), String> {
    if outer.contains(inner) {
        Ok(())
    } else {
        Err(format!("{what} at {inner} escapes {outer}"))
    }
}

fn ty_spans(t: &TypeExpr) -> Result<(), String> {
    let s = t.span();
    let kids: Vec<&TypeExpr> = match t {
        TypeExpr::Name { args, .. } => args.iter().collect(),
        TypeExpr::Proj { base, .. } => vec![base],
        TypeExpr::Tuple { elems, .. } => elems.iter().collect(),
        TypeExpr::Fn { params, ret, .. } => params.iter().chain(std::iter::once(&**ret)).collect(),
    };
    for k in kids {
        within(s, k.span(), "type")?;
        ty_spans(k)?;
    }
    Ok(())
}

fn pat_spans(p: &Pat) -> Result<(), String> {
    let kids: &[Pat] = match p {
        Pat::Ctor { args, .. } => args,
        Pat::Tuple { elems, .. } => elems,
        _ => &[],
    };
    for k in kids {
        within(p.span(), k.span(), "pattern")?;
        pat_spans(k)?;
    }
    Ok(())
}

/// Every sub-expression, pattern and annotation lies inside its parent.
fn expr_spans(e: &Expr) -> Result<(), String> {
    let s = e.span();
    let mut kids: Vec<&Expr> = Vec::new();
    match e {
        Expr::Var { .. } | Expr::Lit { .. } => {}
        Expr::Call { func, args, .. } => {
            kids.push(func);
            kids.extend(args);
        }
        Expr::Lambda { params, body, .. } => {
            for p in params {
                within(s, &p.name.span, "lambda parameter")?;
                if let Some(t) = &p.ty {
                    within(s, t.span(), "parameter type")?;
                    ty_spans(t)?;
                }
            }
            kids.push(body);
        }
        Expr::Match { scrutinee, arms, .. } => {
            kids.push(scrutinee);
            for a in arms {
                within(s, &a.span, "arm")?;
                within(&a.span, a.pat.span(), "arm pattern")?;
                within(&a.span, a.body.span(), "arm body")?;
                pat_spans(&a.pat)?;
                kids.push(&a.body);
            }
        }
        Expr::Let { name, ty, value, body, .. } => {
            within(s, &name.span, "let name")?;
            if let Some(t) = ty {
                within(s, t.span(), "let type")?;
                ty_spans(t)?;
            }
            kids.push(value);
            kids.push(body);
        }
        Expr::Tuple { elems, .. } => kids.extend(elems),
        Expr::If { cond, then, els, .. } => kids.extend([&**cond, &**then, &**els]),
        Expr::Annot { expr, ty, .. } => {
            within(s, ty.span(), "annotation")?;
            ty_spans(ty)?;
            kids.push(expr);
        }
    }
    for k in kids {
        within(s, k.span(), "expression")?;
        expr_spans(k)?;
    }
    Ok(())
}

fn module_spans(m: &ModuleAst) -> Result<(), String> {
    for d in &m.decls {
        within(&m.span, d.span(), "declaration")?;
        match d {
            Decl::Fun(f) => {
                within(&f.span, f.body.span(), "function body")?;
                expr_spans(&f.body)?;
            }
            Decl::Model(md) => {
                for r in &md.reqs {
                    within(&md.span, &r.span, "requirement")?;
                    within(&r.span, r.body.span(), "requirement body")?;
                    expr_spans(&r.body)?;
                }
            }
            Decl::Concept(_) | Decl::Data(_) => {}
        }
    }
    Ok(())
}

fn fun_body(m: &ModuleAst) -> &Expr {
    match &m.decls[0] {
        Decl::Fun(f) => &f.body,
        _ => unreachable!("generated module holds one function"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Printing then parsing gives back the same tree, up to spans.
    #[test]
    fn parse_inverts_print(body in expr(), ret in type_expr()) {
        let m = module_with(body, ret);
        let text = pretty_print(&m);
        let back = parse_module(&text, "gen.sl").map_err(|d| TestCaseError::fail(format!("{}\n{text}", d[0])))?;
        prop_assert!(back.decls[0].span_eq(&m.decls[0]), "tree changed:\n{text}\nreprinted:\n{}", pretty_print(&back));
        prop_assert_eq!(pretty_print(&back), text);
    }

    #[test]
    fn parsed_spans_nest(body in expr(), ret in type_expr()) {
        let text = pretty_print(&module_with(body, ret));
        let back = parse_module(&text, "gen.sl").map_err(|d| TestCaseError::fail(d[0].to_string()))?;
        module_spans(&back).map_err(TestCaseError::fail)?;
        let e = fun_body(&back);
        prop_assert!(e.span().start.line >= 1 && e.span().start <= e.span().end);
    }

    /// Arbitrary bytes never crash the front end; they parse or are diagnosed.
    #[test]
    fn garbage_is_diagnosed(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        if let Err(ds) = sl_core::surface::parse_module_bytes(&bytes, "junk.sl") {
            prop_assert!(!ds.is_empty());
            prop_assert!(ds.iter().all(|d| d.is_error()));
        }
    }
}

#[test]
fn corpus_spans_nest_and_reprint() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files = Vec::new();
    for e in std::fs::read_dir(&dir).unwrap().flatten() {
        let p = e.path();
        if p.is_dir() {
            files.extend(std::fs::read_dir(&p).unwrap().flatten().map(|e| e.path()).filter(|p| p.extension().is_some_and(|x| x == "sl")));
        } else if p.extension().is_some_and(|x| x == "sl") {
            files.push(p);
        }
    }
    assert!(files.len() > 20);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        let m = parse_module(&text, &f.to_string_lossy()).unwrap_or_else(|d| panic!("{}", d[0]));
        module_spans(&m).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        let again = parse_module(&pretty_print(&m), "reprint.sl").unwrap();
        assert_eq!(m.decls.len(), again.decls.len());
        assert!(m.decls.iter().zip(&again.decls).all(|(a, b)| a.span_eq(b)), "{}", f.display());
    }
}
