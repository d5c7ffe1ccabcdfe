//! Surface syntax tree. Every node carries the span it was parsed from.
//!
//! Equality on AST nodes ignores spans (see [`SpanEq`]), which is what the
//! pretty-printer round-trip property compares against.

use crate::diag::Span;

#[derive(Debug, Clone)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct ModuleAst {
    pub name: Ident,
    pub imports: Vec<Ident>,
    pub decls: Vec<Decl>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum Decl {
    Concept(ConceptAst),
    Model(ModelAst),
    Fun(FunAst),
    Data(DataAst),
}

impl Decl {
    pub fn span(&self) -> &Span {
        match self {
            Decl::Concept(c) => &c.span,
            Decl::Model(m) => &m.span,
            Decl::Fun(f) => &f.span,
            Decl::Data(d) => &d.span,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConceptAst {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub supers: Vec<ConstraintAst>,
    pub assoc: Vec<Ident>,
    pub reqs: Vec<ReqSig>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct ReqSig {
    pub name: Ident,
    pub params: Vec<Param>,
    pub ret: TypeExpr,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct ModelAst {
    pub name: Option<Ident>,
    pub concept: Vec<Ident>,
    pub head: Vec<TypeExpr>,
    pub context: Vec<ConstraintAst>,
    pub assoc: Vec<AssocBinding>,
    pub reqs: Vec<ReqImpl>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct AssocBinding {
    pub name: Ident,
    pub ty: TypeExpr,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct ReqImpl {
    pub name: Ident,
    pub params: Vec<LamParam>,
    pub ret: Option<TypeExpr>,
    pub body: Expr,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct FunAst {
    pub name: Ident,
    pub tparams: Vec<Ident>,
    pub params: Vec<Param>,
    pub ret: TypeExpr,
    pub context: Vec<ConstraintAst>,
    pub body: Expr,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct DataAst {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub ctors: Vec<CtorAst>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct CtorAst {
    pub name: Ident,
    pub fields: Vec<TypeExpr>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct Param {
    pub name: Ident,
    pub ty: TypeExpr,
}

#[derive(Debug, Clone)]
pub struct LamParam {
    pub name: Ident,
    pub ty: Option<TypeExpr>,
}

#[derive(Debug, Clone)]
pub enum ConstraintAst {
    Conf { concept: Vec<Ident>, args: Vec<TypeExpr>, span: Span },
    Eq { lhs: TypeExpr, rhs: TypeExpr, span: Span },
}

impl ConstraintAst {
    pub fn span(&self) -> &Span {
        match self {
            ConstraintAst::Conf { span, .. } | ConstraintAst::Eq { span, .. } => span,
        }
    }
}

#[derive(Debug, Clone)]
pub enum TypeExpr {
    /// A possibly dotted name with optional arguments: `U64`, `Option[A]`,
    /// `A.Element`, `B.m.X`. The meaning of the dots is decided in sema.
    Name { path: Vec<Ident>, args: Vec<TypeExpr>, span: Span },
    /// Projection of a member from an applied type: `Option[A].Element`.
    Proj { base: Box<TypeExpr>, member: Ident, span: Span },
    /// `()` for zero elements, `(A, B)` for pairs.
    Tuple { elems: Vec<TypeExpr>, span: Span },
    Fn { params: Vec<TypeExpr>, ret: Box<TypeExpr>, span: Span },
}

impl TypeExpr {
    pub fn span(&self) -> &Span {
        match self {
            TypeExpr::Name { span, .. }
            | TypeExpr::Proj { span, .. }
            | TypeExpr::Tuple { span, .. }
            | TypeExpr::Fn { span, .. } => span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Width {
    U8,
    U64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lit {
    Int { value: u64, width: Option<Width> },
    Float(String),
    Str(String),
    Bool(bool),
    Unit,
}

#[derive(Debug, Clone)]
pub enum Expr {
    Var { path: Vec<Ident>, span: Span },
    Lit { lit: Lit, span: Span },
    Call { func: Box<Expr>, args: Vec<Expr>, span: Span },
    Lambda { params: Vec<LamParam>, body: Box<Expr>, span: Span },
    Match { scrutinee: Box<Expr>, arms: Vec<Arm>, span: Span },
    Let { name: Ident, ty: Option<TypeExpr>, value: Box<Expr>, body: Box<Expr>, span: Span },
    Tuple { elems: Vec<Expr>, span: Span },
    If { cond: Box<Expr>, then: Box<Expr>, els: Box<Expr>, span: Span },
    Annot { expr: Box<Expr>, ty: TypeExpr, span: Span },
}

impl Expr {
    pub fn span(&self) -> &Span {
        match self {
            Expr::Var { span, .. }
            | Expr::Lit { span, .. }
            | Expr::Call { span, .. }
            | Expr::Lambda { span, .. }
            | Expr::Match { span, .. }
            | Expr::Let { span, .. }
            | Expr::Tuple { span, .. }
            | Expr::If { span, .. }
            | Expr::Annot { span, .. } => span,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Arm {
    pub pat: Pat,
    pub body: Expr,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum Pat {
    Wild { span: Span },
    /// A bare identifier: a variable binder or a nullary constructor,
    /// decided during name resolution.
    Ident { name: Ident },
    Ctor { name: Ident, args: Vec<Pat>, span: Span },
    Tuple { elems: Vec<Pat>, span: Span },
    Lit { lit: Lit, span: Span },
}

impl Pat {
    pub fn span(&self) -> &Span {
        match self {
            Pat::Wild { span } | Pat::Ctor { span, .. } | Pat::Tuple { span, .. } | Pat::Lit { span, .. } => span,
            Pat::Ident { name } => &name.span,
        }
    }
}

/// Structural equality that ignores spans.
pub trait SpanEq {
    fn span_eq(&self, other: &Self) -> bool;
}

impl SpanEq for Ident {
    fn span_eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl<T: SpanEq> SpanEq for Vec<T> {
    fn span_eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().zip(other).all(|(a, b)| a.span_eq(b))
    }
}

impl<T: SpanEq> SpanEq for Option<T> {
    fn span_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Some(a), Some(b)) => a.span_eq(b),
            (None, None) => true,
            _ => false,
        }
    }
}

impl<T: SpanEq> SpanEq for Box<T> {
    fn span_eq(&self, other: &Self) -> bool {
        (**self).span_eq(other)
    }
}

impl SpanEq for ModuleAst {
    fn span_eq(&self, o: &Self) -> bool {
        self.name.span_eq(&o.name) && self.imports.span_eq(&o.imports) && self.decls.span_eq(&o.decls)
    }
}

impl SpanEq for Decl {
    fn span_eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Decl::Concept(a), Decl::Concept(b)) => {
                a.name.span_eq(&b.name)
                    && a.params.span_eq(&b.params)
                    && a.supers.span_eq(&b.supers)
                    && a.assoc.span_eq(&b.assoc)
                    && a.reqs.span_eq(&b.reqs)
            }
            (Decl::Model(a), Decl::Model(b)) => {
                a.name.span_eq(&b.name)
                    && a.concept.span_eq(&b.concept)
                    && a.head.span_eq(&b.head)
                    && a.context.span_eq(&b.context)
                    && a.assoc.span_eq(&b.assoc)
                    && a.reqs.span_eq(&b.reqs)
            }
            (Decl::Fun(a), Decl::Fun(b)) => {
                a.name.span_eq(&b.name)
                    && a.tparams.span_eq(&b.tparams)
                    && a.params.span_eq(&b.params)
                    && a.ret.span_eq(&b.ret)
                    && a.context.span_eq(&b.context)
                    && a.body.span_eq(&b.body)
            }
            (Decl::Data(a), Decl::Data(b)) => {
                a.name.span_eq(&b.name) && a.params.span_eq(&b.params) && a.ctors.span_eq(&b.ctors)
            }
            _ => false,
        }
    }
}

impl SpanEq for ReqSig {
    fn span_eq(&self, o: &Self) -> bool {
        self.name.span_eq(&o.name) && self.params.span_eq(&o.params) && self.ret.span_eq(&o.ret)
    }
}

impl SpanEq for AssocBinding {
    fn span_eq(&self, o: &Self) -> bool {
        self.name.span_eq(&o.name) && self.ty.span_eq(&o.ty)
    }
}

impl SpanEq for ReqImpl {
    fn span_eq(&self, o: &Self) -> bool {
        self.name.span_eq(&o.name)
            && self.params.span_eq(&o.params)
            && self.ret.span_eq(&o.ret)
            && self.body.span_eq(&o.body)
    }
}

impl SpanEq for CtorAst {
    fn span_eq(&self, o: &Self) -> bool {
        self.name.span_eq(&o.name) && self.fields.span_eq(&o.fields)
    }
}

impl SpanEq for Param {
    fn span_eq(&self, o: &Self) -> bool {
        self.name.span_eq(&o.name) && self.ty.span_eq(&o.ty)
    }
}

impl SpanEq for LamParam {
    fn span_eq(&self, o: &Self) -> bool {
        self.name.span_eq(&o.name) && self.ty.span_eq(&o.ty)
    }
}

impl SpanEq for ConstraintAst {
    fn span_eq(&self, o: &Self) -> bool {
        match (self, o) {
            (ConstraintAst::Conf { concept: c1, args: a1, .. }, ConstraintAst::Conf { concept: c2, args: a2, .. }) => {
                c1.span_eq(c2) && a1.span_eq(a2)
            }
            (ConstraintAst::Eq { lhs: l1, rhs: r1, .. }, ConstraintAst::Eq { lhs: l2, rhs: r2, .. }) => {
                l1.span_eq(l2) && r1.span_eq(r2)
            }
            _ => false,
        }
    }
}

impl SpanEq for TypeExpr {
    fn span_eq(&self, o: &Self) -> bool {
        match (self, o) {
            (TypeExpr::Name { path: p1, args: a1, .. }, TypeExpr::Name { path: p2, args: a2, .. }) => {
                p1.span_eq(p2) && a1.span_eq(a2)
            }
            (TypeExpr::Proj { base: b1, member: m1, .. }, TypeExpr::Proj { base: b2, member: m2, .. }) => {
                b1.span_eq(b2) && m1.span_eq(m2)
            }
            (TypeExpr::Tuple { elems: e1, .. }, TypeExpr::Tuple { elems: e2, .. }) => e1.span_eq(e2),
            (TypeExpr::Fn { params: p1, ret: r1, .. }, TypeExpr::Fn { params: p2, ret: r2, .. }) => {
                p1.span_eq(p2) && r1.span_eq(r2)
            }
            _ => false,
        }
    }
}

impl SpanEq for Expr {
    fn span_eq(&self, o: &Self) -> bool {
        use Expr::*;
        match (self, o) {
            (Var { path: a, .. }, Var { path: b, .. }) => a.span_eq(b),
            (Lit { lit: a, .. }, Lit { lit: b, .. }) => a == b,
            (Call { func: f1, args: a1, .. }, Call { func: f2, args: a2, .. }) => f1.span_eq(f2) && a1.span_eq(a2),
            (Lambda { params: p1, body: b1, .. }, Lambda { params: p2, body: b2, .. }) => {
                p1.span_eq(p2) && b1.span_eq(b2)
            }
            (Match { scrutinee: s1, arms: a1, .. }, Match { scrutinee: s2, arms: a2, .. }) => {
                s1.span_eq(s2) && a1.span_eq(a2)
            }
            (
                Let { name: n1, ty: t1, value: v1, body: b1, .. },
                Let { name: n2, ty: t2, value: v2, body: b2, .. },
            ) => n1.span_eq(n2) && t1.span_eq(t2) && v1.span_eq(v2) && b1.span_eq(b2),
            (Tuple { elems: a, .. }, Tuple { elems: b, .. }) => a.span_eq(b),
            (If { cond: c1, then: t1, els: e1, .. }, If { cond: c2, then: t2, els: e2, .. }) => {
                c1.span_eq(c2) && t1.span_eq(t2) && e1.span_eq(e2)
            }
            (Annot { expr: e1, ty: t1, .. }, Annot { expr: e2, ty: t2, .. }) => e1.span_eq(e2) && t1.span_eq(t2),
            _ => false,
        }
    }
}

impl SpanEq for Arm {
    fn span_eq(&self, o: &Self) -> bool {
        self.pat.span_eq(&o.pat) && self.body.span_eq(&o.body)
    }
}

impl SpanEq for Pat {
    fn span_eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Pat::Wild { .. }, Pat::Wild { .. }) => true,
            (Pat::Ident { name: a }, Pat::Ident { name: b }) => a.span_eq(b),
            (Pat::Ctor { name: n1, args: a1, .. }, Pat::Ctor { name: n2, args: a2, .. }) => {
                n1.span_eq(n2) && a1.span_eq(a2)
            }
            (Pat::Tuple { elems: a, .. }, Pat::Tuple { elems: b, .. }) => a.span_eq(b),
            (Pat::Lit { lit: a, .. }, Pat::Lit { lit: b, .. }) => a == b,
            _ => false,
        }
    }
}
