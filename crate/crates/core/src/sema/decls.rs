//! Checked declarations: the tables sema produces and every later phase
//! consumes.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::builtins::Prim;
use crate::diag::Span;
use crate::resolver::{Resolution, TraceNode};
use crate::types::{Constraint, QualName, TyVar, Type};

/// Identity of a model: its defining module and declaration index there.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelId {
    pub module: String,
    pub index: usize,
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.module, self.index)
    }
}

impl Serialize for ModelId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone)]
pub struct ReqSig {
    pub name: String,
    pub params: Vec<String>,
    /// A function type over the concept params and their projections.
    pub ty: Type,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct ConceptDecl {
    pub id: QualName,
    pub params: Vec<TyVar>,
    pub supers: Vec<Constraint>,
    pub assoc: Vec<String>,
    pub reqs: Vec<ReqSig>,
    pub span: Span,
}

impl ConceptDecl {
    pub fn origin(&self) -> &str {
        &self.id.module
    }

    pub fn req(&self, name: &str) -> Option<(usize, &ReqSig)> {
        self.reqs.iter().enumerate().find(|(_, r)| r.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct GoalSite {
    pub constraint: Constraint,
    pub span: Span,
    /// Type params of the enclosing declaration.
    pub rigid: Vec<TyVar>,
    pub resolution: Option<Resolution>,
    pub trace: Option<TraceNode>,
}

#[derive(Debug, Clone)]
pub struct Body {
    pub expr: TExpr,
    pub goals: Vec<GoalSite>,
}

#[derive(Debug, Clone)]
pub struct ReqBody {
    pub name: String,
    pub params: Vec<(String, Type)>,
    pub ty: Type,
    pub body: Body,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct ModelDecl {
    pub id: ModelId,
    pub name: Option<String>,
    pub concept: QualName,
    /// Free variables of the head, in order of first occurrence.
    pub vars: Vec<TyVar>,
    pub head: Vec<Type>,
    pub context: Vec<Constraint>,
    /// Bindings in the concept's member order.
    pub assoc: Vec<(String, Type)>,
    pub reqs: Vec<ReqBody>,
    /// Resolutions of the concept's superclass constraints at the head.
    pub super_res: Vec<Resolution>,
    pub span: Span,
    pub head_span: Span,
}

impl ModelDecl {
    pub fn origin(&self) -> &str {
        &self.id.module
    }

    pub fn path(&self) -> Option<QualName> {
        self.name.as_ref().map(|n| QualName::new(self.id.module.clone(), n.clone()))
    }

    /// Human-readable head, e.g. `model bm: P[N]`.
    pub fn label(&self) -> String {
        let head = crate::types::join(&self.head);
        let ctx = if self.context.is_empty() {
            String::new()
        } else {
            format!(" where {}", crate::types::join(&self.context))
        };
        match &self.name {
            Some(n) => format!("model {}.{n}: {}[{head}]{ctx}", self.id.module, self.concept.name),
            None => format!("model {}[{head}]{ctx} in {}", self.concept.name, self.id.module),
        }
    }

    pub fn is_blanket(&self) -> bool {
        self.head.first().is_some_and(Type::is_var)
    }
}

#[derive(Debug, Clone)]
pub struct FunDecl {
    pub id: QualName,
    pub tparams: Vec<TyVar>,
    pub context: Vec<Constraint>,
    pub params: Vec<(String, Type)>,
    pub ret: Type,
    pub body: Body,
    pub span: Span,
}

impl FunDecl {
    pub fn ty(&self) -> Type {
        Type::func(self.params.iter().map(|(_, t)| t.clone()).collect(), self.ret.clone())
    }
}

#[derive(Debug, Clone)]
pub struct CtorDecl {
    pub name: String,
    pub fields: Vec<Type>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct DataDecl {
    pub id: QualName,
    pub params: Vec<TyVar>,
    pub ctors: Vec<CtorDecl>,
    pub span: Span,
}

impl DataDecl {
    pub fn con(&self) -> crate::types::TyCon {
        crate::types::TyCon { name: self.id.clone(), arity: self.params.len() }
    }

    pub fn ty(&self) -> Type {
        Type::app(self.con(), self.params.iter().cloned().map(Type::Var).collect())
    }
}

#[derive(Debug, Clone, Default)]
pub struct CheckedModule {
    pub name: String,
    pub file: String,
    pub imports: Vec<String>,
    pub concepts: Vec<Arc<ConceptDecl>>,
    pub models: Vec<Arc<ModelDecl>>,
    pub funs: Vec<Arc<FunDecl>>,
    pub datas: Vec<Arc<DataDecl>>,
}

impl CheckedModule {
    pub fn fun(&self, name: &str) -> Option<&Arc<FunDecl>> {
        self.funs.iter().find(|f| f.id.name == name)
    }

    pub fn data(&self, name: &str) -> Option<&Arc<DataDecl>> {
        self.datas.iter().find(|d| d.id.name == name)
    }

    pub fn concept(&self, name: &str) -> Option<&Arc<ConceptDecl>> {
        self.concepts.iter().find(|c| c.id.name == name)
    }

    pub fn ctor(&self, name: &str) -> Option<(&Arc<DataDecl>, usize)> {
        self.datas
            .iter()
            .find_map(|d| d.ctors.iter().position(|c| c.name == name).map(|i| (d, i)))
    }

    /// Every goal site in the module, with the name of its declaration.
    pub fn goal_sites(&self) -> Vec<(String, &GoalSite)> {
        let mut out = Vec::new();
        for f in &self.funs {
            out.extend(f.body.goals.iter().map(|g| (f.id.to_string(), g)));
        }
        for m in &self.models {
            for r in &m.reqs {
                out.extend(r.body.goals.iter().map(|g| (format!("{}.{}", m.id, r.name), g)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LitVal {
    U64(u64),
    U8(u8),
    Int(i64),
    F64(String),
    Str(String),
    Bool(bool),
    Unit,
}

impl LitVal {
    pub fn ty(&self) -> Type {
        Type::std(match self {
            LitVal::U64(_) => "U64",
            LitVal::U8(_) => "U8",
            LitVal::Int(_) => "Int",
            LitVal::F64(_) => "F64",
            LitVal::Str(_) => "String",
            LitVal::Bool(_) => "Bool",
            LitVal::Unit => "Unit",
        })
    }
}

#[derive(Debug, Clone)]
pub enum TPat {
    Wild,
    Bind(String, Type),
    Ctor { data: QualName, ctor: String, tag: usize, args: Vec<TPat> },
    Lit(LitVal),
}

/// A type-annotated, name-resolved body expression.
#[derive(Debug, Clone)]
pub enum TExpr {
    Local { name: String, ty: Type },
    /// A top-level function at an instantiation; `dicts` index the goal
    /// table of the enclosing body, one per Conf constraint of the callee.
    Global { fun: QualName, targs: Vec<Type>, dicts: Vec<usize>, ty: Type },
    /// A concept requirement, selected through the goal `goal`.
    Req { concept: QualName, req: String, goal: usize, ty: Type },
    Prim { op: Prim, targs: Vec<Type>, ty: Type },
    Ctor { data: QualName, ctor: String, tag: usize, targs: Vec<Type>, ty: Type },
    Lit { lit: LitVal },
    Call { func: Box<TExpr>, args: Vec<TExpr>, ty: Type },
    Lambda { params: Vec<(String, Type)>, body: Box<TExpr>, ty: Type },
    Match { scrut: Box<TExpr>, arms: Vec<(TPat, TExpr)>, ty: Type },
    Let { name: String, value: Box<TExpr>, body: Box<TExpr> },
    If { cond: Box<TExpr>, then: Box<TExpr>, els: Box<TExpr> },
}

impl TExpr {
    pub fn ty(&self) -> Type {
        match self {
            TExpr::Local { ty, .. }
            | TExpr::Global { ty, .. }
            | TExpr::Req { ty, .. }
            | TExpr::Prim { ty, .. }
            | TExpr::Ctor { ty, .. }
            | TExpr::Call { ty, .. }
            | TExpr::Lambda { ty, .. }
            | TExpr::Match { ty, .. } => ty.clone(),
            TExpr::Lit { lit } => lit.ty(),
            TExpr::Let { body, .. } => body.ty(),
            TExpr::If { then, .. } => then.ty(),
        }
    }
}
