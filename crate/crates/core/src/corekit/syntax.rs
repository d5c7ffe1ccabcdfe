//! The explicitly typed core: System F with saturated data, records for
//! dictionaries, and top-level mutual recursion.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::builtins::Prim;
use crate::sema::{LitVal, ModelId};
use crate::types::{QualName, TyVar};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CTyVar {
    pub name: String,
    pub id: u32,
}

impl From<&TyVar> for CTyVar {
    fn from(v: &TyVar) -> Self {
        CTyVar { name: v.name.clone(), id: v.id }
    }
}

impl CTyVar {
    pub fn fresh(name: impl Into<String>) -> Self {
        (&TyVar::fresh(name)).into()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CType {
    Var { var: CTyVar },
    Con { name: QualName, args: Vec<CType> },
    Fn { params: Vec<CType>, ret: Box<CType> },
    /// The dictionary record of a concept at the given arguments.
    Dict { concept: QualName, args: Vec<CType> },
    Forall { vars: Vec<CTyVar>, body: Box<CType> },
    /// A projection no model determines; equal only to itself.
    Opaque { name: String },
}

impl CType {
    pub fn con(name: QualName, args: Vec<CType>) -> Self {
        CType::Con { name, args }
    }

    pub fn std(name: &str) -> Self {
        CType::Con { name: QualName::new(crate::types::STD, name), args: vec![] }
    }

    pub fn func(params: Vec<CType>, ret: CType) -> Self {
        CType::Fn { params, ret: Box::new(ret) }
    }

    pub fn forall(vars: Vec<CTyVar>, body: CType) -> Self {
        if vars.is_empty() {
            body
        } else {
            CType::Forall { vars, body: Box::new(body) }
        }
    }

    pub fn subst(&self, s: &BTreeMap<u32, CType>) -> CType {
        match self {
            CType::Var { var } => s.get(&var.id).cloned().unwrap_or_else(|| self.clone()),
            CType::Con { name, args } => CType::Con { name: name.clone(), args: args.iter().map(|a| a.subst(s)).collect() },
            CType::Fn { params, ret } => CType::func(params.iter().map(|p| p.subst(s)).collect(), ret.subst(s)),
            CType::Dict { concept, args } => {
                CType::Dict { concept: concept.clone(), args: args.iter().map(|a| a.subst(s)).collect() }
            }
            CType::Forall { vars, body } => {
                let mut inner = s.clone();
                for v in vars {
                    inner.remove(&v.id);
                }
                CType::Forall { vars: vars.clone(), body: Box::new(body.subst(&inner)) }
            }
            CType::Opaque { .. } => self.clone(),
        }
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &CType) -> bool {
        match (self, other) {
            (CType::Forall { vars: v1, body: b1 }, CType::Forall { vars: v2, body: b2 }) => {
                if v1.len() != v2.len() {
                    return false;
                }
                let fresh: Vec<CType> = v1.iter().map(|v| CType::Var { var: CTyVar::fresh(v.name.clone()) }).collect();
                let s1 = v1.iter().map(|v| v.id).zip(fresh.iter().cloned()).collect();
                let s2 = v2.iter().map(|v| v.id).zip(fresh.iter().cloned()).collect();
                b1.subst(&s1).alpha_eq(&b2.subst(&s2))
            }
            (CType::Con { name: n1, args: a1 }, CType::Con { name: n2, args: a2 })
            | (CType::Dict { concept: n1, args: a1 }, CType::Dict { concept: n2, args: a2 }) => {
                n1 == n2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| x.alpha_eq(y))
            }
            (CType::Fn { params: p1, ret: r1 }, CType::Fn { params: p2, ret: r2 }) => {
                p1.len() == p2.len() && p1.iter().zip(p2).all(|(x, y)| x.alpha_eq(y)) && r1.alpha_eq(r2)
            }
            _ => self == other,
        }
    }
}

impl fmt::Display for CType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[CType]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            CType::Var { var } => write!(f, "{}", var.name),
            CType::Con { name, args } if args.is_empty() => write!(f, "{}", name.name),
            CType::Con { name, args } => write!(f, "{}[{}]", name.name, list(args)),
            CType::Fn { params, ret } => write!(f, "({}) -> {ret}", list(params)),
            CType::Dict { concept, args } => write!(f, "Dict {}[{}]", concept.name, list(args)),
            CType::Forall { vars, body } => {
                let vs: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
                write!(f, "forall {}. {body}", vs.join(" "))
            }
            CType::Opaque { name } => write!(f, "{name}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CPat {
    Wild,
    Bind { name: String, ty: CType },
    Ctor { data: QualName, ctor: String, tag: usize, args: Vec<CPat> },
    Lit { lit: CLit },
}

/// Literal values as they appear in core programs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "value")]
pub enum CLit {
    U64(u64),
    U8(u8),
    Int(i64),
    F64(String),
    Str(String),
    Bool(bool),
    Unit,
}

impl From<&LitVal> for CLit {
    fn from(l: &LitVal) -> Self {
        match l {
            LitVal::U64(v) => CLit::U64(*v),
            LitVal::U8(v) => CLit::U8(*v),
            LitVal::Int(v) => CLit::Int(*v),
            LitVal::F64(s) => CLit::F64(s.clone()),
            LitVal::Str(s) => CLit::Str(s.clone()),
            LitVal::Bool(b) => CLit::Bool(*b),
            LitVal::Unit => CLit::Unit,
        }
    }
}

impl CLit {
    pub fn ty(&self) -> CType {
        CType::std(match self {
            CLit::U64(_) => "U64",
            CLit::U8(_) => "U8",
            CLit::Int(_) => "Int",
            CLit::F64(_) => "F64",
            CLit::Str(_) => "String",
            CLit::Bool(_) => "Bool",
            CLit::Unit => "Unit",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CExpr {
    Var { name: String },
    Global { name: QualName },
    /// The dictionary (or dictionary function) of a model.
    Model { id: ModelId },
    Lit { lit: CLit },
    Lam { params: Vec<(String, CType)>, body: Box<CExpr> },
    TyLam { vars: Vec<CTyVar>, body: Box<CExpr> },
    App { func: Box<CExpr>, args: Vec<CExpr> },
    TyApp { func: Box<CExpr>, args: Vec<CType> },
    Record { concept: QualName, args: Vec<CType>, fields: Vec<(String, CExpr)> },
    Proj { record: Box<CExpr>, field: String },
    Ctor { data: QualName, ctor: String, tag: usize, targs: Vec<CType> },
    Match { scrut: Box<CExpr>, arms: Vec<(CPat, CExpr)> },
    Let { name: String, ty: CType, value: Box<CExpr>, body: Box<CExpr> },
    If { cond: Box<CExpr>, then: Box<CExpr>, els: Box<CExpr> },
    Prim { op: Prim, targs: Vec<CType> },
}

impl CExpr {
    pub fn app(func: CExpr, args: Vec<CExpr>) -> CExpr {
        CExpr::App { func: Box::new(func), args }
    }

    /// Type application, omitted when there are no arguments.
    pub fn ty_app(func: CExpr, args: Vec<CType>) -> CExpr {
        if args.is_empty() {
            func
        } else {
            CExpr::TyApp { func: Box::new(func), args }
        }
    }

    pub fn proj(record: CExpr, field: impl Into<String>) -> CExpr {
        CExpr::Proj { record: Box::new(record), field: field.into() }
    }

    /// Walks every node, children before parents.
    pub fn visit(&self, f: &mut impl FnMut(&CExpr)) {
        match self {
            CExpr::Lam { body, .. } | CExpr::TyLam { body, .. } => body.visit(f),
            CExpr::App { func, args } => {
                func.visit(f);
                args.iter().for_each(|a| a.visit(f));
            }
            CExpr::TyApp { func, .. } => func.visit(f),
            CExpr::Record { fields, .. } => fields.iter().for_each(|(_, e)| e.visit(f)),
            CExpr::Proj { record, .. } => record.visit(f),
            CExpr::Match { scrut, arms } => {
                scrut.visit(f);
                arms.iter().for_each(|(_, e)| e.visit(f));
            }
            CExpr::Let { value, body, .. } => {
                value.visit(f);
                body.visit(f);
            }
            CExpr::If { cond, then, els } => {
                cond.visit(f);
                then.visit(f);
                els.visit(f);
            }
            _ => {}
        }
        f(self);
    }
}

pub fn super_field(k: usize) -> String {
    format!("$super{k}")
}

#[derive(Debug, Clone, Serialize)]
pub struct DictDecl {
    pub concept: QualName,
    /// Concept parameters, then one slot per associated type reachable
    /// from the concept (its own, then its superclasses').
    pub params: Vec<CTyVar>,
    /// Superclass dictionaries first, then requirements.
    pub fields: Vec<(String, CType)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreData {
    pub id: QualName,
    pub params: Vec<CTyVar>,
    pub ctors: Vec<(String, Vec<CType>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreFun {
    pub name: QualName,
    pub ty: CType,
    pub body: CExpr,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreModel {
    pub id: ModelId,
    pub label: String,
    pub ty: CType,
    pub body: CExpr,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CoreProgram {
    pub datas: Vec<CoreData>,
    pub dicts: Vec<DictDecl>,
    pub models: Vec<CoreModel>,
    pub funs: Vec<CoreFun>,
    pub entry: Option<QualName>,
}

impl CoreProgram {
    pub fn fun(&self, name: &QualName) -> Option<&CoreFun> {
        self.funs.iter().find(|f| &f.name == name)
    }

    pub fn model(&self, id: &ModelId) -> Option<&CoreModel> {
        self.models.iter().find(|m| &m.id == id)
    }

    pub fn dict(&self, concept: &QualName) -> Option<&DictDecl> {
        self.dicts.iter().find(|d| &d.concept == concept)
    }

    pub fn data(&self, id: &QualName) -> Option<&CoreData> {
        self.datas.iter().find(|d| &d.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("core programs serialize")
    }
}
