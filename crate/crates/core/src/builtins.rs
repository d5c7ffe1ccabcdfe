//! The `std` module: primitive types, the prelude data types and the
//! builtin operations.

use serde::Serialize;

use crate::types::{TyVar, Type, STD};

/// Prelude data types, written in SL itself.
pub const STD_SOURCE: &str = "module std
data Option[A] = None | Some(A)
data List[A] = Nil | Cons(A, List[A])
data Pair[A, B] = Pair(A, B)
";

pub const STD_FILE: &str = "<std>";

/// Primitive type constructors (all nullary except `Fn`, which is variadic).
pub const PRIM_TYPES: &[&str] = &["U64", "U8", "Int", "F64", "Bool", "String", "Unit"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Prim {
    Add,
    Sub,
    Mul,
    Band,
    Bor,
    Shr,
    Shl,
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
    Not,
    Trunc8,
    Extend64,
    Concat,
    Show,
    Print,
}

/// Types a polymorphic builtin may be instantiated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    None,
    Numeric,
    Equality,
    Showable,
}

impl Restriction {
    pub fn admits(self, t: &Type) -> bool {
        let Type::Con(c) = t else { return false };
        if c.name.module != STD {
            return false;
        }
        let n = c.name.name.as_str();
        match self {
            Restriction::None => true,
            Restriction::Numeric => matches!(n, "U64" | "U8" | "Int"),
            Restriction::Equality => matches!(n, "U64" | "U8" | "Int" | "Bool" | "String" | "Unit"),
            Restriction::Showable => matches!(n, "U64" | "U8" | "Int" | "F64" | "Bool" | "String"),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Restriction::None => "any type",
            Restriction::Numeric => "U64, U8 or Int",
            Restriction::Equality => "a primitive type",
            Restriction::Showable => "a number, Bool or String",
        }
    }
}

impl Prim {
    pub const ALL: &'static [Prim] = &[
        Prim::Add,
        Prim::Sub,
        Prim::Mul,
        Prim::Band,
        Prim::Bor,
        Prim::Shr,
        Prim::Shl,
        Prim::Eq,
        Prim::Lt,
        Prim::Le,
        Prim::Gt,
        Prim::Ge,
        Prim::Not,
        Prim::Trunc8,
        Prim::Extend64,
        Prim::Concat,
        Prim::Show,
        Prim::Print,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prim::Add => "add",
            Prim::Sub => "sub",
            Prim::Mul => "mul",
            Prim::Band => "band",
            Prim::Bor => "bor",
            Prim::Shr => "shr",
            Prim::Shl => "shl",
            Prim::Eq => "eq",
            Prim::Lt => "lt",
            Prim::Le => "le",
            Prim::Gt => "gt",
            Prim::Ge => "ge",
            Prim::Not => "not",
            Prim::Trunc8 => "trunc8",
            Prim::Extend64 => "extend64",
            Prim::Concat => "concat",
            Prim::Show => "show",
            Prim::Print => "print",
        }
    }

    pub fn by_name(name: &str) -> Option<Prim> {
        Prim::ALL.iter().copied().find(|p| p.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Prim::Not | Prim::Trunc8 | Prim::Extend64 | Prim::Show | Prim::Print => 1,
            _ => 2,
        }
    }

    pub fn restriction(self) -> Restriction {
        match self {
            Prim::Add | Prim::Sub | Prim::Mul | Prim::Band | Prim::Bor | Prim::Shr | Prim::Shl => Restriction::Numeric,
            Prim::Lt | Prim::Le | Prim::Gt | Prim::Ge => Restriction::Numeric,
            Prim::Eq => Restriction::Equality,
            Prim::Show => Restriction::Showable,
            _ => Restriction::None,
        }
    }

    /// Type parameters and the function type over them.
    pub fn signature(self) -> (Vec<TyVar>, Type) {
        let bool_t = Type::std("Bool");
        let string = Type::std("String");
        let poly = |ret: Option<Type>, n: usize| {
            let v = TyVar::fresh("N");
            let t = Type::Var(v.clone());
            let ret = ret.unwrap_or_else(|| t.clone());
            (vec![v], Type::func(vec![t; n], ret))
        };
        match self {
            Prim::Add | Prim::Sub | Prim::Mul | Prim::Band | Prim::Bor | Prim::Shr | Prim::Shl => poly(None, 2),
            Prim::Eq | Prim::Lt | Prim::Le | Prim::Gt | Prim::Ge => poly(Some(bool_t), 2),
            Prim::Show => poly(Some(string), 1),
            Prim::Not => (vec![], Type::func(vec![bool_t.clone()], bool_t)),
            Prim::Trunc8 => (vec![], Type::func(vec![Type::std("U64")], Type::std("U8"))),
            Prim::Extend64 => (vec![], Type::func(vec![Type::std("U8")], Type::std("U64"))),
            Prim::Concat => (vec![], Type::func(vec![string.clone(), string.clone()], string)),
            Prim::Print => (vec![], Type::func(vec![string], Type::unit())),
        }
    }
}
