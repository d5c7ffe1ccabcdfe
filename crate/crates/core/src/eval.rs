//! Call-by-value evaluation of core programs. Types are erased: type
//! abstraction and application are no-ops at run time.

use std::fmt;
use std::rc::Rc;

use crate::builtins::Prim;
use crate::corekit::{CExpr, CLit, CPat, CoreProgram};
use crate::diag::Code;
use crate::types::QualName;

pub const DEFAULT_FUEL: u64 = 10_000_000;
/// Nesting limit for evaluation, well below what the evaluation thread's
/// stack can hold.
pub const MAX_DEPTH: usize = 20_000;

#[derive(Clone)]
pub enum Value<'p> {
    U64(u64),
    U8(u8),
    Int(i64),
    /// Carried as its literal text; never computed with.
    F64(Rc<str>),
    Bool(bool),
    Str(Rc<str>),
    Unit,
    Con { ctor: Rc<str>, tag: usize, fields: Rc<Vec<Value<'p>>> },
    Closure { params: Rc<Vec<String>>, body: &'p CExpr, env: Env<'p> },
    Record(Rc<Vec<(String, Value<'p>)>>),
    /// A builtin, or a constructor, waiting for all its arguments.
    Builtin(Prim),
    Ctor { ctor: Rc<str>, tag: usize },
}

impl fmt::Display for Value<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::U64(n) => write!(f, "{n}"),
            Value::U8(n) => write!(f, "{n}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::F64(s) => write!(f, "{s}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Unit => write!(f, "()"),
            Value::Con { ctor, fields, .. } if fields.is_empty() => write!(f, "{ctor}"),
            Value::Con { ctor, fields, .. } => {
                let fs: Vec<String> = fields.iter().map(|v| v.to_string()).collect();
                write!(f, "{ctor}({})", fs.join(", "))
            }
            Value::Closure { .. } | Value::Builtin(_) | Value::Ctor { .. } => write!(f, "<function>"),
            Value::Record(_) => write!(f, "<dictionary>"),
        }
    }
}

impl fmt::Debug for Value<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Local bindings as a shared linked list.
#[derive(Clone, Default)]
pub struct Env<'p>(Option<Rc<Frame<'p>>>);

struct Frame<'p> {
    name: String,
    value: Value<'p>,
    next: Env<'p>,
}

impl<'p> Env<'p> {
    pub fn bind(&self, name: impl Into<String>, value: Value<'p>) -> Env<'p> {
        Env(Some(Rc::new(Frame { name: name.into(), value, next: self.clone() })))
    }

    fn get(&self, name: &str) -> Option<&Value<'p>> {
        let mut cur = &self.0;
        while let Some(f) = cur {
            if f.name == name {
                return Some(&f.value);
            }
            cur = &f.next.0;
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuntimeError {
    pub code: Code,
    pub message: String,
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for RuntimeError {}

fn rt(code: Code, message: impl Into<String>) -> RuntimeError {
    RuntimeError { code, message: message.into() }
}

/// Type confusion the core checker should have ruled out.
fn stuck(what: &str) -> RuntimeError {
    rt(Code::CoreIllTyped, format!("evaluation stuck: {what}"))
}

pub struct Machine<'p> {
    prog: &'p CoreProgram,
    fuel: u64,
    depth: usize,
    pub transcript: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub value: String,
    pub transcript: Vec<String>,
    pub steps: u64,
}

/// Runs the entry point of `prog` with the given step budget.
pub fn eval(prog: &CoreProgram, fuel: u64) -> Result<RunResult, (RuntimeError, Vec<String>)> {
    let Some(entry) = prog.entry.clone() else {
        return Err((rt(Code::NoEntry, "the program has no entry point `main() -> Unit`"), vec![]));
    };
    let mut m = Machine::new(prog, fuel);
    let r = m.call_global(&entry, vec![]);
    let steps = fuel - m.fuel;
    match r {
        Ok(v) => Ok(RunResult { value: v.to_string(), transcript: m.transcript, steps }),
        Err(e) => Err((e, m.transcript)),
    }
}

impl<'p> Machine<'p> {
    pub fn new(prog: &'p CoreProgram, fuel: u64) -> Self {
        Machine { prog, fuel, depth: 0, transcript: Vec::new() }
    }

    pub fn call_global(&mut self, name: &QualName, args: Vec<Value<'p>>) -> Result<Value<'p>, RuntimeError> {
        let f = self.global(name)?;
        self.apply(f, args)
    }

    fn global(&mut self, name: &QualName) -> Result<Value<'p>, RuntimeError> {
        let f = self.prog.fun(name).ok_or_else(|| stuck(&format!("unknown function {name}")))?;
        self.eval(&f.body, &Env::default())
    }

    pub fn eval(&mut self, e: &'p CExpr, env: &Env<'p>) -> Result<Value<'p>, RuntimeError> {
        if self.fuel == 0 {
            return Err(rt(Code::RtFuel, "step budget exhausted"));
        }
        self.fuel -= 1;
        if self.depth >= MAX_DEPTH {
            return Err(rt(Code::RtDepth, format!("evaluation nested deeper than {MAX_DEPTH}")));
        }
        self.depth += 1;
        let r = self.step(e, env);
        self.depth -= 1;
        r
    }

    fn step(&mut self, e: &'p CExpr, env: &Env<'p>) -> Result<Value<'p>, RuntimeError> {
        match e {
            CExpr::Var { name } => env.get(name).cloned().ok_or_else(|| stuck(&format!("unbound {name}"))),
            CExpr::Global { name } => self.global(name),
            CExpr::Model { id } => {
                let m = self.prog.model(id).ok_or_else(|| stuck("unknown model"))?;
                self.eval(&m.body, &Env::default())
            }
            CExpr::Lit { lit } => Ok(literal(lit)),
            CExpr::Lam { params, body } => Ok(Value::Closure {
                params: Rc::new(params.iter().map(|(n, _)| n.clone()).collect()),
                body,
                env: env.clone(),
            }),
            CExpr::TyLam { body, .. } | CExpr::TyApp { func: body, .. } => self.eval(body, env),
            CExpr::App { func, args } => {
                let f = self.eval(func, env)?;
                let mut vs = Vec::with_capacity(args.len());
                for a in args {
                    vs.push(self.eval(a, env)?);
                }
                self.apply(f, vs)
            }
            CExpr::Record { fields, .. } => {
                let mut out = Vec::with_capacity(fields.len());
                for (n, f) in fields {
                    out.push((n.clone(), self.eval(f, env)?));
                }
                Ok(Value::Record(Rc::new(out)))
            }
            CExpr::Proj { record, field } => match self.eval(record, env)? {
                Value::Record(fs) => {
                    fs.iter().find(|(n, _)| n == field).map(|(_, v)| v.clone()).ok_or_else(|| stuck("missing field"))
                }
                _ => Err(stuck("projection from a non-record")),
            },
            CExpr::Ctor { data, ctor, tag, .. } => {
                let d = self.prog.data(data).ok_or_else(|| stuck("unknown data type"))?;
                let ctor: Rc<str> = ctor.as_str().into();
                if d.ctors.get(*tag).is_some_and(|(_, fs)| fs.is_empty()) {
                    Ok(Value::Con { ctor, tag: *tag, fields: Rc::new(vec![]) })
                } else {
                    Ok(Value::Ctor { ctor, tag: *tag })
                }
            }
            CExpr::Match { scrut, arms } => {
                let v = self.eval(scrut, env)?;
                for (p, body) in arms {
                    let mut env2 = env.clone();
                    if bind(p, &v, &mut env2) {
                        return self.eval(body, &env2);
                    }
                }
                Err(rt(Code::RtMatch, format!("no match arm accepts {v}")))
            }
            CExpr::Let { name, value, body, .. } => {
                let v = self.eval(value, env)?;
                self.eval(body, &env.bind(name.clone(), v))
            }
            CExpr::If { cond, then, els } => match self.eval(cond, env)? {
                Value::Bool(true) => self.eval(then, env),
                Value::Bool(false) => self.eval(els, env),
                _ => Err(stuck("non-boolean condition")),
            },
            CExpr::Prim { op, .. } => Ok(Value::Builtin(*op)),
        }
    }

    pub fn apply(&mut self, f: Value<'p>, args: Vec<Value<'p>>) -> Result<Value<'p>, RuntimeError> {
        match f {
            Value::Closure { params, body, env } => {
                if params.len() != args.len() {
                    return Err(stuck("arity mismatch"));
                }
                let env = params.iter().zip(args).fold(env, |e, (n, v)| e.bind(n.clone(), v));
                self.eval(body, &env)
            }
            Value::Ctor { ctor, tag } => Ok(Value::Con { ctor, tag, fields: Rc::new(args) }),
            Value::Builtin(Prim::Print) => {
                let [Value::Str(s)] = args.as_slice() else { return Err(stuck("print of a non-string")) };
                self.transcript.push(s.to_string());
                Ok(Value::Unit)
            }
            Value::Builtin(op) => apply_prim(op, &args).ok_or_else(|| stuck(&format!("bad operands to {}", op.name()))),
            _ => Err(stuck("applying a non-function")),
        }
    }
}

fn literal<'p>(l: &CLit) -> Value<'p> {
    match l {
        CLit::U64(n) => Value::U64(*n),
        CLit::U8(n) => Value::U8(*n),
        CLit::Int(n) => Value::Int(*n),
        CLit::F64(s) => Value::F64(s.as_str().into()),
        CLit::Str(s) => Value::Str(s.as_str().into()),
        CLit::Bool(b) => Value::Bool(*b),
        CLit::Unit => Value::Unit,
    }
}

fn bind<'p>(p: &CPat, v: &Value<'p>, env: &mut Env<'p>) -> bool {
    match (p, v) {
        (CPat::Wild, _) => true,
        (CPat::Bind { name, .. }, _) => {
            *env = env.bind(name.clone(), v.clone());
            true
        }
        (CPat::Lit { lit }, v) => lit_eq(&literal(lit), v),
        (CPat::Ctor { tag, args, .. }, Value::Con { tag: t, fields, .. }) => {
            tag == t && args.len() == fields.len() && args.iter().zip(fields.iter()).all(|(p, f)| bind(p, f, env))
        }
        _ => false,
    }
}

fn lit_eq(a: &Value<'_>, b: &Value<'_>) -> bool {
    match (a, b) {
        (Value::U64(x), Value::U64(y)) => x == y,
        (Value::U8(x), Value::U8(y)) => x == y,
        (Value::Int(x), Value::Int(y)) => x == y,
        (Value::F64(x), Value::F64(y)) => x == y,
        (Value::Bool(x), Value::Bool(y)) => x == y,
        (Value::Str(x), Value::Str(y)) => x == y,
        (Value::Unit, Value::Unit) => true,
        _ => false,
    }
}

/// Shifts by the full width or more shift every bit out.
fn shr64(a: u64, k: u64) -> u64 {
    a.checked_shr(u32::try_from(k).unwrap_or(u32::MAX)).unwrap_or(0)
}

fn shl64(a: u64, k: u64) -> u64 {
    a.checked_shl(u32::try_from(k).unwrap_or(u32::MAX)).unwrap_or(0)
}

/// Pure builtins (everything except `print`). `None` on operands of the
/// wrong shape.
pub fn apply_prim<'p>(op: Prim, args: &[Value<'p>]) -> Option<Value<'p>> {
    use Value::*;
    let v = match (op, args) {
        (Prim::Add, [U64(a), U64(b)]) => U64(a.wrapping_add(*b)),
        (Prim::Sub, [U64(a), U64(b)]) => U64(a.wrapping_sub(*b)),
        (Prim::Mul, [U64(a), U64(b)]) => U64(a.wrapping_mul(*b)),
        (Prim::Band, [U64(a), U64(b)]) => U64(a & b),
        (Prim::Bor, [U64(a), U64(b)]) => U64(a | b),
        (Prim::Shr, [U64(a), U64(b)]) => U64(shr64(*a, *b)),
        (Prim::Shl, [U64(a), U64(b)]) => U64(shl64(*a, *b)),

        (Prim::Add, [U8(a), U8(b)]) => U8(a.wrapping_add(*b)),
        (Prim::Sub, [U8(a), U8(b)]) => U8(a.wrapping_sub(*b)),
        (Prim::Mul, [U8(a), U8(b)]) => U8(a.wrapping_mul(*b)),
        (Prim::Band, [U8(a), U8(b)]) => U8(a & b),
        (Prim::Bor, [U8(a), U8(b)]) => U8(a | b),
        (Prim::Shr, [U8(a), U8(b)]) => U8(if *b >= 8 { 0 } else { a >> b }),
        (Prim::Shl, [U8(a), U8(b)]) => U8(if *b >= 8 { 0 } else { a << b }),

        (Prim::Add, [Int(a), Int(b)]) => Int(a.wrapping_add(*b)),
        (Prim::Sub, [Int(a), Int(b)]) => Int(a.wrapping_sub(*b)),
        (Prim::Mul, [Int(a), Int(b)]) => Int(a.wrapping_mul(*b)),
        (Prim::Band, [Int(a), Int(b)]) => Int(a & b),
        (Prim::Bor, [Int(a), Int(b)]) => Int(a | b),
        // Arithmetic shift; negative or oversized amounts saturate.
        (Prim::Shr, [Int(a), Int(b)]) => Int(if (0..64).contains(b) { a >> b } else if *a < 0 { -1 } else { 0 }),
        (Prim::Shl, [Int(a), Int(b)]) => Int(if (0..64).contains(b) { a << b } else { 0 }),

        (Prim::Eq, [a, b]) => Bool(lit_eq(a, b)),
        (Prim::Lt | Prim::Le | Prim::Gt | Prim::Ge, [a, b]) => {
            let o = match (a, b) {
                (U64(x), U64(y)) => x.cmp(y),
                (U8(x), U8(y)) => x.cmp(y),
                (Int(x), Int(y)) => x.cmp(y),
                _ => return None,
            };
            Bool(match op {
                Prim::Lt => o.is_lt(),
                Prim::Le => o.is_le(),
                Prim::Gt => o.is_gt(),
                _ => o.is_ge(),
            })
        }
        (Prim::Not, [Bool(b)]) => Bool(!b),
        (Prim::Trunc8, [U64(a)]) => U8(*a as u8),
        (Prim::Extend64, [U8(a)]) => U64(u64::from(*a)),
        (Prim::Concat, [Str(a), Str(b)]) => Str(format!("{a}{b}").into()),
        (Prim::Show, [Str(s) | F64(s)]) => Str(s.clone()),
        (Prim::Show, [v @ (U64(_) | U8(_) | Int(_) | Bool(_))]) => Str(v.to_string().into()),
        _ => return None,
    };
    Some(v)
}
