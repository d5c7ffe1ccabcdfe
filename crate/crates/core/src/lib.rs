//! SL: a small generic-programming language with concepts, models and
//! associated types, checked under a choice of coherence policies and
//! elaborated to an explicitly typed core by dictionary passing.

pub mod builtins;
pub mod coherence;
pub mod corekit;
pub mod diag;
pub mod driver;
pub mod enumerate;
pub mod eval;
pub mod linker;
pub mod par;
pub mod resolver;
pub mod sema;
pub mod surface;
pub mod types;
pub mod world;
