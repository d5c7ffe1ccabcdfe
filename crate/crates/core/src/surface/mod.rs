//! Lexing, parsing and printing of SL source files (one module per file).

pub mod ast;
mod lexer;
mod parser;
mod pretty;

pub use ast::*;
pub use parser::{parse_module, parse_module_bytes};
pub use pretty::{expr as pretty_expr, pretty_print, ty as pretty_type};
