//! The core calculus: syntax, elaboration into it, and its type checker.

mod check;
mod elab;
mod pretty;
mod syntax;

pub use check::core_check;
pub use elab::{dict_param, elaborate, entry_points, lower};
pub use pretty::render_program;
pub use syntax::*;
