//! A small statement language driving the engine.
//!
//! Scripts declare spaces, maps, bundles and K-cycles, then `print` or
//! `assert` derived quantities:
//!
//! ```
//! use kcharge::dsl::{run, RunOptions};
//!
//! let r = run(
//!     "space X = CP(1); bundle E on X = O(1); print integrate(ch(E) * td(T(X)));",
//!     RunOptions::default(),
//! );
//! assert_eq!(r.outputs[0].value, "2");
//! ```

mod ast;
mod diagnostic;
mod eval;
mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use diagnostic::{Diagnostic, Severity};
pub use eval::{render_human, render_json, run, Output, RunOptions, RunResult};
pub use lexer::{tokenize, Tok, Token};
pub use parser::{parse, MAX_DEPTH, RESERVED};
pub use printer::print;
