//! The expression language and the command line built on it.

pub mod ast;
pub mod cli;
pub mod eval;
pub mod parser;

pub use ast::{Atom, Expr};
pub use cli::cli_main;
pub use eval::{eval_expr, Evaluated, Evaluator, Grade};
pub use parser::{parse, parse_statement, ParseError};
