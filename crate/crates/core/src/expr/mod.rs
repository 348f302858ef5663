//! Hybrid multiset/algebraic expressions over signals.
//!
//! ASCII spellings: union `\/`, intersection `/\`, postfix complement `~`,
//! common product `<>`, plus `+ - *`, prefix `-`, and the calls `sin`,
//! `cos`, `abs`, `sign`. For example `(f \/ g)~ * cos(h /\ -g)`.

mod ast;
mod eval;
mod lexer;
mod parser;

pub use ast::{pretty_print, BinaryOp, Expr, Func, UnaryOp};
pub use eval::{eval, Environment};
pub use parser::{parse, MAX_DEPTH};
