use std::collections::BTreeMap;

use super::ast::{BinaryOp, Expr, Func, UnaryOp};
use crate::error::{Error, Result};
use crate::ops;
use crate::signal::Signal;

/// Variable bindings. Every bound signal shares one grid.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    bindings: BTreeMap<String, Signal>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `name`, rejecting signals that do not match the grid of
    /// existing bindings.
    pub fn bind(&mut self, name: &str, s: Signal) -> Result<()> {
        if !is_ident(name) {
            return Err(Error::BadParam(format!(
                "`{name}` is not a valid variable name"
            )));
        }
        if let Some(first) = self.bindings.values().next() {
            if !first.same_grid(&s) {
                return Err(Error::ShapeMismatch(format!(
                    "binding `{name}` does not match the grid of existing bindings"
                )));
            }
        }
        self.bindings.insert(name.to_string(), s);
        Ok(())
    }

    pub fn with(mut self, name: &str, s: Signal) -> Result<Self> {
        self.bind(name, s)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Signal> {
        self.bindings.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    fn template(&self) -> Option<&Signal> {
        self.bindings.values().next()
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Evaluates `e` sample by sample. Multiset operators go through
/// [`crate::ops`]; `sin`, `cos`, `abs` act on sample values; constants
/// broadcast over the environment's grid.
pub fn eval(e: &Expr, env: &Environment) -> Result<Signal> {
    match e {
        Expr::Var(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnboundVariable(name.clone())),
        Expr::Const(v) => {
            let t = env.template().ok_or(Error::EmptyEnvironment)?;
            Signal::constant(t.dt(), t.t0(), t.len(), *v)
        }
        Expr::Unary(UnaryOp::Neg | UnaryOp::Complement, inner) => {
            Ok(ops::complement(&eval(inner, env)?))
        }
        Expr::Binary(op, l, r) => {
            let (a, b) = (eval(l, env)?, eval(r, env)?);
            match op {
                BinaryOp::Add => a.add(&b),
                BinaryOp::Sub => a.sub(&b),
                BinaryOp::Mul => a.mul(&b),
                BinaryOp::Intersect => ops::intersection(&a, &b),
                BinaryOp::Union => ops::union(&a, &b),
                BinaryOp::CommonProduct => ops::common_product(&a, &b),
            }
        }
        Expr::Call(func, inner) => {
            let a = eval(inner, env)?;
            Ok(match func {
                Func::Sin => a.map_finite(f64::sin),
                Func::Cos => a.map_finite(f64::cos),
                Func::Abs => ops::absolute(&a),
                Func::Sign => ops::sign_fn(&a).to_signal(),
            })
        }
    }
}
