//! Recursive-descent parser with precedence climbing, one token of
//! lookahead.
//!
//! Precedence, loosest first: `\/`, `/\`, `+ -`, `* <>`, prefix `-`,
//! postfix `~`, then calls and parentheses. Binary operators associate to
//! the left.

use super::ast::{BinaryOp, Expr, Func, UnaryOp};
use super::lexer::{tokenize, Spanned, Tok};
use crate::error::{Error, Result};

/// Deepest tree the parser will build.
pub const MAX_DEPTH: usize = 256;

pub fn parse(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        nesting: 0,
    };
    let (e, _) = p.binary(0)?;
    p.expect(&Tok::Eof, "an operator or end of input")?;
    Ok(e)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    nesting: usize,
}

fn binary_op(t: &Tok) -> Option<(BinaryOp, u8)> {
    Some(match t {
        Tok::Union => (BinaryOp::Union, 0),
        Tok::Inter => (BinaryOp::Intersect, 1),
        Tok::Plus => (BinaryOp::Add, 2),
        Tok::Minus => (BinaryOp::Sub, 2),
        Tok::Star => (BinaryOp::Mul, 3),
        Tok::Diamond => (BinaryOp::CommonProduct, 3),
        _ => return None,
    })
}

/// Expression together with its tree depth.
type Node = (Expr, usize);

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            offset: self.offset(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, t: &Tok, expected: &str) -> Result<()> {
        if self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn check(depth: usize) -> Result<usize> {
        if depth > MAX_DEPTH {
            Err(Error::DepthExceeded(MAX_DEPTH))
        } else {
            Ok(depth)
        }
    }

    /// Precedence climbing over the binary levels, loosest first:
    /// 0 `\/`, 1 `/\`, 2 `+ -`, 3 `* <>`. Operands at each level are parsed
    /// one level tighter, which makes every operator left-associative.
    fn binary(&mut self, min_level: u8) -> Result<Node> {
        let (mut lhs, mut depth) = self.unary()?;
        while let Some((op, level)) = binary_op(self.peek()) {
            if level < min_level {
                break;
            }
            self.bump();
            let (rhs, rd) = self.binary(level + 1)?;
            depth = Self::check(1 + depth.max(rd))?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok((lhs, depth))
    }

    fn unary(&mut self) -> Result<Node> {
        // prefix chains are counted on the way down so `------x` cannot blow the stack
        let mut negs = 0usize;
        while *self.peek() == Tok::Minus {
            self.bump();
            negs += 1;
            Self::check(negs)?;
        }
        let (mut e, mut depth) = self.postfix()?;
        for _ in 0..negs {
            depth = Self::check(depth + 1)?;
            e = Expr::unary(UnaryOp::Neg, e);
        }
        Ok((e, depth))
    }

    fn postfix(&mut self) -> Result<Node> {
        let (mut e, mut depth) = self.atom()?;
        while *self.peek() == Tok::Tilde {
            self.bump();
            depth = Self::check(depth + 1)?;
            e = Expr::unary(UnaryOp::Complement, e);
        }
        Ok((e, depth))
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok((Expr::Const(v), 1))
            }
            Tok::Ident(name) => {
                let start = self.offset();
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok((Expr::Var(name), 1));
                }
                let func = Func::from_name(&name).ok_or_else(|| Error::Syntax {
                    offset: start,
                    expected: "one of sin, cos, abs, sign before `(`".into(),
                    found: format!("identifier `{name}`"),
                })?;
                self.bump();
                let (arg, d) = self.nested()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok((Expr::call(func, arg), Self::check(d + 1)?))
            }
            Tok::LParen => {
                self.bump();
                let node = self.nested()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(node)
            }
            _ => Err(self.error("a number, identifier or `(`")),
        }
    }

    /// Parenthesized sub-expression. Each open parenthesis costs one unit
    /// of depth even though it adds no node.
    fn nested(&mut self) -> Result<Node> {
        self.nesting = Self::check(self.nesting + 1)?;
        let node = self.binary(0);
        self.nesting -= 1;
        node
    }
}
