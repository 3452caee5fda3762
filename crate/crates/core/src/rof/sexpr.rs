//! S-expression text form of read-once formulae.
//!
//! ```text
//! field p=101 n=3
//! (* (+ (leaf 1 1 1) (leaf 2 1 2)) (leaf 3 2 0))
//! ```
//!
//! `(leaf i a b)` is `a*x_i + b` with 1-based `i`, `(const c)` a constant,
//! and `(+ L R)` / `(* L R)` binary gates.

use std::fmt;

use super::{GateOp, Node, Rof};
use crate::error::{Error, Result};
use crate::ff::FieldCtx;
use crate::mpoly::text::{format_header, split_document};

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize<'a>(lines: &[(usize, &'a str)]) -> Vec<(usize, Tok<'a>)> {
    let mut out = Vec::new();
    for &(lineno, line) in lines {
        let mut start = None;
        for (i, ch) in line.char_indices() {
            let boundary = ch == '(' || ch == ')' || ch.is_whitespace();
            if boundary {
                if let Some(s) = start.take() {
                    out.push((lineno, Tok::Atom(&line[s..i])));
                }
                match ch {
                    '(' => out.push((lineno, Tok::Open)),
                    ')' => out.push((lineno, Tok::Close)),
                    _ => {}
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push((lineno, Tok::Atom(&line[s..])));
        }
    }
    out
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    ctx: FieldCtx,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map(|t| t.0)
            .unwrap_or(1)
    }

    fn next(&mut self) -> Result<Tok<'a>> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::parse(self.line(), "unexpected end of formula"))?;
        self.pos += 1;
        Ok(tok.1)
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.next()? {
            Tok::Close => Ok(()),
            other => Err(Error::parse(
                self.line(),
                format!("expected `)`, found {other:?}"),
            )),
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.next()? {
            Tok::Atom(a) => a
                .parse()
                .map_err(|_| Error::parse(self.line(), format!("`{a}` is not an integer"))),
            other => Err(Error::parse(
                self.line(),
                format!("expected integer, found {other:?}"),
            )),
        }
    }

    fn node(&mut self) -> Result<Node> {
        match self.next()? {
            Tok::Open => {}
            other => {
                return Err(Error::parse(
                    self.line(),
                    format!("expected `(`, found {other:?}"),
                ))
            }
        }
        let head = match self.next()? {
            Tok::Atom(a) => a,
            other => {
                return Err(Error::parse(
                    self.line(),
                    format!("expected operator, found {other:?}"),
                ))
            }
        };
        let node = match head {
            "leaf" => {
                let line = self.line();
                let var = self.int()? as usize;
                if var == 0 || var > self.arity {
                    return Err(Error::parse(
                        line,
                        format!("leaf variable {var} outside 1..={}", self.arity),
                    ));
                }
                let (alpha, beta) = (self.int()?, self.int()?);
                let (alpha, beta) = (self.ctx.elem(alpha), self.ctx.elem(beta));
                Node::leaf(var - 1, alpha, beta)
            }
            "const" => {
                let c = self.int()?;
                Node::Const(self.ctx.elem(c))
            }
            "+" | "*" => {
                let left = self.node()?;
                let right = self.node()?;
                if head == "+" {
                    Node::plus(left, right)
                } else {
                    Node::times(left, right)
                }
            }
            other => {
                return Err(Error::parse(
                    self.line(),
                    format!("unknown operator `{other}`"),
                ))
            }
        };
        self.expect_close()?;
        Ok(node)
    }
}

impl Rof {
    pub fn parse(src: &str) -> Result<Rof> {
        let ((ctx, arity), body) = split_document(src)?;
        let mut parser = Parser {
            toks: tokenize(&body),
            pos: 0,
            ctx,
            arity,
        };
        let root = parser.node()?;
        if parser.pos != parser.toks.len() {
            return Err(Error::parse(parser.line(), "trailing input after formula"));
        }
        Rof::new(ctx, arity, root).map_err(|e| Error::parse(1, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", format_header(self.ctx, self.arity), self)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => write!(f, "(const {c})"),
            Node::Leaf { var, alpha, beta } => write!(f, "(leaf {} {alpha} {beta})", var + 1),
            Node::Gate { op, left, right } => {
                let sym = match op {
                    GateOp::Plus => '+',
                    GateOp::Times => '*',
                };
                write!(f, "({sym} {left} {right})")
            }
        }
    }
}

impl fmt::Display for Rof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::MPoly;
    use crate::rof::random_rof;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_documented_example() {
        let phi =
            Rof::parse("field p=101 n=3\n(* (+ (leaf 1 1 1) (leaf 2 1 2)) (leaf 3 2 0))").unwrap();
        // (x1 + 1 + x2 + 2) * 2*x3
        let expected = MPoly::parse("field p=101 n=3\n2*x1*x3 + 2*x2*x3 + 6*x3").unwrap();
        assert_eq!(phi.expand(), expected);
        assert_eq!(
            phi.to_string(),
            "(* (+ (leaf 1 1 1) (leaf 2 1 2)) (leaf 3 2 0))"
        );
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "field p=101 n=2\n(leaf 1 1)",
            "field p=101 n=2\n(leaf 3 1 1)",
            "field p=101 n=2\n(- (leaf 1 1 1) (leaf 2 1 1))",
            "field p=101 n=2\n(+ (leaf 1 1 1) (leaf 1 1 1))",
            "field p=101 n=2\n(leaf 1 1 1) (leaf 2 1 1)",
            "field p=101 n=2\n(+ (leaf 1 1 1))",
            "field p=101 n=2\n(leaf 1 0 1)",
            "field p=101 n=2\n",
        ] {
            assert!(
                matches!(Rof::parse(bad), Err(Error::Parse { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn text_round_trip() {
        let f = FieldCtx::new(1009).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 0..8 {
            let phi = random_rof(f, 8, n, &mut rng).unwrap();
            let text = phi.to_text();
            assert_eq!(Rof::parse(&text).unwrap(), phi);
        }
        let multi = "field p=7 n=2\n(+\n  (leaf 1 1 0)\n  (const 3))\n";
        assert_eq!(
            Rof::parse(multi).unwrap().to_string(),
            "(+ (leaf 1 1 0) (const 3))"
        );
    }
}
