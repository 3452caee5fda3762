//! Plain-text polynomial files.
//!
//! ```text
//! field p=101 n=3
//! 2*x1*x2*x3 + 100*x1*x2 + 1
//! ```
//!
//! Variables are written 1-based (`x1` is slot 0). Terms are joined by `+`,
//! factors by `*`, and coefficients are decimal residues. Whitespace is
//! ignored and lines starting with `#` are comments. The body may span
//! several lines.

use std::fmt;

use super::{MPoly, Monomial};
use crate::error::{Error, Result};
use crate::ff::FieldCtx;

/// Parses a `field p=<p> n=<arity>` header line.
pub fn parse_header(line: &str, lineno: usize) -> Result<(FieldCtx, usize)> {
    let mut words = line.split_whitespace();
    if words.next() != Some("field") {
        return Err(Error::parse(
            lineno,
            "expected header `field p=<p> n=<arity>`",
        ));
    }
    let (mut p, mut n) = (None, None);
    for w in words {
        let (key, val) = w
            .split_once('=')
            .ok_or_else(|| Error::parse(lineno, format!("malformed header field `{w}`")))?;
        let val: u64 = val
            .parse()
            .map_err(|_| Error::parse(lineno, format!("`{val}` is not an integer")))?;
        match key {
            "p" => p = Some(val),
            "n" => n = Some(val as usize),
            _ => return Err(Error::parse(lineno, format!("unknown header key `{key}`"))),
        }
    }
    let p = p.ok_or_else(|| Error::parse(lineno, "header is missing p"))?;
    let n = n.ok_or_else(|| Error::parse(lineno, "header is missing n"))?;
    let ctx = FieldCtx::new(p).map_err(|e| Error::parse(lineno, e.to_string()))?;
    Ok((ctx, n))
}

pub fn format_header(ctx: FieldCtx, arity: usize) -> String {
    format!("field p={} n={}", ctx.modulus(), arity)
}

/// Splits a document into its header and body, dropping comments and blank
/// lines. Returns the body lines with their 1-based line numbers.
pub(crate) fn split_document(src: &str) -> Result<((FieldCtx, usize), Vec<(usize, &str)>)> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty document"))?;
    let header = parse_header(header, hl)?;
    Ok((header, lines.collect()))
}

/// Parses `x<i>` (1-based) into a 0-based slot.
pub(crate) fn parse_var(tok: &str, arity: usize, lineno: usize) -> Result<usize> {
    let idx: usize = tok
        .strip_prefix('x')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::parse(lineno, format!("bad variable `{tok}`")))?;
    if idx == 0 || idx > arity {
        return Err(Error::parse(
            lineno,
            format!("variable `{tok}` outside x1..x{arity}"),
        ));
    }
    Ok(idx - 1)
}

impl MPoly {
    /// Parses a full document (header plus body).
    pub fn parse(src: &str) -> Result<MPoly> {
        let ((ctx, arity), body) = split_document(src)?;
        let first_line = body.first().map(|&(l, _)| l).unwrap_or(1);
        let joined: String = body
            .iter()
            .flat_map(|(_, l)| l.chars())
            .filter(|c| !c.is_whitespace())
            .collect();
        if joined.is_empty() {
            return Err(Error::parse(first_line, "missing polynomial body"));
        }
        let mut terms = Vec::new();
        for term in joined.split('+') {
            if term.is_empty() {
                return Err(Error::parse(first_line, "empty term"));
            }
            let mut coeff = ctx.one();
            let mut exps = Vec::new();
            for factor in term.split('*') {
                if factor.starts_with('x') {
                    let (v, e) = match factor.split_once('^') {
                        Some((v, e)) => {
                            let e: u32 = e.parse().map_err(|_| {
                                Error::parse(first_line, format!("bad exponent in `{factor}`"))
                            })?;
                            (v, e)
                        }
                        None => (factor, 1),
                    };
                    exps.push((parse_var(v, arity, first_line)?, e));
                } else {
                    let c: u64 = factor
                        .parse()
                        .map_err(|_| Error::parse(first_line, format!("bad factor `{factor}`")))?;
                    coeff *= ctx.elem(c);
                }
            }
            terms.push((Monomial::from_exponents(exps), coeff));
        }
        MPoly::from_terms(ctx, arity, terms)
    }

    /// Canonical document: header line, then the body on one line.
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", format_header(self.ctx, self.arity), self)
    }
}

/// Body only, leading term first.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut first = true;
            if m.is_constant() || !c.is_one() {
                write!(f, "{c}")?;
                first = false;
            }
            for &(i, e) in m.pairs() {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "x{}", i + 1)?;
                } else {
                    write!(f, "x{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}
