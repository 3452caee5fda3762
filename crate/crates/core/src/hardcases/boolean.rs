use std::collections::HashMap;

use crate::error::{Error, Result};

/// Largest arity accepted by [`boolean_is_read_once`].
pub const BOOLEAN_LIMIT: usize = 10;

/// A Boolean function given by its truth table; bit `i` of the row index is
/// the value of `x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolFn {
    n: usize,
    table: Vec<bool>,
}

impl BoolFn {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        if n >= usize::BITS as usize || table.len() != 1 << n {
            return Err(Error::InvalidParams(format!(
                "truth table of arity {n} needs 2^{n} rows, got {}",
                table.len()
            )));
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        let mut x = vec![false; n];
        let table = (0..1usize << n)
            .map(|row| {
                for (i, v) in x.iter_mut().enumerate() {
                    *v = row >> i & 1 == 1;
                }
                f(&x)
            })
            .collect();
        Self { n, table }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        let row = x
            .iter()
            .enumerate()
            .fold(0usize, |r, (i, &b)| r | (b as usize) << i);
        self.table[row]
    }

    /// Fixes `x_i := v`; the arity is unchanged and `x_i` becomes a dummy.
    pub fn restrict(&self, i: usize, v: bool) -> BoolFn {
        let bit = 1usize << i;
        let table = (0..self.table.len())
            .map(|row| self.table[if v { row | bit } else { row & !bit }])
            .collect();
        BoolFn { n: self.n, table }
    }

    pub fn depends_on(&self, i: usize) -> bool {
        let bit = 1usize << i;
        (0..self.table.len()).any(|row| self.table[row] != self.table[row ^ bit])
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.depends_on(i)).collect()
    }

    /// Flipping any input from 0 to 1 never flips the output from 1 to 0.
    pub fn is_monotone(&self) -> bool {
        (0..self.n).all(|i| {
            let bit = 1usize << i;
            (0..self.table.len())
                .filter(|row| row & bit == 0)
                .all(|row| !self.table[row] || self.table[row | bit])
        })
    }

    fn quantify(&self, vars: &[usize], exists: bool) -> BoolFn {
        let mut table = self.table.clone();
        for &i in vars {
            let bit = 1usize << i;
            for row in 0..table.len() {
                if row & bit == 0 {
                    let (a, b) = (table[row], table[row | bit]);
                    let v = if exists { a || b } else { a && b };
                    table[row] = v;
                    table[row | bit] = v;
                }
            }
        }
        BoolFn { n: self.n, table }
    }

    fn combine(&self, other: &BoolFn, and: bool) -> BoolFn {
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(&a, &b)| if and { a && b } else { a || b })
            .collect();
        BoolFn { n: self.n, table }
    }
}

/// `x_1 ∧ ... ∧ x_n  ∨  ¬x_1 ∧ ... ∧ ¬x_n`.
pub fn boolean_f(n: usize) -> Result<BoolFn> {
    if n < 2 {
        return Err(Error::ArityTooSmall(n));
    }
    Ok(BoolFn::from_fn(n, |x| {
        x.iter().all(|&b| b) || x.iter().all(|&b| !b)
    }))
}

/// `y ∧ (x_1 ∨ ... ∨ x_n)  ∨  x_1 ∧ ... ∧ x_n`, with `y` the last input.
pub fn boolean_g(n: usize) -> Result<BoolFn> {
    if n < 2 {
        return Err(Error::ArityTooSmall(n));
    }
    Ok(BoolFn::from_fn(n + 1, |v| {
        let (x, y) = (&v[..n], v[n]);
        (y && x.iter().any(|&b| b)) || x.iter().all(|&b| b)
    }))
}

/// Whether `f` has a formula over `∧, ∨` in which every variable labels at
/// most one leaf, leaves being literals `x_i` or `¬x_i`.
///
/// Searches bipartitions `L | R` of the support: `f = g(x_L) ∧ h(x_R)` for
/// non-constant `g, h` iff `f = (∃x_R f) ∧ (∃x_L f)`, and dually for `∨`
/// with universal quantifiers.
pub fn boolean_is_read_once(f: &BoolFn) -> Result<bool> {
    if f.n > BOOLEAN_LIMIT {
        return Err(Error::TooManyVariables {
            found: f.n,
            limit: BOOLEAN_LIMIT,
        });
    }
    let mut memo = HashMap::new();
    Ok(read_once(f, &mut memo))
}

fn read_once(f: &BoolFn, memo: &mut HashMap<BoolFn, bool>) -> bool {
    let support = f.support();
    if support.len() <= 1 {
        return true;
    }
    if let Some(&known) = memo.get(f) {
        return known;
    }
    let (first, rest) = (support[0], &support[1..]);
    let mut verdict = false;
    // masks over `rest` choose which variables join `first` on the left
    'search: for mask in 0..(1usize << rest.len()) - 1 {
        let mut left = vec![first];
        let mut right = Vec::new();
        for (k, &v) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                left.push(v);
            } else {
                right.push(v);
            }
        }
        for and in [true, false] {
            let g = f.quantify(&right, and);
            let h = f.quantify(&left, and);
            if g.combine(&h, and) == *f && read_once(&g, memo) && read_once(&h, memo) {
                verdict = true;
                break 'search;
            }
        }
    }
    memo.insert(f.clone(), verdict);
    verdict
}
