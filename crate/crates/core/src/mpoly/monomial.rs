use std::cmp::Ordering;

/// A monomial as a sorted list of `(variable, exponent)` pairs.
///
/// Exponents are always positive; the empty list is the constant monomial.
/// Ordering is graded lexicographic with `x1` the most significant variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial(vec![(i, 1)])
    }

    /// Builds a monomial from arbitrary pairs, merging repeated variables and
    /// dropping zero exponents.
    pub fn from_exponents<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(usize, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable_by_key(|&(i, _)| i);
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(v.len());
        for (i, e) in v {
            match out.last_mut() {
                Some((j, f)) if *j == i => *f += e,
                _ => out.push((i, e)),
            }
        }
        Monomial(out)
    }

    /// Multilinear monomial over the given variables.
    pub fn product_of<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        Self::from_exponents(vars.into_iter().map(|i| (i, 1)))
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(i, _)| i)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        match self.0.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(pos) => self.0[pos].1,
            Err(_) => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.last().map(|&(i, _)| i)
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    /// Removes variable `i`, returning the remaining monomial and the
    /// exponent `i` had (0 if absent).
    pub fn without(&self, i: usize) -> (Monomial, u32) {
        match self.0.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(pos) => {
                let mut v = self.0.clone();
                let (_, e) = v.remove(pos);
                (Monomial(v), e)
            }
            Err(_) => (self.clone(), 0),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                Ordering::Equal => {
                    out.push((a[x].0, a[x].1 + b[y].1));
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        Monomial(out)
    }

    /// Renames every variable through `map`; collisions multiply.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Monomial {
        Self::from_exponents(self.0.iter().map(|&(i, e)| (map(i), e)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| lex_cmp(&self.0, &other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Lexicographic comparison of dense exponent vectors, x1 most significant,
// carried out on the sparse form.
fn lex_cmp(a: &[(usize, u32)], b: &[(usize, u32)]) -> Ordering {
    for (&(va, ea), &(vb, eb)) in a.iter().zip(b) {
        if va != vb {
            // the side with the lower-indexed variable has a positive
            // exponent where the other has zero
            return if va < vb {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        if ea != eb {
            return ea.cmp(&eb);
        }
    }
    a.len().cmp(&b.len())
}
