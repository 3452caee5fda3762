use std::collections::{HashMap, HashSet};

use super::{accumulate, MPoly, Monomial};
use crate::error::{Error, Result};
use crate::ff::{Felt, FieldCtx};

/// A Cartesian interpolation grid on three axes with precomputed Lagrange
/// bases. Axis `t` has `m_t` distinct nodes and recovers degrees `< m_t` in
/// the variable of that axis.
#[derive(Clone, Debug)]
pub struct TrivariateGrid {
    ctx: FieldCtx,
    axes: [Vec<Felt>; 3],
    // basis[t][k][e]: coefficient of x^e in the k-th Lagrange basis
    // polynomial of axis t
    basis: [Vec<Vec<Felt>>; 3],
}

impl TrivariateGrid {
    pub fn new(axes: [Vec<Felt>; 3]) -> Result<Self> {
        let ctx = axes
            .iter()
            .flat_map(|a| a.first())
            .map(|f| f.ctx())
            .next()
            .ok_or(Error::IncompleteGrid)?;
        for axis in &axes {
            if axis.is_empty() {
                return Err(Error::IncompleteGrid);
            }
            let mut seen = HashSet::new();
            for v in axis {
                if v.ctx() != ctx {
                    return Err(Error::FieldMismatch {
                        left: ctx.modulus(),
                        right: v.ctx().modulus(),
                    });
                }
                if !seen.insert(v.value()) {
                    return Err(Error::DuplicateNode);
                }
            }
        }
        let basis = [
            lagrange_basis(ctx, &axes[0]),
            lagrange_basis(ctx, &axes[1]),
            lagrange_basis(ctx, &axes[2]),
        ];
        Ok(Self { ctx, axes, basis })
    }

    pub fn axes(&self) -> &[Vec<Felt>; 3] {
        &self.axes
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.axes[0].len(), self.axes[1].len(), self.axes[2].len()]
    }

    /// Grid points in row-major order (first axis slowest).
    pub fn points(&self) -> impl Iterator<Item = [Felt; 3]> + '_ {
        let [a, b, c] = &self.axes;
        a.iter().flat_map(move |&x| {
            b.iter()
                .flat_map(move |&y| c.iter().map(move |&z| [x, y, z]))
        })
    }

    /// Interpolates values given in row-major order (as produced by
    /// [`points`](Self::points)) into an arity-3 polynomial.
    pub fn interpolate(&self, values: &[Felt]) -> Result<MPoly> {
        let [m0, m1, m2] = self.shape();
        if values.len() != m0 * m1 * m2 {
            return Err(Error::IncompleteGrid);
        }
        let zero = self.ctx.zero();
        // Successive mode products: node index -> exponent along each axis.
        let mut cur = values.to_vec();
        let dims = [m0, m1, m2];
        for axis in 0..3 {
            let b = &self.basis[axis];
            let mut next = vec![zero; cur.len()];
            let stride: usize = dims[axis + 1..].iter().product();
            let outer: usize = dims[..axis].iter().product();
            let m = dims[axis];
            for o in 0..outer {
                for s in 0..stride {
                    for (k, bk) in b.iter().enumerate() {
                        let v = cur[(o * m + k) * stride + s];
                        if v.is_zero() {
                            continue;
                        }
                        for (e, &be) in bk.iter().enumerate() {
                            next[(o * m + e) * stride + s] += v * be;
                        }
                    }
                }
            }
            cur = next;
        }
        let mut out = MPoly::zero(self.ctx, 3);
        for e0 in 0..m0 {
            for e1 in 0..m1 {
                for e2 in 0..m2 {
                    let c = cur[(e0 * m1 + e1) * m2 + e2];
                    accumulate(
                        &mut out.terms,
                        Monomial::from_exponents([(0, e0 as u32), (1, e1 as u32), (2, e2 as u32)]),
                        c,
                    );
                }
            }
        }
        Ok(out)
    }
}

fn lagrange_basis(ctx: FieldCtx, nodes: &[Felt]) -> Vec<Vec<Felt>> {
    let m = nodes.len();
    let zero = ctx.zero();
    (0..m)
        .map(|k| {
            // numerator prod_{s != k} (x - x_s), built one factor at a time
            let mut num = vec![zero; m];
            num[0] = ctx.one();
            let mut deg = 0;
            let mut denom = ctx.one();
            for (s, &xs) in nodes.iter().enumerate() {
                if s == k {
                    continue;
                }
                for e in (0..=deg).rev() {
                    let c = num[e];
                    num[e + 1] += c;
                    num[e] = -(c * xs);
                }
                deg += 1;
                denom *= nodes[k] - xs;
            }
            let inv = denom.inv().expect("distinct nodes");
            num.into_iter().map(|c| c * inv).collect()
        })
        .collect()
}

/// Tensor-product Lagrange interpolation of samples on a Cartesian grid.
///
/// Returns the unique arity-3 polynomial with `deg_t < |grid[t]|` that agrees
/// with every sample.
pub fn interpolate_trivariate(
    grid: [Vec<Felt>; 3],
    samples: &HashMap<[Felt; 3], Felt>,
) -> Result<MPoly> {
    let grid = TrivariateGrid::new(grid)?;
    let values = grid
        .points()
        .map(|pt| samples.get(&pt).copied().ok_or(Error::IncompleteGrid))
        .collect::<Result<Vec<_>>>()?;
    grid.interpolate(&values)
}
