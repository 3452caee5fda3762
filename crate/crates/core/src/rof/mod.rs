//! Read-once formulae: binary `+`/`×` trees whose leaves are affine
//! functions `α·x_i + β` (α ≠ 0) of distinct variables, or constants.

mod oracle;
mod sexpr;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

pub use oracle::Oracle;

use crate::error::{Error, Result};
use crate::ff::{Felt, FieldCtx};
use crate::mpoly::MPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateOp {
    Plus,
    Times,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Const(Felt),
    /// Computes `alpha * x_var + beta`.
    Leaf {
        var: usize,
        alpha: Felt,
        beta: Felt,
    },
    Gate {
        op: GateOp,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    pub fn leaf(var: usize, alpha: Felt, beta: Felt) -> Node {
        Node::Leaf { var, alpha, beta }
    }

    pub fn plus(left: Node, right: Node) -> Node {
        Node::Gate {
            op: GateOp::Plus,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn times(left: Node, right: Node) -> Node {
        Node::Gate {
            op: GateOp::Times,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn collect_leaves(&self, out: &mut Vec<(usize, Felt)>) {
        match self {
            Node::Const(_) => {}
            Node::Leaf { var, alpha, .. } => out.push((*var, *alpha)),
            Node::Gate { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    fn eval(&self, a: &[Felt]) -> Felt {
        match self {
            Node::Const(c) => *c,
            Node::Leaf { var, alpha, beta } => *alpha * a[*var] + *beta,
            Node::Gate { op, left, right } => {
                let (l, r) = (left.eval(a), right.eval(a));
                match op {
                    GateOp::Plus => l + r,
                    GateOp::Times => l * r,
                }
            }
        }
    }

    fn expand(&self, ctx: FieldCtx, arity: usize) -> MPoly {
        match self {
            Node::Const(c) => MPoly::constant(ctx, arity, *c),
            Node::Leaf { var, alpha, beta } => MPoly::var(ctx, arity, *var)
                .expect("validated leaf index")
                .scale(*alpha)
                .add_constant(*beta),
            Node::Gate { op, left, right } => {
                let (l, r) = (left.expand(ctx, arity), right.expand(ctx, arity));
                match op {
                    GateOp::Plus => &l + &r,
                    GateOp::Times => &l * &r,
                }
            }
        }
    }
}

/// A validated read-once formula over GF(p) with a declared arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rof {
    ctx: FieldCtx,
    arity: usize,
    root: Node,
}

impl Rof {
    /// Checks the read-once condition, leaf indices and nonzero leaf slopes.
    pub fn new(ctx: FieldCtx, arity: usize, root: Node) -> Result<Rof> {
        let mut leaves = Vec::new();
        root.collect_leaves(&mut leaves);
        let mut seen = vec![false; arity];
        for (var, alpha) in leaves {
            if var >= arity {
                return Err(Error::VariableOutOfRange { index: var, arity });
            }
            if std::mem::replace(&mut seen[var], true) {
                return Err(Error::DuplicateLeaf(var));
            }
            if alpha.is_zero() {
                return Err(Error::ZeroLeafCoefficient(var));
            }
        }
        check_field(&root, ctx)?;
        Ok(Rof { ctx, arity, root })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Variables labelling a leaf.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut leaves = Vec::new();
        self.root.collect_leaves(&mut leaves);
        leaves.into_iter().map(|(v, _)| v).collect()
    }

    pub fn eval(&self, a: &[Felt]) -> Result<Felt> {
        if a.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: a.len(),
            });
        }
        Ok(self.root.eval(a))
    }

    /// The multilinear polynomial computed by the formula.
    pub fn expand(&self) -> MPoly {
        self.root.expand(self.ctx, self.arity)
    }
}

fn check_field(node: &Node, ctx: FieldCtx) -> Result<()> {
    let mismatch = |f: Felt| {
        if f.ctx() == ctx {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: ctx.modulus(),
                right: f.ctx().modulus(),
            })
        }
    };
    match node {
        Node::Const(c) => mismatch(*c),
        Node::Leaf { alpha, beta, .. } => mismatch(*alpha).and(mismatch(*beta)),
        Node::Gate { left, right, .. } => {
            check_field(left, ctx)?;
            check_field(right, ctx)
        }
    }
}

fn catalan(k: usize) -> f64 {
    // C_k = prod_{i=2..k} (k + i) / i
    (2..=k).fold(1.0, |acc, i| acc * (k + i) as f64 / i as f64)
}

/// Uniformly shaped random formula over `vars_used` distinct variables chosen
/// from `0..arity`.
///
/// The tree shape is uniform over full binary trees with `vars_used` leaves,
/// gate labels are fair coins, leaf slopes are uniform nonzero and leaf
/// offsets uniform. With `vars_used == 0` the result is a random constant.
pub fn random_rof<R: Rng + ?Sized>(
    ctx: FieldCtx,
    arity: usize,
    vars_used: usize,
    rng: &mut R,
) -> Result<Rof> {
    if vars_used > arity {
        return Err(Error::InvalidParams(format!(
            "cannot use {vars_used} variables out of {arity}"
        )));
    }
    if vars_used == 0 {
        return Rof::new(ctx, arity, Node::Const(ctx.sample(rng)));
    }
    let mut vars: Vec<usize> = (0..arity).collect();
    vars.shuffle(rng);
    vars.truncate(vars_used);
    let root = random_shape(ctx, &vars, rng);
    Rof::new(ctx, arity, root)
}

fn random_shape<R: Rng + ?Sized>(ctx: FieldCtx, vars: &[usize], rng: &mut R) -> Node {
    let k = vars.len();
    if k == 1 {
        return Node::leaf(vars[0], ctx.sample_nonzero(rng), ctx.sample(rng));
    }
    // left subtree gets s leaves with weight C_{s-1} * C_{k-s-1}
    let weights: Vec<f64> = (1..k)
        .map(|s| catalan(s - 1) * catalan(k - s - 1))
        .collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut s = k - 1;
    for (idx, w) in weights.iter().enumerate() {
        if u < *w {
            s = idx + 1;
            break;
        }
        u -= w;
    }
    let left = random_shape(ctx, &vars[..s], rng);
    let right = random_shape(ctx, &vars[s..], rng);
    if rng.random_bool(0.5) {
        Node::plus(left, right)
    } else {
        Node::times(left, right)
    }
}
