use std::collections::{BTreeMap, BTreeSet};

use crate::mpoly::MPoly;

/// Union-find over `0..n` with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Gate graph of a multilinear polynomial: vertices are the live variables,
/// and `x_i -- x_j` is an edge iff the mixed derivative in `x_i, x_j` is
/// nonzero, i.e. iff some monomial contains both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateGraph {
    vertices: BTreeSet<usize>,
    adj: BTreeMap<usize, BTreeSet<usize>>,
}

impl GateGraph {
    pub fn of(p: &MPoly) -> Self {
        let vertices = p.variables();
        let mut adj: BTreeMap<usize, BTreeSet<usize>> =
            vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for (m, _) in p.terms() {
            let vars: Vec<usize> = m.vars().collect();
            for (k, &a) in vars.iter().enumerate() {
                for &b in &vars[k + 1..] {
                    adj.get_mut(&a).unwrap().insert(b);
                    adj.get_mut(&b).unwrap().insert(a);
                }
            }
        }
        Self { vertices, adj }
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(&i).is_some_and(|n| n.contains(&j))
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.get(&i).into_iter().flatten().copied()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .flat_map(|(&i, n)| n.range(i + 1..).map(move |&j| (i, j)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        let index: BTreeMap<usize, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, &v)| (v, k))
            .collect();
        let mut dsu = DisjointSet::new(self.vertices.len());
        for (i, j) in self.edges() {
            dsu.union(index[&i], index[&j]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (&v, &k) in &index {
            groups.entry(dsu.find(k)).or_default().insert(v);
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort_by_key(|c| *c.iter().next().unwrap());
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The induced subgraph on all vertices but `k`.
    pub fn without_vertex(&self, k: usize) -> GateGraph {
        let mut g = self.clone();
        g.vertices.remove(&k);
        g.adj.remove(&k);
        for n in g.adj.values_mut() {
            n.remove(&k);
        }
        g
    }
}
