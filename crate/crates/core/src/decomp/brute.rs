use std::collections::HashMap;

use super::{additive_split, multiplicative_split, GateGraph};
use crate::error::{Error, Result};
use crate::mpoly::MPoly;

/// Largest number of live variables [`brute_force_is_rop`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Decides read-once-ness by searching for a top gate directly.
///
/// A read-once polynomial with at least two variables is either a sum of
/// two variable-disjoint read-once polynomials (its gate graph is
/// disconnected) or `h*g + c` with read-once `h, g`. Every such split of a
/// read-once polynomial has read-once parts, since they are scaled
/// restrictions of it, so the search only has to find one split per level.
/// Independent of the `B`-polynomial machinery; used to cross-check it.
pub fn brute_force_is_rop(p: &MPoly) -> Result<bool> {
    if !p.is_multilinear() {
        return Err(Error::NotMultilinear);
    }
    let found = p.variables().len();
    if found > BRUTE_FORCE_LIMIT {
        return Err(Error::TooManyVariables {
            found,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut memo = HashMap::new();
    Ok(decide(p.compact().0, &mut memo))
}

// `p` is always compacted, so arity equals the number of live variables.
fn decide(p: MPoly, memo: &mut HashMap<MPoly, bool>) -> bool {
    if p.arity() <= 1 {
        return true;
    }
    if let Some(&known) = memo.get(&p) {
        return known;
    }
    let graph = GateGraph::of(&p);
    let components = graph.components();
    let verdict = if components.len() > 1 {
        let (left, right) = additive_split(&p, &components[0]).expect("cut along a component");
        decide(left.compact().0, memo) && decide(right.compact().0, memo)
    } else {
        graph.edges().into_iter().any(|(i, j)| {
            multiplicative_split(&p, i, j)
                .is_ok_and(|s| decide(s.h.compact().0, memo) && decide(s.g.compact().0, memo))
        })
    };
    memo.insert(p, verdict);
    verdict
}
