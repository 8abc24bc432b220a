//! Exhaustive balanced bipartition search, used as a validation oracle.

use super::{Bipartition, PartitionError};
use crate::hypergraph::Hypergraph;

pub const ORACLE_VERTEX_LIMIT: usize = 20;

/// Minimum-cut exactly balanced bipartition by enumeration.
///
/// Block A is the block containing vertex 0, so each unordered split is
/// visited once (for odd `n` block A may be the larger or the smaller
/// side). Ties go to the lexicographically smallest block A.
pub fn brute_force_optimum(h: &Hypergraph) -> Result<(Bipartition, usize), PartitionError> {
    let n = h.num_vertices();
    if n == 0 {
        return Err(PartitionError::Empty);
    }
    if n > ORACLE_VERTEX_LIMIT {
        return Err(PartitionError::TooManyVertices {
            limit: ORACLE_VERTEX_LIMIT,
            got: n,
        });
    }
    let masks: Vec<u32> = h
        .hyperedges()
        .iter()
        .map(|e| e.members.iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let all = (1u32 << n) - 1;

    let mut sizes = vec![n.div_ceil(2)];
    if n % 2 == 1 {
        sizes.push(n / 2);
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for k in sizes {
        // vertex 0 is fixed in A; choose the other k-1 members from 1..n
        for_each_combination(n - 1, k - 1, |rest| {
            let mut block_a = Vec::with_capacity(k);
            block_a.push(0);
            block_a.extend(rest.iter().map(|&v| v + 1));
            let a = block_a.iter().fold(0u32, |m, &v| m | (1 << v));
            let b = all & !a;
            let cut = masks.iter().filter(|&&e| e & a != 0 && e & b != 0).count();
            let better = match &best {
                None => true,
                Some((c, set)) => cut < *c || (cut == *c && block_a < *set),
            };
            if better {
                best = Some((cut, block_a));
            }
        });
    }
    let (cut, block_a) = best.expect("at least one split");
    Ok((Bipartition::from_block_a(n, &block_a), cut))
}

/// Visit every k-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
