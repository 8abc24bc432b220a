//! Kernighan–Lin bisection over the connector-expanded graph.
//!
//! Only weight-1 (original) vertices are swapped. Connectors sit out the
//! swaps and are moved to the majority block of their members after each
//! pass. Partition quality is always judged on the original hypergraph.

use std::collections::HashMap;

use super::{Bipartition, Block, CutReport, Heuristic, PartitionError, PartitionOptions};
use crate::hypergraph::{ExpandedGraph, Hypergraph, Role};

struct Graph<'a> {
    g: &'a ExpandedGraph,
    /// Aggregated neighbour weights per vertex.
    adj: Vec<HashMap<usize, u32>>,
    /// Members of each connector, indexed by connector position.
    connector_members: Vec<Vec<usize>>,
    hyperedge_members: Vec<Vec<usize>>,
}

impl<'a> Graph<'a> {
    fn new(g: &'a ExpandedGraph) -> Self {
        let n = g.vertices.len();
        let mut adj = vec![HashMap::new(); n];
        let mut connector_members = vec![Vec::new(); g.num_connectors()];
        for &(a, b) in &g.edges {
            *adj[a].entry(b).or_insert(0) += 1;
            *adj[b].entry(a).or_insert(0) += 1;
            for (c, m) in [(a, b), (b, a)] {
                if g.is_connector(c) {
                    connector_members[c - g.num_original].push(m);
                }
            }
        }
        Graph {
            g,
            adj,
            connector_members,
            hyperedge_members: g.hyperedge_members(),
        }
    }

    fn expanded_cut(&self, side: &[Block]) -> usize {
        self.g.edges.iter().filter(|&&(a, b)| side[a] != side[b]).count()
    }

    fn original_cut(&self, side: &[Block]) -> usize {
        self.hyperedge_members
            .iter()
            .filter(|m| m.iter().any(|&v| side[v] != side[m[0]]))
            .count()
    }

    /// Move each connector to the block holding most of its members.
    fn reassign_connectors(&self, side: &mut [Block]) {
        for (i, members) in self.connector_members.iter().enumerate() {
            let c = self.g.num_original + i;
            let in_a = members.iter().filter(|&&m| side[m] == Block::A).count();
            let in_b = members.len() - in_a;
            if in_a > in_b {
                side[c] = Block::A;
            } else if in_b > in_a {
                side[c] = Block::B;
            }
        }
    }

    fn weight(&self, a: usize, b: usize) -> i64 {
        self.adj[a].get(&b).copied().unwrap_or(0) as i64
    }

    /// External minus internal edge weight of `v`.
    fn d_value(&self, v: usize, side: &[Block]) -> i64 {
        self.adj[v]
            .iter()
            .map(|(&u, &w)| if side[u] != side[v] { w as i64 } else { -(w as i64) })
            .sum()
    }

    /// One KL pass over the movable vertices, rolled back to the best
    /// prefix. Returns the total gain kept (positive means improvement).
    fn pass(&self, side: &mut [Block], movable: &[usize]) -> i64 {
        let mut d: HashMap<usize, i64> = movable.iter().map(|&v| (v, self.d_value(v, side))).collect();
        let mut free_a: Vec<usize> = movable.iter().copied().filter(|&v| side[v] == Block::A).collect();
        let mut free_b: Vec<usize> = movable.iter().copied().filter(|&v| side[v] == Block::B).collect();

        let mut swaps = Vec::new();
        let mut total = 0i64;
        let mut best_total = 0i64;
        let mut best_len = 0usize;

        while !free_a.is_empty() && !free_b.is_empty() {
            let mut pick: Option<(i64, usize, usize)> = None;
            for (ia, &a) in free_a.iter().enumerate() {
                for (ib, &b) in free_b.iter().enumerate() {
                    let gain = d[&a] + d[&b] - 2 * self.weight(a, b);
                    if pick.is_none_or(|(g, _, _)| gain > g) {
                        pick = Some((gain, ia, ib));
                    }
                }
            }
            let (gain, ia, ib) = pick.expect("both sides non-empty");
            let a = free_a.remove(ia);
            let b = free_b.remove(ib);

            for &x in free_a.iter() {
                *d.get_mut(&x).unwrap() += 2 * self.weight(x, a) - 2 * self.weight(x, b);
            }
            for &y in free_b.iter() {
                *d.get_mut(&y).unwrap() += 2 * self.weight(y, b) - 2 * self.weight(y, a);
            }
            side[a] = Block::B;
            side[b] = Block::A;
            swaps.push((a, b));
            total += gain;
            if total > best_total {
                best_total = total;
                best_len = swaps.len();
            }
        }

        for &(a, b) in swaps[best_len..].iter().rev() {
            side[a] = Block::A;
            side[b] = Block::B;
        }
        best_total
    }

    /// Iterate passes and connector reassignment while the expanded cut
    /// strictly drops. Returns the best original-hypergraph state seen.
    fn refine(&self, side: &mut Vec<Block>, movable: &[usize]) -> usize {
        self.reassign_connectors(side);
        let mut best_side = side.clone();
        let mut best_cut = self.original_cut(side);
        let mut expanded = self.expanded_cut(side);
        loop {
            self.pass(side, movable);
            self.reassign_connectors(side);
            let next = self.expanded_cut(side);
            let original = self.original_cut(side);
            if original < best_cut {
                best_cut = original;
                best_side.clone_from(side);
            }
            if next >= expanded {
                break;
            }
            expanded = next;
        }
        *side = best_side;
        best_cut
    }
}

/// Multi-start Kernighan–Lin on a connector-expanded graph.
///
/// The returned report scores the partition on the original hypergraph;
/// its blocks list original vertices only. Connectors stay in the returned
/// bipartition with weight 0.
pub fn kl_bipartition(
    g: &ExpandedGraph,
    opts: &PartitionOptions,
) -> Result<(Bipartition, CutReport), PartitionError> {
    let movable: Vec<usize> = (0..g.vertices.len())
        .filter(|&v| g.balance_weight[v] == 1)
        .collect();
    if movable.len() < 2 {
        return Err(PartitionError::TooFewVertices {
            needed: 2,
            got: movable.len(),
        });
    }
    let graph = Graph::new(g);
    let weights = g.balance_weight.clone();

    let mut best: Option<(Vec<Block>, usize)> = None;
    for start in opts.starts(&weights) {
        let mut side = start.assignment().to_vec();
        let cut = graph.refine(&mut side, &movable);
        if best.as_ref().is_none_or(|(_, c)| cut < *c) {
            best = Some((side, cut));
        }
    }
    let (side, _) = best.expect("at least one start");

    let original = original_hypergraph(&graph);
    let midpoint = super::midpoint_weighted(&vec![1; g.num_original]);
    let baseline = super::cut_size(&original, &midpoint)?.count;
    let orig_part = Bipartition::unit(side[..g.num_original].to_vec());
    let report = CutReport::build(&original, &orig_part, baseline, Heuristic::Kl, opts)?;
    Ok((Bipartition::new(side, weights), report))
}

fn original_hypergraph(graph: &Graph<'_>) -> Hypergraph {
    let g = graph.g;
    let vertices = g.vertices[..g.num_original].to_vec();
    // arity-1 hyperedges left no edges; any singleton keeps the ids aligned
    // and can never be cut
    let edges = graph.hyperedge_members.iter().map(|m| {
        let members = if m.is_empty() { vec![0] } else { m.clone() };
        ("net", members)
    });
    Hypergraph::new(Role::Generic, vertices, edges).expect("rebuilt from a valid expansion")
}
