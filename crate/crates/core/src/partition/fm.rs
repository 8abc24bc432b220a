//! Fiduccia–Mattheyses refinement with gain buckets.

use std::collections::BTreeSet;

use super::{
    cut_size, midpoint_weighted, BalanceWindow, Bipartition, Block, CutReport, Heuristic,
    PartitionError, PartitionOptions,
};
use crate::hypergraph::Hypergraph;

/// Gain buckets over `[-max_gain, max_gain]`; each bucket keeps vertex
/// indices ordered so the lowest index wins ties.
struct GainBuckets {
    offset: i64,
    buckets: Vec<BTreeSet<usize>>,
}

impl GainBuckets {
    fn new(max_gain: usize) -> Self {
        GainBuckets {
            offset: max_gain as i64,
            buckets: vec![BTreeSet::new(); 2 * max_gain + 1],
        }
    }

    fn slot(&self, gain: i64) -> usize {
        (gain + self.offset) as usize
    }

    fn insert(&mut self, v: usize, gain: i64) {
        let s = self.slot(gain);
        self.buckets[s].insert(v);
    }

    fn remove(&mut self, v: usize, gain: i64) {
        let s = self.slot(gain);
        self.buckets[s].remove(&v);
    }

    /// Highest-gain vertex accepted by `feasible`, lowest index first.
    fn best(&self, mut feasible: impl FnMut(usize) -> bool) -> Option<usize> {
        self.buckets
            .iter()
            .rev()
            .flat_map(|b| b.iter().copied())
            .find(|&v| feasible(v))
    }
}

struct Engine<'a> {
    h: &'a Hypergraph,
    incident: Vec<Vec<usize>>,
    weights: &'a [u32],
    max_degree: usize,
    window: BalanceWindow,
    slack: u64,
}

impl<'a> Engine<'a> {
    fn new(h: &'a Hypergraph, weights: &'a [u32], epsilon: f64) -> Self {
        let incident = h.incident_edges();
        let max_degree = incident.iter().map(Vec::len).max().unwrap_or(0);
        let total = weights.iter().map(|&w| w as u64).sum();
        Engine {
            h,
            incident,
            weights,
            max_degree,
            window: BalanceWindow::new(total, epsilon),
            slack: weights.iter().copied().max().unwrap_or(0) as u64,
        }
    }

    /// Run passes until one fails to improve. Returns the final cut.
    fn refine(&self, side: &mut [Block]) -> usize {
        let mut cut = self.pass(side);
        loop {
            let before = cut;
            cut = self.pass(side);
            if cut >= before {
                return cut;
            }
        }
    }

    /// One FM pass with best-prefix rollback. Returns the cut afterwards.
    ///
    /// A move may push a block one unit of vertex weight past the balance
    /// window; only prefixes inside the window are rollback candidates.
    fn pass(&self, side: &mut [Block]) -> usize {
        let h = self.h;
        let n = h.num_vertices();
        let mut pins: Vec<[usize; 2]> = h
            .hyperedges()
            .iter()
            .map(|e| {
                let mut c = [0, 0];
                for &m in &e.members {
                    c[side[m].index()] += 1;
                }
                c
            })
            .collect();
        let mut cut = pins.iter().filter(|c| c[0] > 0 && c[1] > 0).count();
        let mut block_weight = [0u64; 2];
        for v in 0..n {
            block_weight[side[v].index()] += self.weights[v] as u64;
        }

        let mut gain = vec![0i64; n];
        for v in 0..n {
            let from = side[v].index();
            for &e in &self.incident[v] {
                if pins[e][from] == 1 {
                    gain[v] += 1;
                }
                if pins[e][1 - from] == 0 {
                    gain[v] -= 1;
                }
            }
        }
        let mut buckets = GainBuckets::new(self.max_degree);
        for (v, &g) in gain.iter().enumerate() {
            buckets.insert(v, g);
        }
        let mut locked = vec![false; n];

        let start_cut = cut;
        let mut best_cut = cut;
        let mut best_len = 0;
        let mut moves = Vec::new();
        let lo = self.window.lo.saturating_sub(self.slack);
        let hi = self.window.hi + self.slack;

        loop {
            let pick = buckets.best(|v| {
                let w = self.weights[v] as u64;
                let from = side[v].index();
                let new_from = block_weight[from] - w;
                let new_to = block_weight[1 - from] + w;
                (lo..=hi).contains(&new_from) && (lo..=hi).contains(&new_to)
            });
            let Some(v) = pick else { break };

            buckets.remove(v, gain[v]);
            locked[v] = true;
            let from = side[v].index();
            let to = 1 - from;
            cut = (cut as i64 - gain[v]) as usize;

            for &e in &self.incident[v] {
                let members = &h.hyperedges()[e].members;
                let mut bump = |u: usize, delta: i64, gain: &mut [i64]| {
                    buckets.remove(u, gain[u]);
                    gain[u] += delta;
                    buckets.insert(u, gain[u]);
                };
                if pins[e][to] == 0 {
                    for &u in members {
                        if !locked[u] {
                            bump(u, 1, &mut gain);
                        }
                    }
                } else if pins[e][to] == 1 {
                    for &u in members {
                        if !locked[u] && side[u].index() == to {
                            bump(u, -1, &mut gain);
                        }
                    }
                }
                pins[e][from] -= 1;
                pins[e][to] += 1;
                if pins[e][from] == 0 {
                    for &u in members {
                        if !locked[u] {
                            bump(u, -1, &mut gain);
                        }
                    }
                } else if pins[e][from] == 1 {
                    for &u in members {
                        if !locked[u] && side[u].index() == from {
                            bump(u, 1, &mut gain);
                        }
                    }
                }
            }
            side[v] = side[v].other();
            block_weight[from] -= self.weights[v] as u64;
            block_weight[to] += self.weights[v] as u64;
            moves.push(v);

            let balanced =
                self.window.contains(block_weight[0]) && self.window.contains(block_weight[1]);
            if balanced && cut < best_cut {
                best_cut = cut;
                best_len = moves.len();
            }
        }

        for &v in moves[best_len..].iter().rev() {
            side[v] = side[v].other();
        }
        debug_assert!(best_cut <= start_cut);
        best_cut
    }
}

/// Multi-start FM bipartitioning of `h` with unit vertex weights.
///
/// Starts are the mid-cut split (when enabled) followed by `restarts`
/// seeded random balanced splits; the lowest final cut wins, ties going to
/// the earliest start.
pub fn fm_bipartition(
    h: &Hypergraph,
    opts: &PartitionOptions,
) -> Result<(Bipartition, CutReport), PartitionError> {
    if h.num_vertices() < 2 {
        return Err(PartitionError::TooFewVertices {
            needed: 2,
            got: h.num_vertices(),
        });
    }
    let weights = vec![1u32; h.num_vertices()];
    let (best, _) = fm_weighted(h, &weights, opts)?;
    let baseline = cut_size(h, &midpoint_weighted(&weights))?.count;
    let report = CutReport::build(h, &best, baseline, Heuristic::Fm, opts)?;
    Ok((best, report))
}

pub(crate) fn fm_weighted(
    h: &Hypergraph,
    weights: &[u32],
    opts: &PartitionOptions,
) -> Result<(Bipartition, usize), PartitionError> {
    let engine = Engine::new(h, weights, opts.epsilon);
    let mut best: Option<(Bipartition, usize)> = None;
    for start in opts.starts(weights) {
        let mut side = start.assignment().to_vec();
        let cut = engine.refine(&mut side);
        if best.as_ref().is_none_or(|(_, c)| cut < *c) {
            best = Some((Bipartition::new(side, weights.to_vec()), cut));
        }
    }
    best.ok_or(PartitionError::TooFewVertices { needed: 1, got: 0 })
}
