//! Balanced bipartitioning of hypergraphs.
//!
//! The cost of a bipartition is the cut-net count: every hyperedge with
//! members on both sides costs exactly one, whatever its arity. Balance is
//! exact by default, i.e. block weights `ceil(W/2)` and `floor(W/2)`.

mod fm;
mod kl;
mod oracle;
mod pipeline;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::Seed;
use crate::hypergraph::{Hypergraph, HypergraphError};

pub use fm::fm_bipartition;
pub use kl::kl_bipartition;
pub use oracle::{brute_force_optimum, ORACLE_VERTEX_LIMIT};
pub use pipeline::{
    precedence_feasible, spatial_cut, spatial_cut_hypergraph, temporal_cut,
    temporal_cut_hypergraph, TemporalReport,
};

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("assignment covers {got} vertices, hypergraph has {expected}")]
    PartialAssignment { expected: usize, got: usize },
    #[error("need at least {needed} weighted vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("exhaustive search is limited to {limit} vertices, got {got}")]
    TooManyVertices { limit: usize, got: usize },
    #[error("hypergraph is empty")]
    Empty,
    #[error("spatial cut needs width >= 2, got {0}")]
    WidthTooSmall(usize),
    #[error("circuit has no multi-qubit gates, so there is nothing to cut")]
    NoMultiQubitGates,
    #[error("temporal cut needs at least 2 multi-qubit gates, got {0}")]
    TooFewGates(usize),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    A,
    B,
}

impl Block {
    pub fn other(self) -> Block {
        match self {
            Block::A => Block::B,
            Block::B => Block::A,
        }
    }

    fn index(self) -> usize {
        match self {
            Block::A => 0,
            Block::B => 1,
        }
    }
}

/// Allowed block weight range `[lo, hi]` for a total weight `W`.
///
/// `epsilon = 0` gives exact balance. Otherwise the heavier block may reach
/// `floor((1 + epsilon) * ceil(W/2))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BalanceWindow {
    pub lo: u64,
    pub hi: u64,
}

impl BalanceWindow {
    pub fn new(total: u64, epsilon: f64) -> Self {
        let ceil_half = total.div_ceil(2);
        let hi = if epsilon > 0.0 {
            (((1.0 + epsilon) * ceil_half as f64).floor() as u64).clamp(ceil_half, total)
        } else {
            ceil_half
        };
        BalanceWindow { lo: total - hi, hi }
    }

    pub fn contains(&self, weight: u64) -> bool {
        (self.lo..=self.hi).contains(&weight)
    }
}

/// Total assignment of vertices to blocks, with per-vertex balance weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    assignment: Vec<Block>,
    weights: Vec<u32>,
}

impl Bipartition {
    pub fn new(assignment: Vec<Block>, weights: Vec<u32>) -> Self {
        assert_eq!(assignment.len(), weights.len(), "one weight per vertex");
        Bipartition {
            assignment,
            weights,
        }
    }

    pub fn unit(assignment: Vec<Block>) -> Self {
        let weights = vec![1; assignment.len()];
        Bipartition::new(assignment, weights)
    }

    /// Unit-weight bipartition with the listed vertices in block A.
    pub fn from_block_a(n: usize, block_a: &[usize]) -> Self {
        let mut assignment = vec![Block::B; n];
        for &v in block_a {
            assignment[v] = Block::A;
        }
        Bipartition::unit(assignment)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[Block] {
        &self.assignment
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn block_of(&self, v: usize) -> Block {
        self.assignment[v]
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }

    pub fn block_weight(&self, b: Block) -> u64 {
        self.assignment
            .iter()
            .zip(&self.weights)
            .filter(|(x, _)| **x == b)
            .map(|(_, &w)| w as u64)
            .sum()
    }

    pub fn is_balanced(&self, epsilon: f64) -> bool {
        let window = BalanceWindow::new(self.total_weight(), epsilon);
        window.contains(self.block_weight(Block::A)) && window.contains(self.block_weight(Block::B))
    }

    /// Vertex indices of `b`, ascending.
    pub fn members(&self, b: Block) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.assignment[v] == b).collect()
    }
}

/// Result of evaluating a bipartition: number and ids of cut hyperedges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub count: usize,
    pub ids: Vec<usize>,
}

/// Count hyperedges whose members fall in both blocks.
pub fn cut_size(h: &Hypergraph, p: &Bipartition) -> Result<Cut, PartitionError> {
    if p.len() != h.num_vertices() {
        return Err(PartitionError::PartialAssignment {
            expected: h.num_vertices(),
            got: p.len(),
        });
    }
    let ids: Vec<usize> = h
        .hyperedges()
        .iter()
        .filter(|e| {
            let first = p.block_of(e.members[0]);
            e.members.iter().any(|&m| p.block_of(m) != first)
        })
        .map(|e| e.id)
        .collect();
    Ok(Cut {
        count: ids.len(),
        ids,
    })
}

/// Split at the index midpoint: the first `ceil(n/2)` vertices form block A.
pub fn midpoint_partition(h: &Hypergraph) -> Result<Bipartition, PartitionError> {
    if h.is_empty() {
        return Err(PartitionError::Empty);
    }
    Ok(midpoint_weighted(&vec![1; h.num_vertices()]))
}

/// Block A takes vertices in index order until it holds `ceil(W/2)` weight.
/// Zero-weight vertices follow the block of the vertex before them.
pub(crate) fn midpoint_weighted(weights: &[u32]) -> Bipartition {
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    let target = total.div_ceil(2);
    let mut acc = 0u64;
    let assignment = weights
        .iter()
        .map(|&w| {
            if w == 0 {
                return if acc < target || target == 0 { Block::A } else { Block::B };
            }
            if acc + w as u64 <= target {
                acc += w as u64;
                Block::A
            } else {
                Block::B
            }
        })
        .collect();
    Bipartition::new(assignment, weights.to_vec())
}

/// Uniformly shuffled balanced start for unit or zero/one weights.
pub(crate) fn random_balanced(weights: &[u32], seed: Seed) -> Bipartition {
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    let target = total.div_ceil(2);
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.shuffle(&mut seed.rng());
    let mut assignment = vec![Block::B; weights.len()];
    let mut acc = 0u64;
    for v in order {
        let w = weights[v] as u64;
        if w > 0 && acc + w <= target {
            acc += w;
            assignment[v] = Block::A;
        }
    }
    Bipartition::new(assignment, weights.to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    Midcut,
    Kl,
    Fm,
    Oracle,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::Midcut => "midcut",
            Heuristic::Kl => "kl",
            Heuristic::Fm => "fm",
            Heuristic::Oracle => "oracle",
        })
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "midcut" => Ok(Heuristic::Midcut),
            "kl" => Ok(Heuristic::Kl),
            "fm" => Ok(Heuristic::Fm),
            "oracle" => Ok(Heuristic::Oracle),
            other => Err(format!("unknown heuristic `{other}`")),
        }
    }
}

/// Knobs shared by the FM and KL drivers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionOptions {
    pub seed: Seed,
    /// Random balanced starts, in addition to the optional mid-cut start.
    pub restarts: usize,
    pub include_midcut_start: bool,
    pub epsilon: f64,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions {
            seed: Seed::default(),
            restarts: 10,
            include_midcut_start: true,
            epsilon: 0.0,
        }
    }
}

impl PartitionOptions {
    pub fn with_seed(seed: u64) -> Self {
        PartitionOptions {
            seed: Seed(seed),
            ..Default::default()
        }
    }

    /// Starting partitions in restart order: mid-cut first when enabled,
    /// then the seeded random starts.
    pub(crate) fn starts(&self, weights: &[u32]) -> Vec<Bipartition> {
        let mut starts = Vec::with_capacity(self.restarts + 1);
        if self.include_midcut_start {
            starts.push(midpoint_weighted(weights));
        }
        for r in 0..self.restarts {
            starts.push(random_balanced(weights, self.seed.derive(r as u64)));
        }
        starts
    }
}

/// Outcome of one bipartitioning run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub cut_count: usize,
    pub cut_ids: Vec<usize>,
    pub blocks: [Vec<String>; 2],
    pub baseline_cut: usize,
    pub reduction_pct: f64,
    pub heuristic: Heuristic,
    pub seed: u64,
    pub restarts: usize,
}

impl CutReport {
    pub(crate) fn build(
        h: &Hypergraph,
        p: &Bipartition,
        baseline_cut: usize,
        heuristic: Heuristic,
        opts: &PartitionOptions,
    ) -> Result<CutReport, PartitionError> {
        let cut = cut_size(h, p)?;
        let labels = |b| {
            p.members(b)
                .into_iter()
                .map(|v| h.vertices()[v].clone())
                .collect::<Vec<_>>()
        };
        Ok(CutReport {
            cut_count: cut.count,
            cut_ids: cut.ids,
            blocks: [labels(Block::A), labels(Block::B)],
            baseline_cut,
            reduction_pct: reduction_pct(baseline_cut, cut.count),
            heuristic,
            seed: opts.seed.0,
            restarts: opts.restarts,
        })
    }
}

/// `100 * (baseline - cut) / baseline`, or 0 when the baseline is 0.
pub fn reduction_pct(baseline: usize, cut: usize) -> f64 {
    if baseline == 0 {
        0.0
    } else {
        100.0 * (baseline as f64 - cut as f64) / baseline as f64
    }
}
