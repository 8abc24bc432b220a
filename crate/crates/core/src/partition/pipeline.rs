//! Spatial (gate-cut) and temporal (wire-cut) pipelines.

use serde::{Deserialize, Serialize};

use super::{
    cut_size, fm_bipartition, kl_bipartition, midpoint_partition, oracle::brute_force_optimum,
    Bipartition, Block, CutReport, Heuristic, PartitionError, PartitionOptions,
};
use crate::circuit::Circuit;
use crate::hypergraph::{dual, expand_bipartite, primal_from_circuit, Hypergraph};

/// Bipartition the qubits of `c`; cut hyperedges are gates needing an ebit.
pub fn spatial_cut(
    c: &Circuit,
    heuristic: Heuristic,
    opts: &PartitionOptions,
) -> Result<CutReport, PartitionError> {
    let width = c.width();
    if width < 2 {
        return Err(PartitionError::WidthTooSmall(width));
    }
    if !c.gates().iter().any(|g| g.is_multiqubit()) {
        return Err(PartitionError::NoMultiQubitGates);
    }
    spatial_cut_hypergraph(&primal_from_circuit(c, true), heuristic, opts)
}

/// Spatial cut of an already built primal hypergraph.
pub fn spatial_cut_hypergraph(
    h: &Hypergraph,
    heuristic: Heuristic,
    opts: &PartitionOptions,
) -> Result<CutReport, PartitionError> {
    if h.num_vertices() < 2 {
        return Err(PartitionError::WidthTooSmall(h.num_vertices()));
    }
    run(h, heuristic, opts).map(|(_, r)| r)
}

fn run(
    h: &Hypergraph,
    heuristic: Heuristic,
    opts: &PartitionOptions,
) -> Result<(Bipartition, CutReport), PartitionError> {
    let midpoint = midpoint_partition(h)?;
    let baseline = cut_size(h, &midpoint)?.count;
    let partition = match heuristic {
        Heuristic::Midcut => midpoint,
        Heuristic::Fm => fm_bipartition(h, opts)?.0,
        Heuristic::Kl => {
            let (p, _) = kl_bipartition(&expand_bipartite(h), opts)?;
            Bipartition::unit(p.assignment()[..h.num_vertices()].to_vec())
        }
        Heuristic::Oracle => brute_force_optimum(h)?.0,
    };
    let report = CutReport::build(h, &partition, baseline, heuristic, opts)?;
    Ok((partition, report))
}

/// Wire-cut report: the dual-hypergraph cut plus the two gate segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemporalReport {
    #[serde(flatten)]
    pub cut: CutReport,
    /// Gate ids (program-order positions among multi-qubit gates).
    pub segments: [Vec<usize>; 2],
    pub precedence_feasible: bool,
}

/// Bipartition the multi-qubit gates of `c` into two segments; cut
/// hyperedges are qubit wires crossing between segments.
pub fn temporal_cut(
    c: &Circuit,
    heuristic: Heuristic,
    opts: &PartitionOptions,
) -> Result<TemporalReport, PartitionError> {
    temporal_cut_hypergraph(&primal_from_circuit(c, false), heuristic, opts)
}

/// Temporal cut of a primal hypergraph whose hyperedge order is program
/// order. Arity-1 hyperedges are dropped first.
pub fn temporal_cut_hypergraph(
    primal: &Hypergraph,
    heuristic: Heuristic,
    opts: &PartitionOptions,
) -> Result<TemporalReport, PartitionError> {
    let primal = primal.filter_arity(2);
    if primal.num_hyperedges() < 2 {
        return Err(PartitionError::TooFewGates(primal.num_hyperedges()));
    }
    let primal = drop_isolated(&primal);
    let d = dual(&primal)?;
    let (partition, cut) = run(&d, heuristic, opts)?;
    let segments = [partition.members(Block::A), partition.members(Block::B)];
    let precedence_feasible = precedence_feasible(&primal, &partition);
    Ok(TemporalReport {
        cut,
        segments,
        precedence_feasible,
    })
}

fn drop_isolated(h: &Hypergraph) -> Hypergraph {
    let incident = h.incident_edges();
    if incident.iter().all(|i| !i.is_empty()) {
        return h.clone();
    }
    let keep: Vec<usize> = (0..h.num_vertices()).filter(|&v| !incident[v].is_empty()).collect();
    let mut remap = vec![usize::MAX; h.num_vertices()];
    for (new, &old) in keep.iter().enumerate() {
        remap[old] = new;
    }
    let vertices = keep.iter().map(|&v| h.vertices()[v].clone()).collect();
    let edges = h
        .hyperedges()
        .iter()
        .map(|e| (e.label.clone(), e.members.iter().map(|&m| remap[m]).collect()));
    Hypergraph::new(h.role(), vertices, edges).expect("only isolated vertices removed")
}

/// Whether one segment can run entirely before the other.
///
/// `gates` assigns each hyperedge of `primal` (a gate, in program order) to
/// a segment. Dependencies run along each qubit wire, so a segment X can
/// precede Y iff on every wire all X gates come before all Y gates.
pub fn precedence_feasible(primal: &Hypergraph, gates: &Bipartition) -> bool {
    let wires = primal.incident_edges();
    let ordered = |first: Block| {
        wires.iter().all(|wire| {
            let mut seen_second = false;
            for &g in wire {
                if gates.block_of(g) == first {
                    if seen_second {
                        return false;
                    }
                } else {
                    seen_second = true;
                }
            }
            true
        })
    };
    ordered(Block::A) || ordered(Block::B)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};
    use crate::generators::{gen_full, gen_random, GateSet, Seed};
    use crate::hypergraph::Role;

    fn cz_circuit(n: usize, pairs: &[(usize, usize)]) -> Circuit {
        let gates = pairs
            .iter()
            .map(|&(a, b)| Gate::new(GateKind::Cz, &[a, b], &[]).unwrap())
            .collect();
        Circuit::from_gates("t", n, gates).unwrap()
    }

    #[test]
    fn spatial_full7_has_no_reduction() {
        let r = spatial_cut(&gen_full(7).unwrap(), Heuristic::Fm, &PartitionOptions::default()).unwrap();
        assert_eq!((r.baseline_cut, r.cut_count), (12, 12));
        assert_eq!(r.reduction_pct, 0.0);
    }

    #[test]
    fn spatial_disjoint_pairs() {
        let c = cz_circuit(4, &[(0, 1), (2, 3)]);
        for h in [Heuristic::Fm, Heuristic::Kl] {
            let r = spatial_cut(&c, h, &PartitionOptions::default()).unwrap();
            assert_eq!((r.baseline_cut, r.cut_count), (0, 0));
        }
    }

    #[test]
    fn spatial_random_not_worse_than_baseline() {
        let c = gen_random(8, &GateSet::independent(), Seed(7), 2.0).unwrap();
        for h in [Heuristic::Fm, Heuristic::Kl] {
            let r = spatial_cut(&c, h, &PartitionOptions::default()).unwrap();
            assert!(r.cut_count <= r.baseline_cut);
        }
    }

    #[test]
    fn spatial_needs_width_two() {
        let c = Circuit::from_gates("u", 2, vec![Gate::fixed(GateKind::H, &[0])]).unwrap();
        assert!(matches!(
            spatial_cut(&c, Heuristic::Fm, &PartitionOptions::default()),
            Err(PartitionError::WidthTooSmall(1))
        ));
    }

    #[test]
    fn spatial_needs_a_multiqubit_gate() {
        let gates = vec![Gate::fixed(GateKind::H, &[0]), Gate::fixed(GateKind::H, &[1])];
        let c = Circuit::from_gates("u", 2, gates).unwrap();
        assert!(matches!(
            spatial_cut(&c, Heuristic::Fm, &PartitionOptions::default()),
            Err(PartitionError::NoMultiQubitGates)
        ));
    }

    #[test]
    fn temporal_same_gate_twice() {
        let c = cz_circuit(2, &[(0, 1), (0, 1)]);
        let r = temporal_cut(&c, Heuristic::Fm, &PartitionOptions::default()).unwrap();
        assert_eq!(r.segments[0].len(), 1);
        assert_eq!(r.segments[1].len(), 1);
        assert_eq!(r.cut.cut_count, 2);
        assert!(r.precedence_feasible);
    }

    #[test]
    fn temporal_disjoint_groups() {
        let c = cz_circuit(4, &[(0, 1), (0, 1), (2, 3), (2, 3)]);
        let r = temporal_cut(&c, Heuristic::Fm, &PartitionOptions::default()).unwrap();
        assert_eq!(r.cut.cut_count, 0);
        assert!(r.precedence_feasible);
    }

    #[test]
    fn temporal_needs_two_gates() {
        let c = cz_circuit(2, &[(0, 1)]);
        assert!(matches!(
            temporal_cut(&c, Heuristic::Fm, &PartitionOptions::default()),
            Err(PartitionError::TooFewGates(1))
        ));
    }

    #[test]
    fn precedence_detects_interleaving() {
        // three gates on one wire: A B A cannot be split into two segments
        let vs = vec!["q0".to_string(), "q1".to_string()];
        let h = Hypergraph::new(Role::Primal, vs, vec![("cz", vec![0, 1]); 3]).unwrap();
        let interleaved = Bipartition::from_block_a(3, &[0, 2]);
        assert!(!precedence_feasible(&h, &interleaved));
        let prefix = Bipartition::from_block_a(3, &[0, 1]);
        assert!(precedence_feasible(&h, &prefix));
        let suffix = Bipartition::from_block_a(3, &[2]);
        assert!(precedence_feasible(&h, &suffix));
    }

    #[test]
    fn temporal_report_serialises_flat() {
        let c = cz_circuit(3, &[(0, 1), (1, 2), (0, 2)]);
        let r = temporal_cut(&c, Heuristic::Fm, &PartitionOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["cut_count", "cut_ids", "blocks", "baseline_cut", "reduction_pct", "heuristic", "seed", "restarts", "segments", "precedence_feasible"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
