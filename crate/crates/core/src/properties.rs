//! Property tests over the public API, checked against brute-force
//! references defined here.

use crate::generators::{gen_random, GateSet, Seed};
use crate::hypergraph::{dual, expand_bipartite, export_hmetis, import_hmetis, incidence};
use crate::partition::{
    brute_force_optimum, cut_size, fm_bipartition, kl_bipartition, midpoint_partition, Block,
};
use crate::{emit_qasm, parse_qasm, Hypergraph, PartitionOptions, Role};
use proptest::prelude::*;

fn edge_sets(h: &Hypergraph) -> Vec<Vec<usize>> {
    h.hyperedges().iter().map(|e| e.members.clone()).collect()
}

fn naive_cut(edges: &[Vec<usize>], side: &[bool]) -> usize {
    edges
        .iter()
        .filter(|e| e.iter().any(|&v| side[v]) && e.iter().any(|&v| !side[v]))
        .count()
}

/// Minimum cut over every assignment whose block sizes differ by at most one.
fn naive_optimum(n: usize, edges: &[Vec<usize>]) -> usize {
    let mut best = usize::MAX;
    for mask in 0u32..(1 << n) {
        let a = mask.count_ones() as usize;
        if a.abs_diff(n - a) > 1 {
            continue;
        }
        let side: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        best = best.min(naive_cut(edges, &side));
    }
    best
}

/// Hypergraphs with 1..=max_v labelled vertices, 1..=max_e hyperedges and no
/// isolated vertex.
fn hypergraph(role: Role, max_v: usize, max_e: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_v, 1..=max_e)
        .prop_flat_map(move |(n, m)| {
            (
                Just(n),
                prop::collection::vec(1u32..(1u32 << n), m),
                prop::collection::vec(0..m, n),
            )
        })
        .prop_map(move |(n, masks, homes)| {
            let mut edges: Vec<Vec<usize>> = masks
                .iter()
                .map(|&mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
                .collect();
            for v in 0..n {
                if !edges.iter().any(|e| e.contains(&v)) {
                    edges[homes[v]].push(v);
                }
            }
            let vertices = (0..n).map(|v| format!("x{v}")).collect();
            let labelled = edges.into_iter().enumerate().map(|(i, e)| (format!("e{i}"), e));
            Hypergraph::new(role, vertices, labelled).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn double_dual_is_identity(h in hypergraph(Role::Primal, 10, 20)) {
        let d = dual(&h).unwrap();
        let dd = dual(&d).unwrap();
        prop_assert!(dd.same_structure(&h));
        prop_assert_eq!(dd.vertices(), h.vertices());
    }

    #[test]
    fn dual_incidence_is_transpose(h in hypergraph(Role::Generic, 10, 20)) {
        let primal = incidence(&h);
        let d = incidence(&dual(&h).unwrap());
        prop_assert_eq!(&d, &primal.transpose());
        for (r, row) in d.cells.iter().enumerate() {
            for (c, &cell) in row.iter().enumerate() {
                prop_assert_eq!(cell, primal.cells[c][r]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hmetis_round_trip(h in hypergraph(Role::Generic, 12, 20)) {
        let mut first = Vec::new();
        export_hmetis(&h, &mut first).unwrap();
        let back = import_hmetis(first.as_slice()).unwrap();
        prop_assert_eq!(edge_sets(&back), edge_sets(&h));
        let mut second = Vec::new();
        export_hmetis(&back, &mut second).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn json_round_trip(h in hypergraph(Role::Dual, 8, 12)) {
        let back = Hypergraph::from_json(&h.to_json()).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn qasm_round_trip(n in 3usize..10, seed in any::<u64>(), native in any::<bool>()) {
        let gs = if native { GateSet::native() } else { GateSet::independent() };
        let c = gen_random(n, &gs, Seed(seed), 1.5).unwrap();
        let text = emit_qasm(&c);
        let back = parse_qasm(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(emit_qasm(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn heuristics_between_optimum_and_midcut(h in hypergraph(Role::Generic, 10, 16), seed in any::<u64>()) {
        prop_assume!(h.num_vertices() >= 2);
        let n = h.num_vertices();
        let edges = edge_sets(&h);
        let opt = naive_optimum(n, &edges);
        let mid = cut_size(&h, &midpoint_partition(&h).unwrap()).unwrap().count;
        let opts = PartitionOptions { restarts: 4, ..PartitionOptions::with_seed(seed) };

        let (oracle_p, oracle_cut) = brute_force_optimum(&h).unwrap();
        prop_assert_eq!(oracle_cut, opt);
        prop_assert!(oracle_p.is_balanced(0.0));

        let (fm_p, fm) = fm_bipartition(&h, &opts).unwrap();
        let (kl_p, kl) = kl_bipartition(&expand_bipartite(&h), &opts).unwrap();
        for (p, r) in [(&fm_p, &fm), (&kl_p, &kl)] {
            prop_assert!(opt <= r.cut_count && r.cut_count <= mid);
            prop_assert_eq!(r.baseline_cut, mid);
            prop_assert!(p.is_balanced(0.0));
            let side: Vec<bool> = (0..n).map(|v| p.block_of(v) == Block::A).collect();
            prop_assert_eq!(naive_cut(&edges, &side), r.cut_count);
        }
    }

    #[test]
    fn reruns_are_identical(h in hypergraph(Role::Generic, 10, 16), seed in any::<u64>()) {
        prop_assume!(h.num_vertices() >= 2);
        let opts = PartitionOptions { restarts: 3, ..PartitionOptions::with_seed(seed) };
        prop_assert_eq!(fm_bipartition(&h, &opts).unwrap(), fm_bipartition(&h, &opts).unwrap());
        let g = expand_bipartite(&h);
        prop_assert_eq!(kl_bipartition(&g, &opts).unwrap(), kl_bipartition(&g, &opts).unwrap());
    }
}
