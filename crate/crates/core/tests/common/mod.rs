//! Reference implementations and literal tables shared by integration tests.
//! Nothing here calls into the partitioners under test.

#![allow(dead_code)]

use hypercut::Hypergraph;

/// Table 1: rows are gates, columns are qubits 0..6.
pub const TABLE1: [[u8; 6]; 10] = [
    [1, 1, 0, 0, 0, 1],
    [1, 0, 0, 1, 0, 0],
    [0, 1, 1, 0, 1, 0],
    [1, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 1],
    [0, 1, 1, 0, 0, 1],
    [1, 0, 0, 1, 0, 1],
    [1, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 1, 1],
    [1, 0, 1, 1, 0, 0],
];

/// Table 2 as printed: rows are qubits, columns are gates 0..10.
pub const TABLE2_PRINTED: [[u8; 10]; 6] = [
    [1, 1, 0, 1, 0, 0, 1, 1, 0, 1],
    [1, 0, 1, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 1, 0, 0, 1, 1],
    [0, 1, 0, 0, 1, 0, 1, 0, 1, 1],
    [0, 0, 1, 1, 1, 0, 0, 0, 1, 0],
    [1, 0, 0, 0, 1, 1, 1, 0, 0, 0],
];

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn edge_sets(h: &Hypergraph) -> Vec<Vec<usize>> {
    h.hyperedges().iter().map(|e| e.members.clone()).collect()
}

/// Hyperedges with members on both sides of `side` (true = block A).
pub fn naive_cut(edges: &[Vec<usize>], side: &[bool]) -> usize {
    edges
        .iter()
        .filter(|e| e.iter().any(|&v| side[v]) && e.iter().any(|&v| !side[v]))
        .count()
}

/// Minimum cut over every assignment whose block sizes differ by at most one.
pub fn naive_optimum(n: usize, edges: &[Vec<usize>]) -> usize {
    assert!(n <= 16, "naive search is exponential");
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

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}
