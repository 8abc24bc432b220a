//! Acceptance criteria 1-8. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stdout (bypassing the harness capture) before asserting.

mod common;

use std::io::Write;
use std::time::Instant;

use common::{edge_sets, fixture, median, naive_cut, naive_optimum, TABLE1, TABLE2_PRINTED};
use hypercut::analysis::{
    coupling_ratio, full_circuit_closed_forms, run_sweep, to_csv_string, to_json_string,
    SweepConfig,
};
use hypercut::generators::{gen_full, gen_random, GateSet, Seed};
use hypercut::hypergraph::{dual, expand_bipartite, incidence};
use hypercut::partition::{
    brute_force_optimum, cut_size, fm_bipartition, kl_bipartition, midpoint_partition, Block,
};
use hypercut::{
    parse_qasm, primal_from_circuit, spatial_cut, temporal_cut, Heuristic, Hypergraph,
    PartitionOptions, Role,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, ok: bool, detail: &str) {
    let line = format!("criterion {n}: {} {detail}\n", if ok { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn config(name: &str) -> String {
    let path = format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn table1_circuit() -> hypercut::Circuit {
    parse_qasm(&fixture("table1.qasm")).unwrap()
}

const CB_4_12: [usize; 9] = [6, 10, 15, 21, 28, 36, 45, 55, 66];
const MIDCUT_4_12: [usize; 9] = [4, 6, 9, 12, 16, 20, 25, 30, 36];

#[test]
fn criterion_1_full_circuit_table() {
    let started = Instant::now();
    let opts = PartitionOptions::default();
    let mut bad = Vec::new();
    for (i, n) in (4..=12).enumerate() {
        let c = gen_full(n).unwrap();
        let h = primal_from_circuit(&c, true);
        let mid = cut_size(&h, &midpoint_partition(&h).unwrap()).unwrap().count;
        let kl = spatial_cut(&c, Heuristic::Kl, &opts).unwrap().cut_count;
        let fm = spatial_cut(&c, Heuristic::Fm, &opts).unwrap().cut_count;
        let oracle = brute_force_optimum(&h).unwrap().1;
        let got = (c.size(), mid, kl, fm, oracle);
        let want = (CB_4_12[i], MIDCUT_4_12[i], MIDCUT_4_12[i], MIDCUT_4_12[i], MIDCUT_4_12[i]);
        if got != want {
            bad.push(format!("n={n} got {got:?} want {want:?}"));
        }
    }
    let secs = started.elapsed().as_secs_f64();
    let ok = bad.is_empty() && secs < 5.0;
    report(1, ok, &format!("size/mid/KL/FM/oracle exact for n=4..12 (tol 0), {secs:.2}s (< 5s) {bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_2_closed_forms() {
    let started = Instant::now();
    let forms = full_circuit_closed_forms(120).unwrap();
    let mut bad: Vec<String> = forms
        .iter()
        .zip(4u64..)
        .filter(|(f, n)| f.n as u64 != *n || f.cb != n * (n - 1) / 2 || f.midcut_ebits != n.div_ceil(2) * (n / 2))
        .map(|(f, _)| format!("n={}", f.n))
        .collect();
    if forms.len() != 117 {
        bad.push(format!("{} rows", forms.len()));
    }
    for n in [16usize, 32, 64] {
        let h = primal_from_circuit(&gen_full(n).unwrap(), true);
        let (_, r) = fm_bipartition(&h, &PartitionOptions::default()).unwrap();
        if r.cut_count != n.div_ceil(2) * (n / 2) {
            bad.push(format!("FM n={n} cut {}", r.cut_count));
        }
    }
    let secs = started.elapsed().as_secs_f64();
    let ok = bad.is_empty() && secs < 60.0;
    report(2, ok, &format!("closed forms n=4..120 and FM on n=16,32,64 exact (tol 0), {secs:.2}s (< 60s) {bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_3_incidence_tables() {
    let from_qasm = primal_from_circuit(&table1_circuit(), true);
    let from_json = Hypergraph::from_json(&fixture("table1.json")).unwrap();
    let want1: Vec<Vec<u8>> = TABLE1.iter().map(|r| r.to_vec()).collect();
    let primal_ok = incidence(&from_qasm).cells == want1 && incidence(&from_json).cells == want1;

    let dual_cells = incidence(&dual(&from_qasm).unwrap()).cells;
    let transpose: Vec<Vec<u8>> = (0..6).map(|q| (0..10).map(|g| TABLE1[g][q]).collect()).collect();
    let transpose_ok = dual_cells == transpose;

    let mut mismatches = Vec::new();
    for (q, row) in TABLE2_PRINTED.iter().enumerate() {
        for (g, &cell) in row.iter().enumerate() {
            if dual_cells[q][g] != cell {
                mismatches.push(format!("(qubit {q}, gate {g}): ours {} printed {cell}", dual_cells[q][g]));
            }
        }
    }
    let printed_ok = mismatches.is_empty();

    let cr = coupling_ratio(&table1_circuit()).unwrap();
    let cr_ok = cr.multiqubit_gate_count == 10 && cr.cb == 15;

    let ok = primal_ok && transpose_ok && printed_ok && cr_ok;
    report(
        3,
        ok,
        &format!(
            "primal == Table 1: {primal_ok}; dual == transpose(Table 1): {transpose_ok}; \
             dual == printed Table 2: {printed_ok} ({} cells differ: {mismatches:?}); Cr 10/15: {cr_ok} (tol 0)",
            mismatches.len()
        ),
    );
    assert!(ok);
}

fn random_hypergraph(rng: &mut ChaCha8Rng) -> Hypergraph {
    let n = rng.gen_range(1..=10usize);
    let m = rng.gen_range(1..=20usize);
    let mut edges: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let mask = rng.gen_range(1u32..(1 << n));
            (0..n).filter(|&v| mask >> v & 1 == 1).collect()
        })
        .collect();
    for v in 0..n {
        if !edges.iter().any(|e| e.contains(&v)) {
            let home = rng.gen_range(0..m);
            edges[home].push(v);
        }
    }
    let vertices = (0..n).map(|v| format!("v{v}")).collect();
    Hypergraph::new(Role::Primal, vertices, edges.into_iter().map(|e| ("op", e))).unwrap()
}

#[test]
fn criterion_4_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let trials = 1000;
    let mut failures = 0;
    for _ in 0..trials {
        let h = random_hypergraph(&mut rng);
        let d = dual(&h).unwrap();
        let involution = dual(&d).unwrap().same_structure(&h);
        let p = incidence(&h);
        let q = incidence(&d);
        let transposed = q == p.transpose()
            && (0..h.num_vertices()).all(|v| (0..h.num_hyperedges()).all(|e| q.cells[v][e] == p.cells[e][v]));
        if !(involution && transposed) {
            failures += 1;
        }
    }
    let ok = failures == 0;
    report(4, ok, &format!("{trials} random hypergraphs, {failures} failures (tol 0)"));
    assert!(ok);
}

#[test]
fn criterion_5_oracle_soundness() {
    let opts = PartitionOptions::default();
    let mut instances = 0;
    let mut violations = Vec::new();
    let mut fm_hits = 0;
    for gs in [GateSet::native(), GateSet::independent()] {
        for n in [4usize, 6, 8, 10, 12] {
            for s in 0..6u64 {
                let c = gen_random(n, &gs, Seed(1000 + s), 2.0).unwrap();
                let h = primal_from_circuit(&c, true);
                let edges = edge_sets(&h);
                let nv = h.num_vertices();
                let opt = naive_optimum(nv, &edges);
                let mid = cut_size(&h, &midpoint_partition(&h).unwrap()).unwrap().count;
                let (fm_p, fm) = fm_bipartition(&h, &opts).unwrap();
                let (kl_p, kl) = kl_bipartition(&expand_bipartite(&h), &opts).unwrap();
                for (name, p, cut) in [("fm", &fm_p, fm.cut_count), ("kl", &kl_p, kl.cut_count)] {
                    let side: Vec<bool> = (0..nv).map(|v| p.block_of(v) == Block::A).collect();
                    let recount = naive_cut(&edges, &side);
                    if !(opt <= cut && cut <= mid) || recount != cut || !p.is_balanced(0.0) {
                        violations.push(format!("{} n={n} s={s} {name}: opt {opt} cut {cut} mid {mid}", gs.name));
                    }
                }
                if fm.cut_count == opt {
                    fm_hits += 1;
                }
                instances += 1;
            }
        }
    }
    let ok = violations.is_empty() && instances >= 50;
    report(
        5,
        ok,
        &format!(
            "{instances} circuits, {} violations of optimum <= heuristic <= midcut (tol 0); FM optimal on {fm_hits}/{instances} ({:.1}%)",
            violations.len(),
            100.0 * fm_hits as f64 / instances as f64
        ),
    );
    assert!(ok, "{violations:?}");
}

#[test]
fn criterion_6_reduction_trend() {
    let started = Instant::now();
    let ns = [4usize, 8, 16, 32, 64];
    let config = SweepConfig::from_json(&format!(
        r#"{{"families":["random-independent"],"n_list":{ns:?},"seeds":{:?},"heuristics":["fm","kl"]}}"#,
        (0..20).collect::<Vec<u64>>()
    ))
    .unwrap();
    let rows = run_sweep(&config);
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let mut details = Vec::new();
    let mut ok = errors == 0;
    for h in [Heuristic::Fm, Heuristic::Kl] {
        let med = |n: usize| {
            median(
                rows.iter()
                    .filter(|r| r.heuristic == h && r.n == n)
                    .map(|r| {
                        let (mid, min) = (r.midcut.unwrap() as f64, r.mincut.unwrap() as f64);
                        if mid == 0.0 { 0.0 } else { 100.0 * (mid - min) / mid }
                    })
                    .collect(),
            )
        };
        let curve: Vec<String> = ns.iter().map(|&n| format!("{n}:{:.1}", med(n))).collect();
        let pass = med(4) > 0.0 && med(4) > med(64);
        ok &= pass;
        details.push(format!("{h} medians {}", curve.join(" ")));
    }
    let secs = started.elapsed().as_secs_f64();
    ok &= secs < 600.0;
    report(
        6,
        ok,
        &format!("median(4) > 0 and median(4) > median(64), 20 seeds; {}; {errors} row errors; {secs:.1}s (< 600s)", details.join("; ")),
    );
    assert!(ok);
}

#[test]
fn criterion_7_determinism() {
    let table3 = SweepConfig::from_json(&config("table3.json")).unwrap();
    let a = to_csv_string(&run_sweep(&table3));
    let b = to_csv_string(&run_sweep(&table3));
    let frozen = fixture("table3.csv");

    let random = SweepConfig::from_json(
        r#"{"families":["random-native","random-independent","qft","grover"],"n_list":[5,9],"seeds":[3,4],"heuristics":["fm","kl","midcut"]}"#,
    )
    .unwrap();
    let ja = to_json_string(&run_sweep(&random));
    let jb = to_json_string(&run_sweep(&random));

    let c = table1_circuit();
    let opts = PartitionOptions::with_seed(99);
    let ra = serde_json::to_string(&temporal_cut(&c, Heuristic::Kl, &opts).unwrap()).unwrap();
    let rb = serde_json::to_string(&temporal_cut(&c, Heuristic::Kl, &opts).unwrap()).unwrap();

    let ok = a == b && a == frozen && ja == jb && ra == rb;
    report(
        7,
        ok,
        &format!(
            "repeat runs byte-identical: table3 csv {}, matches frozen fixture {}, random sweep json {}, partition json {}",
            a == b,
            a == frozen,
            ja == jb,
            ra == rb
        ),
    );
    assert!(ok);
}

#[test]
fn frozen_table3_agrees_with_closed_forms() {
    let text = fixture("table3.csv");
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let n: u64 = rec[1].parse().unwrap();
        assert_eq!(&rec[0], "full");
        assert_eq!(rec[4].parse::<u64>().unwrap(), n.div_ceil(2) * (n / 2));
        assert_eq!(rec[5].parse::<u64>().unwrap(), n.div_ceil(2) * (n / 2));
        assert_eq!(rec[7].parse::<u64>().unwrap(), n * (n - 1) / 2);
        assert_eq!(&rec[6], "0.0000");
        rows += 1;
    }
    assert_eq!(rows, 9 * 4);
}

#[test]
fn criterion_8_temporal_pipeline() {
    // optimum of the dual is the transpose of Table 1 searched exhaustively
    let wires: Vec<Vec<usize>> = (0..6).map(|q| (0..10).filter(|&g| TABLE1[g][q] == 1).collect()).collect();
    let frozen = 4;
    let oracle_ok = naive_optimum(10, &wires) == frozen;

    let c = table1_circuit();
    let opts = PartitionOptions::default();
    let mut lines = Vec::new();
    let mut ok = oracle_ok;
    for h in [Heuristic::Fm, Heuristic::Kl, Heuristic::Oracle] {
        let r = temporal_cut(&c, h, &opts).unwrap();
        let json: serde_json::Value = serde_json::to_value(&r).unwrap();
        let flag_reported = json.get("precedence_feasible").is_some_and(|v| v.is_boolean());
        let side: Vec<bool> = (0..10).map(|g| r.segments[0].contains(&g)).collect();
        let recount = naive_cut(&wires, &side);
        if h != Heuristic::Kl {
            ok &= r.cut.cut_count == frozen;
        }
        ok &= flag_reported && recount == r.cut.cut_count && r.cut.cut_count >= frozen;
        lines.push(format!(
            "{h} cut {} precedence_feasible {}",
            r.cut.cut_count, r.precedence_feasible
        ));
    }
    report(
        8,
        ok,
        &format!("frozen dual optimum {frozen} (oracle agrees: {oracle_ok}); {} (tol 0 for fm/oracle)", lines.join("; ")),
    );
    assert!(ok);
}
