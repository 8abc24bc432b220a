//! Deterministic benchmark circuit construction.
//!
//! Random circuits draw from a ChaCha8 stream (`rand_chacha::ChaCha8Rng`,
//! seeded through `SeedableRng::seed_from_u64`). Integer draws go through
//! `u64` ranges, so a given seed produces the same circuit on every target.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, DepthTracker, Gate, GateKind};

/// Seed used whenever the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5EED_2025;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Default for Seed {
    fn default() -> Self {
        Seed(DEFAULT_SEED)
    }
}

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent sub-stream for the `index`-th consumer of this seed.
    pub fn derive(self, index: u64) -> Seed {
        // splitmix64 finaliser
        let mut z = self.0 ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("{family} needs at least {min} qubit(s), got {got}")]
    TooFewQubits {
        family: &'static str,
        min: usize,
        got: usize,
    },
    #[error("phase numerator {j} out of range for {m} estimation qubit(s)")]
    PhaseOutOfRange { m: usize, j: u64 },
    #[error("depth factor must be positive and finite, got {0}")]
    BadDepthFactor(f64),
    #[error("iterations must be positive")]
    NoIterations,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown gate set `{0}`")]
    UnknownGateSet(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateSetName {
    Native,
    Independent,
}

impl fmt::Display for GateSetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateSetName::Native => "native",
            GateSetName::Independent => "independent",
        })
    }
}

impl FromStr for GateSetName {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "native" => Ok(GateSetName::Native),
            "independent" => Ok(GateSetName::Independent),
            other => Err(GeneratorError::UnknownGateSet(other.to_string())),
        }
    }
}

/// Gate kinds a random circuit may draw from, grouped by arity.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSet {
    pub name: GateSetName,
    pub unary: Vec<GateKind>,
    pub binary: Vec<GateKind>,
    pub ternary: Vec<GateKind>,
}

impl GateSet {
    /// Hardware-native basis: rz, sx, x and cx.
    pub fn native() -> Self {
        use GateKind::*;
        GateSet {
            name: GateSetName::Native,
            unary: vec![Rz, Sx, X],
            binary: vec![Cx],
            ternary: vec![],
        }
    }

    /// Hardware-independent set with Toffoli and Fredkin.
    pub fn independent() -> Self {
        use GateKind::*;
        GateSet {
            name: GateSetName::Independent,
            unary: vec![H, P, X, Y, Z, Rx, Rz, S, T],
            binary: vec![Cx, Cp, Swap, Ch, Cz],
            ternary: vec![Ccx, Cswap],
        }
    }

    pub fn by_name(name: GateSetName) -> Self {
        match name {
            GateSetName::Native => Self::native(),
            GateSetName::Independent => Self::independent(),
        }
    }

    fn flattened(&self) -> Vec<GateKind> {
        self.unary
            .iter()
            .chain(&self.binary)
            .chain(&self.ternary)
            .copied()
            .collect()
    }

    fn max_arity(&self) -> usize {
        if !self.ternary.is_empty() {
            3
        } else if !self.binary.is_empty() {
            2
        } else {
            1
        }
    }
}

/// One CZ per unordered qubit pair, in lexicographic pair order.
pub fn gen_full(n: usize) -> Result<Circuit, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooFewQubits {
            family: "full",
            min: 2,
            got: n,
        });
    }
    let gates = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| Gate::fixed(GateKind::Cz, &[a, b])))
        .collect();
    Ok(Circuit::from_gates(format!("full_{n}"), n, gates).expect("pairs are in range"))
}

fn draw_index(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo as u64..hi as u64) as usize
}

/// Seeded random circuit grown until its ASAP depth first reaches
/// `ceil(depth_factor * n)`.
///
/// Each step draws a kind uniformly from the flattened gate set, then a
/// uniform ordered tuple of distinct qubits, then uniform angles in `[0, 2pi)`.
pub fn gen_random(
    n: usize,
    gs: &GateSet,
    seed: Seed,
    depth_factor: f64,
) -> Result<Circuit, GeneratorError> {
    if !(depth_factor.is_finite() && depth_factor > 0.0) {
        return Err(GeneratorError::BadDepthFactor(depth_factor));
    }
    let min = gs.max_arity().max(2);
    if n < min {
        return Err(GeneratorError::TooFewQubits {
            family: "random",
            min,
            got: n,
        });
    }
    let target = (depth_factor * n as f64).ceil() as usize;
    let kinds = gs.flattened();
    let mut rng = seed.rng();
    let mut circuit = Circuit::new(format!("random_{}_{}_s{}", gs.name, n, seed.0), n)
        .expect("n >= 2");
    let mut depth = DepthTracker::new(n);
    let mut pool: Vec<usize> = (0..n).collect();

    while depth.depth() < target {
        let kind = kinds[draw_index(&mut rng, 0, kinds.len())];
        let k = match kind.arity() {
            crate::circuit::Arity::Exactly(k) => k,
            crate::circuit::Arity::AtLeast(k) => k,
        };
        for i in 0..k {
            let j = draw_index(&mut rng, i, n);
            pool.swap(i, j);
        }
        let qubits = &pool[..k];
        let gate = if kind.num_params() == 1 {
            Gate::with_angle(kind, qubits, rng.gen::<f64>() * 2.0 * PI)
        } else {
            Gate::fixed(kind, qubits)
        };
        depth.add(&gate);
        circuit.push(gate).expect("sampled gate is valid");
    }
    Ok(circuit)
}

fn qft_ladder(n: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    for i in 0..n {
        gates.push(Gate::fixed(GateKind::H, &[i]));
        for k in i + 1..n {
            let angle = PI / 2f64.powi((k - i) as i32);
            gates.push(Gate::with_angle(GateKind::Cp, &[k, i], angle));
        }
    }
    gates
}

/// Standard QFT: Hadamard plus controlled-phase ladder, then the
/// qubit-reversal swaps.
pub fn gen_qft(n: usize) -> Result<Circuit, GeneratorError> {
    if n < 1 {
        return Err(GeneratorError::TooFewQubits {
            family: "qft",
            min: 1,
            got: n,
        });
    }
    let mut gates = qft_ladder(n);
    for i in 0..n / 2 {
        gates.push(Gate::fixed(GateKind::Swap, &[i, n - 1 - i]));
    }
    Ok(Circuit::from_gates(format!("qft_{n}"), n, gates).expect("valid qft"))
}

/// Fallback phase numerator: `2^m - 3`, clamped to at least 1.
pub fn default_qpe_phase(m: usize) -> u64 {
    let full = if m >= 64 { u64::MAX } else { 1u64 << m };
    full.saturating_sub(3).max(1)
}

/// Phase estimation of an exactly representable phase `j / 2^m` on
/// `m` estimation qubits plus one target (qubit `m`).
pub fn gen_qpe_exact(m: usize, j: u64) -> Result<Circuit, GeneratorError> {
    if m < 1 {
        return Err(GeneratorError::TooFewQubits {
            family: "qpe",
            min: 1,
            got: m,
        });
    }
    if m < 64 && j >= (1u64 << m) {
        return Err(GeneratorError::PhaseOutOfRange { m, j });
    }
    let target = m;
    let mut gates = Vec::new();
    for q in 0..m {
        gates.push(Gate::fixed(GateKind::H, &[q]));
    }
    gates.push(Gate::fixed(GateKind::X, &[target]));
    let denom = 2f64.powi(m as i32);
    for k in 0..m {
        let angle = 2.0 * PI * j as f64 * 2f64.powi(k as i32) / denom;
        gates.push(Gate::with_angle(GateKind::Cp, &[k, target], angle));
    }
    // inverse QFT without swaps: reversed ladder, negated angles
    for g in qft_ladder(m).into_iter().rev() {
        let inverse = match g.kind {
            GateKind::Cp => Gate::with_angle(
                GateKind::Cp,
                &[g.qubits[0].0, g.qubits[1].0],
                -g.params[0],
            ),
            _ => g,
        };
        gates.push(inverse);
    }
    Ok(Circuit::from_gates(format!("qpe_{m}_j{j}"), m + 1, gates).expect("valid qpe"))
}

/// Grover search without ancillas: oracle and diffusion each use one
/// multi-controlled X over all qubits (target = last qubit).
pub fn gen_grover_noancilla(n: usize, iterations: usize) -> Result<Circuit, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooFewQubits {
            family: "grover",
            min: 2,
            got: n,
        });
    }
    if iterations == 0 {
        return Err(GeneratorError::NoIterations);
    }
    let all: Vec<usize> = (0..n).collect();
    let target = n - 1;
    let layer = |kind: GateKind, gates: &mut Vec<Gate>| {
        gates.extend((0..n).map(|q| Gate::fixed(kind, &[q])));
    };
    let bracketed_mcx = |gates: &mut Vec<Gate>| {
        gates.push(Gate::fixed(GateKind::H, &[target]));
        gates.push(Gate::fixed(GateKind::Mcx, &all));
        gates.push(Gate::fixed(GateKind::H, &[target]));
    };

    let mut gates = Vec::new();
    layer(GateKind::H, &mut gates);
    for _ in 0..iterations {
        bracketed_mcx(&mut gates);
        layer(GateKind::H, &mut gates);
        layer(GateKind::X, &mut gates);
        bracketed_mcx(&mut gates);
        layer(GateKind::X, &mut gates);
        layer(GateKind::H, &mut gates);
    }
    Ok(Circuit::from_gates(format!("grover_{n}_i{iterations}"), n, gates).expect("valid grover"))
}

/// Circuit family selector shared by the CLI and the sweep runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Full,
    RandomNative,
    RandomIndependent,
    Qft,
    Qpe,
    Grover,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Full,
        Family::RandomNative,
        Family::RandomIndependent,
        Family::Qft,
        Family::Qpe,
        Family::Grover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Full => "full",
            Family::RandomNative => "random-native",
            Family::RandomIndependent => "random-independent",
            Family::Qft => "qft",
            Family::Qpe => "qpe",
            Family::Grover => "grover",
        }
    }

    /// Whether the seed influences the generated circuit.
    pub fn is_seeded(self) -> bool {
        matches!(self, Family::RandomNative | Family::RandomIndependent)
    }

    /// Build the family's circuit at total width `n`. QPE uses `n - 1`
    /// estimation qubits with the default phase.
    pub fn generate(self, n: usize, seed: Seed) -> Result<Circuit, GeneratorError> {
        match self {
            Family::Full => gen_full(n),
            Family::RandomNative => gen_random(n, &GateSet::native(), seed, 2.0),
            Family::RandomIndependent => gen_random(n, &GateSet::independent(), seed, 2.0),
            Family::Qft => gen_qft(n),
            Family::Qpe => {
                if n < 2 {
                    return Err(GeneratorError::TooFewQubits {
                        family: "qpe",
                        min: 2,
                        got: n,
                    });
                }
                gen_qpe_exact(n - 1, default_qpe_phase(n - 1))
            }
            Family::Grover => gen_grover_noancilla(n, 1),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| GeneratorError::UnknownFamily(s.to_string()))
    }
}
