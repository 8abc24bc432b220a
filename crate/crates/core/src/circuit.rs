//! Circuit intermediate representation and dimension metrics.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense qubit index into a circuit's single quantum register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub usize);

impl QubitId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Closed gate vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    P,
    X,
    Y,
    Z,
    Rx,
    Rz,
    S,
    T,
    Sx,
    Cx,
    Cp,
    Cz,
    Ch,
    Swap,
    Ccx,
    Cswap,
    Mcx,
    Measure,
    Barrier,
}

/// How many qubits a gate kind acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn admits(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

impl GateKind {
    pub const ALL: [GateKind; 20] = [
        GateKind::H,
        GateKind::P,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::Rx,
        GateKind::Rz,
        GateKind::S,
        GateKind::T,
        GateKind::Sx,
        GateKind::Cx,
        GateKind::Cp,
        GateKind::Cz,
        GateKind::Ch,
        GateKind::Swap,
        GateKind::Ccx,
        GateKind::Cswap,
        GateKind::Mcx,
        GateKind::Measure,
        GateKind::Barrier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::P => "p",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::Rx => "rx",
            GateKind::Rz => "rz",
            GateKind::S => "s",
            GateKind::T => "t",
            GateKind::Sx => "sx",
            GateKind::Cx => "cx",
            GateKind::Cp => "cp",
            GateKind::Cz => "cz",
            GateKind::Ch => "ch",
            GateKind::Swap => "swap",
            GateKind::Ccx => "ccx",
            GateKind::Cswap => "cswap",
            GateKind::Mcx => "mcx",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }

    pub fn arity(self) -> Arity {
        use GateKind::*;
        match self {
            H | P | X | Y | Z | Rx | Rz | S | T | Sx | Measure => Arity::Exactly(1),
            Cx | Cp | Cz | Ch | Swap => Arity::Exactly(2),
            Ccx | Cswap => Arity::Exactly(3),
            Mcx => Arity::AtLeast(2),
            Barrier => Arity::AtLeast(1),
        }
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::P | GateKind::Rx | GateKind::Rz | GateKind::Cp => 1,
            _ => 0,
        }
    }

    /// Measure and barrier: retained in the circuit, ignored by every metric.
    pub fn is_terminal(self) -> bool {
        matches!(self, GateKind::Measure | GateKind::Barrier)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| CircuitError::UnsupportedGate(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("unsupported gate `{0}`")]
    UnsupportedGate(String),
    #[error("gate `{kind}` expects {expected} qubit(s), got {got}")]
    WrongArity {
        kind: GateKind,
        expected: String,
        got: usize,
    },
    #[error("gate `{kind}` expects {expected} parameter(s), got {got}")]
    WrongParams {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {0} appears twice in one gate")]
    DuplicateQubit(usize),
    #[error("classical bit {clbit} out of range for {num_clbits} classical bit(s)")]
    ClbitOutOfRange { clbit: usize, num_clbits: usize },
    #[error("measure requires exactly one classical target")]
    MissingClbit,
    #[error("a circuit needs at least one qubit")]
    NoQubits,
}

/// One operation: kind, ordered qubit tuple and angle parameters (radians).
///
/// `clbits` is only populated for `measure` (the classical target).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<QubitId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clbits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize], params: &[f64]) -> Result<Self, CircuitError> {
        let gate = Gate {
            kind,
            qubits: qubits.iter().copied().map(QubitId).collect(),
            params: params.to_vec(),
            clbits: Vec::new(),
        };
        gate.check_shape()?;
        Ok(gate)
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Gate {
            kind: GateKind::Measure,
            qubits: vec![QubitId(qubit)],
            params: Vec::new(),
            clbits: vec![clbit],
        }
    }

    /// Shorthand for parameterless gates with a statically known shape.
    pub(crate) fn fixed(kind: GateKind, qubits: &[usize]) -> Self {
        Gate {
            kind,
            qubits: qubits.iter().copied().map(QubitId).collect(),
            params: Vec::new(),
            clbits: Vec::new(),
        }
    }

    pub(crate) fn with_angle(kind: GateKind, qubits: &[usize], angle: f64) -> Self {
        Gate {
            kind,
            qubits: qubits.iter().copied().map(QubitId).collect(),
            params: vec![angle],
            clbits: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_terminal(&self) -> bool {
        self.kind.is_terminal()
    }

    /// Non-terminal gate acting on two or more qubits.
    pub fn is_multiqubit(&self) -> bool {
        !self.is_terminal() && self.arity() >= 2
    }

    fn check_shape(&self) -> Result<(), CircuitError> {
        let arity = self.kind.arity();
        if !arity.admits(self.qubits.len()) {
            let expected = match arity {
                Arity::Exactly(k) => k.to_string(),
                Arity::AtLeast(k) => format!("at least {k}"),
            };
            return Err(CircuitError::WrongArity {
                kind: self.kind,
                expected,
                got: self.qubits.len(),
            });
        }
        if self.params.len() != self.kind.num_params() {
            return Err(CircuitError::WrongParams {
                kind: self.kind,
                expected: self.kind.num_params(),
                got: self.params.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for q in &self.qubits {
            if !seen.insert(q.0) {
                return Err(CircuitError::DuplicateQubit(q.0));
            }
        }
        match (self.kind, self.clbits.len()) {
            (GateKind::Measure, 1) => Ok(()),
            (GateKind::Measure, _) => Err(CircuitError::MissingClbit),
            (_, 0) => Ok(()),
            _ => Err(CircuitError::MissingClbit),
        }
    }

    fn check(&self, num_qubits: usize, num_clbits: usize) -> Result<(), CircuitError> {
        self.check_shape()?;
        if let Some(q) = self.qubits.iter().find(|q| q.0 >= num_qubits) {
            return Err(CircuitError::QubitOutOfRange {
                qubit: q.0,
                num_qubits,
            });
        }
        if let Some(&c) = self.clbits.iter().find(|&&c| c >= num_clbits) {
            return Err(CircuitError::ClbitOutOfRange {
                clbit: c,
                num_clbits,
            });
        }
        Ok(())
    }
}

/// Ordered gate list over a single register of `num_qubits` qubits.
///
/// Program order is significant: depth and temporal precedence both read it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    name: String,
    num_qubits: usize,
    #[serde(default)]
    num_clbits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: usize) -> Result<Self, CircuitError> {
        Self::with_clbits(name, num_qubits, 0)
    }

    pub fn with_clbits(
        name: impl Into<String>,
        num_qubits: usize,
        num_clbits: usize,
    ) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        Ok(Circuit {
            name: name.into(),
            num_qubits,
            num_clbits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(
        name: impl Into<String>,
        num_qubits: usize,
        gates: Vec<Gate>,
    ) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(name, num_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.check(self.num_qubits, self.num_clbits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Gates that count towards size, depth and hypergraph construction.
    pub fn operations(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().filter(|g| !g.is_terminal())
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    #[cfg(test)]
    pub(crate) fn pop(&mut self) -> Option<Gate> {
        self.gates.pop()
    }

    /// Number of distinct qubits touched by a non-terminal gate.
    pub fn width(&self) -> usize {
        self.active_qubits().len()
    }

    /// Active qubits in ascending index order.
    pub fn active_qubits(&self) -> BTreeSet<QubitId> {
        self.operations()
            .flat_map(|g| g.qubits.iter().copied())
            .collect()
    }

    pub fn size(&self) -> usize {
        self.operations().count()
    }

    /// ASAP layer count: each gate lands one layer after the latest layer
    /// already occupied by any of its qubits.
    pub fn depth(&self) -> usize {
        let mut layer = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in self.operations() {
            let next = g.qubits.iter().map(|q| layer[q.0]).max().unwrap_or(0) + 1;
            for q in &g.qubits {
                layer[q.0] = next;
            }
            depth = depth.max(next);
        }
        depth
    }
}

/// Incremental ASAP depth tracker, used by generators that grow a circuit
/// until a target depth is reached.
#[derive(Clone, Debug)]
pub(crate) struct DepthTracker {
    layer: Vec<usize>,
    depth: usize,
}

impl DepthTracker {
    pub(crate) fn new(num_qubits: usize) -> Self {
        DepthTracker {
            layer: vec![0; num_qubits],
            depth: 0,
        }
    }

    pub(crate) fn add(&mut self, gate: &Gate) {
        if gate.is_terminal() {
            return;
        }
        let next = gate.qubits.iter().map(|q| self.layer[q.0]).max().unwrap_or(0) + 1;
        for q in &gate.qubits {
            self.layer[q.0] = next;
        }
        self.depth = self.depth.max(next);
    }

    pub(crate) fn depth(&self) -> usize {
        self.depth
    }
}
