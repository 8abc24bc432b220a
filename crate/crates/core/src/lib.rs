//! Hypergraph models of quantum circuits and balanced bipartitioning for
//! distributed execution.
//!
//! Circuits are parsed from OpenQASM 2.0 or generated synthetically, turned
//! into primal (qubit) or dual (gate) hypergraphs, and split into two blocks
//! with a mid-cut baseline, Kernighan–Lin, Fiduccia–Mattheyses, or an
//! exhaustive oracle for small inputs.

pub mod analysis;
pub mod circuit;
pub mod generators;
pub mod hypergraph;
pub mod partition;
pub mod qasm;

pub use circuit::{Circuit, CircuitError, Gate, GateKind, QubitId};
pub use generators::{Family, GateSet, GateSetName, Seed, DEFAULT_SEED};
pub use hypergraph::{dual, primal_from_circuit, Hypergraph, HypergraphError, Role};
pub use partition::{
    spatial_cut, temporal_cut, Bipartition, Block, CutReport, Heuristic, PartitionError,
    PartitionOptions, TemporalReport,
};
pub use qasm::{emit_qasm, parse_qasm, QasmError};

#[cfg(test)]
mod properties;
