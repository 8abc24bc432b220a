//! Hypergraph model of a circuit: primal construction, dual transformation,
//! incidence matrices, connector expansion and hMETIS / JSON interchange.
//!
//! In the primal, vertices are qubits and each gate is one hyperedge. The
//! dual swaps the roles: one vertex per gate (labelled `g<id>`) and one
//! hyperedge per qubit wire, whose members are the gates touching it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;

#[derive(Debug, Error)]
pub enum HypergraphError {
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("hyperedge {0} has no members")]
    EmptyHyperedge(usize),
    #[error("hyperedge {edge} references vertex index {vertex} outside 0..{len}")]
    MemberOutOfRange { edge: usize, vertex: usize, len: usize },
    #[error("hyperedge {edge} references unknown vertex `{label}`")]
    UnknownVertex { edge: usize, label: String },
    #[error("hyperedge at position {position} has id {id}; ids must follow construction order")]
    BadId { position: usize, id: usize },
    #[error("vertex `{0}` is isolated; its dual hyperedge would be empty")]
    IsolatedVertex(String),
    #[error("hypergraph has no vertices")]
    Empty,
    #[error("hMETIS line {line}: {msg}")]
    Hmetis { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Primal,
    Dual,
    #[default]
    Generic,
}

impl Role {
    fn flipped(self) -> Role {
        match self {
            Role::Primal => Role::Dual,
            Role::Dual => Role::Primal,
            Role::Generic => Role::Generic,
        }
    }
}

/// A labelled vertex subset. `members` holds sorted, distinct vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    pub id: usize,
    pub label: String,
    pub members: Vec<usize>,
}

impl Hyperedge {
    pub fn arity(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    role: Role,
    vertices: Vec<String>,
    hyperedges: Vec<Hyperedge>,
}

impl Hypergraph {
    /// Build and validate. Member lists are deduplicated and sorted; ids are
    /// assigned from position.
    pub fn new<L: Into<String>>(
        role: Role,
        vertices: Vec<String>,
        edges: impl IntoIterator<Item = (L, Vec<usize>)>,
    ) -> Result<Self, HypergraphError> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(HypergraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut hyperedges = Vec::new();
        for (id, (label, mut members)) in edges.into_iter().enumerate() {
            members.sort_unstable();
            members.dedup();
            if members.is_empty() {
                return Err(HypergraphError::EmptyHyperedge(id));
            }
            if let Some(&bad) = members.iter().find(|&&m| m >= vertices.len()) {
                return Err(HypergraphError::MemberOutOfRange {
                    edge: id,
                    vertex: bad,
                    len: vertices.len(),
                });
            }
            hyperedges.push(Hyperedge {
                id,
                label: label.into(),
                members,
            });
        }
        Ok(Hypergraph {
            role,
            vertices,
            hyperedges,
        })
    }

    pub fn empty(role: Role) -> Self {
        Hypergraph {
            role,
            vertices: Vec::new(),
            hyperedges: Vec::new(),
        }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_hyperedges(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// For each vertex, the ids of hyperedges containing it (ascending).
    pub fn incident_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for e in &self.hyperedges {
            for &v in &e.members {
                inc[v].push(e.id);
            }
        }
        inc
    }

    /// Copy with a different role tag.
    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    /// Copy keeping only hyperedges of arity at least `min`, renumbered.
    pub fn filter_arity(&self, min: usize) -> Hypergraph {
        let edges = self
            .hyperedges
            .iter()
            .filter(|e| e.arity() >= min)
            .map(|e| (e.label.clone(), e.members.clone()));
        Hypergraph::new(self.role, self.vertices.clone(), edges).expect("subset of a valid hypergraph")
    }

    /// Equality of vertex labels, role, hyperedge ids and member sets;
    /// hyperedge labels are ignored.
    pub fn same_structure(&self, other: &Hypergraph) -> bool {
        self.role == other.role
            && self.vertices == other.vertices
            && self.hyperedges.len() == other.hyperedges.len()
            && self
                .hyperedges
                .iter()
                .zip(&other.hyperedges)
                .all(|(a, b)| a.id == b.id && a.members == b.members)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&HypergraphDoc::from(self)).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Hypergraph, HypergraphError> {
        let doc: HypergraphDoc = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// Primal hypergraph: one vertex per active qubit (ascending qubit index),
/// one hyperedge per non-terminal gate in program order. Unary gates become
/// arity-1 hyperedges when `include_unary` is set.
pub fn primal_from_circuit(c: &Circuit, include_unary: bool) -> Hypergraph {
    let gates: Vec<_> = c
        .operations()
        .filter(|g| include_unary || g.arity() >= 2)
        .collect();
    let qubits: BTreeSet<usize> = gates
        .iter()
        .flat_map(|g| g.qubits.iter().map(|q| q.0))
        .collect();
    let position: HashMap<usize, usize> = qubits.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let vertices = qubits.iter().map(|q| format!("q{q}")).collect();
    let edges = gates.iter().map(|g| {
        let members = g.qubits.iter().map(|q| position[&q.0]).collect();
        (g.kind.name(), members)
    });
    Hypergraph::new(Role::Primal, vertices, edges).expect("gates reference active qubits")
}

/// Dual hypergraph: one vertex per hyperedge of `h`, and one hyperedge per
/// vertex of `h` (labelled with that vertex) holding its incident hyperedges.
///
/// Dual vertices are named `g<id>`, except when `h` is itself a dual with
/// distinct hyperedge labels: those labels name the original vertices, so
/// taking the dual twice restores them.
pub fn dual(h: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
    let incident = h.incident_edges();
    if let Some(i) = incident.iter().position(|inc| inc.is_empty()) {
        return Err(HypergraphError::IsolatedVertex(h.vertices[i].clone()));
    }
    let labels: BTreeSet<&str> = h.hyperedges.iter().map(|e| e.label.as_str()).collect();
    let vertices = if h.role == Role::Dual && labels.len() == h.hyperedges.len() {
        h.hyperedges.iter().map(|e| e.label.clone()).collect()
    } else {
        h.hyperedges.iter().map(|e| format!("g{}", e.id)).collect()
    };
    let edges = h.vertices.iter().cloned().zip(incident);
    Hypergraph::new(h.role.flipped(), vertices, edges)
}

/// Rows are hyperedges, columns are vertices, cells are 0/1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<String>,
    pub cells: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    /// Rows become columns labelled `g<row id>`, matching the dual's
    /// vertex naming; new row ids are old column positions.
    pub fn transpose(&self) -> IncidenceMatrix {
        let cells = (0..self.cols.len())
            .map(|c| self.cells.iter().map(|row| row[c]).collect())
            .collect();
        IncidenceMatrix {
            rows: (0..self.cols.len()).collect(),
            cols: self.rows.iter().map(|r| format!("g{r}")).collect(),
            cells,
        }
    }
}

impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.cells {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn incidence(h: &Hypergraph) -> IncidenceMatrix {
    let cells = h
        .hyperedges
        .iter()
        .map(|e| {
            let mut row = vec![0u8; h.vertices.len()];
            for &v in &e.members {
                row[v] = 1;
            }
            row
        })
        .collect();
    IncidenceMatrix {
        rows: h.hyperedges.iter().map(|e| e.id).collect(),
        cols: h.vertices.clone(),
        cells,
    }
}

/// Graph form of a hypergraph for graph-only heuristics.
///
/// Original vertices keep their indices and weight 1. Each hyperedge of
/// arity >= 3 gains a weight-0 connector vertex joined to its members;
/// arity-2 hyperedges become single edges; arity-1 hyperedges vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    /// Source hyperedge id of each edge.
    pub origin: Vec<usize>,
    pub balance_weight: Vec<u32>,
    /// Source hyperedge id of each connector, indexed from `num_original`.
    pub connector_of: Vec<usize>,
    pub num_original: usize,
    pub num_hyperedges: usize,
}

impl ExpandedGraph {
    pub fn num_connectors(&self) -> usize {
        self.connector_of.len()
    }

    pub fn is_connector(&self, v: usize) -> bool {
        v >= self.num_original
    }

    /// Original member sets, rebuilt from edge provenance.
    pub fn hyperedge_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.num_hyperedges];
        for (&(a, b), &e) in self.edges.iter().zip(&self.origin) {
            for v in [a, b] {
                if !self.is_connector(v) {
                    members[e].push(v);
                }
            }
        }
        for m in &mut members {
            m.sort_unstable();
            m.dedup();
        }
        members
    }
}

pub fn expand_bipartite(h: &Hypergraph) -> ExpandedGraph {
    let mut vertices = h.vertices.clone();
    let mut balance_weight = vec![1u32; h.vertices.len()];
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    let mut connector_of = Vec::new();
    for e in &h.hyperedges {
        match e.arity() {
            0 | 1 => {}
            2 => {
                edges.push((e.members[0], e.members[1]));
                origin.push(e.id);
            }
            _ => {
                let k = vertices.len();
                vertices.push(format!("#k{}", e.id));
                balance_weight.push(0);
                connector_of.push(e.id);
                for &m in &e.members {
                    edges.push((k, m));
                    origin.push(e.id);
                }
            }
        }
    }
    ExpandedGraph {
        vertices,
        edges,
        origin,
        balance_weight,
        connector_of,
        num_original: h.vertices.len(),
        num_hyperedges: h.hyperedges.len(),
    }
}

/// Write the plain (unweighted) hMETIS format: header
/// `<#hyperedges> <#vertices>`, then one line of 1-based members per hyperedge.
pub fn export_hmetis<W: Write>(h: &Hypergraph, mut sink: W) -> Result<(), HypergraphError> {
    if h.is_empty() {
        return Err(HypergraphError::Empty);
    }
    writeln!(sink, "{} {}", h.num_hyperedges(), h.num_vertices())?;
    for e in &h.hyperedges {
        let line: Vec<String> = e.members.iter().map(|m| (m + 1).to_string()).collect();
        writeln!(sink, "{}", line.join(" "))?;
    }
    sink.flush()?;
    Ok(())
}

/// Read a plain hMETIS file. Vertices are labelled `1..=n`; lines starting
/// with `%` are comments. Weighted variants are rejected.
pub fn import_hmetis<R: BufRead>(source: R) -> Result<Hypergraph, HypergraphError> {
    let mut lines = source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('%')));

    let bad = |line: usize, msg: &str| HypergraphError::Hmetis {
        line,
        msg: msg.to_string(),
    };
    let (hline, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
    let header = header?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| bad(hline, "header fields must be integers")))
        .collect::<Result<_, _>>()?;
    let (m, n) = match fields.as_slice() {
        [m, n] => (*m, *n),
        [m, n, 0] => (*m, *n),
        [_, _, _] => return Err(bad(hline, "weighted hMETIS variants are not supported")),
        _ => return Err(bad(hline, "header must be `<#hyperedges> <#vertices>`")),
    };
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (lno, line) = lines.next().ok_or_else(|| bad(hline, "fewer hyperedge lines than declared"))?;
        let line = line?;
        let members = line
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                _ => Err(bad(lno, "vertex index out of range")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        edges.push(("net", members));
    }
    if let Some((lno, _)) = lines.next() {
        return Err(bad(lno, "more hyperedge lines than declared"));
    }
    let vertices = (1..=n).map(|i| i.to_string()).collect();
    Hypergraph::new(Role::Generic, vertices, edges).map_err(|e| match e {
        HypergraphError::EmptyHyperedge(i) => bad(i + 2, "empty hyperedge"),
        other => other,
    })
}

/// JSON document shape: `{role, vertices, hyperedges: [{id, label, members}]}`
/// with members given as vertex labels.
#[derive(Debug, Serialize, Deserialize)]
struct HypergraphDoc {
    #[serde(default)]
    role: Role,
    vertices: Vec<String>,
    hyperedges: Vec<HyperedgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct HyperedgeDoc {
    id: usize,
    label: String,
    members: Vec<String>,
}

impl From<&Hypergraph> for HypergraphDoc {
    fn from(h: &Hypergraph) -> Self {
        HypergraphDoc {
            role: h.role,
            vertices: h.vertices.clone(),
            hyperedges: h
                .hyperedges
                .iter()
                .map(|e| HyperedgeDoc {
                    id: e.id,
                    label: e.label.clone(),
                    members: e.members.iter().map(|&m| h.vertices[m].clone()).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<HypergraphDoc> for Hypergraph {
    type Error = HypergraphError;

    fn try_from(doc: HypergraphDoc) -> Result<Self, Self::Error> {
        let index: HashMap<&str, usize> = doc
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut edges = Vec::with_capacity(doc.hyperedges.len());
        for (position, e) in doc.hyperedges.iter().enumerate() {
            if e.id != position {
                return Err(HypergraphError::BadId { position, id: e.id });
            }
            let members = e
                .members
                .iter()
                .map(|l| {
                    index.get(l.as_str()).copied().ok_or_else(|| HypergraphError::UnknownVertex {
                        edge: e.id,
                        label: l.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            edges.push((e.label.clone(), members));
        }
        Hypergraph::new(doc.role, doc.vertices, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};
    use crate::generators::gen_full;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn primal_of_full_circuit() {
        let h = primal_from_circuit(&gen_full(4).unwrap(), true);
        assert_eq!(h.num_vertices(), 4);
        assert_eq!(h.num_hyperedges(), 6);
        assert!(h.hyperedges().iter().all(|e| e.arity() == 2));
        assert_eq!(h.role(), Role::Primal);
    }

    #[test]
    fn primal_of_empty_circuit() {
        let h = primal_from_circuit(&Circuit::new("e", 3).unwrap(), true);
        assert!(h.is_empty());
        assert_eq!(h.num_hyperedges(), 0);
    }

    #[test]
    fn unary_flag_and_inactive_qubits() {
        let c = Circuit::from_gates(
            "u",
            5,
            vec![
                Gate::fixed(GateKind::H, &[4]),
                Gate::fixed(GateKind::Cx, &[3, 1]),
            ],
        )
        .unwrap();
        let with = primal_from_circuit(&c, true);
        assert_eq!(with.vertices(), &["q1", "q3", "q4"]);
        assert_eq!(with.num_hyperedges(), 2);
        let without = primal_from_circuit(&c, false);
        assert_eq!(without.vertices(), &["q1", "q3"]);
        assert_eq!(without.hyperedges()[0].members, vec![0, 1]);
    }

    #[test]
    fn dual_of_single_pair() {
        let h = Hypergraph::new(Role::Generic, labels(2), [("cz", vec![0, 1])]).unwrap();
        let d = dual(&h).unwrap();
        assert_eq!(d.num_vertices(), 1);
        assert_eq!(d.num_hyperedges(), 2);
        assert!(d.hyperedges().iter().all(|e| e.members == vec![0]));
    }

    #[test]
    fn dual_rejects_isolated_vertex() {
        let h = Hypergraph::new(Role::Generic, labels(3), [("cz", vec![0, 1])]).unwrap();
        assert!(matches!(dual(&h), Err(HypergraphError::IsolatedVertex(v)) if v == "v2"));
    }

    #[test]
    fn dual_flips_role() {
        let h = primal_from_circuit(&gen_full(3).unwrap(), true);
        let d = dual(&h).unwrap();
        assert_eq!(d.role(), Role::Dual);
        assert_eq!(dual(&d).unwrap().role(), Role::Primal);
    }

    #[test]
    fn double_dual_restores_primal_labels() {
        let h = primal_from_circuit(&gen_full(4).unwrap(), true);
        let d = dual(&h).unwrap();
        assert_eq!(d.vertices()[0], "g0");
        let dd = dual(&d).unwrap();
        assert!(dd.same_structure(&h));
        assert_eq!(dd.hyperedges()[5].label, "g5");
    }

    #[test]
    fn singleton_incidence() {
        let h = Hypergraph::new(Role::Generic, labels(1), [("x", vec![0])]).unwrap();
        assert_eq!(incidence(&h).cells, vec![vec![1]]);
    }

    #[test]
    fn expand_rules() {
        let h = Hypergraph::new(Role::Generic, labels(2), [("cz", vec![0, 1])]).unwrap();
        let g = expand_bipartite(&h);
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(g.num_connectors(), 0);

        let h = Hypergraph::new(Role::Generic, labels(3), [("ccx", vec![0, 1, 2])]).unwrap();
        let g = expand_bipartite(&h);
        assert_eq!(g.vertices.len(), 4);
        assert_eq!(g.edges, vec![(3, 0), (3, 1), (3, 2)]);
        assert_eq!(g.balance_weight, vec![1, 1, 1, 0]);
        assert_eq!(g.origin, vec![0, 0, 0]);
        assert_eq!(g.hyperedge_members(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn expand_skips_unary() {
        let h = Hypergraph::new(Role::Generic, labels(2), [("h", vec![0]), ("cz", vec![0, 1])]).unwrap();
        let g = expand_bipartite(&h);
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(g.origin, vec![1]);
    }

    #[test]
    fn hmetis_single_edge() {
        let h = Hypergraph::new(Role::Generic, vec!["a".into(), "b".into()], [("cz", vec![0, 1])]).unwrap();
        let mut out = Vec::new();
        export_hmetis(&h, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1 2\n1 2\n");
    }

    #[test]
    fn hmetis_rejects_malformed() {
        assert!(import_hmetis("2 3\n1 2\n".as_bytes()).is_err());
        assert!(import_hmetis("1 3\n1 4\n".as_bytes()).is_err());
        assert!(import_hmetis("1 3 1\n1 2\n".as_bytes()).is_err());
        let ok = import_hmetis("% comment\n1 3\n\n1 3\n".as_bytes()).unwrap();
        assert_eq!(ok.hyperedges()[0].members, vec![0, 2]);
    }

    #[test]
    fn hmetis_export_empty_fails() {
        assert!(matches!(
            export_hmetis(&Hypergraph::empty(Role::Primal), Vec::new()),
            Err(HypergraphError::Empty)
        ));
    }

    #[test]
    fn json_round_trip() {
        let h = primal_from_circuit(&gen_full(4).unwrap(), true);
        let back = Hypergraph::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn json_rejects_unknown_member() {
        let text = r#"{"vertices":["a"],"hyperedges":[{"id":0,"label":"x","members":["b"]}]}"#;
        assert!(matches!(
            Hypergraph::from_json(text),
            Err(HypergraphError::UnknownVertex { .. })
        ));
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            Hypergraph::new(Role::Generic, vec!["a".into(), "a".into()], Vec::<(String, Vec<usize>)>::new()),
            Err(HypergraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            Hypergraph::new(Role::Generic, labels(1), [("x", vec![])]),
            Err(HypergraphError::EmptyHyperedge(0))
        ));
        assert!(matches!(
            Hypergraph::new(Role::Generic, labels(1), [("x", vec![1])]),
            Err(HypergraphError::MemberOutOfRange { .. })
        ));
    }
}
