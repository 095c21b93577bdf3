use std::collections::BTreeMap;

use super::{Phase, Scalar};
use crate::error::{Error, Result};

/// Stable vertex handle. Handles are never reused within one diagram.
pub type V = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Z,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Plain,
    Hadamard,
}

impl EdgeKind {
    pub fn toggled(self) -> EdgeKind {
        match self {
            EdgeKind::Plain => EdgeKind::Hadamard,
            EdgeKind::Hadamard => EdgeKind::Plain,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct VertexData {
    kind: VertexKind,
    phase: Phase,
}

/// A ZX-diagram built from Z-spiders and boundary vertices joined by plain
/// or Hadamard edges, with a tracked global scalar.
#[derive(Clone, Debug, Default)]
pub struct ZxDiagram {
    vdata: Vec<Option<VertexData>>,
    adj: Vec<BTreeMap<V, EdgeKind>>,
    inputs: Vec<V>,
    outputs: Vec<V>,
    scalar: Scalar,
    live: usize,
}

impl ZxDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind, phase: Phase) -> V {
        let v = self.vdata.len();
        self.vdata.push(Some(VertexData { kind, phase }));
        self.adj.push(BTreeMap::new());
        self.live += 1;
        v
    }

    pub fn add_spider(&mut self, phase: Phase) -> V {
        self.add_vertex(VertexKind::Z, phase)
    }

    pub fn add_boundary(&mut self) -> V {
        self.add_vertex(VertexKind::Boundary, Phase::ZERO)
    }

    /// Adds a vertex with a specific handle (used when reading serialised
    /// diagrams). Fails if the handle is taken.
    pub fn add_vertex_with_id(&mut self, v: V, kind: VertexKind, phase: Phase) -> Result<()> {
        if v < self.vdata.len() && self.vdata[v].is_some() {
            return Err(Error::InvalidVertex(v));
        }
        while self.vdata.len() <= v {
            self.vdata.push(None);
            self.adj.push(BTreeMap::new());
        }
        self.vdata[v] = Some(VertexData { kind, phase });
        self.live += 1;
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: V) {
        let nbrs: Vec<V> = self.adj[v].keys().copied().collect();
        for n in nbrs {
            self.adj[n].remove(&v);
        }
        self.adj[v].clear();
        if self.vdata[v].take().is_some() {
            self.live -= 1;
        }
        self.inputs.retain(|&b| b != v);
        self.outputs.retain(|&b| b != v);
    }

    pub fn contains(&self, v: V) -> bool {
        v < self.vdata.len() && self.vdata[v].is_some()
    }

    pub fn num_vertices(&self) -> usize {
        self.live
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    /// One past the largest handle ever allocated.
    pub fn capacity(&self) -> usize {
        self.vdata.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = V> + '_ {
        self.vdata
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.as_ref().map(|_| v))
    }

    /// Non-boundary vertices in handle order.
    pub fn spiders(&self) -> impl Iterator<Item = V> + '_ {
        self.vertices()
            .filter(move |&v| self.kind(v) == VertexKind::Z)
    }

    pub fn edges(&self) -> impl Iterator<Item = (V, V, EdgeKind)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, m)| {
            m.iter()
                .filter(move |(&v, _)| u < v)
                .map(move |(&v, &k)| (u, v, k))
        })
    }

    pub fn kind(&self, v: V) -> VertexKind {
        self.vdata[v].expect("dead vertex").kind
    }

    pub fn phase(&self, v: V) -> Phase {
        self.vdata[v].expect("dead vertex").phase
    }

    pub fn set_phase(&mut self, v: V, p: Phase) {
        self.vdata[v].as_mut().expect("dead vertex").phase = p;
    }

    pub fn add_to_phase(&mut self, v: V, p: Phase) {
        let d = self.vdata[v].as_mut().expect("dead vertex");
        d.phase = d.phase + p;
    }

    pub fn neighbours(&self, v: V) -> impl Iterator<Item = V> + '_ {
        self.adj[v].keys().copied()
    }

    pub fn incident(&self, v: V) -> impl Iterator<Item = (V, EdgeKind)> + '_ {
        self.adj[v].iter().map(|(&n, &k)| (n, k))
    }

    pub fn degree(&self, v: V) -> usize {
        self.adj[v].len()
    }

    pub fn edge(&self, u: V, v: V) -> Option<EdgeKind> {
        self.adj[u].get(&v).copied()
    }

    pub fn connected(&self, u: V, v: V) -> bool {
        self.adj[u].contains_key(&v)
    }

    /// Inserts or overwrites an edge without any rewriting.
    pub fn set_edge(&mut self, u: V, v: V, kind: EdgeKind) {
        assert_ne!(u, v, "self-loops are not stored");
        self.adj[u].insert(v, kind);
        self.adj[v].insert(u, kind);
    }

    pub fn remove_edge(&mut self, u: V, v: V) -> Option<EdgeKind> {
        self.adj[v].remove(&u);
        self.adj[u].remove(&v)
    }

    /// Adds an edge between two spiders, resolving self-loops and parallel
    /// edges into phases and scalar factors:
    ///
    /// * plain self-loop: dropped
    /// * Hadamard self-loop: phase pi on the spider, factor 1/sqrt2
    /// * two Hadamard edges: both removed, factor 1/2
    /// * plain and Hadamard: plain edge kept, phase pi on one end, factor 1/sqrt2
    /// * two plain edges: one plain edge
    ///
    /// Edges touching a boundary vertex are inserted as-is.
    pub fn add_edge_smart(&mut self, u: V, v: V, kind: EdgeKind) {
        let both_z = self.kind(u) == VertexKind::Z && self.kind(v) == VertexKind::Z;
        if u == v {
            assert!(both_z, "self-loop on a boundary vertex");
            if kind == EdgeKind::Hadamard {
                self.add_to_phase(u, Phase::PI);
                self.scalar.mul_sqrt2_pow(-1);
            }
            return;
        }
        let existing = self.edge(u, v);
        match (existing, kind) {
            (None, k) => self.set_edge(u, v, k),
            _ if !both_z => panic!("parallel edge at a boundary vertex"),
            (Some(EdgeKind::Hadamard), EdgeKind::Hadamard) => {
                self.remove_edge(u, v);
                self.scalar.mul_sqrt2_pow(-2);
            }
            (Some(EdgeKind::Plain), EdgeKind::Plain) => {}
            (Some(_), _) => {
                self.set_edge(u, v, EdgeKind::Plain);
                self.add_to_phase(u, Phase::PI);
                self.scalar.mul_sqrt2_pow(-1);
            }
        }
    }

    /// Multiplies the diagram by `(-1)^{x_u x_v}` by toggling a Hadamard
    /// edge between two spiders and correcting the scalar.
    pub fn toggle_cz(&mut self, u: V, v: V) {
        match self.edge(u, v) {
            None => {
                self.set_edge(u, v, EdgeKind::Hadamard);
                self.scalar.mul_sqrt2_pow(1);
            }
            Some(EdgeKind::Hadamard) => {
                self.remove_edge(u, v);
                self.scalar.mul_sqrt2_pow(-1);
            }
            Some(EdgeKind::Plain) => panic!("toggle_cz on a plain edge"),
        }
    }

    pub fn inputs(&self) -> &[V] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[V] {
        &self.outputs
    }

    pub fn set_inputs(&mut self, v: Vec<V>) {
        self.inputs = v;
    }

    pub fn set_outputs(&mut self, v: Vec<V>) {
        self.outputs = v;
    }

    pub fn scalar(&self) -> &Scalar {
        &self.scalar
    }

    pub fn scalar_mut(&mut self) -> &mut Scalar {
        &mut self.scalar
    }

    pub fn is_closed(&self) -> bool {
        self.inputs.is_empty() && self.outputs.is_empty()
    }

    pub fn is_boundary(&self, v: V) -> bool {
        self.kind(v) == VertexKind::Boundary
    }

    /// A spider with no boundary neighbours.
    pub fn is_interior(&self, v: V) -> bool {
        self.kind(v) == VertexKind::Z && self.neighbours(v).all(|n| !self.is_boundary(n))
    }

    pub fn boundary_neighbours(&self, v: V) -> impl Iterator<Item = (V, EdgeKind)> + '_ {
        self.incident(v).filter(move |&(n, _)| self.is_boundary(n))
    }

    /// Checks the graph-like invariants; returns the first violation found.
    pub fn check_graph_like(&self) -> std::result::Result<(), String> {
        for v in self.vertices() {
            match self.kind(v) {
                VertexKind::Boundary => {
                    if self.degree(v) != 1 {
                        return Err(format!("boundary {v} has degree {}", self.degree(v)));
                    }
                    if !self.phase(v).is_zero() {
                        return Err(format!("boundary {v} has a phase"));
                    }
                    let n = self.neighbours(v).next().unwrap();
                    if self.is_boundary(n) {
                        return Err(format!("boundary {v} is joined to boundary {n}"));
                    }
                    if !self.inputs.contains(&v) && !self.outputs.contains(&v) {
                        return Err(format!("boundary {v} is neither input nor output"));
                    }
                }
                VertexKind::Z => {
                    for (n, k) in self.incident(v) {
                        if self.kind(n) == VertexKind::Z && k != EdgeKind::Hadamard {
                            return Err(format!("plain edge between spiders {v} and {n}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_graph_like(&self) -> bool {
        self.check_graph_like().is_ok()
    }

    /// Degree-1 spiders attached to a Clifford spider: `(leaf, body)` pairs.
    /// A body carrying a non-Clifford phase does not form a gadget.
    pub fn phase_gadgets(&self) -> Vec<(V, V)> {
        let mut out = Vec::new();
        for v in self.spiders() {
            if self.degree(v) != 1 {
                continue;
            }
            let b = self.neighbours(v).next().unwrap();
            if self.kind(b) == VertexKind::Z
                && self.phase(b).is_clifford()
                && !self.phase(v).is_clifford()
                && self.edge(v, b) == Some(EdgeKind::Hadamard)
            {
                out.push((v, b));
            }
        }
        out
    }
}
