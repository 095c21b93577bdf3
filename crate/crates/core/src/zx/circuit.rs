use std::f64::consts::PI;

use super::{EdgeKind, Phase, ZxDiagram, V};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Cnot(usize, usize),
    Cz(usize, usize),
    H(usize),
    S(usize),
    Sdg(usize),
    Z(usize),
    X(usize),
    T(usize),
    Tdg(usize),
    /// `diag(1, e^{i theta})`.
    Rz(usize, f64),
    /// `H Rz(theta) H`.
    Rx(usize, f64),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![a, b],
            Gate::H(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::Z(q)
            | Gate::X(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::Rz(q, _)
            | Gate::Rx(q, _) => vec![q],
        }
    }

    pub fn is_clifford(&self) -> bool {
        match *self {
            Gate::T(_) | Gate::Tdg(_) => false,
            Gate::Rz(_, t) | Gate::Rx(_, t) => Phase::from_radians(t).is_clifford(),
            _ => true,
        }
    }

    /// Phase of the Z-spider this gate introduces, for single-qubit phase gates.
    fn z_phase(&self) -> Option<Phase> {
        match *self {
            Gate::S(_) => Some(Phase::pi4(2)),
            Gate::Sdg(_) => Some(Phase::pi4(6)),
            Gate::Z(_) => Some(Phase::PI),
            Gate::T(_) => Some(Phase::pi4(1)),
            Gate::Tdg(_) => Some(Phase::pi4(7)),
            Gate::Rz(_, t) => Some(Phase::from_radians(t)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Circuit {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        let qs = g.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.qubits) {
            return Err(Error::UnsupportedGate(format!(
                "{g:?}: qubit {q} out of range for {} qubits",
                self.qubits
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::UnsupportedGate(format!(
                "{g:?}: control equals target"
            )));
        }
        self.gates.push(g);
        Ok(())
    }

    /// Appends the standard seven-T Clifford+T expansion of a Toffoli gate.
    pub fn push_toffoli(&mut self, a: usize, b: usize, c: usize) -> Result<()> {
        if a == b || b == c || a == c {
            return Err(Error::UnsupportedGate(
                "toffoli with repeated qubits".into(),
            ));
        }
        use Gate::*;
        for g in [
            H(c),
            Cnot(b, c),
            Tdg(c),
            Cnot(a, c),
            T(c),
            Cnot(b, c),
            Tdg(c),
            Cnot(a, c),
            T(b),
            T(c),
            H(c),
            Cnot(a, b),
            T(a),
            Tdg(b),
            Cnot(a, b),
        ] {
            self.push(g)?;
        }
        Ok(())
    }

    /// Toffoli with the target conjugated by Hadamards, i.e. CCZ.
    pub fn push_ccz(&mut self, a: usize, b: usize, c: usize) -> Result<()> {
        self.push(Gate::H(c))?;
        self.push_toffoli(a, b, c)?;
        self.push(Gate::H(c))
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_clifford()).count()
    }

    /// Converts the circuit into a graph-like ZX-diagram whose tensor equals
    /// the circuit unitary, including the global scalar.
    pub fn to_diagram(&self) -> ZxDiagram {
        let mut d = ZxDiagram::new();
        let n = self.qubits;
        let inputs: Vec<V> = (0..n).map(|_| d.add_boundary()).collect();
        // per qubit: last spider on the wire, and whether a Hadamard is pending
        let mut last: Vec<V> = Vec::with_capacity(n);
        let mut pending = vec![false; n];
        for &b in &inputs {
            let s = d.add_spider(Phase::ZERO);
            d.set_edge(b, s, EdgeKind::Plain);
            last.push(s);
        }
        let wire =
            |d: &mut ZxDiagram, last: &mut Vec<V>, pending: &mut Vec<bool>, q: usize, p: Phase| {
                let s = d.add_spider(p);
                let k = if pending[q] {
                    EdgeKind::Hadamard
                } else {
                    EdgeKind::Plain
                };
                d.set_edge(last[q], s, k);
                last[q] = s;
                pending[q] = false;
                s
            };
        for g in &self.gates {
            match *g {
                Gate::H(q) => pending[q] = !pending[q],
                Gate::X(q) => {
                    pending[q] = !pending[q];
                    wire(&mut d, &mut last, &mut pending, q, Phase::PI);
                    pending[q] = !pending[q];
                }
                Gate::Rx(q, t) => {
                    pending[q] = !pending[q];
                    wire(&mut d, &mut last, &mut pending, q, Phase::from_radians(t));
                    pending[q] = !pending[q];
                }
                Gate::Cz(a, b) => {
                    let sa = wire(&mut d, &mut last, &mut pending, a, Phase::ZERO);
                    let sb = wire(&mut d, &mut last, &mut pending, b, Phase::ZERO);
                    d.set_edge(sa, sb, EdgeKind::Hadamard);
                    d.scalar_mut().mul_sqrt2_pow(1);
                }
                Gate::Cnot(c, t) => {
                    let sc = wire(&mut d, &mut last, &mut pending, c, Phase::ZERO);
                    pending[t] = !pending[t];
                    let st = wire(&mut d, &mut last, &mut pending, t, Phase::ZERO);
                    pending[t] = !pending[t];
                    d.set_edge(sc, st, EdgeKind::Hadamard);
                    d.scalar_mut().mul_sqrt2_pow(1);
                }
                _ => {
                    let q = g.qubits()[0];
                    wire(&mut d, &mut last, &mut pending, q, g.z_phase().unwrap());
                }
            }
        }
        let mut outputs = Vec::with_capacity(n);
        for q in 0..n {
            let b = d.add_boundary();
            let k = if pending[q] {
                EdgeKind::Hadamard
            } else {
                EdgeKind::Plain
            };
            d.set_edge(last[q], b, k);
            outputs.push(b);
        }
        d.set_inputs(inputs);
        d.set_outputs(outputs);
        crate::simplify::to_graph_like(&mut d);
        d
    }
}

/// Phase of a single-qubit gate as an angle, for the dense simulator.
pub(crate) fn gate_angle(g: &Gate) -> f64 {
    match *g {
        Gate::S(_) => PI / 2.0,
        Gate::Sdg(_) => -PI / 2.0,
        Gate::Z(_) | Gate::X(_) => PI,
        Gate::T(_) => PI / 4.0,
        Gate::Tdg(_) => -PI / 4.0,
        Gate::Rz(_, t) | Gate::Rx(_, t) => t,
        _ => 0.0,
    }
}

impl From<&Circuit> for ZxDiagram {
    fn from(c: &Circuit) -> Self {
        c.to_diagram()
    }
}
