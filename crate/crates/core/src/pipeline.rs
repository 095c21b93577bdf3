//! End-to-end evaluation: reduce, plug, decompose, contract.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_complex::Complex64 as C;

use crate::contract::{contract_with, ContractOptions};
use crate::error::{Error, Result};
use crate::gflow::{find_gflow, OpenGraph};
use crate::rankdecomp::{
    flow_order_ids, linear_to_tree, rw_flow, rw_greedy_b2t, rw_greedy_linear, rw_tcount,
    DecompositionTree, Graph, LinearOrder, TreeBuilder,
};
use crate::simplify::full_reduce;
use crate::zx::{dense, plug_phase_states, plug_states, Circuit, Phase, ZxDiagram, V};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Flow,
    GreedyLinear,
    GreedyB2t,
    TCount,
    /// Whichever of the closed-diagram methods has the fewest flops.
    Best,
    /// Dense statevector simulation; no decomposition.
    Oracle,
}

impl Method {
    pub const DECOMPOSING: [Method; 4] = [
        Method::Flow,
        Method::GreedyLinear,
        Method::GreedyB2t,
        Method::TCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Flow => "flow",
            Method::GreedyLinear => "greedy-linear",
            Method::GreedyB2t => "greedy-b2t",
            Method::TCount => "tcount",
            Method::Best => "best",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let all = [
            Method::Flow,
            Method::GreedyLinear,
            Method::GreedyB2t,
            Method::TCount,
            Method::Best,
            Method::Oracle,
        ];
        all.into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// How the boundaries of an open diagram are closed.
#[derive(Clone, Debug, PartialEq)]
pub enum Boundary {
    /// `|x>` on the inputs and `<y|` on the outputs.
    Basis(Vec<bool>, Vec<bool>),
    /// The same single-qubit phase state on every boundary.
    PhaseState(Phase),
}

impl Boundary {
    fn close(&self, d: &ZxDiagram) -> Result<ZxDiagram> {
        match self {
            Boundary::Basis(x, y) => plug_states(d, x, y),
            Boundary::PhaseState(p) => Ok(plug_phase_states(d, *p)),
        }
    }
}

/// A closed diagram ready for contraction and the tree to contract it along.
#[derive(Clone, Debug)]
pub struct Plan {
    pub diagram: ZxDiagram,
    pub tree: DecompositionTree,
    /// The method that produced `tree`; `Best` resolves to its winner.
    pub method: Method,
}

impl Plan {
    pub fn width(&self) -> usize {
        self.tree.width()
    }

    pub fn flops(&self) -> BigUint {
        self.tree.flops()
    }
}

fn trivial_tree(g: &Graph) -> DecompositionTree {
    TreeBuilder::new(g.len()).finish(g)
}

/// Decomposition of `Graph::from_diagram(d)`. `Flow` needs a gflow of `d`
/// itself, so it is meant for open diagrams; the other methods expect a
/// closed one.
pub fn decompose(d: &ZxDiagram, method: Method) -> Result<(DecompositionTree, Method)> {
    let g = Graph::from_diagram(d);
    match method {
        Method::Oracle => Err(Error::UnsupportedGate(
            "oracle builds no decomposition".into(),
        )),
        Method::Flow => {
            let og = OpenGraph::from_diagram(d);
            let ids = flow_order(d, &og)?;
            Ok((tree_from_ids(d, &g, &ids)?, Method::Flow))
        }
        _ if g.len() < 2 => Ok((trivial_tree(&g), method)),
        Method::GreedyLinear => Ok((linear_to_tree(&g, &rw_greedy_linear(&g))?, method)),
        Method::GreedyB2t => Ok((rw_greedy_b2t(&g)?, method)),
        Method::TCount => Ok((rw_tcount(d)?, method)),
        Method::Best => {
            let mut best: Option<(DecompositionTree, Method)> = None;
            for m in [Method::GreedyLinear, Method::GreedyB2t, Method::TCount] {
                let t = match decompose(d, m) {
                    Ok((t, _)) => t,
                    Err(Error::NotReduced(_)) => continue,
                    Err(e) => return Err(e),
                };
                if best.as_ref().is_none_or(|(b, _)| t.flops() < b.flops()) {
                    best = Some((t, m));
                }
            }
            Ok(best.expect("greedy methods always succeed"))
        }
    }
}

fn flow_order(d: &ZxDiagram, og: &OpenGraph) -> Result<Vec<V>> {
    let f = find_gflow(og).ok_or(Error::GFlowUnavailable)?;
    let p = rw_flow(og, &f)?;
    let mut ids = flow_order_ids(og, &p);
    let placed: BTreeSet<V> = ids.iter().copied().collect();
    ids.extend(d.spiders().filter(|v| !placed.contains(v)));
    Ok(ids)
}

/// Caterpillar over the spiders of `d` in the order of `ids`. Handles no
/// longer in `d` are skipped; spiders missing from `ids` go right after
/// their first placed neighbour, or at the end.
fn tree_from_ids(d: &ZxDiagram, g: &Graph, ids: &[V]) -> Result<DecompositionTree> {
    let mut order: Vec<V> = ids
        .iter()
        .copied()
        .filter(|&v| d.contains(v) && !d.is_boundary(v))
        .collect();
    let placed: BTreeSet<V> = order.iter().copied().collect();
    let mut after: BTreeMap<V, Vec<V>> = BTreeMap::new();
    let mut tail = Vec::new();
    for v in d.spiders().filter(|v| !placed.contains(v)) {
        match d.neighbours(v).filter(|u| placed.contains(u)).min() {
            Some(u) => after.entry(u).or_default().push(v),
            None => tail.push(v),
        }
    }
    if !after.is_empty() {
        order = order
            .into_iter()
            .flat_map(|v| std::iter::once(v).chain(after.get(&v).cloned().unwrap_or_default()))
            .collect();
    }
    order.extend(tail);
    if g.len() < 2 {
        return Ok(trivial_tree(g));
    }
    let idx: Vec<usize> = order
        .iter()
        .map(|&v| g.index_of(v).expect("spider in graph"))
        .collect();
    linear_to_tree(g, &LinearOrder::new(g, idx))
}

/// Reduces an open diagram, closes it and decomposes the result. The flow
/// method orders the reduced open diagram by its gflow and reuses that
/// order after closing; the others reduce again once closed.
pub fn plan(open: &ZxDiagram, boundary: &Boundary, method: Method) -> Result<Plan> {
    let mut d = open.clone();
    full_reduce(&mut d);
    if method == Method::Flow {
        let og = OpenGraph::from_diagram(&d);
        let ids = flow_order(&d, &og)?;
        let closed = boundary.close(&d)?;
        let g = Graph::from_diagram(&closed);
        let tree = tree_from_ids(&closed, &g, &ids)?;
        return Ok(Plan {
            diagram: closed,
            tree,
            method,
        });
    }
    let mut closed = boundary.close(&d)?;
    full_reduce(&mut closed);
    let (tree, method) = decompose(&closed, method)?;
    Ok(Plan {
        diagram: closed,
        tree,
        method,
    })
}

/// Amplitude with the cost of the decomposition used.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub amplitude: C,
    pub method: Method,
    pub width: usize,
    pub flops: BigUint,
    /// Element operations the contraction spent.
    pub ops: u64,
}

#[derive(Clone, Debug, Default)]
pub struct SimOptions {
    pub max_rank: Option<usize>,
}

/// `<y|C|x>`.
pub fn simulate_amplitude(c: &Circuit, x: &[bool], y: &[bool], method: Method) -> Result<C> {
    simulate(c, x, y, method, &SimOptions::default()).map(|s| s.amplitude)
}

pub fn simulate(
    c: &Circuit,
    x: &[bool],
    y: &[bool],
    method: Method,
    opts: &SimOptions,
) -> Result<Simulation> {
    for b in [x, y] {
        if b.len() != c.qubits {
            return Err(Error::LengthMismatch {
                expected: c.qubits,
                got: b.len(),
            });
        }
    }
    if method == Method::Oracle {
        let amp = dense::amplitude(c, dense::bits_to_index(x), dense::bits_to_index(y));
        return Ok(Simulation {
            amplitude: amp,
            method,
            width: c.qubits,
            flops: BigUint::from(1u8) << c.qubits,
            ops: 0,
        });
    }
    let p = plan(
        &c.to_diagram(),
        &Boundary::Basis(x.to_vec(), y.to_vec()),
        method,
    )?;
    let copts = ContractOptions {
        max_rank: opts.max_rank,
        ..Default::default()
    };
    let r = contract_with(&p.diagram, &p.tree, &copts)?;
    Ok(Simulation {
        amplitude: r.value,
        method: p.method,
        width: p.width(),
        flops: p.flops(),
        ops: r.ops,
    })
}
