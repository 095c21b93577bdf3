//! Extended gflow on open graphs: construction by backward layering and an
//! independent checker.

use std::collections::BTreeMap;
use std::fmt;

use crate::f2linalg::BitMatrix;
use crate::zx::{ZxDiagram, V};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Plane {
    XY,
    XZ,
    YZ,
}

/// An undirected graph on `0..n` with input and output subsets and a
/// measurement plane per vertex (ignored for outputs).
#[derive(Clone, Debug)]
pub struct OpenGraph {
    pub adj: BitMatrix,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub planes: Vec<Plane>,
    /// Diagram handle of each vertex, when built from a diagram.
    pub ids: Vec<V>,
    /// Gadget leaves left out of the graph, with the index of their body.
    pub leaves: Vec<(V, usize)>,
}

impl OpenGraph {
    pub fn new(n: usize, edges: &[(usize, usize)], inputs: &[usize], outputs: &[usize]) -> Self {
        let mut adj = BitMatrix::zeros(n, n);
        for &(a, b) in edges {
            if a != b {
                adj.set(a, b, true);
                adj.set(b, a, true);
            }
        }
        let mut inputs = inputs.to_vec();
        let mut outputs = outputs.to_vec();
        inputs.sort_unstable();
        inputs.dedup();
        outputs.sort_unstable();
        outputs.dedup();
        OpenGraph {
            adj,
            inputs,
            outputs,
            planes: vec![Plane::XY; n],
            ids: (0..n).collect(),
            leaves: Vec::new(),
        }
    }

    pub fn with_planes(mut self, planes: Vec<Plane>) -> Self {
        assert_eq!(planes.len(), self.len());
        self.planes = planes;
        self
    }

    pub fn len(&self) -> usize {
        self.adj.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_input(&self, v: usize) -> bool {
        self.inputs.binary_search(&v).is_ok()
    }

    pub fn is_output(&self, v: usize) -> bool {
        self.outputs.binary_search(&v).is_ok()
    }

    /// Reads the open graph off a graph-like diagram. Spiders next to input
    /// (output) boundaries form `I` (`O`). Leaves of phase gadgets with an
    /// interior body are dropped and their body is measured in YZ; every
    /// other spider is measured in XY.
    pub fn from_diagram(d: &ZxDiagram) -> Self {
        let gadgets: Vec<(V, V)> = d
            .phase_gadgets()
            .into_iter()
            .filter(|&(_, b)| d.is_interior(b))
            .collect();
        let dropped: Vec<V> = gadgets.iter().map(|&(l, _)| l).collect();
        let ids: Vec<V> = d.spiders().filter(|v| !dropped.contains(v)).collect();
        let index: BTreeMap<V, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mut adj = BitMatrix::zeros(n, n);
        for (i, &v) in ids.iter().enumerate() {
            for u in d.neighbours(v) {
                if let Some(&j) = index.get(&u) {
                    adj.set(i, j, true);
                }
            }
        }
        let side = |bs: &[V]| -> Vec<usize> {
            let mut out: Vec<usize> = bs
                .iter()
                .filter_map(|&b| d.neighbours(b).next())
                .filter_map(|s| index.get(&s).copied())
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        };
        let mut planes = vec![Plane::XY; n];
        let mut leaves = Vec::new();
        for &(l, b) in &gadgets {
            planes[index[&b]] = Plane::YZ;
            leaves.push((l, index[&b]));
        }
        OpenGraph {
            adj,
            inputs: side(d.inputs()),
            outputs: side(d.outputs()),
            planes,
            ids,
            leaves,
        }
    }

    /// Graph with the same vertices and edges but no inputs or outputs.
    pub fn graph_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.adj.get(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// `Odd(S)`: vertices with an odd number of neighbours in `s`.
pub fn odd_neighbourhood(og: &OpenGraph, s: &[usize]) -> Vec<usize> {
    let n = og.len();
    (0..n)
        .filter(|&u| s.iter().filter(|&&w| og.adj.get(u, w)).count() % 2 == 1)
        .collect()
}

/// Correction sets, layer labels and planes. `i` precedes `j` iff
/// `layer[i] < layer[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedGFlow {
    pub g: BTreeMap<usize, Vec<usize>>,
    pub layer: Vec<usize>,
    pub plane: BTreeMap<usize, Plane>,
}

impl ExtendedGFlow {
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.layer[i] < self.layer[j]
    }
}

/// Finds an extended gflow for the planes recorded in `og`, solving one
/// linear system per round from the outputs backwards.
pub fn find_gflow(og: &OpenGraph) -> Option<ExtendedGFlow> {
    let n = og.len();
    let mut solved: Vec<bool> = (0..n).map(|v| og.is_output(v)).collect();
    let mut round = vec![0usize; n];
    let mut g = BTreeMap::new();
    let mut r = 0;
    loop {
        let unsolved: Vec<usize> = (0..n).filter(|&v| !solved[v]).collect();
        if unsolved.is_empty() {
            break;
        }
        r += 1;
        let cols: Vec<usize> = (0..n).filter(|&v| solved[v] && !og.is_input(v)).collect();
        let a = og.adj.submatrix(&unsolved, &cols);
        let mut rhs = BitMatrix::zeros(unsolved.len(), unsolved.len());
        for (j, &v) in unsolved.iter().enumerate() {
            let p = og.planes[v];
            if p != Plane::XY && og.is_input(v) {
                continue;
            }
            for (i, &u) in unsolved.iter().enumerate() {
                let self_bit = matches!(p, Plane::XY | Plane::XZ) && u == v;
                let col_bit = p != Plane::XY && og.adj.get(u, v);
                rhs.set(i, j, self_bit ^ col_bit);
            }
        }
        let sols = a.solve_each(&rhs).expect("conforming shapes");
        let mut progress = false;
        for (j, &v) in unsolved.iter().enumerate() {
            let p = og.planes[v];
            if p != Plane::XY && og.is_input(v) {
                continue;
            }
            if let Some(x) = &sols[j] {
                let mut set: Vec<usize> = x.iter().map(|&k| cols[k]).collect();
                if p != Plane::XY {
                    set.push(v);
                }
                set.sort_unstable();
                if set.is_empty() {
                    continue;
                }
                g.insert(v, set);
                round[v] = r;
                progress = true;
            }
        }
        if !progress {
            return None;
        }
        for &v in &unsolved {
            if g.contains_key(&v) {
                solved[v] = true;
            }
        }
    }
    let layer = round.iter().map(|&k| r - k).collect();
    let plane = g.keys().map(|&v| (v, og.planes[v])).collect();
    Some(ExtendedGFlow { g, layer, plane })
}

/// The first failed condition of a gflow check. Condition 0 covers
/// structural problems (domain, codomain, empty sets); 1 to 5 are the
/// defining conditions in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: usize,
    pub condition: u8,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertex {} fails condition {}: {}",
            self.vertex, self.condition, self.detail
        )
    }
}

pub fn verify_gflow(og: &OpenGraph, f: &ExtendedGFlow) -> Result<(), Violation> {
    let n = og.len();
    let bad = |vertex, condition, detail: String| {
        Err(Violation {
            vertex,
            condition,
            detail,
        })
    };
    if f.layer.len() != n {
        return bad(
            0,
            0,
            format!("{} layer labels for {n} vertices", f.layer.len()),
        );
    }
    for v in 0..n {
        if og.is_output(v) {
            if f.g.contains_key(&v) {
                return bad(v, 0, "output has a correction set".into());
            }
            continue;
        }
        let Some(gv) = f.g.get(&v) else {
            return bad(v, 0, "missing correction set".into());
        };
        let Some(&plane) = f.plane.get(&v) else {
            return bad(v, 0, "missing plane".into());
        };
        if gv.is_empty() {
            return bad(v, 0, "empty correction set".into());
        }
        if let Some(&j) = gv.iter().find(|&&j| j >= n || og.is_input(j)) {
            return bad(v, 0, format!("{j} is not a non-input vertex"));
        }
        if let Some(&j) = gv.iter().find(|&&j| j != v && !f.precedes(v, j)) {
            return bad(v, 1, format!("{j} in g({v}) is not later"));
        }
        let odd = odd_neighbourhood(og, gv);
        if let Some(&j) = odd.iter().find(|&&j| j != v && !f.precedes(v, j)) {
            return bad(v, 2, format!("{j} in Odd(g({v})) is not later"));
        }
        let in_g = gv.contains(&v);
        let in_odd = odd.contains(&v);
        let (cond, ok) = match plane {
            Plane::XY => (3, !in_g && in_odd),
            Plane::XZ => (4, in_g && in_odd),
            Plane::YZ => (5, in_g && !in_odd),
        };
        if !ok {
            return bad(
                v,
                cond,
                format!("{plane:?} plane, in g: {in_g}, in Odd: {in_odd}"),
            );
        }
    }
    Ok(())
}
