//! Cut-rank, rank-decompositions and their cost model.

mod heuristics;

pub use heuristics::{
    flow_order_ids, rw_flow, rw_greedy_b2t, rw_greedy_linear, rw_greedy_linear_with, rw_tcount,
    tcount_units,
};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;
use crate::gflow::OpenGraph;
use crate::zx::{ZxDiagram, V};

/// A simple undirected graph on `0..n`, optionally labelled with diagram
/// vertex handles.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    pub adj: BitMatrix,
    pub ids: Vec<V>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = BitMatrix::zeros(n, n);
        for &(a, b) in edges {
            if a != b {
                adj.set(a, b, true);
                adj.set(b, a, true);
            }
        }
        Graph {
            adj,
            ids: (0..n).collect(),
        }
    }

    /// The spiders of a diagram in handle order, joined by its edges.
    pub fn from_diagram(d: &ZxDiagram) -> Self {
        let ids: Vec<V> = d.spiders().collect();
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
        Graph { adj, ids }
    }

    pub fn from_open_graph(og: &OpenGraph) -> Self {
        Graph {
            adj: og.adj.clone(),
            ids: og.ids.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.adj.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, id: V) -> Option<usize> {
        self.ids.iter().position(|&v| v == id)
    }

    pub fn num_edges(&self) -> usize {
        self.adj.count_ones() / 2
    }

    pub fn complement(&self) -> Graph {
        let n = self.len();
        Graph {
            adj: BitMatrix::from_fn(n, n, |a, b| a != b && !self.adj.get(a, b)),
            ids: self.ids.clone(),
        }
    }

    /// Biadjacency matrix between `x` and the remaining vertices, with
    /// columns in increasing vertex order.
    pub fn biadjacency(&self, x: &[usize]) -> (BitMatrix, Vec<usize>) {
        let rest = self.complement_of(x);
        (self.adj.submatrix(x, &rest), rest)
    }

    pub fn complement_of(&self, x: &[usize]) -> Vec<usize> {
        let mut inx = vec![false; self.len()];
        for &v in x {
            inx[v] = true;
        }
        (0..self.len()).filter(|&v| !inx[v]).collect()
    }
}

/// Rank of the biadjacency matrix between `x` and its complement.
pub fn cut_rank(g: &Graph, x: &[usize]) -> usize {
    g.biadjacency(x).0.rank()
}

/// A branch-decomposition: leaves are in bijection with graph vertices,
/// internal nodes have degree 3, and every edge stores the cut-rank of the
/// vertex bipartition it induces. Graphs with at most one vertex use a
/// single node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTree {
    pub num_nodes: usize,
    pub edges: Vec<(usize, usize)>,
    /// Tree node holding each graph vertex.
    pub leaf_of: Vec<usize>,
    /// Cut-rank per edge, aligned with `edges`.
    pub ranks: Vec<usize>,
}

/// Builds trees bottom-up. Nodes `0..n` are the leaves for vertices `0..n`.
pub struct TreeBuilder {
    n: usize,
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl TreeBuilder {
    pub fn new(n: usize) -> Self {
        TreeBuilder {
            n,
            num_nodes: n,
            edges: Vec::new(),
        }
    }

    /// Adds a parent over two current roots and returns it.
    pub fn merge(&mut self, a: usize, b: usize) -> usize {
        let c = self.num_nodes;
        self.num_nodes += 1;
        self.edges.push((a, c));
        self.edges.push((b, c));
        c
    }

    /// Finishes the tree, contracting the degree-2 top node, and computes
    /// cut-ranks for `g`.
    pub fn finish(mut self, g: &Graph) -> DecompositionTree {
        let leaf_of: Vec<usize> = (0..self.n).collect();
        if self.n <= 1 {
            return DecompositionTree {
                num_nodes: 1,
                edges: Vec::new(),
                leaf_of,
                ranks: Vec::new(),
            };
        }
        assert_eq!(
            self.edges.len(),
            2 * (self.n - 1),
            "forest is not a single tree"
        );
        let top = self.num_nodes - 1;
        let (a, _) = self.edges.pop().unwrap();
        let (b, _) = self.edges.pop().unwrap();
        debug_assert!(self.edges.iter().all(|&(x, y)| x != top && y != top));
        self.edges.push((b, a));
        self.num_nodes -= 1;
        let mut t = DecompositionTree {
            num_nodes: self.num_nodes,
            edges: self.edges,
            leaf_of,
            ranks: Vec::new(),
        };
        t.ranks = t.compute_ranks(g);
        t
    }
}

impl DecompositionTree {
    pub fn neighbours(&self) -> Vec<Vec<(usize, usize)>> {
        let mut nb = vec![Vec::new(); self.num_nodes];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            nb[a].push((b, e));
            nb[b].push((a, e));
        }
        nb
    }

    /// Graph vertices on the `a` side of edge `e` when it is removed.
    pub fn side(&self, e: usize) -> Vec<usize> {
        let nb = self.neighbours();
        let (a, b) = self.edges[e];
        let mut node_of_leaf = vec![None; self.num_nodes];
        for (v, &l) in self.leaf_of.iter().enumerate() {
            node_of_leaf[l] = Some(v);
        }
        let mut seen = vec![false; self.num_nodes];
        seen[b] = true;
        seen[a] = true;
        let mut stack = vec![a];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            if let Some(v) = node_of_leaf[x] {
                out.push(v);
            }
            for &(y, _) in &nb[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn compute_ranks(&self, g: &Graph) -> Vec<usize> {
        (0..self.edges.len())
            .map(|e| cut_rank(g, &self.side(e)))
            .collect()
    }

    pub fn width(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Cost exponent of a node: the smallest sum of two incident edge ranks
    /// for internal nodes, 0 for leaves.
    pub fn node_cost(&self, nb: &[(usize, usize)]) -> usize {
        if nb.len() < 3 {
            return 0;
        }
        let r: Vec<usize> = nb.iter().map(|&(_, e)| self.ranks[e]).collect();
        (r[0] + r[1]).min(r[0] + r[2]).min(r[1] + r[2])
    }

    /// Sum over nodes of `2^cost`.
    pub fn flops(&self) -> BigUint {
        let nb = self.neighbours();
        nb.iter()
            .map(|n| BigUint::from(1u8) << self.node_cost(n))
            .sum()
    }

    /// Largest node cost exponent.
    pub fn max_node_cost(&self) -> usize {
        self.neighbours()
            .iter()
            .map(|n| self.node_cost(n))
            .max()
            .unwrap_or(0)
    }

    /// Whether the internal nodes form a path.
    pub fn is_caterpillar(&self) -> bool {
        let nb = self.neighbours();
        let internal: Vec<usize> = (0..self.num_nodes).filter(|&x| nb[x].len() > 1).collect();
        internal
            .iter()
            .all(|&x| nb[x].iter().filter(|&&(y, _)| nb[y].len() > 1).count() <= 2)
    }

    /// Keeps only the graph vertices selected by `keep` (given as old
    /// indices, in new index order), pruning and contracting the tree.
    pub fn restrict(&self, keep: &[usize], g: &Graph) -> Result<DecompositionTree> {
        if keep.len() <= 1 {
            return Ok(TreeBuilder::new(keep.len()).finish(g));
        }
        let nb = self.neighbours();
        let mut alive = vec![false; self.num_nodes];
        let mut new_leaf = vec![None; self.num_nodes];
        for (i, &v) in keep.iter().enumerate() {
            alive[self.leaf_of[v]] = true;
            new_leaf[self.leaf_of[v]] = Some(i);
        }
        // an internal node survives if at least two of its branches hold kept leaves
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.num_nodes];
        let root = self.leaf_of[keep[0]];
        let mut order = vec![root];
        let mut parent = vec![usize::MAX; self.num_nodes];
        parent[root] = root;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &(y, _) in &nb[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    order.push(y);
                }
            }
        }
        let mut has = alive.clone();
        for &x in order.iter().rev() {
            if x != root && has[x] {
                has[parent[x]] = true;
                adj[parent[x]].push(x);
            }
        }
        // compress unary chains
        let mut builder_edges = Vec::new();
        let mut id = BTreeMap::new();
        let mut next = keep.len();
        let mut node_id = |x: usize, id: &mut BTreeMap<usize, usize>| -> usize {
            if let Some(l) = new_leaf[x] {
                return l;
            }
            *id.entry(x).or_insert_with(|| {
                next += 1;
                next - 1
            })
        };
        let mut stack = vec![(root, root)];
        while let Some((x, attach)) = stack.pop() {
            let kids = &adj[x];
            let branching = kids.len() >= 2 || new_leaf[x].is_some();
            let here = if branching {
                let nx = node_id(x, &mut id);
                if x != root {
                    let na = node_id(attach, &mut id);
                    builder_edges.push((nx, na));
                }
                x
            } else {
                attach
            };
            for &k in kids {
                stack.push((k, here));
            }
        }
        let num_nodes = keep.len() + id.len();
        let t = DecompositionTree {
            num_nodes,
            edges: builder_edges,
            leaf_of: (0..keep.len()).collect(),
            ranks: Vec::new(),
        };
        let ranks = t.compute_ranks(g);
        let t = DecompositionTree { ranks, ..t };
        verify_decomposition(g, &t).map_err(Error::DecompositionMismatch)?;
        Ok(t)
    }

    /// Serialisable view with leaves labelled by diagram handles.
    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        serde_json::json!({
            "num_nodes": self.num_nodes,
            "edges": self.edges,
            "ranks": self.ranks,
            "leaves": self.leaf_of.iter().enumerate()
                .map(|(v, &l)| serde_json::json!({"vertex": g.ids[v], "node": l}))
                .collect::<Vec<_>>(),
            "width": self.width(),
            "flops": self.flops().to_string(),
        })
    }
}

/// A vertex permutation with the cut-rank after each prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOrder {
    pub order: Vec<usize>,
    /// `ranks[i]` is the cut-rank of the first `i + 1` vertices; the full
    /// prefix is omitted.
    pub ranks: Vec<usize>,
}

impl LinearOrder {
    pub fn new(g: &Graph, order: Vec<usize>) -> Self {
        assert_eq!(order.len(), g.len());
        let ranks = (1..order.len()).map(|i| cut_rank(g, &order[..i])).collect();
        LinearOrder { order, ranks }
    }

    pub fn width(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    pub fn is_permutation(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.order.len() == n
            && self
                .order
                .iter()
                .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }
}

/// Caterpillar tree with leaves along the spine in the order of `p`.
pub fn linear_to_tree(g: &Graph, p: &LinearOrder) -> Result<DecompositionTree> {
    if g.len() < 2 {
        return Err(Error::TooSmall);
    }
    Ok(caterpillar(g, &p.order))
}

pub(crate) fn caterpillar(g: &Graph, order: &[usize]) -> DecompositionTree {
    let mut b = TreeBuilder::new(g.len());
    if let Some((&first, rest)) = order.split_first() {
        let mut acc = first;
        for &v in rest {
            acc = b.merge(acc, v);
        }
    }
    b.finish(g)
}

/// Checks the leaf bijection, node degrees, connectivity and every stored
/// cut-rank. The error names the first problem found.
pub fn verify_decomposition(g: &Graph, t: &DecompositionTree) -> std::result::Result<(), String> {
    let n = g.len();
    if t.leaf_of.len() != n {
        return Err(format!("{} leaves for {n} vertices", t.leaf_of.len()));
    }
    if n <= 1 {
        return if t.num_nodes == 1 && t.edges.is_empty() {
            Ok(())
        } else {
            Err("degenerate graph needs a single-node tree".into())
        };
    }
    if t.edges.len() + 1 != t.num_nodes {
        return Err(format!("{} edges for {} nodes", t.edges.len(), t.num_nodes));
    }
    if t.ranks.len() != t.edges.len() {
        return Err("rank count differs from edge count".into());
    }
    if t.edges
        .iter()
        .any(|&(a, b)| a >= t.num_nodes || b >= t.num_nodes || a == b)
    {
        return Err("edge endpoint out of range".into());
    }
    let nb = t.neighbours();
    let mut is_leaf = vec![false; t.num_nodes];
    for (v, &l) in t.leaf_of.iter().enumerate() {
        if l >= t.num_nodes || std::mem::replace(&mut is_leaf[l], true) {
            return Err(format!("vertex {v} has no leaf of its own"));
        }
    }
    for x in 0..t.num_nodes {
        let want = if is_leaf[x] { 1 } else { 3 };
        if nb[x].len() != want {
            return Err(format!("node {x} has degree {}", nb[x].len()));
        }
    }
    let mut seen = vec![false; t.num_nodes];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(y, _) in &nb[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err("tree is disconnected".into());
    }
    for (e, &r) in t.ranks.iter().enumerate() {
        let fresh = cut_rank(g, &t.side(e));
        if fresh != r {
            let (a, b) = t.edges[e];
            return Err(format!("edge {a}-{b} stores rank {r}, actual {fresh}"));
        }
    }
    Ok(())
}
