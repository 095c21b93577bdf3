//! Contraction of closed graph-like diagrams along a rank-decomposition.
//!
//! Each tree node `u` with leaf set `S` and cut matrix `A = A[S, V \ S]`
//! keeps a state `h_u` over `a` in `F_2^{r_u}`: the sum of the spider and
//! inner-edge weights of all assignments `x_S` with `x_S U = a`, where
//! `A = U W` is a rank factorisation. The parity matrix `M_u` is a left
//! inverse of `U`. Hadamard edges contribute `(-1)^{x_u x_v}` here; their
//! `2^{-1/2}` factors are applied once at the end.

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;
use crate::rankdecomp::{verify_decomposition, DecompositionTree, Graph};
use crate::zx::{Scalar, ZxDiagram};

/// A node's state, its parity matrix, and the graph vertices below it in
/// the row order used by the parity matrix.
#[derive(Clone, Debug)]
pub struct ContractionState {
    pub amplitudes: Vec<C>,
    pub parity: BitMatrix,
    pub leaf_set: Vec<usize>,
    /// The state is `amplitudes * 2^scale`.
    pub scale: i32,
}

/// The tree hung from a dummy root placed on one edge.
#[derive(Clone, Debug)]
pub struct RootedTree {
    /// Node 0 is the dummy root; tree node `x` becomes node `x + 1`.
    pub children: Vec<Vec<usize>>,
    pub parent: Vec<usize>,
    pub leaf_vertex: Vec<Option<usize>>,
    pub sets: Vec<Vec<usize>>,
    pub rank: Vec<usize>,
}

/// Roots `t` on edge `root_edge`, or on the edge of largest rank (lowest
/// index on ties) when `None`.
pub fn root_tree(t: &DecompositionTree, root_edge: Option<usize>) -> Result<RootedTree> {
    if t.edges.is_empty() {
        return Err(Error::TooSmall);
    }
    let e0 = match root_edge {
        Some(e) if e < t.edges.len() => e,
        Some(e) => return Err(Error::DecompositionMismatch(format!("no edge {e}"))),
        None => {
            let m = t.width();
            t.ranks.iter().position(|&r| r == m).unwrap_or(0)
        }
    };
    let n = t.num_nodes + 1;
    let nb = t.neighbours();
    let mut children = vec![Vec::new(); n];
    let mut parent = vec![usize::MAX; n];
    let mut rank = vec![0; n];
    let (a, b) = t.edges[e0];
    parent[0] = 0;
    let mut stack = Vec::new();
    for x in [a, b] {
        children[0].push(x + 1);
        parent[x + 1] = 0;
        rank[x + 1] = t.ranks[e0];
        stack.push(x);
    }
    while let Some(x) = stack.pop() {
        for &(y, e) in &nb[x] {
            if e == e0 || parent[y + 1] != usize::MAX {
                continue;
            }
            parent[y + 1] = x + 1;
            rank[y + 1] = t.ranks[e];
            children[x + 1].push(y + 1);
            stack.push(y);
        }
    }
    let mut leaf_vertex = vec![None; n];
    for (v, &l) in t.leaf_of.iter().enumerate() {
        leaf_vertex[l + 1] = Some(v);
    }
    let mut sets = vec![Vec::new(); n];
    for x in post_order(&children) {
        if let Some(v) = leaf_vertex[x] {
            sets[x] = vec![v];
        } else {
            let mut s = Vec::new();
            for &c in &children[x] {
                s.extend_from_slice(&sets[c]);
            }
            sets[x] = s;
        }
    }
    Ok(RootedTree {
        children,
        parent,
        leaf_vertex,
        sets,
        rank,
    })
}

fn post_order(children: &[Vec<usize>]) -> Vec<usize> {
    let mut out = Vec::with_capacity(children.len());
    let mut stack = vec![(0usize, false)];
    while let Some((x, done)) = stack.pop() {
        if done {
            out.push(x);
        } else {
            stack.push((x, true));
            for &c in children[x].iter().rev() {
                stack.push((c, false));
            }
        }
    }
    out
}

fn masks(m: &BitMatrix) -> Vec<u64> {
    (0..m.rows()).map(|r| m.row_mask(r)).collect()
}

/// `img[a] = a E` for every `a`, with `rows` the rows of `E` as masks.
fn images(rows: &[u64]) -> Vec<u64> {
    let mut img = vec![0u64; 1 << rows.len()];
    for a in 1..img.len() {
        let low = a.trailing_zeros() as usize;
        img[a] = img[a & (a - 1)] ^ rows[low];
    }
    img
}

fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

fn check_len(state: &[C], bits: usize) -> Result<()> {
    if state.len() != 1 << bits {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} for {bits} bits",
            state.len()
        )));
    }
    Ok(())
}

/// The linear map sending basis state `x` to `x E`, without normalisation.
pub fn apply_parity_map(state: &[C], e: &BitMatrix) -> Result<Vec<C>> {
    check_len(state, e.rows())?;
    let img = images(&masks(e));
    let mut out = vec![C::new(0.0, 0.0); 1 << e.cols()];
    for (x, &s) in state.iter().enumerate() {
        out[img[x] as usize] += s;
    }
    Ok(out)
}

/// Multiplies the amplitude at `x + 2^a y` by `(-1)^{x E y^T}`.
pub fn cz_phase_layer(state: &[C], e: &BitMatrix) -> Result<Vec<C>> {
    let (a, b) = (e.rows(), e.cols());
    check_len(state, a + b)?;
    let img = images(&masks(e));
    let mut out = state.to_vec();
    for (i, s) in out.iter_mut().enumerate() {
        let x = i & ((1 << a) - 1);
        let y = (i >> a) as u64;
        if parity(img[x] & y) {
            *s = -*s;
        }
    }
    Ok(out)
}

/// In-place unnormalised Walsh-Hadamard transform over the low `bits`
/// bits of every block of `2^bits` entries.
fn wht(data: &mut [C], bits: usize) {
    let n = 1usize << bits;
    for block in data.chunks_mut(n) {
        let mut h = 1;
        while h < n {
            for i in (0..n).step_by(2 * h) {
                for j in i..i + h {
                    let (x, y) = (block[j], block[j + h]);
                    block[j] = x + y;
                    block[j + h] = x - y;
                }
            }
            h *= 2;
        }
    }
}

/// Evaluation order for the combine step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvMethod {
    /// Sum over both child indices; `2^{r_v + r_w}` terms.
    Direct,
    /// Parity map and transform on the second child; `2^{r_u + r_v}` terms.
    ViaFirst,
    /// The same with the children swapped; `2^{r_u + r_w}` terms.
    ViaSecond,
}

pub fn cheapest(rv: usize, rw: usize, ru: usize) -> ConvMethod {
    let costs = [
        (rv + rw, ConvMethod::Direct),
        (ru + rv, ConvMethod::ViaFirst),
        (ru + rw, ConvMethod::ViaSecond),
    ];
    costs.iter().min_by_key(|c| c.0).unwrap().1
}

/// Combines two child states:
/// `h_u(a) = sum h_v(a_v) h_w(a_w) (-1)^{a_v E_vw a_w^T}` over pairs with
/// `a_v E_vu + a_w E_wu = a`. Returns the state and the number of complex
/// element operations performed.
pub fn convolve(
    hv: &[C],
    hw: &[C],
    e_vu: &BitMatrix,
    e_wu: &BitMatrix,
    e_vw: &BitMatrix,
) -> Result<(Vec<C>, u64)> {
    let m = cheapest(e_vu.rows(), e_wu.rows(), e_vu.cols());
    convolve_with(hv, hw, e_vu, e_wu, e_vw, m)
}

pub fn convolve_with(
    hv: &[C],
    hw: &[C],
    e_vu: &BitMatrix,
    e_wu: &BitMatrix,
    e_vw: &BitMatrix,
    method: ConvMethod,
) -> Result<(Vec<C>, u64)> {
    let (rv, rw, ru) = (e_vu.rows(), e_wu.rows(), e_vu.cols());
    if e_wu.cols() != ru || e_vw.rows() != rv || e_vw.cols() != rw {
        return Err(Error::DimensionMismatch(format!(
            "convolve: E_vu {rv}x{ru}, E_wu {}x{}, E_vw {}x{}",
            e_wu.rows(),
            e_wu.cols(),
            e_vw.rows(),
            e_vw.cols()
        )));
    }
    check_len(hv, rv)?;
    check_len(hw, rw)?;
    match method {
        ConvMethod::Direct => Ok(direct(hv, hw, e_vu, e_wu, e_vw)),
        ConvMethod::ViaFirst => Ok(via_first(hv, hw, e_vu, e_wu, e_vw)),
        ConvMethod::ViaSecond => Ok(via_first(hw, hv, e_wu, e_vu, &e_vw.transpose())),
    }
}

fn direct(
    hv: &[C],
    hw: &[C],
    e_vu: &BitMatrix,
    e_wu: &BitMatrix,
    e_vw: &BitMatrix,
) -> (Vec<C>, u64) {
    let iv = images(&masks(e_vu));
    let iw = images(&masks(e_wu));
    let tv = images(&masks(e_vw));
    let mut out = vec![C::new(0.0, 0.0); 1 << e_vu.cols()];
    for (av, &x) in hv.iter().enumerate() {
        if x == C::new(0.0, 0.0) {
            continue;
        }
        for (aw, &y) in hw.iter().enumerate() {
            let t = x * y;
            let k = (iv[av] ^ iw[aw]) as usize;
            if parity(tv[av] & aw as u64) {
                out[k] -= t;
            } else {
                out[k] += t;
            }
        }
    }
    (out, (hv.len() * hw.len()) as u64)
}

fn via_first(
    hv: &[C],
    hw: &[C],
    e_vu: &BitMatrix,
    e_wu: &BitMatrix,
    e_vw: &BitMatrix,
) -> (Vec<C>, u64) {
    let (rv, ru) = (e_vu.rows(), e_vu.cols());
    // a_w -> (b, c) = (a_w E_vw^T, a_w E_wu), packed as b + 2^rv c
    let ib = images(&masks(&e_vw.transpose()));
    let ic = images(&masks(e_wu));
    let mut k = vec![C::new(0.0, 0.0); 1 << (rv + ru)];
    for (aw, &y) in hw.iter().enumerate() {
        k[(ib[aw] | (ic[aw] << rv)) as usize] += y;
    }
    wht(&mut k, rv);
    let iv = images(&masks(e_vu));
    let mut out = vec![C::new(0.0, 0.0); 1 << ru];
    for (a, o) in out.iter_mut().enumerate() {
        let mut acc = C::new(0.0, 0.0);
        for (av, &x) in hv.iter().enumerate() {
            acc += x * k[av | (((a as u64 ^ iv[av]) as usize) << rv)];
        }
        *o = acc;
    }
    let ops = hw.len() + rv * k.len() + out.len() * hv.len();
    (out, ops as u64)
}

/// Outcome of a contraction together with its instrumentation.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub value: C,
    /// Complex element operations spent in combine steps and leaves.
    pub ops: u64,
    pub states: Vec<ContractionState>,
}

#[derive(Clone, Debug, Default)]
pub struct ContractOptions {
    /// Largest state exponent allowed at any node.
    pub max_rank: Option<usize>,
    pub root_edge: Option<usize>,
    /// Keep every node's state for inspection.
    pub keep_states: bool,
}

/// Evaluates a closed graph-like diagram along `t`, a decomposition of
/// `Graph::from_diagram(d)`.
pub fn contract(d: &ZxDiagram, t: &DecompositionTree) -> Result<C> {
    contract_with(d, t, &ContractOptions::default()).map(|c| c.value)
}

pub fn contract_with(
    d: &ZxDiagram,
    t: &DecompositionTree,
    opts: &ContractOptions,
) -> Result<Contraction> {
    if !d.is_closed() {
        return Err(Error::NotClosed);
    }
    d.check_graph_like().map_err(Error::DecompositionMismatch)?;
    let g = Graph::from_diagram(d);
    let n = g.len();
    let mut scalar = *d.scalar();
    scalar.mul_sqrt2_pow(-(g.num_edges() as i32));
    if n == 0 {
        return Ok(Contraction {
            value: scalar.to_complex(),
            ops: 0,
            states: Vec::new(),
        });
    }
    let phase = |i: usize| d.phase(g.ids[i]).exp_i();
    if n == 1 {
        scalar.mul_complex(C::new(1.0, 0.0) + phase(0));
        return Ok(Contraction {
            value: scalar.to_complex(),
            ops: 1,
            states: Vec::new(),
        });
    }
    verify_decomposition(&g, t).map_err(Error::DecompositionMismatch)?;
    let rt = root_tree(t, opts.root_edge)?;
    if let Some(budget) = opts.max_rank {
        for x in 1..rt.children.len() {
            if rt.rank[x] > budget {
                return Err(Error::BudgetExceeded {
                    node: x,
                    rank: rt.rank[x],
                    budget,
                });
            }
        }
        for x in post_order(&rt.children) {
            if let [v, w] = rt.children[x][..] {
                let (rv, rw, ru) = (rt.rank[v], rt.rank[w], rt.rank[x]);
                let peak = match cheapest(rv, rw, ru) {
                    ConvMethod::Direct => ru.max(rv).max(rw),
                    ConvMethod::ViaFirst => ru + rv,
                    ConvMethod::ViaSecond => ru + rw,
                };
                if peak > budget {
                    return Err(Error::BudgetExceeded {
                        node: x,
                        rank: peak,
                        budget,
                    });
                }
            }
        }
    }

    let mut states: Vec<Option<ContractionState>> = vec![None; rt.children.len()];
    let mut kept = Vec::new();
    let mut ops = 0u64;
    for x in post_order(&rt.children) {
        let set = &rt.sets[x];
        let (rows, cols_rest) = (set.clone(), g.complement_of(set));
        let a = g.adj.submatrix(&rows, &cols_rest);
        let (u, _) = a.rank_factorize();
        if u.cols() != rt.rank[x] {
            return Err(Error::DecompositionMismatch(format!(
                "node {x} has cut-rank {}, tree stores {}",
                u.cols(),
                rt.rank[x]
            )));
        }
        let m = u.left_inverse()?;
        let state = if let Some(v) = rt.leaf_vertex[x] {
            ops += 2;
            let amplitudes = if u.cols() == 1 {
                vec![C::new(1.0, 0.0), phase(v)]
            } else {
                vec![C::new(1.0, 0.0) + phase(v)]
            };
            ContractionState {
                amplitudes,
                parity: m,
                leaf_set: rows,
                scale: 0,
            }
        } else {
            let (cv, cw) = (rt.children[x][0], rt.children[x][1]);
            let sv = states[cv].take().expect("child state");
            let sw = states[cw].take().expect("child state");
            let nv = sv.leaf_set.len();
            let b = g.adj.submatrix(&sv.leaf_set, &sw.leaf_set);
            let e_vw = sv.parity.mul(&b)?.mul(&sw.parity.transpose())?;
            let top: Vec<usize> = (0..nv).collect();
            let bottom: Vec<usize> = (nv..rows.len()).collect();
            let e_vu = sv.parity.mul(&u.select_rows(&top))?;
            let e_wu = sw.parity.mul(&u.select_rows(&bottom))?;
            let (mut amplitudes, k) =
                convolve(&sv.amplitudes, &sw.amplitudes, &e_vu, &e_wu, &e_vw)?;
            ops += k;
            let mut scale = sv.scale + sw.scale;
            scale += renormalise(&mut amplitudes);
            if opts.keep_states {
                kept.push((cv, sv));
                kept.push((cw, sw));
            }
            ContractionState {
                amplitudes,
                parity: m,
                leaf_set: rows,
                scale,
            }
        };
        states[x] = Some(state);
    }
    let root = states[0].take().expect("root state");
    scalar.mul_sqrt2_pow(2 * root.scale);
    scalar.mul_complex(root.amplitudes[0]);
    kept.sort_by_key(|k| k.0);
    let mut out_states: Vec<ContractionState> = kept.into_iter().map(|k| k.1).collect();
    if opts.keep_states {
        out_states.push(root);
    }
    Ok(Contraction {
        value: Scalar::to_complex(&scalar),
        ops,
        states: out_states,
    })
}

/// Rescales a state by a power of two so its largest entry is near 1.
fn renormalise(s: &mut [C]) -> i32 {
    let m = s.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if m == 0.0 || !m.is_finite() {
        return 0;
    }
    let e = m.log2().round() as i32;
    if e.abs() < 32 {
        return 0;
    }
    let f = 2f64.powi(-e);
    for z in s.iter_mut() {
        *z *= f;
    }
    e
}
