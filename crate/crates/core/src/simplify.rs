//! Clifford rewriting: graph-like normalisation, local complementation,
//! pivoting and the reduction loop built on them.

use num_complex::Complex64 as C;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zx::{unit_eighth, EdgeKind, Phase, VertexKind, ZxDiagram, V};

/// Fuses spiders joined by plain edges and splits boundary-to-boundary wires
/// until the diagram is graph-like.
pub fn to_graph_like(d: &mut ZxDiagram) {
    loop {
        let plain = d.edges().find(|&(u, v, k)| {
            k == EdgeKind::Plain && d.kind(u) == VertexKind::Z && d.kind(v) == VertexKind::Z
        });
        match plain {
            Some((u, v, _)) => fuse(d, u, v),
            None => break,
        }
    }
    let wires: Vec<(V, V, EdgeKind)> = d
        .edges()
        .filter(|&(u, v, _)| d.is_boundary(u) && d.is_boundary(v))
        .collect();
    for (a, b, k) in wires {
        d.remove_edge(a, b);
        let s = d.add_spider(Phase::ZERO);
        d.set_edge(a, s, EdgeKind::Plain);
        d.set_edge(s, b, k);
    }
}

/// Merges spider `v` into `u` along a plain edge.
fn fuse(d: &mut ZxDiagram, u: V, v: V) {
    d.remove_edge(u, v);
    let p = d.phase(v);
    d.add_to_phase(u, p);
    let inc: Vec<(V, EdgeKind)> = d.incident(v).collect();
    d.remove_vertex(v);
    for (n, k) in inc {
        if d.is_boundary(n) {
            d.set_edge(u, n, k);
        } else {
            d.add_edge_smart(u, n, k);
        }
    }
}

fn check_interior(d: &ZxDiagram, v: V) -> Result<()> {
    if !d.contains(v) || !d.is_interior(v) {
        return Err(Error::InvalidVertex(v));
    }
    Ok(())
}

fn pauli_bit(p: Phase) -> bool {
    p.eighths() == 4
}

/// Removes an interior spider with phase +-pi/2 by complementing its
/// neighbourhood.
pub fn local_complement(d: &mut ZxDiagram, v: V) -> Result<()> {
    check_interior(d, v)?;
    let p = d.phase(v);
    if !p.is_proper_clifford() {
        return Err(Error::NotProperClifford(v));
    }
    let k = p.eighths() as i64;
    let ns: Vec<V> = d.neighbours(v).collect();
    let deg = ns.len() as i32;
    d.remove_vertex(v);
    d.scalar_mut().mul_sqrt2_pow(1 - deg);
    d.scalar_mut()
        .mul_complex(unit_eighth(if k == 2 { 1 } else { 7 }));
    for (i, &a) in ns.iter().enumerate() {
        d.add_to_phase(a, Phase::pi4(8 - k));
        for &b in &ns[i + 1..] {
            d.toggle_cz(a, b);
        }
    }
    Ok(())
}

/// Removes two adjacent interior Pauli spiders.
pub fn pivot(d: &mut ZxDiagram, u: V, v: V) -> Result<()> {
    check_interior(d, u)?;
    check_interior(d, v)?;
    if d.edge(u, v) != Some(EdgeKind::Hadamard) {
        return Err(Error::NotPauli(u, v));
    }
    let (pu, pv) = (d.phase(u), d.phase(v));
    if !pu.is_pauli() || !pv.is_pauli() {
        return Err(Error::NotPauli(u, v));
    }
    let nu: Vec<V> = d.neighbours(u).filter(|&n| n != v).collect();
    let nv: Vec<V> = d.neighbours(v).filter(|&n| n != u).collect();
    let both: Vec<V> = nu.iter().copied().filter(|n| nv.contains(n)).collect();
    let uonly: Vec<V> = nu.iter().copied().filter(|n| !both.contains(n)).collect();
    let vonly: Vec<V> = nv.iter().copied().filter(|n| !both.contains(n)).collect();
    let (a, b) = (pauli_bit(pu), pauli_bit(pv));

    d.remove_vertex(u);
    d.remove_vertex(v);
    d.scalar_mut()
        .mul_sqrt2_pow(1 - nu.len() as i32 - nv.len() as i32);
    if a && b {
        d.scalar_mut().mul_complex(C::new(-1.0, 0.0));
    }
    for &x in &vonly {
        if a {
            d.add_to_phase(x, Phase::PI);
        }
    }
    for &x in &uonly {
        if b {
            d.add_to_phase(x, Phase::PI);
        }
    }
    for &x in &both {
        if a == b {
            d.add_to_phase(x, Phase::PI);
        }
    }
    for (xs, ys) in [(&uonly, &vonly), (&uonly, &both), (&both, &vonly)] {
        for &x in xs {
            for &y in ys {
                d.toggle_cz(x, y);
            }
        }
    }
    Ok(())
}

/// Pivots an interior Pauli spider `u` with a Pauli spider `v` that touches
/// exactly one boundary. The boundary wire is first moved onto a fresh
/// phase-0 spider so that `v` becomes interior.
pub fn pivot_boundary(d: &mut ZxDiagram, u: V, v: V) -> Result<()> {
    check_interior(d, u)?;
    if !d.contains(v) || d.is_boundary(v) {
        return Err(Error::InvalidVertex(v));
    }
    let bnds: Vec<(V, EdgeKind)> = d.boundary_neighbours(v).collect();
    if bnds.len() != 1 {
        return Err(Error::InvalidVertex(v));
    }
    if !d.phase(u).is_pauli() || !d.phase(v).is_pauli() || !d.connected(u, v) {
        return Err(Error::NotPauli(u, v));
    }
    let (bd, k) = bnds[0];
    d.remove_edge(v, bd);
    let z = d.add_spider(Phase::ZERO);
    d.set_edge(v, z, EdgeKind::Hadamard);
    d.set_edge(z, bd, k.toggled());
    pivot(d, u, v)
}

/// Pivots an interior Pauli spider `u` with an interior non-Clifford
/// spider `v`, first moving the phase of `v` out onto a new phase gadget.
pub fn pivot_gadget(d: &mut ZxDiagram, u: V, v: V) -> Result<()> {
    check_interior(d, u)?;
    check_interior(d, v)?;
    if !d.phase(u).is_pauli() || !d.connected(u, v) {
        return Err(Error::NotPauli(u, v));
    }
    if d.phase(v).is_clifford() || d.degree(v) < 2 {
        return Err(Error::InvalidVertex(v));
    }
    let alpha = d.phase(v);
    d.set_phase(v, Phase::ZERO);
    let body = d.add_spider(Phase::ZERO);
    let leaf = d.add_spider(alpha);
    d.set_edge(v, body, EdgeKind::Hadamard);
    d.set_edge(body, leaf, EdgeKind::Hadamard);
    pivot(d, u, v)
}

/// Removes an interior phase-0 spider of degree 2 by joining its neighbours.
pub fn remove_identity(d: &mut ZxDiagram, s: V) -> Result<()> {
    if !d.contains(s) || d.is_boundary(s) || d.degree(s) != 2 || !d.phase(s).is_zero() {
        return Err(Error::InvalidVertex(s));
    }
    let inc: Vec<(V, EdgeKind)> = d.incident(s).collect();
    let (n1, k1) = inc[0];
    let (n2, k2) = inc[1];
    let (b1, b2) = (d.is_boundary(n1), d.is_boundary(n2));
    if b1 && b2 {
        return Err(Error::InvalidVertex(s));
    }
    let k = if k1 == k2 {
        EdgeKind::Plain
    } else {
        EdgeKind::Hadamard
    };
    d.remove_vertex(s);
    if b1 || b2 {
        d.set_edge(n1, n2, k);
    } else if k == EdgeKind::Plain {
        if let Some(existing) = d.edge(n1, n2) {
            // fusing along a plain edge turns the old edge into a self-loop
            d.remove_edge(n1, n2);
            fuse_with_loop(d, n1, n2, existing);
        } else {
            d.set_edge(n1, n2, EdgeKind::Plain);
            fuse(d, n1, n2);
        }
    } else {
        d.add_edge_smart(n1, n2, EdgeKind::Hadamard);
    }
    Ok(())
}

fn fuse_with_loop(d: &mut ZxDiagram, u: V, v: V, old: EdgeKind) {
    d.set_edge(u, v, EdgeKind::Plain);
    fuse(d, u, v);
    d.add_edge_smart(u, u, old);
}

/// Removes an interior degree-1 Pauli spider together with its interior
/// neighbour, which it pins to a basis state.
pub fn copy_pauli(d: &mut ZxDiagram, b: V) -> Result<()> {
    check_interior(d, b)?;
    if d.degree(b) != 1 || !d.phase(b).is_pauli() {
        return Err(Error::InvalidVertex(b));
    }
    let w = d.neighbours(b).next().unwrap();
    check_interior(d, w)?;
    let a = pauli_bit(d.phase(b));
    let others: Vec<V> = d.neighbours(w).filter(|&n| n != b).collect();
    let alpha = d.phase(w);
    d.remove_vertex(b);
    d.remove_vertex(w);
    d.scalar_mut().mul_sqrt2_pow(1 - others.len() as i32);
    if a {
        d.scalar_mut().mul_complex(alpha.exp_i());
        for &n in &others {
            d.add_to_phase(n, Phase::PI);
        }
    }
    Ok(())
}

/// Removes a spider with no edges, multiplying the scalar by its value.
pub fn remove_isolated(d: &mut ZxDiagram, v: V) -> Result<()> {
    if !d.contains(v) || d.is_boundary(v) || d.degree(v) != 0 {
        return Err(Error::InvalidVertex(v));
    }
    let z = C::new(1.0, 0.0) + d.phase(v).exp_i();
    d.remove_vertex(v);
    d.scalar_mut().mul_complex(z);
    Ok(())
}

/// Number of times each rule fired during a reduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RewriteStats {
    pub isolated: usize,
    pub copy: usize,
    pub identity: usize,
    pub local_complement: usize,
    pub pivot: usize,
    pub pivot_boundary: usize,
    pub pivot_gadget: usize,
}

impl RewriteStats {
    pub fn total(&self) -> usize {
        self.isolated
            + self.copy
            + self.identity
            + self.local_complement
            + self.pivot
            + self.pivot_boundary
            + self.pivot_gadget
    }
}

/// A spider with a degree-1 non-Clifford neighbour on a Hadamard edge.
fn is_gadget_body(d: &ZxDiagram, v: V) -> bool {
    d.phase(v).is_clifford()
        && d.incident(v).any(|(n, k)| {
            k == EdgeKind::Hadamard
                && d.kind(n) == VertexKind::Z
                && d.degree(n) == 1
                && !d.phase(n).is_clifford()
        })
}

fn interior_pauli(d: &ZxDiagram, v: V) -> bool {
    d.kind(v) == VertexKind::Z && d.phase(v).is_pauli() && d.is_interior(v)
}

fn sweep(d: &mut ZxDiagram, mut step: impl FnMut(&mut ZxDiagram, V) -> bool) -> usize {
    let mut n = 0;
    for v in 0..d.capacity() {
        if d.contains(v) && step(d, v) {
            n += 1;
        }
    }
    n
}

/// Applies Clifford rewrites until none applies. Rules run in a fixed
/// order, vertices in ascending handle order and pairs lexicographically.
pub fn full_reduce(d: &mut ZxDiagram) -> RewriteStats {
    to_graph_like(d);
    let mut st = RewriteStats::default();
    loop {
        let before = st.total();

        st.isolated += sweep(d, |d, v| {
            d.kind(v) == VertexKind::Z && d.degree(v) == 0 && remove_isolated(d, v).is_ok()
        });
        st.copy += sweep(d, |d, v| {
            interior_pauli(d, v)
                && d.degree(v) == 1
                && {
                    let w = d.neighbours(v).next().unwrap();
                    d.is_interior(w)
                }
                && copy_pauli(d, v).is_ok()
        });
        st.identity += sweep(d, |d, v| {
            d.kind(v) == VertexKind::Z
                && d.degree(v) == 2
                && d.phase(v).is_zero()
                && remove_identity(d, v).is_ok()
        });
        st.local_complement += sweep(d, |d, v| {
            d.kind(v) == VertexKind::Z
                && d.phase(v).is_proper_clifford()
                && d.is_interior(v)
                && local_complement(d, v).is_ok()
        });
        st.pivot += sweep(d, |d, u| {
            if !interior_pauli(d, u) {
                return false;
            }
            let partner = d.neighbours(u).find(|&v| v > u && interior_pauli(d, v));
            partner.is_some_and(|v| pivot(d, u, v).is_ok())
        });
        if st.total() != before {
            continue;
        }

        st.pivot_boundary += sweep(d, |d, u| {
            if !interior_pauli(d, u) {
                return false;
            }
            let partner = d
                .neighbours(u)
                .find(|&v| d.phase(v).is_pauli() && d.boundary_neighbours(v).count() == 1);
            partner.is_some_and(|v| pivot_boundary(d, u, v).is_ok())
        });
        if st.total() != before {
            continue;
        }

        st.pivot_gadget += sweep(d, |d, u| {
            if !interior_pauli(d, u) || is_gadget_body(d, u) {
                return false;
            }
            let partner = d
                .neighbours(u)
                .find(|&v| d.is_interior(v) && !d.phase(v).is_clifford() && d.degree(v) > 1);
            partner.is_some_and(|v| pivot_gadget(d, u, v).is_ok())
        });
        if st.total() == before {
            break;
        }
    }
    st
}

/// First interior Clifford spider that is neither a gadget body nor
/// touching a boundary, if any. A fully reduced closed diagram has none.
pub fn stray_clifford(d: &ZxDiagram) -> Option<V> {
    d.spiders()
        .find(|&v| d.is_interior(v) && d.phase(v).is_clifford() && !is_gadget_body(d, v))
}

/// Gadget leaves and bodies, as `(leaf, body)` pairs.
pub fn gadgets(d: &ZxDiagram) -> Vec<(V, V)> {
    d.phase_gadgets()
}
