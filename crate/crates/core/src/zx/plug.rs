use num_complex::Complex64 as C;

use super::{EdgeKind, Phase, ZxDiagram, V};
use crate::error::{Error, Result};

/// Closes an open diagram by plugging basis states `|x>` into the inputs and
/// effects `<y|` into the outputs. The result evaluates to `<y|D|x>`.
///
/// A boundary on a Hadamard edge becomes a phase `bit * pi` on its spider. A
/// boundary on a plain edge pins its spider to the bit, so the spider is
/// deleted and its neighbours pick up the phase `bit * pi`.
pub fn plug_states(d: &ZxDiagram, x: &[bool], y: &[bool]) -> Result<ZxDiagram> {
    if x.len() != d.inputs().len() {
        return Err(Error::LengthMismatch {
            expected: d.inputs().len(),
            got: x.len(),
        });
    }
    if y.len() != d.outputs().len() {
        return Err(Error::LengthMismatch {
            expected: d.outputs().len(),
            got: y.len(),
        });
    }
    let mut g = d.clone();
    let mut bits = std::collections::HashMap::new();
    for (&b, &v) in d.inputs().iter().zip(x).chain(d.outputs().iter().zip(y)) {
        bits.insert(b, v);
    }
    let mut touched: Vec<V> = bits
        .keys()
        .map(|&b| g.neighbours(b).next().expect("dangling boundary"))
        .collect();
    touched.sort_unstable();
    touched.dedup();

    for s in touched {
        let bnds: Vec<(V, EdgeKind)> = g.boundary_neighbours(s).collect();
        let pinned = bnds
            .iter()
            .find(|(_, k)| *k == EdgeKind::Plain)
            .map(|(b, _)| bits[b]);
        for &(b, k) in &bnds {
            let bit = bits[&b];
            match (k, pinned) {
                (EdgeKind::Hadamard, None) => {
                    if bit {
                        g.add_to_phase(s, Phase::PI);
                    }
                    g.scalar_mut().mul_sqrt2_pow(-1);
                }
                (EdgeKind::Hadamard, Some(p)) => {
                    if bit && p {
                        g.scalar_mut().mul_complex(C::new(-1.0, 0.0));
                    }
                    g.scalar_mut().mul_sqrt2_pow(-1);
                }
                (EdgeKind::Plain, Some(p)) => {
                    if bit != p {
                        g.scalar_mut().mul_complex(C::new(0.0, 0.0));
                    }
                }
                (EdgeKind::Plain, None) => unreachable!(),
            }
            g.remove_vertex(b);
        }
        if let Some(p) = pinned {
            pin_spider(&mut g, s, p);
        }
    }
    g.set_inputs(Vec::new());
    g.set_outputs(Vec::new());
    Ok(g)
}

/// Removes a spider whose value is fixed to `bit`, pushing its effect onto
/// its Hadamard neighbours.
pub(crate) fn pin_spider(g: &mut ZxDiagram, s: V, bit: bool) {
    if bit {
        let e = g.phase(s).exp_i();
        g.scalar_mut().mul_complex(e);
    }
    let nbrs: Vec<(V, EdgeKind)> = g.incident(s).collect();
    for (n, k) in nbrs {
        assert_eq!(k, EdgeKind::Hadamard, "pinned spider must be graph-like");
        if bit {
            g.add_to_phase(n, Phase::PI);
        }
        g.scalar_mut().mul_sqrt2_pow(-1);
    }
    g.remove_vertex(s);
}

/// Closes a diagram by plugging the state `(|0> + e^{i a}|1>)/sqrt2` into
/// every input and output, where `a` is `phase`.
pub fn plug_phase_states(d: &ZxDiagram, phase: Phase) -> ZxDiagram {
    let mut g = d.clone();
    let bnds: Vec<V> = d.inputs().iter().chain(d.outputs()).copied().collect();
    for b in bnds {
        let (s, k) = g.incident(b).next().expect("dangling boundary");
        g.remove_vertex(b);
        g.scalar_mut().mul_sqrt2_pow(-1);
        match k {
            EdgeKind::Plain => g.add_to_phase(s, phase),
            EdgeKind::Hadamard => {
                let t = g.add_spider(phase);
                g.set_edge(s, t, EdgeKind::Hadamard);
            }
        }
    }
    g.set_inputs(Vec::new());
    g.set_outputs(Vec::new());
    g
}

/// Closes a diagram with T-states `(|0> + e^{i pi/4}|1>)/sqrt2` on every boundary.
pub fn plug_t_states(d: &ZxDiagram) -> ZxDiagram {
    plug_phase_states(d, Phase::pi4(1))
}
