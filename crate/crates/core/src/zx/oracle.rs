//! Brute-force evaluation of a diagram by summing over every assignment of
//! basis values to its spiders.
//!
//! A spider with phase `a` contributes `e^{i a x}`, a Hadamard edge
//! contributes `2^{-1/2} (-1)^{x_u x_v}` and a plain edge forces `x_u = x_v`.

use std::collections::HashMap;

use num_complex::Complex64 as C;
use rayon::prelude::*;

use super::{EdgeKind, VertexKind, ZxDiagram, V};
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 24;

const CHUNK_BITS: usize = 12;

/// Value of a closed diagram, scalar included.
pub fn oracle_scalar(d: &ZxDiagram) -> Result<C> {
    oracle_scalar_with_cap(d, DEFAULT_CAP)
}

pub fn oracle_scalar_with_cap(d: &ZxDiagram, cap: usize) -> Result<C> {
    if !d.is_closed() {
        return Err(Error::NotClosed);
    }
    evaluate(d, &HashMap::new(), cap)
}

/// Dense tensor of an open diagram as a matrix indexed `[outputs][inputs]`;
/// bit `k` of an index is the value on the `k`-th boundary of that side.
pub fn oracle_tensor(d: &ZxDiagram) -> Result<Vec<Vec<C>>> {
    oracle_tensor_with_cap(d, DEFAULT_CAP)
}

pub fn oracle_tensor_with_cap(d: &ZxDiagram, cap: usize) -> Result<Vec<Vec<C>>> {
    let (ni, no) = (d.inputs().len(), d.outputs().len());
    let mut out = vec![vec![C::new(0.0, 0.0); 1 << ni]; 1 << no];
    for y in 0..1usize << no {
        for x in 0..1usize << ni {
            let mut fixed = HashMap::new();
            for (k, &b) in d.inputs().iter().enumerate() {
                fixed.insert(b, x >> k & 1 == 1);
            }
            for (k, &b) in d.outputs().iter().enumerate() {
                fixed.insert(b, y >> k & 1 == 1);
            }
            out[y][x] = evaluate(d, &fixed, cap)?;
        }
    }
    Ok(out)
}

/// Sums over all spider assignments with boundary values fixed by `fixed`
/// (missing boundaries count as 0).
pub fn evaluate(d: &ZxDiagram, fixed: &HashMap<V, bool>, cap: usize) -> Result<C> {
    let spiders: Vec<V> = d.spiders().collect();
    let n = spiders.len();
    if n > cap || n > 40 {
        return Err(Error::TooLargeForOracle {
            vertices: n,
            cap: cap.min(40),
        });
    }
    let index: HashMap<V, usize> = spiders.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let bval = |b: V| fixed.get(&b).copied().unwrap_or(false);

    let mut had_upper = vec![0u64; n];
    let mut lin = 0u64;
    let mut eq_pairs: Vec<(usize, usize)> = Vec::new();
    let mut force_one = 0u64;
    let mut force_zero = 0u64;
    let mut had_edges = 0i32;
    let mut sign = false;
    let mut dead = false;
    for (u, v, k) in d.edges() {
        if k == EdgeKind::Hadamard {
            had_edges += 1;
        }
        match (d.kind(u), d.kind(v)) {
            (VertexKind::Z, VertexKind::Z) => {
                let (a, b) = (index[&u], index[&v]);
                match k {
                    EdgeKind::Hadamard => had_upper[a.min(b)] |= 1 << a.max(b),
                    EdgeKind::Plain => eq_pairs.push((a, b)),
                }
            }
            (VertexKind::Boundary, VertexKind::Boundary) => {
                let (x, y) = (bval(u), bval(v));
                match k {
                    EdgeKind::Hadamard => sign ^= x && y,
                    EdgeKind::Plain => dead |= x != y,
                }
            }
            (ku, _) => {
                let (s, b) = if ku == VertexKind::Z { (u, v) } else { (v, u) };
                let i = index[&s];
                let x = bval(b);
                match k {
                    EdgeKind::Hadamard => {
                        if x {
                            lin ^= 1 << i;
                        }
                    }
                    EdgeKind::Plain => {
                        if x {
                            force_one |= 1 << i;
                        } else {
                            force_zero |= 1 << i;
                        }
                    }
                }
            }
        }
    }
    let norm = d.scalar().to_complex() * 2f64.powf(-had_edges as f64 / 2.0);
    if dead || force_one & force_zero != 0 {
        return Ok(C::new(0.0, 0.0));
    }
    let phases: Vec<C> = spiders.iter().map(|&v| d.phase(v).exp_i()).collect();

    let weight = |x: u64| -> C {
        if x & force_zero != 0 || x & force_one != force_one {
            return C::new(0.0, 0.0);
        }
        if eq_pairs.iter().any(|&(a, b)| (x >> a & 1) != (x >> b & 1)) {
            return C::new(0.0, 0.0);
        }
        let mut parity = (x & lin).count_ones();
        let mut w = C::new(1.0, 0.0);
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            parity += (x & had_upper[i]).count_ones();
            w *= phases[i];
        }
        if parity & 1 == 1 {
            -w
        } else {
            w
        }
    };

    let total: u64 = 1 << n;
    let sum = if n <= CHUNK_BITS {
        (0..total).map(weight).sum::<C>()
    } else {
        // fixed chunking keeps the reduction order deterministic
        let chunk = 1u64 << CHUNK_BITS;
        let partial: Vec<C> = (0..total / chunk)
            .into_par_iter()
            .map(|c| (c * chunk..(c + 1) * chunk).map(weight).sum::<C>())
            .collect();
        partial.into_iter().sum()
    };
    let sum = if sign { -sum } else { sum };
    Ok(sum * norm)
}
