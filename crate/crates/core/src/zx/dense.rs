//! Naive state-vector simulation. Used as the reference baseline and as an
//! oracle that does not go through ZX-diagrams at all.

use num_complex::Complex64 as C;

use super::circuit::{gate_angle, Circuit, Gate};

/// Applies one gate to a state vector; qubit `q` is bit `q` of the index.
pub fn apply_gate(state: &mut [C], g: &Gate) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let had = |state: &mut [C], q: usize| {
        let m = 1usize << q;
        for i in 0..state.len() {
            if i & m == 0 {
                let (a, b) = (state[i], state[i | m]);
                state[i] = (a + b) * h;
                state[i | m] = (a - b) * h;
            }
        }
    };
    let phase = |state: &mut [C], q: usize, t: f64| {
        let m = 1usize << q;
        let e = C::from_polar(1.0, t);
        for (i, a) in state.iter_mut().enumerate() {
            if i & m != 0 {
                *a *= e;
            }
        }
    };
    match *g {
        Gate::H(q) => had(state, q),
        Gate::Cnot(c, t) => {
            let (mc, mt) = (1usize << c, 1usize << t);
            for i in 0..state.len() {
                if i & mc != 0 && i & mt == 0 {
                    state.swap(i, i | mt);
                }
            }
        }
        Gate::Cz(a, b) => {
            let m = (1usize << a) | (1usize << b);
            for (i, x) in state.iter_mut().enumerate() {
                if i & m == m {
                    *x = -*x;
                }
            }
        }
        Gate::X(q) => {
            let m = 1usize << q;
            for i in 0..state.len() {
                if i & m == 0 {
                    state.swap(i, i | m);
                }
            }
        }
        Gate::Rx(q, t) => {
            had(state, q);
            phase(state, q, t);
            had(state, q);
        }
        _ => {
            let q = g.qubits()[0];
            phase(state, q, gate_angle(g));
        }
    }
}

pub fn run(c: &Circuit, input: usize) -> Vec<C> {
    let mut s = vec![C::new(0.0, 0.0); 1 << c.qubits];
    s[input] = C::new(1.0, 0.0);
    for g in &c.gates {
        apply_gate(&mut s, g);
    }
    s
}

/// Full unitary, indexed `[output][input]`.
pub fn unitary(c: &Circuit) -> Vec<Vec<C>> {
    let dim = 1usize << c.qubits;
    let cols: Vec<Vec<C>> = (0..dim).map(|x| run(c, x)).collect();
    (0..dim)
        .map(|y| (0..dim).map(|x| cols[x][y]).collect())
        .collect()
}

/// `<y|C|x>` with basis states given as integers (qubit `q` is bit `q`).
pub fn amplitude(c: &Circuit, x: usize, y: usize) -> C {
    run(c, x)[y]
}

/// `<e|C|s>` where `|s>` and `<e|` are products of `(|0> + e^{i a}|1>)/sqrt2`
/// on every qubit; the effect carries the same phase, not its conjugate.
pub fn phase_state_amplitude(c: &Circuit, a: f64) -> C {
    let n = c.qubits;
    let z = C::from_polar(1.0, a);
    let f = 0.5f64.powf(n as f64 / 2.0);
    let mut s: Vec<C> = (0..1usize << n)
        .map(|i| z.powi(i.count_ones() as i32) * f)
        .collect();
    for g in &c.gates {
        apply_gate(&mut s, g);
    }
    s.iter()
        .enumerate()
        .map(|(i, &v)| v * z.powi(i.count_ones() as i32) * f)
        .sum()
}

/// Packs a bitstring (entry `q` is qubit `q`) into an integer index.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as usize) << i))
}
