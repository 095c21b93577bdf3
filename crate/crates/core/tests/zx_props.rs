use num_complex::Complex64 as C;
use proptest::prelude::*;
use zxrw::simplify::{full_reduce, stray_clifford};
use zxrw::zx::{dense, oracle_scalar, oracle_tensor, plug_states, EdgeKind, Phase};
use zxrw::{Circuit, Gate, ZxDiagram};

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    (0..13u8, 0..n, 1..n, -3.0f64..3.0).prop_map(move |(k, a, off, t)| {
        let b = (a + off) % n;
        match k {
            0 => Gate::Cnot(a, b),
            1 => Gate::Cz(a, b),
            2 | 3 => Gate::H(a),
            4 => Gate::S(a),
            5 => Gate::Sdg(a),
            6 => Gate::Z(a),
            7 => Gate::X(a),
            8 => Gate::T(a),
            9 => Gate::Tdg(a),
            10 => Gate::Rz(a, t),
            11 => Gate::Rx(a, t),
            _ => Gate::Cnot(b, a),
        }
    })
}

fn circuit_strategy(max_q: usize, max_g: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_q).prop_flat_map(move |n| {
        prop::collection::vec(gate_strategy(n), 0..=max_g)
            .prop_map(move |gates| Circuit { qubits: n, gates })
    })
}

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn tensors_match(a: &[Vec<C>], b: &[Vec<C>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| close(*x, *y, tol))
}

fn random_diagram(n: usize, edges: &[(usize, usize)], phases: &[i64]) -> ZxDiagram {
    let mut d = ZxDiagram::new();
    let vs: Vec<_> = (0..n)
        .map(|i| d.add_spider(Phase::pi4(phases[i])))
        .collect();
    for &(a, b) in edges {
        let (a, b) = (a % n, b % n);
        if a != b && !d.connected(vs[a], vs[b]) {
            d.set_edge(vs[a], vs[b], EdgeKind::Hadamard);
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn circuit_diagram_matches_dense_unitary(c in circuit_strategy(4, 20)) {
        let d = c.to_diagram();
        prop_assert!(d.is_graph_like());
        let t = oracle_tensor(&d).unwrap();
        prop_assert!(tensors_match(&t, &dense::unitary(&c), 1e-10));
    }

    #[test]
    fn plugging_matches_tensor(c in circuit_strategy(3, 12), x in 0usize..8, y in 0usize..8) {
        let d = c.to_diagram();
        let n = c.qubits;
        let (x, y) = (x % (1 << n), y % (1 << n));
        let bits = |v: usize| (0..n).map(|i| v >> i & 1 == 1).collect::<Vec<_>>();
        let p = plug_states(&d, &bits(x), &bits(y)).unwrap();
        prop_assert!(p.is_closed() && p.is_graph_like());
        let t = oracle_tensor(&d).unwrap();
        prop_assert!(close(oracle_scalar(&p).unwrap(), t[y][x], 1e-10));
    }

    #[test]
    fn reduce_preserves_open_tensor(c in circuit_strategy(4, 24)) {
        let mut d = c.to_diagram();
        let before = oracle_tensor(&d).unwrap();
        full_reduce(&mut d);
        prop_assert!(d.is_graph_like(), "{:?}", d.check_graph_like());
        prop_assert!(tensors_match(&oracle_tensor(&d).unwrap(), &before, 1e-9));
    }

    #[test]
    fn reduce_preserves_closed_scalar(
        n in 1usize..12,
        edges in prop::collection::vec((0usize..12, 0usize..12), 0..30),
        phases in prop::collection::vec(0i64..8, 12),
    ) {
        let mut d = random_diagram(n, &edges, &phases);
        let before = oracle_scalar(&d).unwrap();
        full_reduce(&mut d);
        prop_assert!(d.is_graph_like());
        prop_assert_eq!(stray_clifford(&d), None);
        prop_assert!(close(oracle_scalar(&d).unwrap(), before, 1e-9));
        let j = d.to_json();
        prop_assert_eq!(full_reduce(&mut d).total(), 0);
        prop_assert_eq!(d.to_json(), j);
    }

    #[test]
    fn json_round_trip(c in circuit_strategy(4, 20)) {
        let d = c.to_diagram();
        let j = d.to_json();
        prop_assert_eq!(ZxDiagram::from_json(&j).unwrap().to_json(), j);
    }
}

#[test]
fn clifford_circuits_collapse() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let n = rng.gen_range(2..=6);
        let mut c = Circuit::new(n);
        for _ in 0..40 {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let g = match rng.gen_range(0..5) {
                0 => Gate::Cnot(a, b),
                1 => Gate::Cz(a, b),
                2 => Gate::H(a),
                3 => Gate::S(a),
                _ => Gate::Z(a),
            };
            c.push(g).unwrap();
        }
        let x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let y: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let mut d = plug_states(&c.to_diagram(), &x, &y).unwrap();
        full_reduce(&mut d);
        assert_eq!(d.num_vertices(), 0);
        let want = dense::amplitude(&c, dense::bits_to_index(&x), dense::bits_to_index(&y));
        assert!(close(d.scalar().to_complex(), want, 1e-8));
    }
}
