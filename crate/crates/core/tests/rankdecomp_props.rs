use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zxrw::bench::{gen_random_cnot_h_t, gen_random_zx};
use zxrw::contract::root_tree;
use zxrw::gflow::{find_gflow, OpenGraph};
use zxrw::pipeline::{decompose, Method};
use zxrw::rankdecomp::{
    cut_rank, linear_to_tree, rw_flow, rw_greedy_b2t, rw_greedy_linear, rw_greedy_linear_with,
    rw_tcount, tcount_units, verify_decomposition, DecompositionTree, Graph, LinearOrder,
};
use zxrw::simplify::full_reduce;
use zxrw::zx::plug_states;

/// Rank over GF(2) of the rows given as bitmasks, by plain elimination.
fn rank_of(mut rows: Vec<u64>) -> usize {
    let mut r = 0;
    for bit in 0..64 {
        if let Some(i) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
            rows.swap(r, i);
            for j in 0..rows.len() {
                if j != r && rows[j] >> bit & 1 == 1 {
                    rows[j] ^= rows[r];
                }
            }
            r += 1;
        }
    }
    r
}

fn brute_cut_rank(g: &Graph, set: u64) -> usize {
    let n = g.len();
    let rows = (0..n)
        .filter(|&v| set >> v & 1 == 1)
        .map(|v| {
            (0..n)
                .filter(|&u| set >> u & 1 == 0 && g.adj.get(v, u))
                .fold(0u64, |m, u| m | 1 << u)
        })
        .collect();
    rank_of(rows)
}

fn members(set: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| set >> v & 1 == 1).collect()
}

fn graph_strategy(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut e = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        e.push((a, b));
                    }
                    k += 1;
                }
            }
            Graph::new(n, &e)
        })
    })
}

fn is_caterpillar_bounded(t: &DecompositionTree) -> bool {
    let nt = BigUint::from(t.num_nodes);
    t.flops() <= nt * (BigUint::from(1u8) << (t.width() + 1))
}

fn general_bound(t: &DecompositionTree) -> bool {
    let nt = BigUint::from(t.num_nodes);
    t.flops() <= nt * (BigUint::from(1u8) << (2 * t.width()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cut_rank_matches_brute_force(g in graph_strategy(12), set in any::<u64>()) {
        let n = g.len();
        let set = set & ((1u64 << n) - 1);
        let x = members(set, n);
        prop_assert_eq!(cut_rank(&g, &x), brute_cut_rank(&g, set));
    }

    #[test]
    fn cut_rank_symmetric_submodular_complement_stable(g in graph_strategy(12), a in any::<u64>(), b in any::<u64>()) {
        let n = g.len();
        let full = (1u64 << n) - 1;
        let (a, b) = (a & full, b & full);
        let r = |s: u64| cut_rank(&g, &members(s, n));
        prop_assert_eq!(r(a), r(full & !a));
        prop_assert!(r(a) + r(b) >= r(a & b) + r(a | b));
        let gc = g.complement();
        let rc = cut_rank(&gc, &members(a, n));
        prop_assert!(rc.abs_diff(r(a)) <= 1);
        prop_assert!(r(a) <= a.count_ones().min((full & !a).count_ones()) as usize);
    }

    #[test]
    fn heuristics_produce_valid_trees(g in graph_strategy(14)) {
        prop_assume!(g.len() >= 2);
        let p = rw_greedy_linear(&g);
        prop_assert!(p.is_permutation(g.len()));
        let lin = linear_to_tree(&g, &p).unwrap();
        let b2t = rw_greedy_b2t(&g).unwrap();
        let all = rw_greedy_linear_with(&g, false);
        for t in [&lin, &b2t] {
            prop_assert_eq!(verify_decomposition(&g, t), Ok(()));
            prop_assert_eq!(t.compute_ranks(&g), t.ranks.clone());
            prop_assert!(general_bound(t));
        }
        prop_assert!(lin.is_caterpillar());
        prop_assert_eq!(lin.width(), p.width());
        prop_assert!(is_caterpillar_bounded(&lin));
        prop_assert!(all.width() <= g.len().div_ceil(2));
        prop_assert!(p.width() <= g.len().div_ceil(2));
    }

    #[test]
    fn linear_order_ranks_are_prefix_ranks(g in graph_strategy(12), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..g.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let p = LinearOrder::new(&g, order.clone());
        for (i, &r) in p.ranks.iter().enumerate() {
            prop_assert_eq!(r, cut_rank(&g, &order[..=i]));
        }
    }
}

#[test]
fn rooted_ranks_match_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let n = rng.gen_range(2..14);
        let d = gen_random_zx(n, rng.gen_range(0.1..0.9), rng.gen());
        let g = Graph::from_diagram(&d);
        let t = if rng.gen() {
            rw_greedy_b2t(&g).unwrap()
        } else {
            linear_to_tree(&g, &rw_greedy_linear(&g)).unwrap()
        };
        let rt = root_tree(&t, None).unwrap();
        assert_eq!(rt.rank[0], 0);
        assert_eq!(rt.sets[0].len(), n);
        for x in 1..rt.rank.len() {
            assert_eq!(rt.rank[x], cut_rank(&g, &rt.sets[x]));
        }
    }
}

#[test]
fn flow_width_at_most_outputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let q = rng.gen_range(2..=10);
        let c = gen_random_cnot_h_t(q, rng.gen_range(0..8 * q), rng.gen());
        let mut d = c.to_diagram();
        full_reduce(&mut d);
        let og = OpenGraph::from_diagram(&d);
        let f = find_gflow(&og).expect("circuit diagrams have a gflow");
        let p = rw_flow(&og, &f).unwrap();
        assert!(p.width() <= og.outputs.len());
        assert!(og.outputs.len() <= q);
    }
}

#[test]
fn tcount_width_at_most_half_the_units() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let q = rng.gen_range(2..=8);
        let c = gen_random_cnot_h_t(q, rng.gen_range(0..10 * q), rng.gen());
        let x: Vec<bool> = (0..q).map(|_| rng.gen()).collect();
        let y: Vec<bool> = (0..q).map(|_| rng.gen()).collect();
        let mut d = c.to_diagram();
        full_reduce(&mut d);
        let mut closed = plug_states(&d, &x, &y).unwrap();
        full_reduce(&mut closed);
        let t = rw_tcount(&closed).unwrap();
        let g = Graph::from_diagram(&closed);
        assert_eq!(verify_decomposition(&g, &t), Ok(()));
        let units = tcount_units(&closed);
        assert!(units <= c.t_count());
        assert!(
            t.width() <= units.div_ceil(2),
            "width {} units {units}",
            t.width()
        );
    }
}

#[test]
fn cost_bounds_on_pipeline_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..60 {
        let d = gen_random_zx(rng.gen_range(2..20), rng.gen_range(0.05..0.95), rng.gen());
        for m in [
            Method::GreedyLinear,
            Method::GreedyB2t,
            Method::TCount,
            Method::Best,
        ] {
            let (t, _) = decompose(&d, m).unwrap();
            assert!(general_bound(&t), "{m}");
            if t.is_caterpillar() {
                assert!(is_caterpillar_bounded(&t), "{m}");
            }
        }
    }
}
