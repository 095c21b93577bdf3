//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints its own PASS/FAIL line; exits non-zero if any fails.

use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zxrw::bench::{
    gen_multi_toffoli, gen_random_cnot_h_t, gen_random_zx, run_benchmark, toffoli_sweep,
    BenchConfig,
};
use zxrw::contract::{contract_with, convolve_with, ContractOptions, ConvMethod};
use zxrw::gflow::{find_gflow, OpenGraph};
use zxrw::pipeline::{decompose, plan, Boundary, Method};
use zxrw::rankdecomp::{
    rw_flow, rw_greedy_linear, rw_tcount, tcount_units, DecompositionTree, Graph,
};
use zxrw::simplify::{
    copy_pauli, full_reduce, local_complement, pivot, pivot_boundary, pivot_gadget,
    remove_identity, remove_isolated,
};
use zxrw::zx::{dense, oracle_scalar, oracle_tensor, plug_states, EdgeKind, V};
use zxrw::{BitMatrix, Circuit, Gate, Phase, ZxDiagram};

type Outcome = Result<String, String>;

fn rel_close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn bits(rng: &mut impl Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

/// GF(2) rank by elimination over boolean rows.
fn gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c]) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        r += 1;
    }
    r
}

fn brute_cut_rank(g: &Graph, side: &[usize]) -> usize {
    let inside: Vec<bool> = (0..g.len()).map(|v| side.contains(&v)).collect();
    let rest: Vec<usize> = (0..g.len()).filter(|&v| !inside[v]).collect();
    gf2_rank(
        side.iter()
            .map(|&a| rest.iter().map(|&b| g.adj.get(a, b)).collect())
            .collect(),
    )
}

fn random_closed_diagram(rng: &mut impl Rng, max: usize) -> ZxDiagram {
    let n = rng.gen_range(0..=max);
    let d = gen_random_zx(n, rng.gen_range(0.05..0.95), rng.gen());
    let mut out = ZxDiagram::new();
    for v in d.spiders() {
        out.add_vertex_with_id(v, zxrw::zx::VertexKind::Z, Phase::pi4(rng.gen_range(0..8)))
            .unwrap();
    }
    for (a, b, k) in d.edges() {
        out.set_edge(a, b, k);
    }
    out
}

fn random_cnot_h_t(rng: &mut impl Rng, qubits: usize, gates: usize) -> Circuit {
    gen_random_cnot_h_t(qubits, gates, rng.gen())
}

fn random_clifford_t(rng: &mut impl Rng, qubits: usize, gates: usize, t: bool) -> Circuit {
    let mut c = Circuit::new(qubits);
    for _ in 0..gates {
        let a = rng.gen_range(0..qubits);
        let b = (a + rng.gen_range(1..qubits)) % qubits;
        let r: f64 = rng.gen();
        let kind = if !t {
            rng.gen_range(0..7)
        } else if r < 0.3 {
            7 + rng.gen_range(0..2)
        } else if r < 0.55 {
            0
        } else {
            rng.gen_range(1..7)
        };
        let g = match kind {
            0 => Gate::H(a),
            1 => Gate::S(a),
            2 => Gate::Sdg(a),
            3 => Gate::Z(a),
            4 => Gate::Cnot(a, b),
            5 => Gate::Cz(a, b),
            6 => Gate::X(a),
            7 => Gate::T(a),
            _ => Gate::Tdg(a),
        };
        c.push(g).unwrap();
    }
    c
}

struct Corpus {
    trees: Vec<DecompositionTree>,
}

impl Corpus {
    fn add(&mut self, t: &DecompositionTree) {
        self.trees.push(t.clone());
    }
}

fn criterion_1(corpus: &mut Corpus) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst = 0f64;
    let mut checks = 0;
    let mut note = |got: C, want: C, what: &str| -> Result<(), String> {
        let dev = (got - want).norm() / want.norm().max(1.0);
        worst = worst.max(dev);
        checks += 1;
        if dev <= 1e-8 {
            Ok(())
        } else {
            Err(format!("{what}: {got} vs {want}"))
        }
    };
    for i in 0..200 {
        let d = random_closed_diagram(&mut rng, 14);
        let want = oracle_scalar(&d).map_err(|e| e.to_string())?;
        for m in [Method::GreedyLinear, Method::GreedyB2t, Method::Best] {
            let (t, _) = decompose(&d, m).map_err(|e| e.to_string())?;
            corpus.add(&t);
            let got =
                contract_with(&d, &t, &ContractOptions::default()).map_err(|e| e.to_string())?;
            note(got.value, want, &format!("diagram {i} {m}"))?;
        }
        let mut r = d.clone();
        full_reduce(&mut r);
        for m in [
            Method::GreedyLinear,
            Method::GreedyB2t,
            Method::TCount,
            Method::Best,
        ] {
            let (t, _) = decompose(&r, m).map_err(|e| e.to_string())?;
            corpus.add(&t);
            let got =
                contract_with(&r, &t, &ContractOptions::default()).map_err(|e| e.to_string())?;
            note(got.value, want, &format!("reduced diagram {i} {m}"))?;
        }
    }
    for i in 0..100 {
        let c = random_cnot_h_t(&mut rng, 4, 30);
        let (x, y) = (bits(&mut rng, 4), bits(&mut rng, 4));
        let want = dense::amplitude(&c, dense::bits_to_index(&x), dense::bits_to_index(&y));
        for m in Method::DECOMPOSING.into_iter().chain([Method::Best]) {
            let p = plan(&c.to_diagram(), &Boundary::Basis(x.clone(), y.clone()), m)
                .map_err(|e| e.to_string())?;
            corpus.add(&p.tree);
            let got = contract_with(&p.diagram, &p.tree, &ContractOptions::default())
                .map_err(|e| e.to_string())?;
            note(got.value, want, &format!("circuit {i} {m}"))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 120.0 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!(
        "{checks} contractions, max rel deviation {worst:.2e}, {secs:.1}s"
    ))
}

fn criterion_2(corpus: &mut Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut max_slack = i64::MIN;
    for i in 0..100 {
        let q = rng.gen_range(2..=10);
        let gates = rng.gen_range(q..=12 * q);
        let c = random_cnot_h_t(&mut rng, q, gates);
        let mut d = c.to_diagram();
        full_reduce(&mut d);
        let og = OpenGraph::from_diagram(&d);
        let f = find_gflow(&og).ok_or(format!("circuit {i}: no gflow"))?;
        let p = rw_flow(&og, &f).map_err(|e| e.to_string())?;
        let g = Graph::from_open_graph(&og);
        if g.len() >= 2 {
            corpus.add(&zxrw::rankdecomp::linear_to_tree(&g, &p).unwrap());
        }
        max_slack = max_slack.max(p.width() as i64 - q as i64);
        if p.width() > q {
            return Err(format!("circuit {i}: width {} > {q} qubits", p.width()));
        }
    }
    Ok(format!("100 circuits, max width - n = {max_slack}"))
}

fn criterion_3(corpus: &mut Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut nontrivial = 0;
    let mut widest = (0, 0);
    for i in 0..100 {
        let q = rng.gen_range(2..=10);
        let gates = rng.gen_range(2 * q..=30 * q);
        let c = random_clifford_t(&mut rng, q, gates, true);
        let mut d = c.to_diagram();
        full_reduce(&mut d);
        let mut closed =
            plug_states(&d, &bits(&mut rng, q), &bits(&mut rng, q)).map_err(|e| e.to_string())?;
        full_reduce(&mut closed);
        let t = rw_tcount(&closed).map_err(|e| e.to_string())?;
        corpus.add(&t);
        let g = Graph::from_diagram(&closed);
        for e in 0..t.edges.len() {
            let r = brute_cut_rank(&g, &t.side(e));
            if r != t.ranks[e] {
                return Err(format!(
                    "circuit {i}: edge {e} stores {} but cut-rank is {r}",
                    t.ranks[e]
                ));
            }
        }
        let units = tcount_units(&closed);
        if units > c.t_count() {
            return Err(format!(
                "circuit {i}: {units} units from {} T gates",
                c.t_count()
            ));
        }
        if t.width() > units.div_ceil(2) {
            return Err(format!(
                "circuit {i}: width {} > ceil({units}/2)",
                t.width()
            ));
        }
        nontrivial += (t.width() > 0) as usize;
        widest = widest.max((t.width(), units));
    }
    Ok(format!(
        "100 circuits, {nontrivial} with nonzero width, widest {} with {} units, ranks recomputed",
        widest.0, widest.1
    ))
}

fn criterion_4(corpus: &Corpus) -> Outcome {
    let mut cats = 0;
    for (i, t) in corpus.trees.iter().enumerate() {
        let nt = BigUint::from(t.num_nodes);
        let w = t.width();
        if t.flops() > &nt * (BigUint::from(1u8) << (2 * w)) {
            return Err(format!("tree {i}: flops {} > |V_T| 4^{w}", t.flops()));
        }
        if t.is_caterpillar() {
            cats += 1;
            if t.flops() > &nt * (BigUint::from(1u8) << (w + 1)) {
                return Err(format!(
                    "caterpillar {i}: flops {} > |V_T| 2^{}",
                    t.flops(),
                    w + 1
                ));
            }
        }
    }
    Ok(format!(
        "{} trees ({cats} caterpillars)",
        corpus.trees.len()
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut worst = 0f64;
    let state = |rng: &mut ChaCha8Rng, r: usize| -> Vec<C> {
        (0..1 << r)
            .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    };
    let mat = |rng: &mut ChaCha8Rng, r: usize, c: usize| BitMatrix::from_fn(r, c, |_, _| rng.gen());
    for _ in 0..1000 {
        let (rv, rw, ru) = (
            rng.gen_range(0..=5),
            rng.gen_range(0..=5),
            rng.gen_range(0..=5),
        );
        let (hv, hw) = (state(&mut rng, rv), state(&mut rng, rw));
        let (evu, ewu, evw) = (
            mat(&mut rng, rv, ru),
            mat(&mut rng, rw, ru),
            mat(&mut rng, rv, rw),
        );
        let outs: Vec<Vec<C>> = [
            ConvMethod::Direct,
            ConvMethod::ViaFirst,
            ConvMethod::ViaSecond,
        ]
        .iter()
        .map(|&m| convolve_with(&hv, &hw, &evu, &ewu, &evw, m).unwrap().0)
        .collect();
        for a in 0..3 {
            for b in a + 1..3 {
                for (x, y) in outs[a].iter().zip(&outs[b]) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
    }
    if worst <= 1e-10 {
        Ok(format!("1000 instances, max deviation {worst:.2e}"))
    } else {
        Err(format!("max deviation {worst:.2e}"))
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let mut worst = 0f64;
    for i in 0..50 {
        let q = rng.gen_range(2..=10);
        let gates = rng.gen_range(q..=10 * q);
        let c = random_clifford_t(&mut rng, q, gates, false);
        let (x, y) = (bits(&mut rng, q), bits(&mut rng, q));
        let mut d = plug_states(&c.to_diagram(), &x, &y).map_err(|e| e.to_string())?;
        full_reduce(&mut d);
        if d.num_vertices() != 0 {
            return Err(format!("circuit {i}: {} vertices left", d.num_vertices()));
        }
        let got = d.scalar().to_complex();
        let want = dense::amplitude(&c, dense::bits_to_index(&x), dense::bits_to_index(&y));
        worst = worst.max((got - want).norm() / want.norm().max(1.0));
        if !rel_close(got, want, 1e-8) {
            return Err(format!("circuit {i}: {got} vs {want}"));
        }
    }
    Ok(format!(
        "50 circuits collapsed, max rel deviation {worst:.2e}"
    ))
}

fn random_open_diagram(rng: &mut impl Rng) -> ZxDiagram {
    let n = rng.gen_range(1..=9);
    let p = rng.gen_range(0.15..0.6);
    let mut d = ZxDiagram::new();
    let phase = |rng: &mut dyn rand::RngCore| {
        let k = match rng.gen_range(0..8) {
            0..=3 => 4 * rng.gen_range(0..2),
            4 | 5 => 2 + 4 * rng.gen_range(0..2),
            _ => 2 * rng.gen_range(0..4) + 1,
        };
        Phase::pi4(k)
    };
    let vs: Vec<V> = (0..n).map(|_| d.add_spider(phase(rng))).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                d.set_edge(vs[i], vs[j], EdgeKind::Hadamard);
            }
        }
    }
    let side = |d: &mut ZxDiagram, rng: &mut dyn rand::RngCore| -> Vec<V> {
        let k = rng.gen_range(0..=2);
        (0..k)
            .map(|_| {
                let b = d.add_boundary();
                let s = vs[rng.gen_range(0..n)];
                let kind = if rng.gen_bool(0.5) {
                    EdgeKind::Plain
                } else {
                    EdgeKind::Hadamard
                };
                if d.boundary_neighbours(s).any(|(_, k)| k == EdgeKind::Plain)
                    && kind == EdgeKind::Plain
                {
                    d.set_edge(b, s, EdgeKind::Hadamard);
                } else {
                    d.set_edge(b, s, kind);
                }
                b
            })
            .collect()
    };
    let ins = side(&mut d, rng);
    let outs = side(&mut d, rng);
    d.set_inputs(ins);
    d.set_outputs(outs);
    d
}

fn tensors_close(a: &[Vec<C>], b: &[Vec<C>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.len() == y.len() && x.iter().zip(y).all(|(p, q)| rel_close(*p, *q, tol))
        })
}

fn criterion_7() -> Outcome {
    type Rule = fn(&mut ZxDiagram, V, V) -> zxrw::Result<()>;
    let rules: [(&str, Rule, bool); 7] = [
        ("local complement", |d, v, _| local_complement(d, v), false),
        ("pivot", |d, u, v| pivot(d, u, v), true),
        ("boundary pivot", |d, u, v| pivot_boundary(d, u, v), true),
        ("gadget pivot", |d, u, v| pivot_gadget(d, u, v), true),
        ("identity", |d, v, _| remove_identity(d, v), false),
        ("copy", |d, v, _| copy_pauli(d, v), false),
        ("isolated", |d, v, _| remove_isolated(d, v), false),
    ];
    let mut fired = [0usize; 7];
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    for i in 0..200 {
        let d = random_open_diagram(&mut rng);
        let want = oracle_tensor(&d).map_err(|e| e.to_string())?;
        let verts: Vec<V> = d.spiders().collect();
        for (k, (name, rule, pair)) in rules.iter().enumerate() {
            let mut tried = 0;
            'sites: for &u in &verts {
                let partners: Vec<V> = if *pair { verts.clone() } else { vec![u] };
                for &v in &partners {
                    if *pair && u == v {
                        continue;
                    }
                    let mut e = d.clone();
                    if rule(&mut e, u, v).is_ok() {
                        let got = oracle_tensor(&e).map_err(|e| e.to_string())?;
                        if !tensors_close(&got, &want, 1e-9) {
                            return Err(format!(
                                "diagram {i}: {name} at ({u}, {v}) changed the tensor"
                            ));
                        }
                        fired[k] += 1;
                        tried += 1;
                        if tried == 2 {
                            break 'sites;
                        }
                    }
                }
            }
        }
        let mut r = d.clone();
        full_reduce(&mut r);
        if !tensors_close(&oracle_tensor(&r).map_err(|e| e.to_string())?, &want, 1e-9) {
            return Err(format!("diagram {i}: full_reduce changed the tensor"));
        }
    }
    let summary: Vec<String> = rules
        .iter()
        .zip(fired)
        .map(|((n, _, _), f)| format!("{n} {f}"))
        .collect();
    if let Some(k) = fired.iter().position(|&f| f == 0) {
        return Err(format!("{} never applied", rules[k].0));
    }
    Ok(format!(
        "200 diagrams; sites checked: {}",
        summary.join(", ")
    ))
}

fn median(mut v: Vec<usize>) -> usize {
    v.sort_unstable();
    v[v.len() / 2]
}

fn criterion_8(corpus: &mut Corpus) -> Outcome {
    let n = 20;
    let ps = [0.1, 0.3, 0.5, 0.7, 0.9];
    let mut medians = Vec::new();
    for &p in &ps {
        let mut ws = Vec::new();
        for seed in 0..5 {
            let d = gen_random_zx(n, p, 8000 + seed);
            let g = Graph::from_diagram(&d);
            let lin = rw_greedy_linear(&g);
            corpus.add(&zxrw::rankdecomp::linear_to_tree(&g, &lin).unwrap());
            if lin.width() > n.div_ceil(2) {
                return Err(format!(
                    "p={p} seed={seed}: width {} > {}",
                    lin.width(),
                    n.div_ceil(2)
                ));
            }
            ws.push(lin.width());
        }
        medians.push(median(ws));
    }
    for i in 0..ps.len() {
        let j = ps.len() - 1 - i;
        if medians[i].abs_diff(medians[j]) > 1 {
            return Err(format!("median widths {medians:?} are not symmetric"));
        }
    }
    Ok(format!("median widths for p = {ps:?}: {medians:?}"))
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

fn criterion_9(corpus: &mut Corpus) -> Outcome {
    let ns: Vec<usize> = (4..=10).collect();
    let cfg = BenchConfig {
        instances: toffoli_sweep(&ns),
        methods: vec![Method::Flow, Method::GreedyB2t],
        ..Default::default()
    };
    let rows = run_benchmark(&cfg).map_err(|e| e.to_string())?;
    for &n in &[4, 7, 10] {
        let p = plan(
            &gen_multi_toffoli(n).to_diagram(),
            &Boundary::PhaseState(Phase::pi4(1)),
            Method::GreedyB2t,
        )
        .map_err(|e| e.to_string())?;
        corpus.add(&p.tree);
    }
    let series = |label: &str| -> Result<Vec<f64>, String> {
        rows.iter()
            .filter(|r| r.method == label)
            .map(|r| {
                r.flops_value()
                    .map(|f| zxrw::bench::log10_big(&f) / 2f64.log10())
                    .ok_or(format!("{label} n={}: {}", r.n, r.verified))
            })
            .collect()
    };
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let (b2t, flow) = (series("rw-greedy-b2t")?, series("rw-flow")?);
    let (rb, rf) = (2f64.powf(slope(&xs, &b2t)), 2f64.powf(slope(&xs, &flow)));
    let msg = format!("per-step flops growth: greedy-b2t {rb:.3}, flow {rf:.3}");
    if rb < rf {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Minimum linear width by dynamic programming over vertex subsets.
fn optimal_linear_width(g: &Graph) -> usize {
    let n = g.len();
    let full = (1usize << n) - 1;
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let members: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
        let here = if s == full {
            0
        } else {
            brute_cut_rank(g, &members)
        };
        let prev = members.iter().map(|&v| best[s & !(1 << v)]).min().unwrap();
        best[s] = prev.max(here);
    }
    best[full]
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let total = 400;
    let (mut within, mut exact, mut worst) = (0, 0, 0usize);
    for _ in 0..total {
        let n = rng.gen_range(2..=7);
        let d = gen_random_zx(n, rng.gen_range(0.0..1.0), rng.gen());
        let g = Graph::from_diagram(&d);
        let opt = optimal_linear_width(&g);
        let w = rw_greedy_linear(&g).width();
        if w < opt {
            return Err(format!("greedy width {w} below brute-force optimum {opt}"));
        }
        within += (w <= opt + 2) as usize;
        exact += (w == opt) as usize;
        worst = worst.max(w - opt);
    }
    let frac = within as f64 / total as f64;
    let msg = format!(
        "{total} graphs: {:.1}% within +2, {:.1}% optimal, worst excess {worst}",
        100.0 * frac,
        100.0 * exact as f64 / total as f64
    );
    if frac >= 0.9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    // libtest flags such as --nocapture or filters are accepted and ignored
    let mut corpus = Corpus { trees: Vec::new() };
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "oracle equivalence", criterion_1(&mut corpus)));
    results.push((
        2,
        "flow width at most qubit count",
        criterion_2(&mut corpus),
    ));
    results.push((3, "t-count width bound", criterion_3(&mut corpus)));
    results.push((5, "three-way convolution agreement", criterion_5()));
    results.push((6, "Clifford collapse", criterion_6()));
    results.push((7, "simplification soundness", criterion_7()));
    results.push((8, "random diagram width claims", criterion_8(&mut corpus)));
    results.push((9, "Toffoli flops trend", criterion_9(&mut corpus)));
    results.push((10, "exhaustive small-graph optimum", criterion_10()));
    results.push((4, "cost model bounds", criterion_4(&corpus)));
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (k, name, r) in &results {
        match r {
            Ok(m) => println!("criterion {k:>2} PASS  {name}: {m}"),
            Err(m) => {
                failed += 1;
                println!("criterion {k:>2} FAIL  {name}: {m}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
