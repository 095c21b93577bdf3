//! Instance generators and the flops-comparison harness.

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contract::{contract_with, ContractOptions};
use crate::error::{Error, Result};
use crate::pipeline::{decompose, plan, Boundary, Method, Plan};
use crate::zx::{dense, io, oracle_scalar, EdgeKind};
use crate::{Circuit, Gate, Phase, ZxDiagram};

/// Random circuit of CNOT, H and T gates drawn with probabilities 0.6, 0.2
/// and 0.2. CNOT control and target are distinct.
pub fn gen_random_cnot_h_t(n_qubits: usize, n_gates: usize, seed: u64) -> Circuit {
    assert!(n_qubits >= 2, "need at least two qubits");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n_qubits);
    for _ in 0..n_gates {
        let r: f64 = rng.gen();
        let q = rng.gen_range(0..n_qubits);
        let g = if r < 0.6 {
            let mut t = rng.gen_range(0..n_qubits - 1);
            if t >= q {
                t += 1;
            }
            Gate::Cnot(q, t)
        } else if r < 0.8 {
            Gate::H(q)
        } else {
            Gate::T(q)
        };
        c.gates.push(g);
    }
    c
}

/// `n` spiders with phase pi/4, each pair joined by a Hadamard edge with
/// probability `p`.
pub fn gen_random_zx(n: usize, p: f64, seed: u64) -> ZxDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = ZxDiagram::new();
    let vs: Vec<_> = (0..n).map(|_| d.add_spider(Phase::pi4(1))).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                d.set_edge(vs[i], vs[j], EdgeKind::Hadamard);
            }
        }
    }
    d
}

/// Clifford+T circuit for the `n`-qubit Toffoli: controls `0..n-1`, target
/// `n-1`. For `n > 3` it uses a chain of `n - 3` ancillas (qubits `n..`)
/// that start and end in `|0>`.
pub fn gen_multi_toffoli(n: usize) -> Circuit {
    assert!(n >= 3, "a Toffoli needs at least three qubits");
    let k = n - 1;
    let target = n - 1;
    let anc = |i: usize| n + i;
    let mut c = Circuit::new(n + k - 2);
    if k == 2 {
        c.push_toffoli(0, 1, target).unwrap();
        return c;
    }
    let mut chain = vec![(0, 1, anc(0))];
    for i in 2..k - 1 {
        chain.push((anc(i - 2), i, anc(i - 1)));
    }
    for &(a, b, t) in &chain {
        c.push_toffoli(a, b, t).unwrap();
    }
    c.push_toffoli(anc(k - 3), k - 1, target).unwrap();
    for &(a, b, t) in chain.iter().rev() {
        c.push_toffoli(a, b, t).unwrap();
    }
    c
}

/// One benchmark instance family member.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    /// Random CNOT+H+T circuit, closed with `|0..0>` and a seeded random
    /// output bitstring.
    RandomCircuit { qubits: usize, gates: usize },
    /// Multi-controlled NOT closed with T-states.
    Toffoli { n: usize },
    /// Closed random diagram.
    RandomZx { n: usize, p: f64 },
    /// Circuit file closed with T-states.
    File { path: PathBuf },
}

impl Instance {
    pub fn family(&self) -> &'static str {
        match self {
            Instance::RandomCircuit { .. } => "random",
            Instance::Toffoli { .. } => "toffoli",
            Instance::RandomZx { .. } => "random-zx",
            Instance::File { .. } => "file",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Instance::RandomCircuit { qubits, .. } => qubits,
            Instance::Toffoli { n } => n,
            Instance::RandomZx { n, .. } => n,
            Instance::File { .. } => 0,
        }
    }

    pub fn params(&self) -> String {
        match self {
            Instance::RandomCircuit { qubits, gates } => format!("qubits={qubits};gates={gates}"),
            Instance::Toffoli { n } => format!("n={n}"),
            Instance::RandomZx { n, p } => format!("n={n};p={p}"),
            Instance::File { path } => format!("path={}", path.display()),
        }
    }

    fn is_random(&self) -> bool {
        matches!(
            self,
            Instance::RandomCircuit { .. } | Instance::RandomZx { .. }
        )
    }
}

/// Qubit count fixed, gate count varied.
pub fn random_gates_sweep(qubits: usize, gates: &[usize]) -> Vec<Instance> {
    gates
        .iter()
        .map(|&g| Instance::RandomCircuit { qubits, gates: g })
        .collect()
}

/// Qubit count varied with `3 n^2` gates.
pub fn random_qubits_sweep(qubits: &[usize]) -> Vec<Instance> {
    qubits
        .iter()
        .map(|&q| Instance::RandomCircuit {
            qubits: q,
            gates: 3 * q * q,
        })
        .collect()
}

pub fn toffoli_sweep(ns: &[usize]) -> Vec<Instance> {
    ns.iter().map(|&n| Instance::Toffoli { n }).collect()
}

pub fn random_zx_sweep(n: usize, ps: &[f64]) -> Vec<Instance> {
    ps.iter().map(|&p| Instance::RandomZx { n, p }).collect()
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub instances: Vec<Instance>,
    pub methods: Vec<Method>,
    pub repetitions: usize,
    pub seed: u64,
    /// Contract small instances and compare against a dense reference.
    pub verify: bool,
    /// Record wall-clock times; off keeps the CSV reproducible.
    pub timing: bool,
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            instances: Vec::new(),
            methods: vec![Method::Flow, Method::GreedyLinear, Method::GreedyB2t],
            repetitions: 5,
            seed: 0,
            verify: false,
            timing: false,
            threads: None,
        }
    }
}

/// One CSV row: an instance and one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub family: String,
    pub n: usize,
    pub params: String,
    pub seed: u64,
    pub method: String,
    pub width: Option<usize>,
    /// Decimal, since values can exceed 64 bits.
    pub flops: Option<String>,
    /// `yes`, `no`, `skipped`, or `error: <message>` when the method failed.
    pub verified: String,
    pub wall_ms: Option<f64>,
}

impl BenchRecord {
    pub fn flops_value(&self) -> Option<BigUint> {
        self.flops.as_ref().and_then(|f| f.parse().ok())
    }

    pub fn is_error(&self) -> bool {
        self.verified.starts_with("error")
    }
}

pub fn method_label(m: Method) -> String {
    match m {
        Method::Oracle => "naive".into(),
        m => format!("rw-{}", m.name()),
    }
}

/// Largest node exponent the harness will contract for verification.
const VERIFY_RANK: usize = 22;
const VERIFY_QUBITS: usize = 18;

enum Built {
    Circuit(Circuit, Boundary),
    Diagram(ZxDiagram),
}

fn build(inst: &Instance, seed: u64) -> Result<Built> {
    Ok(match inst {
        Instance::RandomCircuit { qubits, gates } => {
            let c = gen_random_cnot_h_t(*qubits, *gates, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
            let y = (0..*qubits).map(|_| rng.gen()).collect();
            Built::Circuit(c, Boundary::Basis(vec![false; *qubits], y))
        }
        Instance::Toffoli { n } => {
            Built::Circuit(gen_multi_toffoli(*n), Boundary::PhaseState(Phase::pi4(1)))
        }
        Instance::RandomZx { n, p } => Built::Diagram(gen_random_zx(*n, *p, seed)),
        Instance::File { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
            Built::Circuit(
                io::parse_circuit(&text)?,
                Boundary::PhaseState(Phase::pi4(1)),
            )
        }
    })
}

fn reference(b: &Built) -> Option<C> {
    match b {
        Built::Circuit(c, _) if c.qubits > VERIFY_QUBITS => None,
        Built::Circuit(c, Boundary::Basis(x, y)) => Some(dense::amplitude(
            c,
            dense::bits_to_index(x),
            dense::bits_to_index(y),
        )),
        Built::Circuit(c, Boundary::PhaseState(p)) => {
            Some(dense::phase_state_amplitude(c, p.radians()))
        }
        Built::Diagram(d) => oracle_scalar(d).ok(),
    }
}

fn plan_for(b: &Built, m: Method) -> Result<Plan> {
    match b {
        Built::Circuit(c, bnd) => plan(&c.to_diagram(), bnd, m),
        Built::Diagram(d) => {
            let (tree, method) = decompose(d, m)?;
            Ok(Plan {
                diagram: d.clone(),
                tree,
                method,
            })
        }
    }
}

fn run_instance(inst: &Instance, seed: u64, cfg: &BenchConfig) -> Vec<BenchRecord> {
    let row = |method: String| BenchRecord {
        family: inst.family().into(),
        n: inst.n(),
        params: inst.params(),
        seed,
        method,
        width: None,
        flops: None,
        verified: "skipped".into(),
        wall_ms: None,
    };
    let built = match build(inst, seed) {
        Ok(b) => b,
        Err(e) => {
            return cfg
                .methods
                .iter()
                .map(|&m| BenchRecord {
                    verified: format!("error: {e}"),
                    ..row(method_label(m))
                })
                .collect()
        }
    };
    let want = if cfg.verify { reference(&built) } else { None };
    let mut out = Vec::new();
    for &m in &cfg.methods {
        let mut r = row(method_label(m));
        let start = Instant::now();
        if m == Method::Oracle {
            let n = match &built {
                Built::Circuit(c, _) => c.qubits,
                Built::Diagram(d) => d.num_vertices(),
            };
            r.width = Some(n);
            r.flops = Some((BigUint::from(1u8) << n).to_string());
            out.push(r);
            continue;
        }
        match plan_for(&built, m) {
            Ok(p) => {
                r.width = Some(p.width());
                r.flops = Some(p.flops().to_string());
                if let Some(w) = want {
                    if p.tree.max_node_cost() <= VERIFY_RANK {
                        let got = contract_with(&p.diagram, &p.tree, &ContractOptions::default());
                        r.verified = match got {
                            Ok(c) if (c.value - w).norm() <= 1e-8 * w.norm().max(1.0) => {
                                "yes".into()
                            }
                            Ok(_) => "no".into(),
                            Err(e) => format!("error: {e}"),
                        };
                    }
                }
            }
            Err(e) => r.verified = format!("error: {e}"),
        }
        if cfg.timing {
            r.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        out.push(r);
    }
    out
}

/// Worker count from `ZXRW_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("ZXRW_THREADS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
}

/// Runs every (instance, repetition) in a worker pool. Rows come back in
/// grid order: instance, then repetition, then method. Repetition `r` uses
/// seed `seed + r`; deterministic families run once.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let mut jobs = Vec::new();
    for inst in &cfg.instances {
        let reps = if inst.is_random() {
            cfg.repetitions.max(1)
        } else {
            1
        };
        for r in 0..reps {
            jobs.push((inst, cfg.seed.wrapping_add(r as u64)));
        }
    }
    let threads = cfg.threads.or_else(threads_from_env).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let rows: Vec<Vec<BenchRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, s)| run_instance(i, s, cfg))
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: std::io::Write>(w: W, rows: &[BenchRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    wr.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn read_csv<R: std::io::Read>(r: R) -> Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(|e| Error::Io(e.to_string())))
        .collect()
}

/// Value of `key` in a `k=v;k=v` parameter string, or `n` for the size.
fn axis_value(r: &BenchRecord, key: &str) -> Option<f64> {
    if key == "n" {
        return Some(r.n as f64);
    }
    r.params
        .split(';')
        .filter_map(|kv| kv.split_once('='))
        .find(|(k, _)| *k == key)
        .and_then(|(_, v)| v.parse().ok())
}

/// Gnuplot data: one block per method (separated by two blank lines), each
/// row `x mean_log10_flops mean_width count`, errors left out.
pub fn plot_data(rows: &[BenchRecord], x_key: &str) -> String {
    use std::collections::BTreeMap;
    let mut methods: Vec<String> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method) {
            methods.push(r.method.clone());
        }
    }
    let mut out = String::new();
    for m in methods {
        let mut acc: BTreeMap<(String, u64), (f64, f64, f64, usize)> = BTreeMap::new();
        for r in rows.iter().filter(|r| r.method == m && !r.is_error()) {
            let (Some(x), Some(f), Some(w)) = (axis_value(r, x_key), r.flops_value(), r.width)
            else {
                continue;
            };
            let e = acc
                .entry((r.family.clone(), x.to_bits()))
                .or_insert((x, 0.0, 0.0, 0));
            e.1 += log10_big(&f);
            e.2 += w as f64;
            e.3 += 1;
        }
        let mut pts: Vec<_> = acc.into_values().collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.push_str(&format!("# {m}\n# {x_key} log10_flops width count\n"));
        for (x, f, w, k) in pts {
            out.push_str(&format!(
                "{x} {:.6} {:.3} {k}\n",
                f / k as f64,
                w / k as f64
            ));
        }
        out.push_str("\n\n");
    }
    out
}

pub fn log10_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 60 {
        let v: u64 = x.try_into().unwrap_or(0);
        return (v as f64).log10();
    }
    let shift = bits - 60;
    let top: u64 = (x >> shift).try_into().unwrap_or(0);
    (top as f64).log10() + shift as f64 * 2f64.log10()
}
