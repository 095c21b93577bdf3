use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zxrw::bench::{self, BenchConfig, Instance};
use zxrw::pipeline::{decompose, plan, simulate, Boundary, Method, SimOptions};
use zxrw::rankdecomp::Graph;
use zxrw::simplify::full_reduce;
use zxrw::zx::{io, parse_bits};
use zxrw::{Circuit, Error, Phase, ZxDiagram};

#[derive(Parser)]
#[command(
    name = "zxrw",
    version,
    about = "Rank-width based simulation of ZX-diagrams"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a benchmark instance.
    Gen(GenArgs),
    /// Reduce a circuit or diagram and print the diagram as JSON.
    Reduce(ReduceArgs),
    /// Build a decomposition and report its width and flops.
    Decompose(DecomposeArgs),
    /// Compute the amplitude <out|C|in>.
    Simulate(SimulateArgs),
    /// Run a benchmark sweep and write CSV.
    Bench(BenchArgs),
    /// Turn a benchmark CSV into gnuplot data.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Random,
    Toffoli,
    RandomZx,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: GenFamily,
    #[arg(long, default_value_t = 10)]
    qubits: usize,
    #[arg(long, default_value_t = 100)]
    gates: usize,
    /// Toffoli size or spider count.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    input: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Print rewrite counts to stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct Closing {
    /// Input bitstring (qubit 0 first).
    #[arg(long = "in")]
    bits_in: Option<String>,
    /// Output bitstring (qubit 0 first).
    #[arg(long = "out")]
    bits_out: Option<String>,
    /// Close every boundary with a T-state instead of basis states.
    #[arg(long, conflicts_with_all = ["bits_in", "bits_out"])]
    t_states: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    input: PathBuf,
    #[arg(long, default_value = "best")]
    method: Method,
    #[command(flatten)]
    closing: Closing,
    /// Write the tree as JSON.
    #[arg(long)]
    tree: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    circuit: PathBuf,
    #[arg(long = "in")]
    input: Option<String>,
    #[arg(long = "out")]
    output: Option<String>,
    #[arg(long, default_value = "best")]
    method: Method,
    /// Draws any bitstring not given explicitly.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refuse contractions whose largest state exceeds 2^R amplitudes.
    #[arg(long)]
    max_rank: Option<usize>,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: BenchFamily,
    /// Qubit counts (random family); gates default to 3 n^2 unless --gates is set.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    qubits: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    gates: Vec<usize>,
    /// Toffoli sizes or spider counts.
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,0.7,0.9")]
    p: Vec<f64>,
    /// Circuit files for the file family.
    #[arg(long, value_delimiter = ',')]
    files: Vec<PathBuf>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "flow,greedy-linear,greedy-b2t,oracle"
    )]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    timing: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFamily {
    Random,
    Toffoli,
    RandomZx,
    File,
}

#[derive(Args)]
struct PlotArgs {
    csv: PathBuf,
    /// Parameter on the x axis: n, qubits, gates or p.
    #[arg(long, default_value = "n")]
    x: String,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

enum Input {
    Circuit(Circuit),
    Diagram(ZxDiagram),
}

fn load(path: &Path) -> Result<Input, Error> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        Ok(Input::Diagram(ZxDiagram::from_json(&text)?))
    } else {
        Ok(Input::Circuit(io::parse_circuit(&text)?))
    }
}

fn bits_or_random(s: &Option<String>, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<bool>, Error> {
    match s {
        Some(s) => parse_bits(s),
        None => Ok((0..n).map(|_| rng.gen()).collect()),
    }
}

fn show_bits(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Gen(a) => {
            let text = match a.family {
                GenFamily::Random => {
                    io::circuit_to_text(&bench::gen_random_cnot_h_t(a.qubits, a.gates, a.seed))
                }
                GenFamily::Toffoli => io::circuit_to_text(&bench::gen_multi_toffoli(a.n)),
                GenFamily::RandomZx => bench::gen_random_zx(a.n, a.p, a.seed).to_json(),
            };
            emit(&a.out, &text)
        }
        Cmd::Reduce(a) => {
            let mut d = match load(&a.input)? {
                Input::Circuit(c) => c.to_diagram(),
                Input::Diagram(d) => d,
            };
            let st = full_reduce(&mut d);
            if a.stats {
                eprintln!("{}", serde_json::to_string(&st)?);
            }
            emit(&a.out, &d.to_json())
        }
        Cmd::Decompose(a) => {
            let c = &a.closing;
            let p = match load(&a.input)? {
                Input::Circuit(circ) => {
                    let boundary = if c.t_states {
                        Boundary::PhaseState(Phase::pi4(1))
                    } else {
                        let zeros = "0".repeat(circ.qubits);
                        let x = parse_bits(c.bits_in.as_deref().unwrap_or(&zeros))?;
                        let y = parse_bits(c.bits_out.as_deref().unwrap_or(&zeros))?;
                        Boundary::Basis(x, y)
                    };
                    plan(&circ.to_diagram(), &boundary, a.method)?
                }
                Input::Diagram(mut d) => {
                    if a.method != Method::Flow {
                        full_reduce(&mut d);
                    }
                    let (tree, method) = decompose(&d, a.method)?;
                    zxrw::pipeline::Plan {
                        diagram: d,
                        tree,
                        method,
                    }
                }
            };
            println!("method {}", p.method);
            println!("vertices {}", p.diagram.num_vertices());
            println!("width {}", p.width());
            println!("flops {}", p.flops());
            if let Some(path) = a.tree {
                let g = Graph::from_diagram(&p.diagram);
                fs::write(path, serde_json::to_string_pretty(&p.tree.to_json(&g))?)?;
            }
            Ok(())
        }
        Cmd::Simulate(a) => {
            let c = match load(&a.circuit)? {
                Input::Circuit(c) => c,
                Input::Diagram(_) => {
                    return Err(Error::UnsupportedGate("simulate expects a circuit".into()))
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let x = bits_or_random(&a.input, c.qubits, &mut rng)?;
            let y = bits_or_random(&a.output, c.qubits, &mut rng)?;
            let start = Instant::now();
            let s = simulate(
                &c,
                &x,
                &y,
                a.method,
                &SimOptions {
                    max_rank: a.max_rank,
                },
            )?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            println!("in {}", show_bits(&x));
            println!("out {}", show_bits(&y));
            println!("amplitude {:+.12} {:+.12}i", s.amplitude.re, s.amplitude.im);
            println!("method {}", s.method);
            println!("width {}", s.width);
            println!("flops {}", s.flops);
            if a.timing {
                println!("wall_ms {ms:.3}");
            }
            Ok(())
        }
        Cmd::Bench(a) => {
            let instances: Vec<Instance> = match a.family {
                BenchFamily::Random if a.gates.is_empty() => bench::random_qubits_sweep(&a.qubits),
                BenchFamily::Random => a
                    .qubits
                    .iter()
                    .flat_map(|&q| bench::random_gates_sweep(q, &a.gates))
                    .collect(),
                BenchFamily::Toffoli => bench::toffoli_sweep(&a.n),
                BenchFamily::RandomZx => {
                    a.n.iter()
                        .flat_map(|&n| bench::random_zx_sweep(n, &a.p))
                        .collect()
                }
                BenchFamily::File => a
                    .files
                    .iter()
                    .map(|p| Instance::File { path: p.clone() })
                    .collect(),
            };
            let cfg = BenchConfig {
                instances,
                methods: a.methods,
                repetitions: a.reps,
                seed: a.seed,
                verify: a.verify,
                timing: a.timing,
                threads: None,
            };
            let rows = bench::run_benchmark(&cfg)?;
            let mut buf = Vec::new();
            bench::write_csv(&mut buf, &rows)?;
            emit(&a.out, &String::from_utf8_lossy(&buf))
        }
        Cmd::Plot(a) => {
            let rows = bench::read_csv(fs::File::open(&a.csv)?)?;
            emit(&a.out, &bench::plot_data(&rows, &a.x))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::GFlowUnavailable => 3,
                Error::BudgetExceeded { .. } => 4,
                _ => 1,
            })
        }
    }
}
