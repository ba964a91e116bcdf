//! `dsssp`: generate graphs, build hop sets, run approximate SSSP under
//! several cost models and emit reproducible JSON/CSV reports.

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use dsssp::altmodels::{clique_sssp, hopset_sssp, stream_sssp, EdgeStream, FileStream, StreamError, StreamRun, VecStream};
use dsssp::arith::{fmt_ratio, parse_rational, to_f64, valid_epsilon, Rational, Wide};
use dsssp::graph::{hop_diameter, read_edge_list, write_edge_list, GeneratorSpec, Graph, NodeId, PRNG};
use dsssp::hopset::{hop_set_with, sample_sources, verify_hop_set, HopSetConfig};
use dsssp::overlay::{exact_from, extract_path, ratio_report, Estimates, OverlayParams};
use dsssp::simharness::run_congest_pipeline;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dsssp", version, about = "Deterministic hop sets and approximate SSSP")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated graph as an edge list.
    Gen {
        /// Generator spec, e.g. grid:16,16,8,1.
        #[arg(long = "gen", value_name = "SPEC")]
        spec: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a hop set F; writes F to --output and a JSON report to stdout.
    Hopset {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Check the sandwich d ≤ d^H(G ∪ F) ≤ (1+ε)d exactly.
        #[arg(long)]
        verify: bool,
    },
    /// Approximate distances from one source; JSON report to --output or stdout.
    Sssp {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 0)]
        source: NodeId,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Compare with exact distances and try path recovery.
        #[arg(long)]
        verify: bool,
    },
    /// One CSV row per size n = n-min, 2·n-min, … ≤ n-max of a generator family.
    Sweep {
        #[arg(long = "gen", value_name = "SPEC")]
        spec: String,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Generator spec: path:n[,W,seed] | grid:r,c[,W,seed] | random:n,m,W,seed | gnm:n,m,W,seed | star:n[,W,seed] | complete:n[,W,seed].
    #[arg(long = "gen", value_name = "SPEC")]
    spec: Option<String>,
    /// Edge-list file: header `n m W`, then `u v w` lines.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Model::Congest)]
    model: Model,
    #[arg(long, default_value = "1/2")]
    eps: String,
    /// Overlay segment length (default ⌈√n⌉).
    #[arg(long)]
    ell: Option<u64>,
    /// Ruling-set ID bits per ⌈log2 n⌉.
    #[arg(long, default_value_t = 1)]
    a: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Sequential,
    Congest,
    Clique,
    Streaming,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::Sequential => "sequential",
            Model::Congest => "congest",
            Model::Clique => "clique",
            Model::Streaming => "streaming",
        }
    }
}

/// A failed command; the variant fixes the exit code.
enum Failure {
    /// The report is emitted, then exit 1.
    Verification(Value),
    Config(String),
    Precondition(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Config(format!("{e:#}"))
    }
}

type Outcome = Result<(), Failure>;

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn parse_eps(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).filter(|&e| valid_epsilon(e)).ok_or_else(|| config(format!("epsilon {s:?} must be a rational in (0, 1]")))
}

struct Loaded {
    graph: Graph,
    /// Weight bound W from the file header or the generator.
    w: u64,
    describe: Value,
    spec: Option<GeneratorSpec>,
    path: Option<PathBuf>,
}

fn load(input: &Input) -> Result<Loaded, Failure> {
    match (&input.spec, &input.input) {
        (Some(s), None) => {
            let spec = GeneratorSpec::parse(s).map_err(|e| config(e.to_string()))?;
            let graph = spec.build().map_err(|e| config(e.to_string()))?;
            let w = graph.max_weight().max(1);
            Ok(Loaded { graph, w, describe: json!({ "generator": spec.to_string(), "prng": PRNG }), spec: Some(spec), path: None })
        }
        (None, Some(p)) => {
            let graph = read_edge_list(p).map_err(|e| config(format!("{}: {e}", p.display())))?;
            let w = FileStream::open(p).map_err(|e| config(e.to_string()))?.weight_bound();
            Ok(Loaded { graph, w, describe: json!({ "file": p.display().to_string() }), spec: None, path: Some(p.clone()) })
        }
        _ => Err(config("exactly one of --gen and --input is required")),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn graph_json(l: &Loaded) -> Value {
    json!({ "input": l.describe, "n": l.graph.n(), "m": l.graph.m(), "W": l.w })
}

fn cmd_gen(spec: &str, output: Option<&Path>) -> Outcome {
    let spec = GeneratorSpec::parse(spec).map_err(|e| config(e.to_string()))?;
    let g = spec.build().map_err(|e| config(e.to_string()))?;
    let text = format!("# {spec} prng={PRNG}\n{}", write_edge_list(&g));
    write_out(output, &text)
}

fn cmd_hopset(input: &Input, eps: &str, output: Option<&Path>, verify: bool) -> Outcome {
    let eps = parse_eps(eps)?;
    let l = load(input)?;
    let g = &l.graph;
    let hs = hop_set_with(&mut dsssp::engine::Sequential, g, l.w, eps, HopSetConfig::default());
    if let Some(p) = output {
        write_out(Some(p), &hs.edges.to_text(eps))?;
    }
    let mut report = json!({
        "command": "hopset",
        "graph": graph_json(&l),
        "epsilon": fmt_ratio(&eps),
        "hopset": hs.summary(),
    });
    let mut ok = true;
    if verify {
        let bound = Wide::from_integer(1) + dsssp::arith::wide(eps);
        let sources = sample_sources(g.n(), 500, 0);
        let chk = verify_hop_set(g, &hs.edges, hs.hop_bound, bound, &sources);
        ok = chk.ok();
        report["verify"] = json!({
            "hop_bound": hs.hop_bound,
            "bound": fmt_ratio(&bound),
            "pairs": chk.pairs,
            "lower_violations": chk.lower_violations,
            "upper_violations": chk.upper_violations,
            "worst_ratio": fmt_ratio(&chk.worst_ratio),
            "worst_ratio_decimal": format!("{:.6}", to_f64(chk.worst_ratio)),
        });
    }
    finish(report, ok, None)
}

fn finish(mut report: Value, ok: bool, output: Option<&Path>) -> Outcome {
    report["status"] = json!(if ok { "ok" } else { "verification_failed" });
    if ok {
        write_out(output, &pretty(&report))
    } else {
        if output.is_some() {
            write_out(output, &pretty(&report))?;
        }
        Err(Failure::Verification(report))
    }
}

/// Estimates, the factor α they satisfy, and the model's cost report.
struct ModelRun {
    estimates: Estimates,
    alpha: Wide,
    hopset_size: usize,
    hop_bound: u64,
    centers: usize,
    cost: u64,
    hop_diameter: Option<u64>,
    report: Value,
}

fn run_model(l: &Loaded, s: NodeId, run: &RunArgs) -> Result<ModelRun, Failure> {
    let eps = parse_eps(&run.eps)?;
    let g = &l.graph;
    let n = g.n();
    if s >= n {
        return Err(config(format!("source {s} is not a node of a graph with {n} nodes")));
    }
    if run.a == 0 || run.ell == Some(0) {
        return Err(config("--a and --ell must be positive"));
    }
    let d = hop_diameter(g).ok();
    let cfg = HopSetConfig::default();
    Ok(match run.model {
        Model::Sequential => {
            let r = hopset_sssp(g, s, eps, l.w, cfg);
            ModelRun {
                hopset_size: r.hopset.edges.len(),
                hop_bound: r.hopset.hop_bound,
                centers: n,
                cost: r.hopset.hop_bound,
                hop_diameter: d,
                report: json!({ "hopset": r.hopset.summary() }),
                alpha: r.alpha,
                estimates: r.estimates,
            }
        }
        Model::Congest => {
            let params = OverlayParams::new(n, l.w, eps, run.ell, run.a);
            let (r, ledger) = run_congest_pipeline(g, s, &params, cfg)
                .map_err(|e| Failure::Precondition(format!("congest model: {e}")))?;
            ModelRun {
                hopset_size: r.hopset.edges.len(),
                hop_bound: r.hopset.hop_bound,
                centers: r.network.n_centers(),
                cost: ledger.total(),
                hop_diameter: d,
                report: json!({
                    "params": params,
                    "centers": r.network.centers,
                    "rulings_ok": r.selection.rulings_ok(),
                    "hopset": r.hopset.summary(),
                    "ledger": ledger.to_json(),
                }),
                alpha: r.alpha,
                estimates: r.estimates,
            }
        }
        Model::Clique => {
            let r = clique_sssp(g, s, eps, cfg);
            ModelRun {
                estimates: r.estimates(),
                alpha: r.hopset.factor,
                hopset_size: r.hopset.edges.len(),
                hop_bound: r.hopset.hop_bound,
                centers: n,
                cost: r.ledger.total(),
                hop_diameter: d,
                report: json!({
                    "hopset": r.hopset.summary(),
                    "round_mismatches": r.round_mismatches,
                    "ledger": r.ledger.to_json(),
                }),
            }
        }
        Model::Streaming => {
            let r = match (&l.path, &l.spec) {
                (Some(p), _) => streamed(FileStream::open(p).map_err(|e| config(e.to_string()))?, s, eps, l.w)?,
                (None, Some(spec)) => streamed(VecStream::shuffled(g, spec.seed()), s, eps, l.w)?,
                (None, None) => unreachable!("inputs are a file or a generator"),
            };
            ModelRun {
                hopset_size: r.result.hopset.edges.len(),
                hop_bound: r.result.hopset.hop_bound,
                centers: n,
                cost: r.ledger.passes,
                hop_diameter: d,
                report: json!({
                    "hopset": r.result.hopset.summary(),
                    "ledger": r.ledger.to_json(),
                    "warnings": r.warnings,
                }),
                alpha: r.result.alpha,
                estimates: r.result.estimates,
            }
        }
    })
}

fn streamed<S: EdgeStream>(stream: S, s: NodeId, eps: Rational, w: u64) -> Result<StreamRun, Failure> {
    stream_sssp(stream, s, eps, w, HopSetConfig::default()).map_err(|e| match e {
        StreamError::NonRewindableStream => Failure::Precondition(e.to_string()),
        other => config(other.to_string()),
    })
}

fn cmd_sssp(input: &Input, run: &RunArgs, s: NodeId, output: Option<&Path>, verify: bool) -> Outcome {
    let l = load(input)?;
    let r = run_model(&l, s, run)?;
    let mut report = json!({
        "command": "sssp",
        "model": run.model.name(),
        "graph": graph_json(&l),
        "epsilon": fmt_ratio(&parse_eps(&run.eps)?),
        "source": s,
        "alpha": fmt_ratio(&r.alpha),
        "hop_bound": r.hop_bound,
        "cost": r.cost,
        "result": r.estimates.to_json(),
        "details": r.report,
    });
    let mut ok = true;
    if verify {
        let exact = exact_from(&l.graph, s);
        let rep = ratio_report(&r.estimates, &exact, r.alpha);
        let reachable: Vec<NodeId> = (0..l.graph.n()).filter(|&u| exact[u] != dsssp::graph::INF).collect();
        let recovered = reachable.iter().filter(|&&u| extract_path(&l.graph, &r.estimates, s, u).is_ok()).count();
        ok = rep.ok();
        report["verify"] = json!({
            "ratios": rep,
            "worst_ratio_decimal": format!("{:.6}", to_f64(rep.worst_ratio)),
            "histogram_buckets": ["[1,1.01)", "[1.01,1.1)", "[1.1,1.5)", "[1.5,2)", "[2,inf)"],
            "extract_path": {
                "attempted": reachable.len(),
                "succeeded": recovered,
                "rate": format!("{:.4}", recovered as f64 / reachable.len().max(1) as f64),
            },
        });
    }
    finish(report, ok, output)
}

fn cmd_sweep(spec: &str, n_min: usize, n_max: usize, run: &RunArgs, output: Option<&Path>) -> Outcome {
    let base = GeneratorSpec::parse(spec).map_err(|e| config(e.to_string()))?;
    if n_min == 0 || n_min > n_max {
        return Err(config(format!("empty sweep range {n_min}..={n_max}")));
    }
    let mut csv = String::from("n,D,model,cost,hopset_size,centers,worst_ratio\n");
    let mut n = n_min;
    while n <= n_max {
        let spec = base.resized(n);
        let graph = spec.build().map_err(|e| config(e.to_string()))?;
        let w = graph.max_weight().max(1);
        let l = Loaded { graph, w, describe: Value::Null, spec: Some(spec), path: None };
        let r = run_model(&l, 0, run)?;
        let exact = exact_from(&l.graph, 0);
        let rep = ratio_report(&r.estimates, &exact, r.alpha);
        if !rep.ok() {
            return Err(Failure::Verification(json!({ "command": "sweep", "n": l.graph.n(), "ratios": rep })));
        }
        let d = r.hop_diameter.map_or("inf".to_string(), |d| d.to_string());
        writeln!(
            csv,
            "{},{d},{},{},{},{},{:.6}",
            l.graph.n(),
            run.model.name(),
            r.cost,
            r.hopset_size,
            r.centers,
            to_f64(rep.worst_ratio)
        )
        .unwrap();
        n *= 2;
    }
    write_out(output, &csv)
}

fn main() -> ExitCode {
    dsssp::par::init_from_env();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            println!("{}", json!({ "status": "error", "kind": "config", "message": e.kind().to_string(), "exit_code": 2 }));
            return ExitCode::from(2);
        }
    };
    let result = match &cli.cmd {
        Cmd::Gen { spec, output } => cmd_gen(spec, output.as_deref()),
        Cmd::Hopset { input, eps, output, verify } => cmd_hopset(input, eps, output.as_deref(), *verify),
        Cmd::Sssp { input, run, source, output, verify } => cmd_sssp(input, run, *source, output.as_deref(), *verify),
        Cmd::Sweep { spec, n_min, n_max, run, output } => cmd_sweep(spec, *n_min, *n_max, run, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(report)) => {
            print!("{}", pretty(&report));
            ExitCode::from(1)
        }
        Err(Failure::Config(message)) => {
            eprintln!("error: {message}");
            println!("{}", json!({ "status": "error", "kind": "config", "message": message, "exit_code": 2 }));
            ExitCode::from(2)
        }
        Err(Failure::Precondition(message)) => {
            eprintln!("error: {message}");
            println!("{}", json!({ "status": "error", "kind": "precondition", "message": message, "exit_code": 3 }));
            ExitCode::from(3)
        }
    }
}
