use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use stabledg::harness::trace::load_csv;
use stabledg::harness::{check_trace, replay, summarize, HarnessError, SasParams, SasProblem, TraceMeta};
use stabledg::stabilize::parse_epsilon;
use stabledg::{AlgorithmId, OracleMode, RunConfig, Sense};

mod generate;

#[derive(Parser)]
#[command(
    name = "stabledg",
    version,
    about = "Stable dominating set and independent set maintenance over graph streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a stream through an algorithm and write the per-event trace.
    Run(RunArgs),
    /// Generate a stream or an expander.
    Gen(generate::GenArgs),
    /// Print worst ratio, largest per-event stability and |W|/|V| of a trace.
    Summarize(SummarizeArgs),
    /// Re-check every bound of a trace; exits nonzero on a violation.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Directed,
    Phase2,
    Phasek,
    Is2,
    Is6,
    Sas,
}

impl From<AlgArg> for AlgorithmId {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Directed => AlgorithmId::Directed,
            AlgArg::Phase2 => AlgorithmId::Phase2,
            AlgArg::Phasek => AlgorithmId::PhaseK,
            AlgArg::Is2 => AlgorithmId::Is2,
            AlgArg::Is6 => AlgorithmId::Is6,
            AlgArg::Sas => AlgorithmId::Sas,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Off,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum SenseArg {
    MinDs,
    MaxIs,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    alg: AlgArg,
    /// Event stream in JSON Lines.
    #[arg(long)]
    stream: PathBuf,
    /// Trace CSV; a `.meta.json` sidecar is written next to it.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "off")]
    oracle: OracleArg,
    /// Compute the optimum only every K-th event; ratios become lower bounds.
    #[arg(long, value_name = "K", conflicts_with = "oracle")]
    sparse_oracle: Option<usize>,
    /// Abort at the first invariant breach.
    #[arg(long)]
    strict: bool,
    #[arg(long, env = "STABLE_DG_SEED", default_value_t = 0)]
    seed: u64,
    /// Degree bound; read from the stream when omitted.
    #[arg(long)]
    d: Option<usize>,
    /// Problem for `--alg sas`.
    #[arg(long, value_enum, default_value = "max-is")]
    sense: SenseArg,
    /// Approximation slack for `--alg sas`, e.g. 0.5 or 1/2.
    #[arg(long, default_value = "1/2")]
    eps: String,
    /// Largest swap size for `--alg sas`.
    #[arg(long, default_value_t = 3)]
    f: usize,
    /// Use a greedy phase target when the exact solver gives up.
    #[arg(long)]
    greedy_fallback: bool,
    /// Largest graph the exact solver accepts.
    #[arg(long)]
    oracle_max_vertices: Option<usize>,
}

#[derive(Args)]
struct SummarizeArgs {
    trace: PathBuf,
    /// Needed only when the trace has no metadata sidecar.
    #[arg(long, value_enum)]
    sense: Option<SenseArg>,
}

#[derive(Args)]
struct VerifyArgs {
    trace: PathBuf,
    /// Print every violated bound instead of the first ten.
    #[arg(long)]
    all: bool,
}

fn load_meta(trace: &Path) -> Result<Option<TraceMeta>> {
    let path = TraceMeta::sidecar_path(trace);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Some(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?))
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let mut cfg = RunConfig::new(args.alg.into());
    cfg.stream_path = Some(args.stream);
    cfg.output_path = args.out;
    cfg.oracle = match (args.sparse_oracle, args.oracle) {
        (Some(k), _) => OracleMode::Sparse(k),
        (None, OracleArg::Exact) => OracleMode::Exact,
        (None, OracleArg::Off) => OracleMode::Off,
    };
    cfg.strict = args.strict;
    cfg.seed = args.seed;
    cfg.d = args.d;
    cfg.greedy_fallback = args.greedy_fallback;
    cfg.oracle_max_vertices = args.oracle_max_vertices;
    cfg.sas = SasParams {
        problem: match args.sense {
            SenseArg::MinDs => SasProblem::MinDs,
            SenseArg::MaxIs => SasProblem::MaxIs,
        },
        epsilon: parse_epsilon(&args.eps)?,
        f: args.f,
    };
    let trace = match replay(&cfg) {
        Ok(trace) => trace,
        Err(e @ HarnessError::InvariantBreached { .. }) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(2));
        }
        Err(e) => return Err(e.into()),
    };
    if trace.records.is_empty() {
        println!("empty stream, empty trace");
    } else {
        print!("{}", summarize(&trace.records, trace.meta.sense, trace.meta.oracle)?);
    }
    for v in &trace.violations {
        eprintln!("violation at t={}: {}", v.t, v.name);
    }
    Ok(if trace.violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn summarize_cmd(args: SummarizeArgs) -> Result<ExitCode> {
    let records = load_csv(&args.trace)?;
    let meta = load_meta(&args.trace)?;
    let (sense, oracle) = match (&meta, args.sense) {
        (_, Some(SenseArg::MinDs)) => (Sense::Min, meta.as_ref().map_or(OracleMode::Exact, |m| m.oracle)),
        (_, Some(SenseArg::MaxIs)) => (Sense::Max, meta.as_ref().map_or(OracleMode::Exact, |m| m.oracle)),
        (Some(m), None) => (m.sense, m.oracle),
        (None, None) => bail!("no metadata sidecar next to {}; pass --sense", args.trace.display()),
    };
    if let Some(m) = &meta {
        println!("algorithm: {} (stability bound {}, d={})", m.algorithm, m.stability_bound, m.d);
    }
    match summarize(&records, sense, oracle) {
        Ok(summary) => print!("{summary}"),
        Err(HarnessError::EmptyTrace) => bail!("trace {} has no records", args.trace.display()),
        Err(e) => return Err(e.into()),
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let records = load_csv(&args.trace)?;
    let meta = load_meta(&args.trace)?.with_context(|| {
        format!("verify needs the metadata sidecar {}", TraceMeta::sidecar_path(&args.trace).display())
    })?;
    let report = check_trace(&records, &meta);
    if let Some(note) = &report.note {
        println!("note: {note}");
    }
    let violations: Vec<_> = report.violations().collect();
    println!("{} checks, {} violations", report.checks.len(), violations.len());
    if let Some(r) = &report.worst_ratio {
        println!("worst ratio: {r}");
    }
    let shown = if args.all { violations.len() } else { violations.len().min(10) };
    for v in &violations[..shown] {
        println!("  {v}");
    }
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Gen(args) => generate::run(args),
        Command::Summarize(args) => summarize_cmd(args),
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
