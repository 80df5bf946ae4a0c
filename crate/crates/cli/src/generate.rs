use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::json;
use stabledg::adversary::random::{
    arrival_degree_stream, average_degree_stream, cycle_stream, fully_dynamic_stream, gnp_arrival_stream, path_stream,
};
use stabledg::adversary::{
    directed_domset_tight_stream, domset_lowerbound_stream, generate_expander_candidate, is_lowerbound_stream,
    star_adversary_stream, tiny_expander, verify_expansion, BipartiteExpander, ExpanderError, ExpanderParams,
    LowerBoundStream,
};
use stabledg::stabilize::parse_epsilon;
use stabledg::EventStream;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Bipartite expander candidate, written as JSON.
    Expander,
    /// Independent-set lower-bound stream over an expander.
    IsLb,
    /// Five-layer dominating-set lower-bound stream over an expander.
    DsLb,
    /// Tight instance of the directed dominating set algorithm.
    Tight,
    /// Star grown leaf by leaf.
    Star,
    /// Arrivals of arrival degree at most d.
    Random,
    /// Arrivals keeping the average degree at most d.
    Sparse,
    /// Arrivals and departures keeping the average degree at most d.
    Dynamic,
    Path,
    Cycle,
    Gnp,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Output file; a `.sidecar.json` with parameters and landmarks is
    /// written next to it.
    #[arg(long, short)]
    out: PathBuf,
    /// Vertex count (for `dynamic`, the event count; for expanders, |R|).
    #[arg(long, short, default_value_t = 40)]
    n: usize,
    #[arg(long, short, default_value_t = 2)]
    d: usize,
    #[arg(long, env = "STABLE_DG_SEED", default_value_t = 0)]
    seed: u64,
    /// Expander slack, e.g. 0.025 or 1/40.
    #[arg(long, default_value = "1/40")]
    eps: String,
    #[arg(long, default_value_t = 0.005)]
    mu: f64,
    /// Certify expansion up to this subset size, regenerating with the next
    /// seed on failure.
    #[arg(long)]
    certify_cap: Option<usize>,
    /// Seeds to try when certifying.
    #[arg(long, default_value_t = 20)]
    attempts: usize,
    /// Read the expander for `is-lb` and `ds-lb` from this file.
    #[arg(long, conflicts_with = "tiny")]
    expander: Option<PathBuf>,
    /// Use the hand-built expander with |R| = N for `is-lb` and `ds-lb`.
    #[arg(long, value_name = "N")]
    tiny: Option<usize>,
    /// Departure probability for `dynamic`.
    #[arg(long, default_value_t = 0.3)]
    departure_rate: f64,
    /// Edge probability for `gnp`.
    #[arg(long, default_value_t = 0.2)]
    p: f64,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".sidecar.json");
    PathBuf::from(name)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)?).with_context(|| format!("writing {}", path.display()))
}

/// Builds or loads the expander and reports how it was certified.
fn expander(args: &GenArgs) -> Result<(BipartiteExpander, serde_json::Value)> {
    if let Some(path) = &args.expander {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok((serde_json::from_str(&text)?, json!({ "source": path.display().to_string() })));
    }
    if let Some(n) = args.tiny {
        let exp = tiny_expander(n);
        let check = verify_expansion(&exp, 1, 1.99)?;
        return Ok((exp, json!({ "source": "tiny", "certificate": check })));
    }
    let eps = parse_epsilon(&args.eps)?;
    let attempts = if args.certify_cap.is_some() { args.attempts.max(1) } else { 1 };
    let first = ExpanderParams::new(args.n, eps, args.mu, args.seed);
    if !first.epsilon_in_advised_range() {
        eprintln!(
            "warning: eps={} exceeds 3^-(2t+1) for t={}; expansion is not guaranteed even asymptotically",
            first.epsilon, first.t_radius
        );
    }
    let mut last_err = None;
    for i in 0..attempts as u64 {
        let params = ExpanderParams::new(args.n, eps, args.mu, args.seed + i);
        let exp = match generate_expander_candidate(params) {
            Ok(exp) => exp,
            Err(e @ (ExpanderError::ConfigModelStuck(_) | ExpanderError::SelectionFailed { .. })) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let Some(cap) = args.certify_cap else {
            return Ok((exp, json!({ "source": "generated", "attempts": 1, "certificate": null })));
        };
        let check = verify_expansion(&exp, cap, 2.0 - 2.0 * args.mu)?;
        if check.is_certified() {
            return Ok((exp, json!({ "source": "generated", "attempts": i + 1, "certificate": check })));
        }
        eprintln!("seed {}: not certified at cap {cap}: {check:?}", args.seed + i);
    }
    match last_err {
        Some(e) if args.certify_cap.is_none() => Err(e.into()),
        _ => bail!("no candidate certified in {attempts} attempts"),
    }
}

fn save_stream(stream: &EventStream, out: &Path) -> Result<()> {
    stream.save(out).with_context(|| format!("writing {}", out.display()))
}

fn lower_bound(
    lb: &LowerBoundStream,
    exp: &BipartiteExpander,
    provenance: serde_json::Value,
    args: &GenArgs,
) -> Result<()> {
    save_stream(&lb.stream, &args.out)?;
    write_json(
        &sidecar_path(&args.out),
        &json!({
            "landmarks": lb.landmarks,
            "left": exp.left_size,
            "right": exp.right_size,
            "params": exp.params,
            "expander": provenance,
            // asymptotic constant, recorded for reference only
            "delta": exp.params.delta,
        }),
    )
}

pub fn run(args: GenArgs) -> Result<ExitCode> {
    let simple = |stream: EventStream, extra: serde_json::Value| -> Result<()> {
        save_stream(&stream, &args.out)?;
        write_json(&sidecar_path(&args.out), &json!({ "events": stream.len(), "seed": args.seed, "params": extra }))
    };
    match args.kind {
        Kind::Expander => {
            let (exp, provenance) = expander(&args)?;
            write_json(&args.out, &serde_json::to_value(&exp)?)?;
            write_json(&sidecar_path(&args.out), &json!({ "expander": provenance }))?;
        }
        Kind::IsLb => {
            let (exp, provenance) = expander(&args)?;
            lower_bound(&is_lowerbound_stream(&exp), &exp, provenance, &args)?;
        }
        Kind::DsLb => {
            let (exp, provenance) = expander(&args)?;
            lower_bound(&domset_lowerbound_stream(&exp), &exp, provenance, &args)?;
        }
        Kind::Tight => {
            if args.d < 2 {
                bail!("the tight instance needs d >= 2");
            }
            let (stream, layout) = directed_domset_tight_stream(args.d);
            simple(
                stream,
                json!({ "d": args.d, "layout": layout, "expected_size": args.d * args.d + 2, "expected_opt": 3 }),
            )?;
        }
        Kind::Star => {
            if args.n < 2 {
                bail!("a star needs n >= 2");
            }
            simple(star_adversary_stream(args.n), json!({ "n": args.n }))?;
        }
        Kind::Random => simple(arrival_degree_stream(args.n, args.d, args.seed), json!({ "n": args.n, "d": args.d }))?,
        Kind::Sparse => simple(average_degree_stream(args.n, args.d, args.seed), json!({ "n": args.n, "d": args.d }))?,
        Kind::Dynamic => simple(
            fully_dynamic_stream(args.n, args.d, args.departure_rate, args.seed),
            json!({ "events": args.n, "d": args.d, "departure_rate": args.departure_rate }),
        )?,
        Kind::Path => simple(path_stream(args.n), json!({ "n": args.n }))?,
        Kind::Cycle => {
            if args.n < 3 {
                bail!("a cycle needs n >= 3");
            }
            simple(cycle_stream(args.n), json!({ "n": args.n }))?;
        }
        Kind::Gnp => simple(gnp_arrival_stream(args.n, args.p, args.seed), json!({ "n": args.n, "p": args.p }))?,
    }
    Ok(ExitCode::SUCCESS)
}
