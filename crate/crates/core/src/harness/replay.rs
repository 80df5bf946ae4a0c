//! Replaying a stream through one algorithm, with per-event validation and
//! optional oracle values.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithm::{AlgorithmError, StreamAlgorithm};
use crate::domset::{DirectedDomSet, PhaseDomSet, TargetPolicy};
use crate::graph::{DynamicGraph, GraphError, Timestamp};
use crate::harness::trace::{self, TraceError, TraceRecord};
use crate::indset::PhaseIndSet;
use crate::oracle::{Oracle, OracleBudget, OracleError, Problem};
use crate::stabilize::{ProblemAdapter, Sas, Sense};
use crate::stream::{EventStream, Model, StreamError};

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "STABLE_DG_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmId {
    Directed,
    Phase2,
    PhaseK,
    Is2,
    Is6,
    Sas,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 6] = [
        AlgorithmId::Directed,
        AlgorithmId::Phase2,
        AlgorithmId::PhaseK,
        AlgorithmId::Is2,
        AlgorithmId::Is6,
        AlgorithmId::Sas,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::Directed => "directed",
            AlgorithmId::Phase2 => "phase2",
            AlgorithmId::PhaseK => "phasek",
            AlgorithmId::Is2 => "is2",
            AlgorithmId::Is6 => "is6",
            AlgorithmId::Sas => "sas",
        }
    }

    pub fn accepts(self, model: Model) -> bool {
        model == Model::Arrival || self == AlgorithmId::Is6
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmId::ALL.into_iter().find(|a| a.as_str() == s).ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SasProblem {
    MinDs,
    MaxIs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SasParams {
    pub problem: SasProblem,
    pub epsilon: Rational64,
    pub f: usize,
}

impl Default for SasParams {
    fn default() -> Self {
        SasParams { problem: SasProblem::MaxIs, epsilon: Rational64::new(1, 2), f: 3 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    #[default]
    Off,
    Exact,
    /// Optimum at every `k`-th event only; `max_opt` is then a lower bound.
    Sparse(usize),
}

impl OracleMode {
    fn due(self, t: Timestamp) -> bool {
        match self {
            OracleMode::Off => false,
            OracleMode::Exact => true,
            OracleMode::Sparse(k) => k > 0 && t.is_multiple_of(k as u64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: AlgorithmId,
    pub stream_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub oracle: OracleMode,
    /// Abort on the first invariant breach instead of recording it.
    pub strict: bool,
    pub seed: u64,
    /// Degree bound; resolved from the stream when absent.
    pub d: Option<usize>,
    pub sas: SasParams,
    /// Phase targets fall back to greedy when the oracle gives up.
    pub greedy_fallback: bool,
    pub oracle_max_vertices: Option<usize>,
}

impl RunConfig {
    pub fn new(algorithm: AlgorithmId) -> Self {
        RunConfig {
            algorithm,
            stream_path: None,
            output_path: None,
            oracle: OracleMode::Off,
            strict: false,
            seed: 0,
            d: None,
            sas: SasParams::default(),
            greedy_fallback: false,
            oracle_max_vertices: None,
        }
    }

    pub fn with_oracle(mut self, oracle: OracleMode) -> Self {
        self.oracle = oracle;
        self
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_sas(mut self, sas: SasParams) -> Self {
        self.sas = sas;
        self
    }

    pub fn with_oracle_max_vertices(mut self, n: usize) -> Self {
        self.oracle_max_vertices = Some(n);
        self
    }

    /// The configured seed unless `STABLE_DG_SEED` holds a number.
    pub fn effective_seed(&self) -> u64 {
        std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(self.seed)
    }

    /// Problem the algorithm's output is compared against.
    pub fn problem(&self) -> Problem {
        match self.algorithm {
            AlgorithmId::Directed | AlgorithmId::Phase2 | AlgorithmId::PhaseK => Problem::DomSet,
            AlgorithmId::Is2 | AlgorithmId::Is6 => Problem::IndSet,
            AlgorithmId::Sas => match self.sas.problem {
                SasProblem::MinDs => Problem::DomSet,
                SasProblem::MaxIs => Problem::IndSet,
            },
        }
    }

    fn oracle_for(&self, problem: Problem) -> Oracle {
        let mut budget = OracleBudget::for_problem(problem);
        if let Some(n) = self.oracle_max_vertices {
            budget = budget.with_max_vertices(n);
        }
        Oracle::new(problem).with_budget(budget)
    }

    /// Degree bound: explicit, else declared by the stream, else scanned
    /// (maximum arrival degree for dominating set, rounded-up maximum
    /// average degree for independent set).
    pub fn resolve_d(&self, stream: &EventStream) -> Result<usize, StreamError> {
        if let Some(d) = self.d.or_else(|| stream.declared_d()) {
            return Ok(d);
        }
        match self.problem() {
            Problem::IndSet => stream.max_average_degree_ceil(),
            _ => Ok(stream.max_arrival_degree()),
        }
    }

    pub fn build(&self, d: usize) -> Box<dyn StreamAlgorithm> {
        let policy = TargetPolicy { oracle: self.oracle_for(Problem::DomSet), greedy_fallback: self.greedy_fallback };
        match self.algorithm {
            AlgorithmId::Directed => Box::new(DirectedDomSet::new()),
            AlgorithmId::Phase2 => Box::new(PhaseDomSet::three_stable(policy)),
            AlgorithmId::PhaseK => Box::new(PhaseDomSet::with_degree_bound(d, policy)),
            AlgorithmId::Is2 => Box::new(PhaseIndSet::insertion_only(d)),
            AlgorithmId::Is6 => Box::new(PhaseIndSet::fully_dynamic(d)),
            AlgorithmId::Sas => {
                let adapter = match self.sas.problem {
                    SasProblem::MinDs => ProblemAdapter::min_dominating_set(d),
                    SasProblem::MaxIs => ProblemAdapter::max_independent_set(),
                };
                let adapter = adapter.with_oracle(self.oracle_for(adapter.problem));
                Box::new(Sas::new(adapter, self.sas.epsilon, self.sas.f))
            }
        }
    }
}

/// What a trace needs to be checked and summarized on its own; stored next
/// to the CSV as `<trace>.meta.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub algorithm: String,
    pub algorithm_id: AlgorithmId,
    pub sense: Sense,
    pub stability_bound: usize,
    pub d: usize,
    pub oracle: OracleMode,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sas: Option<SasParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stream: Option<String>,
}

impl TraceMeta {
    pub fn sidecar_path(trace_path: &Path) -> PathBuf {
        let mut name = trace_path.as_os_str().to_owned();
        name.push(".meta.json");
        PathBuf::from(name)
    }
}

/// A non-fatal invariant breach recorded outside strict mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub t: Timestamp,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub meta: TraceMeta,
    pub records: Vec<TraceRecord>,
    pub violations: Vec<Violation>,
}

impl Trace {
    /// Writes the CSV and its metadata sidecar.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), HarnessError> {
        let path = path.as_ref();
        trace::save_csv(&self.records, path)?;
        let json = serde_json::to_string_pretty(&self.meta).map_err(|e| HarnessError::Json(e.to_string()))?;
        std::fs::write(TraceMeta::sidecar_path(path), json)?;
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("metadata: {0}")]
    Json(String),
    #[error("no stream given")]
    NoStream,
    #[error("{algorithm} cannot run on a {} stream", model.as_str())]
    Incompatible { algorithm: AlgorithmId, model: Model },
    #[error("event at t={t}: {source}")]
    Graph { t: Timestamp, source: GraphError },
    #[error("t={t}: {source}")]
    Algorithm { t: Timestamp, source: AlgorithmError },
    #[error("oracle at t={t}: {source}")]
    Oracle { t: Timestamp, source: OracleError },
    #[error("invariant {name} breached at t={t}")]
    InvariantBreached { t: Timestamp, name: String },
    #[error("trace is empty")]
    EmptyTrace,
}

/// Loads the configured stream and replays it.
pub fn replay(cfg: &RunConfig) -> Result<Trace, HarnessError> {
    let path = cfg.stream_path.as_ref().ok_or(HarnessError::NoStream)?;
    let stream = EventStream::load(path)?;
    let mut trace = replay_stream(cfg, &stream)?;
    trace.meta.stream = Some(path.display().to_string());
    if let Some(out) = &cfg.output_path {
        trace.save(out)?;
    }
    Ok(trace)
}

/// One record per event. After every step the output is checked for
/// feasibility and against the stability bound; in strict mode the first
/// breach aborts the run.
pub fn replay_stream(cfg: &RunConfig, stream: &EventStream) -> Result<Trace, HarnessError> {
    let model = stream.model();
    if !cfg.algorithm.accepts(model) {
        return Err(HarnessError::Incompatible { algorithm: cfg.algorithm, model });
    }
    let d = cfg.resolve_d(stream)?;
    let mut alg = cfg.build(d);
    let problem = cfg.problem();
    let oracle = cfg.oracle_for(problem);
    let meta = TraceMeta {
        algorithm: alg.name().to_string(),
        algorithm_id: cfg.algorithm,
        sense: if problem.is_minimization() { Sense::Min } else { Sense::Max },
        stability_bound: alg.stability_bound(),
        d,
        oracle: cfg.oracle,
        seed: cfg.effective_seed(),
        sas: (cfg.algorithm == AlgorithmId::Sas).then_some(cfg.sas),
        stream: None,
    };

    let mut g = DynamicGraph::new();
    let mut records = Vec::with_capacity(stream.len());
    let mut violations = Vec::new();
    let mut max_opt: Option<usize> = None;
    for event in &stream.events {
        let t = g.apply(event).map_err(|source| HarnessError::Graph { t: g.current_time() + 1, source })?;
        let delta = alg.step(&g, event).map_err(|source| HarnessError::Algorithm { t, source })?;
        let mut breach = |name: String| -> Result<(), HarnessError> {
            if cfg.strict {
                Err(HarnessError::InvariantBreached { t, name })
            } else {
                violations.push(Violation { t, name });
                Ok(())
            }
        };
        if !alg.feasibility().check(&g, alg.solution()) {
            breach(alg.feasibility().name().to_string())?;
        }
        if delta.stability() > alg.stability_bound() {
            breach(format!("stability {} > {}", delta.stability(), alg.stability_bound()))?;
        }
        let opt = if cfg.oracle.due(t) {
            Some(oracle.optimum(&g).map_err(|source| HarnessError::Oracle { t, source })?)
        } else {
            None
        };
        if let Some(o) = opt {
            max_opt = Some(max_opt.map_or(o, |m| m.max(o)));
        }
        records.push(TraceRecord {
            t,
            event: event.kind(),
            n_alive: g.vertex_count(),
            sol_size: alg.solution().len(),
            opt,
            max_opt: opt.and(max_opt),
            added: delta.added.len(),
            removed: delta.removed.len(),
            aux: alg.aux().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        });
    }
    Ok(Trace { meta, records, violations })
}

/// Replays every job in parallel; results come back in input order.
pub fn run_batch(jobs: &[(RunConfig, EventStream)]) -> Vec<Result<Trace, HarnessError>> {
    jobs.par_iter().map(|(cfg, stream)| replay_stream(cfg, stream)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::StreamEvent;

    #[test]
    fn empty_stream_empty_trace() {
        let trace = replay_stream(&RunConfig::new(AlgorithmId::Phase2), &EventStream::default()).unwrap();
        assert!(trace.records.is_empty());
    }

    #[test]
    fn is2_rejects_fully_dynamic() {
        let s = EventStream::new(None, vec![StreamEvent::arrival(0, &[]), StreamEvent::departure(0)]);
        let err = replay_stream(&RunConfig::new(AlgorithmId::Is2), &s).unwrap_err();
        assert!(matches!(err, HarnessError::Incompatible { .. }));
        assert!(replay_stream(&RunConfig::new(AlgorithmId::Is6), &s).is_ok());
    }

    #[test]
    fn records_opt_and_running_max() {
        let s = EventStream::new(
            None,
            vec![StreamEvent::arrival(0, &[]), StreamEvent::arrival(1, &[]), StreamEvent::arrival(2, &[0, 1])],
        );
        let cfg = RunConfig::new(AlgorithmId::Phase2).with_oracle(OracleMode::Exact);
        let trace = replay_stream(&cfg, &s).unwrap();
        let opts: Vec<_> = trace.records.iter().map(|r| (r.opt, r.max_opt)).collect();
        assert_eq!(opts, vec![(Some(1), Some(1)), (Some(2), Some(2)), (Some(1), Some(2))]);
        assert!(trace.violations.is_empty());
    }

    #[test]
    fn sparse_oracle_samples() {
        let s = EventStream::new(None, (0..6).map(|i| StreamEvent::arrival(i, &[])).collect());
        let cfg = RunConfig::new(AlgorithmId::Directed).with_oracle(OracleMode::Sparse(3));
        let trace = replay_stream(&cfg, &s).unwrap();
        let sampled: Vec<u64> = trace.records.iter().filter(|r| r.opt.is_some()).map(|r| r.t).collect();
        assert_eq!(sampled, vec![3, 6]);
    }

    #[test]
    fn resolve_d_order() {
        let s = EventStream::new(None, vec![StreamEvent::arrival(0, &[]), StreamEvent::arrival(1, &[0])]);
        assert_eq!(RunConfig::new(AlgorithmId::PhaseK).resolve_d(&s).unwrap(), 1);
        assert_eq!(RunConfig::new(AlgorithmId::PhaseK).with_d(3).resolve_d(&s).unwrap(), 3);
        assert_eq!(RunConfig::new(AlgorithmId::Is2).resolve_d(&s).unwrap(), 1);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in AlgorithmId::ALL {
            assert_eq!(a.as_str().parse::<AlgorithmId>().unwrap(), a);
        }
        assert!("nope".parse::<AlgorithmId>().is_err());
    }
}
