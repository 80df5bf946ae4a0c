//! Trace summaries and offline bound checks.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::domset::{phase_domset_bounds, PhaseVariant};
use crate::graph::Timestamp;
use crate::harness::replay::{AlgorithmId, HarnessError, OracleMode, TraceMeta};
use crate::harness::trace::TraceRecord;
use crate::harness::verify::{BoundCheck, BoundsReport, WorstRatio};
use crate::indset::{indset_ratio_report, IndSetMode};
use crate::stabilize::Sense;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub events: usize,
    pub final_size: usize,
    pub max_stability: usize,
    pub max_stability_t: Timestamp,
    /// `sol/opt` when minimizing, `opt/sol` when maximizing; `None` without
    /// oracle values.
    pub worst_ratio: Option<WorstRatio>,
    /// Set when the optimum was sampled, so the ratio may be understated.
    pub ratio_is_lower_bound: bool,
    /// Smallest `|W|/|V|` for working-set algorithms.
    pub min_w_over_v: Option<WorstRatio>,
    /// False when a phase target came from the greedy fallback.
    pub bounds_guaranteed: bool,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "events: {}", self.events)?;
        writeln!(f, "final size: {}", self.final_size)?;
        writeln!(f, "max stability: {} (t={})", self.max_stability, self.max_stability_t)?;
        match &self.worst_ratio {
            Some(r) if self.ratio_is_lower_bound => writeln!(f, "worst ratio: >= {r}")?,
            Some(r) => writeln!(f, "worst ratio: {r}")?,
            None => writeln!(f, "worst ratio: n/a")?,
        }
        if let Some(w) = &self.min_w_over_v {
            writeln!(f, "min |W|/|V|: {w}")?;
        }
        if !self.bounds_guaranteed {
            writeln!(f, "bounds not guaranteed: a phase target was not optimal")?;
        }
        Ok(())
    }
}

/// Worst ratio, largest per-event stability and smallest `|W|/|V|` over a
/// nonempty trace.
pub fn summarize(records: &[TraceRecord], sense: Sense, oracle: OracleMode) -> Result<Summary, HarnessError> {
    let last = records.last().ok_or(HarnessError::EmptyTrace)?;
    let mut worst = None;
    let mut min_w: Option<WorstRatio> = None;
    let (mut max_stability, mut max_stability_t) = (0, records[0].t);
    for r in records {
        if r.stability() > max_stability {
            max_stability = r.stability();
            max_stability_t = r.t;
        }
        if let Some(opt) = r.opt {
            let (sol, opt) = (r.sol_size as u64, opt as u64);
            let ratio = match sense {
                Sense::Min => WorstRatio::new(sol, opt, r.t),
                Sense::Max => WorstRatio::new(opt, sol, r.t),
            };
            if ratio.num > 0 || ratio.den > 0 {
                worst = WorstRatio::max(worst, ratio);
            }
        }
        if let (Some(w), true) = (r.aux_value("w"), r.n_alive > 0) {
            let ratio = WorstRatio::new(w, r.n_alive as u64, r.t);
            if min_w.is_none_or(|m| ratio.cmp_value(&m) == Ordering::Less) {
                min_w = Some(ratio);
            }
        }
    }
    Ok(Summary {
        events: records.len(),
        final_size: last.sol_size,
        max_stability,
        max_stability_t,
        worst_ratio: worst,
        ratio_is_lower_bound: matches!(oracle, OracleMode::Sparse(_)),
        min_w_over_v: min_w,
        bounds_guaranteed: records.iter().all(|r| r.aux_value("target_exact") != Some(0)),
    })
}

/// Re-checks a recorded trace: the stability bound on every record, then the
/// approximation bounds of the algorithm that produced it.
pub fn check_trace(records: &[TraceRecord], meta: &TraceMeta) -> BoundsReport {
    let mut report = BoundsReport::applicable();
    for r in records {
        report.push(BoundCheck::new(r.t, "stability", r.stability() as u64, meta.stability_bound as u64));
    }
    let d = meta.d as u64;
    let specific = match meta.algorithm_id {
        AlgorithmId::Directed => {
            let mut rep = BoundsReport::applicable();
            for r in records {
                if let Some(opt) = r.opt {
                    rep.push(BoundCheck::new(
                        r.t,
                        "|D| <= (d+1)^2 opt",
                        r.sol_size as u64,
                        (d + 1) * (d + 1) * opt as u64,
                    ));
                    rep.observe_ratio(WorstRatio::new(r.sol_size as u64, opt as u64, r.t));
                }
            }
            rep
        }
        AlgorithmId::Phase2 => phase_domset_bounds(records, PhaseVariant::BatchTwo),
        AlgorithmId::PhaseK => phase_domset_bounds(records, PhaseVariant::DegreeBatch),
        AlgorithmId::Is2 => indset_ratio_report(records, IndSetMode::InsertionOnly),
        AlgorithmId::Is6 => indset_ratio_report(records, IndSetMode::FullyDynamic),
        AlgorithmId::Sas => sas_checks(records, meta),
    };
    report.merge(specific);
    report
}

fn sas_checks(records: &[TraceRecord], meta: &TraceMeta) -> BoundsReport {
    let Some(sas) = meta.sas else {
        return BoundsReport::not_applicable("trace metadata lacks the approximation parameters");
    };
    let factor = Rational64::from_integer(1) + sas.epsilon;
    let (num, den) = (*factor.numer() as u64, *factor.denom() as u64);
    let mut rep = BoundsReport::applicable();
    for r in records {
        let Some(opt) = r.opt else { continue };
        let (sol, opt) = (r.sol_size as u64, opt as u64);
        match meta.sense {
            Sense::Min => {
                rep.push(BoundCheck::new(r.t, "|S| <= (1+eps) opt", den * sol, num * opt));
                rep.observe_ratio(WorstRatio::new(sol, opt, r.t));
            }
            Sense::Max => {
                rep.push(BoundCheck::new(r.t, "opt <= (1+eps) |S|", den * opt, num * sol));
                rep.observe_ratio(WorstRatio::new(opt, sol, r.t));
            }
        }
    }
    rep
}
