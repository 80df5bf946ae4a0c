//! Bound checks over traces and oracle sequences.
//!
//! Every inequality is compared in integers after clearing denominators, so
//! a check either holds exactly or fails.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Timestamp;
use crate::oracle::{opt_trace, Oracle, OracleError, Problem};
use crate::stream::EventStream;

/// One evaluated inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub t: Timestamp,
    pub name: String,
    pub lhs: u64,
    pub rhs: u64,
}

impl BoundCheck {
    pub fn new(t: Timestamp, name: impl Into<String>, lhs: u64, rhs: u64) -> Self {
        BoundCheck { t, name: name.into(), lhs, rhs }
    }

    /// `lhs >= rhs` stated the other way round.
    pub fn at_least(t: Timestamp, name: impl Into<String>, lhs: u64, rhs: u64) -> Self {
        BoundCheck { t, name: name.into(), lhs: rhs, rhs: lhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} {}: {} vs {}", self.t, self.name, self.lhs, self.rhs)
    }
}

/// An exact ratio `num/den` observed at time `t`; `den = 0` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorstRatio {
    pub num: u64,
    pub den: u64,
    pub t: Timestamp,
}

impl WorstRatio {
    pub fn new(num: u64, den: u64, t: Timestamp) -> Self {
        WorstRatio { num, den, t }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.den, other.den) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            _ => (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128)),
        }
    }

    pub fn as_f64(&self) -> f64 {
        if self.den == 0 {
            f64::INFINITY
        } else {
            self.num as f64 / self.den as f64
        }
    }

    /// Keeps the larger ratio; earlier time wins ties.
    pub fn max(a: Option<Self>, b: Self) -> Option<Self> {
        match a {
            Some(a) if a.cmp_value(&b) != Ordering::Less => Some(a),
            _ => Some(b),
        }
    }
}

impl fmt::Display for WorstRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 0 {
            write!(f, "inf (t={})", self.t)
        } else {
            write!(f, "{}/{} = {:.4} (t={})", self.num, self.den, self.as_f64(), self.t)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub applicable: bool,
    pub note: Option<String>,
    pub checks: Vec<BoundCheck>,
    pub worst_ratio: Option<WorstRatio>,
}

impl BoundsReport {
    pub fn applicable() -> Self {
        BoundsReport { applicable: true, ..Default::default() }
    }

    pub fn not_applicable(note: impl Into<String>) -> Self {
        BoundsReport { applicable: false, note: Some(note.into()), ..Default::default() }
    }

    pub fn push(&mut self, check: BoundCheck) {
        self.checks.push(check);
    }

    pub fn observe_ratio(&mut self, ratio: WorstRatio) {
        self.worst_ratio = WorstRatio::max(self.worst_ratio, ratio);
    }

    pub fn merge(&mut self, other: BoundsReport) {
        self.applicable &= other.applicable;
        if other.note.is_some() {
            self.note = other.note;
        }
        self.checks.extend(other.checks);
        if let Some(r) = other.worst_ratio {
            self.observe_ratio(r);
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }

    pub fn all_hold(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// `opt(t) - (d-1) <= opt(t+1) <= opt(t) + 1` on an arrival-only stream with
/// maximum arrival degree `d`.
pub fn opt_decrease_checks(opt: &[usize], d: usize) -> BoundsReport {
    let slack = d.max(1) as u64 - 1;
    let mut report = BoundsReport::applicable();
    for (i, w) in opt.windows(2).enumerate() {
        let t = i as Timestamp + 2;
        let (a, b) = (w[0] as u64, w[1] as u64);
        report.push(BoundCheck::new(t, "opt(t) <= opt(t+1) + (d-1)", a, b + slack));
        report.push(BoundCheck::new(t, "opt(t+1) <= opt(t) + 1", b, a + 1));
    }
    report
}

/// `max-opt(t) <= d * opt(t)`.
pub fn max_opt_checks(opt: &[usize], max_opt: &[usize], d: usize) -> BoundsReport {
    let mut report = BoundsReport::applicable();
    for (i, (o, m)) in opt.iter().zip(max_opt).enumerate() {
        report.push(BoundCheck::new(i as Timestamp + 1, "max-opt(t) <= d opt(t)", *m as u64, (d.max(1) * o) as u64));
    }
    report
}

/// `opt_out(t) <= (d+1) opt(t)`.
pub fn opt_out_checks(opt: &[usize], opt_out: &[usize], d: usize) -> BoundsReport {
    let mut report = BoundsReport::applicable();
    for (i, (o, out)) in opt.iter().zip(opt_out).enumerate() {
        report.push(BoundCheck::new(
            i as Timestamp + 1,
            "opt_out(t) <= (d+1) opt(t)",
            *out as u64,
            ((d + 1) * o) as u64,
        ));
    }
    report
}

/// Dominating-set lemma suite on an arrival-only stream: opt decrease,
/// max-opt and directed optimum, all against exact oracles.
pub fn domset_lemma_suite(
    stream: &EventStream,
    d: usize,
    ds: &Oracle,
    directed: &Oracle,
) -> Result<BoundsReport, OracleError> {
    debug_assert_eq!(ds.problem, Problem::DomSet);
    debug_assert_eq!(directed.problem, Problem::DirectedDomSet);
    let trace = opt_trace(stream, ds)?;
    let out = opt_trace(stream, directed)?;
    let mut report = opt_decrease_checks(&trace.opt, d);
    report.merge(max_opt_checks(&trace.opt, &trace.max_opt, d));
    report.merge(opt_out_checks(&trace.opt, &out.opt, d));
    Ok(report)
}
