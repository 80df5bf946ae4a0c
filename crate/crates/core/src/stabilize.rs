//! Stable approximation by bounded local search.
//!
//! After each arrival the maintained set is repaired with swaps that remove
//! `k <= f` vertices and insert `k - 1` (minimization) or `k + 1`
//! (maximization) until it is within a factor `1 + eps` of the optimum.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithm::{AlgorithmError, StreamAlgorithm};
use crate::graph::{DynamicGraph, StepDelta, VertexId, VertexSet};
use crate::oracle::{Oracle, Problem};
use crate::stream::StreamEvent;
use crate::validate::Feasibility;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EpsilonError {
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
    #[error("epsilon must be positive, got {0}")]
    NotPositive(Rational64),
}

/// Parses `"0.5"`, `"1/2"` or `"1"` into an exact positive rational.
pub fn parse_epsilon(text: &str) -> Result<Rational64, EpsilonError> {
    let text = text.trim();
    let bad = || EpsilonError::Parse(text.to_string());
    let value = if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        Rational64::new(int * den + frac, den)
    } else {
        Rational64::from_str(text).map_err(|_| bad())?
    };
    if value.is_positive() {
        Ok(value)
    } else {
        Err(EpsilonError::NotPositive(value))
    }
}

/// Problem-specific pieces of the wrapper.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProblemAdapter {
    pub problem: Problem,
    pub oracle: Oracle,
    /// Largest change of the optimum across one arrival.
    pub continuity_d: usize,
}

impl ProblemAdapter {
    /// Minimum dominating set on streams of arrival degree at most `d`,
    /// which is `max(1, d-1)`-continuous.
    pub fn min_dominating_set(arrival_degree: usize) -> Self {
        ProblemAdapter {
            problem: Problem::DomSet,
            oracle: Oracle::new(Problem::DomSet),
            continuity_d: arrival_degree.saturating_sub(1).max(1),
        }
    }

    /// Maximum independent set, which is 1-continuous under arrivals.
    pub fn max_independent_set() -> Self {
        ProblemAdapter { problem: Problem::IndSet, oracle: Oracle::new(Problem::IndSet), continuity_d: 1 }
    }

    pub fn with_oracle(mut self, oracle: Oracle) -> Self {
        assert_eq!(oracle.problem, self.problem, "oracle solves a different problem");
        self.oracle = oracle;
        self
    }

    pub fn sense(&self) -> Sense {
        if self.problem.is_minimization() {
            Sense::Min
        } else {
            Sense::Max
        }
    }

    pub fn feasible(&self, g: &DynamicGraph, s: &VertexSet) -> bool {
        self.problem.feasibility().check(g, s)
    }

    /// Is `size` within `1 + eps` of `opt`?
    pub fn within(&self, size: usize, opt: usize, eps: Rational64) -> bool {
        let factor = Rational64::one() + eps;
        let (size, opt) = (Rational64::from_integer(size as i64), Rational64::from_integer(opt as i64));
        match self.sense() {
            Sense::Min => size <= factor * opt,
            Sense::Max => opt <= factor * size,
        }
    }

    /// Size of `S_new` for a given `|S_old|`, or `None` if no such swap.
    fn new_size(&self, k: usize) -> Option<usize> {
        match self.sense() {
            Sense::Min => k.checked_sub(1),
            Sense::Max => Some(k + 1),
        }
    }

    fn old_sizes(&self, f: usize) -> std::ops::RangeInclusive<usize> {
        match self.sense() {
            Sense::Min => 1..=f,
            Sense::Max => 0..=f,
        }
    }
}

/// A replacement of `old` by `new`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Swap {
    pub old: VertexSet,
    pub new: VertexSet,
}

impl Swap {
    pub fn apply(&self, s: &mut VertexSet) {
        for x in &self.old {
            s.remove(x);
        }
        s.extend(self.new.iter().copied());
    }
}

impl fmt::Display for Swap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "-{:?} +{:?}", self.old, self.new)
    }
}

/// Calls `visit` on every `k`-subset of `items` in lexicographic order until
/// it returns true.
fn for_each_combination(items: &[VertexId], k: usize, mut visit: impl FnMut(&[VertexId]) -> bool) -> bool {
    if k > items.len() {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<VertexId> = Vec::with_capacity(k);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        if visit(&buf) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < items.len() - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// First improving swap in the search order: increasing `|S_old|`, then
/// `S_old` lexicographically, then `S_new` lexicographically. Checks every
/// candidate pair against the feasibility predicate.
pub fn find_swap_generic(adapter: &ProblemAdapter, g: &DynamicGraph, s: &VertexSet, f: usize) -> Option<Swap> {
    let members: Vec<VertexId> = s.iter().copied().collect();
    let outside: Vec<VertexId> = g.vertices().filter(|v| !s.contains(v)).collect();
    for k in adapter.old_sizes(f) {
        let Some(m) = adapter.new_size(k) else { continue };
        let mut found = None;
        for_each_combination(&members, k, |old| {
            let mut rest = s.clone();
            for x in old {
                rest.remove(x);
            }
            for_each_combination(&outside, m, |new| {
                let mut cand = rest.clone();
                cand.extend(new.iter().copied());
                if adapter.feasible(g, &cand) {
                    found = Some(Swap { old: old.iter().copied().collect(), new: new.iter().copied().collect() });
                    true
                } else {
                    false
                }
            })
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Same result as [`find_swap_generic`], with the inner search restricted to
/// vertices that can appear in a feasible `S_new`.
pub fn find_swap(adapter: &ProblemAdapter, g: &DynamicGraph, s: &VertexSet, f: usize) -> Option<Swap> {
    let members: Vec<VertexId> = s.iter().copied().collect();
    for k in adapter.old_sizes(f) {
        let Some(m) = adapter.new_size(k) else { continue };
        let mut found = None;
        for_each_combination(&members, k, |old| {
            let old: VertexSet = old.iter().copied().collect();
            let new = match adapter.problem {
                Problem::IndSet => independent_extension(g, s, &old, m),
                _ => dominating_completion(g, s, &old, m),
            };
            found = new.map(|new| Swap { old, new });
            found.is_some()
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// First `m`-subset of `{c not in S : N(c) ∩ S ⊆ old}` that is independent.
fn independent_extension(g: &DynamicGraph, s: &VertexSet, old: &VertexSet, m: usize) -> Option<VertexSet> {
    let cands: Vec<VertexId> = g
        .vertices()
        .filter(|c| !s.contains(c))
        .filter(|c| g.neighbors(*c).expect("alive").iter().all(|u| !s.contains(u) || old.contains(u)))
        .collect();
    let mut out = None;
    for_each_combination(&cands, m, |pick| {
        let ok = pick.iter().enumerate().all(|(i, a)| pick[i + 1..].iter().all(|b| !g.has_edge(*a, *b)));
        if ok {
            out = Some(pick.iter().copied().collect());
        }
        ok
    });
    out
}

/// First `m`-subset `N` of `V \ S` in lexicographic order such that
/// `(S \ old) ∪ N` dominates. Depth-first with pruning on vertices that no
/// remaining candidate can cover.
fn dominating_completion(g: &DynamicGraph, s: &VertexSet, old: &VertexSet, m: usize) -> Option<VertexSet> {
    let cands: Vec<VertexId> = g.vertices().filter(|c| !s.contains(c)).collect();
    let kept: VertexSet = s.difference(old).copied().collect();
    let undominated: VertexSet = g
        .vertices()
        .filter(|v| !kept.contains(v) && g.neighbors(*v).expect("alive").iter().all(|u| !kept.contains(u)))
        .collect();

    fn rec(
        g: &DynamicGraph,
        cands: &[VertexId],
        start: usize,
        left: usize,
        undominated: &VertexSet,
        chosen: &mut Vec<VertexId>,
    ) -> bool {
        if left == 0 {
            return undominated.is_empty();
        }
        // every undominated vertex needs a candidate at index >= start
        let later = &cands[start..];
        for u in undominated {
            let covered = later.iter().any(|c| c == u || g.has_edge(*c, *u));
            if !covered {
                return false;
            }
        }
        for i in start..cands.len() {
            if cands.len() - i < left {
                return false;
            }
            let c = cands[i];
            let rest: VertexSet = undominated.iter().filter(|u| **u != c && !g.has_edge(c, **u)).copied().collect();
            chosen.push(c);
            if rec(g, cands, i + 1, left - 1, &rest, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::with_capacity(m);
    rec(g, &cands, 0, m, &undominated, &mut chosen).then(|| chosen.into_iter().collect())
}

/// `(ceil((1+eps) d) + 1)(2f - 1)` for minimization, `d(2f + 1)` for
/// maximization.
pub fn stability_bound(sense: Sense, eps: Rational64, f: usize, d: usize) -> usize {
    match sense {
        Sense::Min => {
            let rounds = ((Rational64::one() + eps) * Rational64::from_integer(d as i64)).ceil().to_integer() as usize;
            (rounds + 1) * (2 * f).saturating_sub(1)
        }
        Sense::Max => d * (2 * f + 1),
    }
}

/// The wrapper itself.
#[derive(Clone, Debug)]
pub struct Sas {
    adapter: ProblemAdapter,
    eps: Rational64,
    f: usize,
    s_alg: VertexSet,
    prev_opt: Option<usize>,
    last_opt: usize,
    swaps: u64,
}

impl Sas {
    pub fn new(adapter: ProblemAdapter, eps: Rational64, f: usize) -> Self {
        assert!(eps > Rational64::zero(), "epsilon must be positive");
        Sas { adapter, eps, f, s_alg: VertexSet::new(), prev_opt: None, last_opt: 0, swaps: 0 }
    }

    pub fn adapter(&self) -> &ProblemAdapter {
        &self.adapter
    }

    pub fn epsilon(&self) -> Rational64 {
        self.eps
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// Optimum at the last step, as seen by the oracle.
    pub fn last_opt(&self) -> usize {
        self.last_opt
    }

    pub fn arrive(&mut self, g: &DynamicGraph, v: VertexId) -> Result<StepDelta, AlgorithmError> {
        let t = g.current_time();
        let before = self.s_alg.clone();
        if self.adapter.sense() == Sense::Min {
            self.s_alg.insert(v);
        }
        let opt = self.adapter.oracle.optimum(g)?;
        let prev = self.prev_opt.unwrap_or(0);
        if opt.abs_diff(prev) > self.adapter.continuity_d {
            return Err(AlgorithmError::ContinuityViolated {
                t,
                before: prev,
                after: opt,
                d: self.adapter.continuity_d,
            });
        }
        self.prev_opt = Some(opt);
        self.last_opt = opt;
        if !self.adapter.feasible(g, &self.s_alg) {
            return Err(AlgorithmError::InvariantBreached { t, name: "feasibility after repair".into() });
        }
        while !self.adapter.within(self.s_alg.len(), opt, self.eps) {
            let swap = find_swap(&self.adapter, g, &self.s_alg, self.f)
                .ok_or(AlgorithmError::NoImprovingSwap { t, f: self.f })?;
            swap.apply(&mut self.s_alg);
            self.swaps += 1;
        }
        Ok(StepDelta::between(&before, &self.s_alg))
    }
}

impl StreamAlgorithm for Sas {
    fn name(&self) -> &'static str {
        match self.adapter.sense() {
            Sense::Min => "sas-min-ds",
            Sense::Max => "sas-max-is",
        }
    }

    fn stability_bound(&self) -> usize {
        stability_bound(self.adapter.sense(), self.eps, self.f, self.adapter.continuity_d)
    }

    fn feasibility(&self) -> Feasibility {
        self.adapter.problem.feasibility()
    }

    fn step(&mut self, g: &DynamicGraph, event: &StreamEvent) -> Result<StepDelta, AlgorithmError> {
        match event {
            StreamEvent::Arrival { vertex, .. } => self.arrive(g, *vertex),
            StreamEvent::Departure { vertex } => {
                Err(AlgorithmError::ModelViolation { algorithm: self.name(), vertex: *vertex })
            }
        }
    }

    fn solution(&self) -> &VertexSet {
        &self.s_alg
    }

    fn aux(&self) -> Vec<(&'static str, u64)> {
        vec![("swaps", self.swaps)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::EventStream;

    fn path(n: u32) -> EventStream {
        let events =
            (0..n).map(|i| if i == 0 { StreamEvent::arrival(0, &[]) } else { StreamEvent::arrival(i, &[i - 1]) });
        EventStream::new(None, events.collect())
    }

    fn run(sas: &mut Sas, stream: &EventStream) -> Vec<usize> {
        let mut g = DynamicGraph::new();
        let mut out = Vec::new();
        for e in &stream.events {
            g.apply(e).unwrap();
            let delta = sas.step(&g, e).unwrap();
            assert!(sas.adapter().feasible(&g, sas.solution()));
            out.push(delta.stability());
        }
        out
    }

    #[test]
    fn epsilon_forms() {
        assert_eq!(parse_epsilon("0.5").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_epsilon("1/2").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_epsilon("1").unwrap(), Rational64::one());
        assert_eq!(parse_epsilon(".25").unwrap(), Rational64::new(1, 4));
        assert!(matches!(parse_epsilon("0"), Err(EpsilonError::NotPositive(_))));
        assert!(matches!(parse_epsilon("abc"), Err(EpsilonError::Parse(_))));
        assert!(matches!(parse_epsilon("1."), Err(EpsilonError::Parse(_))));
    }

    #[test]
    fn bounds() {
        assert_eq!(stability_bound(Sense::Min, Rational64::one(), 2, 1), 9);
        assert_eq!(stability_bound(Sense::Max, Rational64::new(1, 2), 3, 1), 7);
    }

    #[test]
    fn combinations_in_order() {
        let items: Vec<VertexId> = (0..4).map(VertexId).collect();
        let mut seen = Vec::new();
        for_each_combination(&items, 2, |c| {
            seen.push((c[0].0, c[1].0));
            false
        });
        assert_eq!(seen, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let mut empty = 0;
        for_each_combination(&items, 0, |c| {
            empty += c.len() + 1;
            false
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn min_trivial_step_adds_arrival() {
        let mut sas = Sas::new(ProblemAdapter::min_dominating_set(1), Rational64::one(), 2);
        let mut g = DynamicGraph::new();
        let e = StreamEvent::arrival(0, &[]);
        g.apply(&e).unwrap();
        let delta = sas.step(&g, &e).unwrap();
        assert_eq!(delta.stability(), 1);
    }

    #[test]
    fn max_is_on_path() {
        let mut sas = Sas::new(ProblemAdapter::max_independent_set(), Rational64::new(1, 2), 3);
        let stab = run(&mut sas, &path(12));
        assert!(stab.iter().all(|s| *s <= 7));
        assert!(sas.adapter().within(sas.solution().len(), sas.last_opt(), Rational64::new(1, 2)));
    }

    #[test]
    fn min_ds_on_path() {
        let mut sas = Sas::new(ProblemAdapter::min_dominating_set(1), Rational64::one(), 2);
        let stab = run(&mut sas, &path(10));
        assert!(stab.iter().all(|s| *s <= 9));
    }

    #[test]
    fn specialized_matches_generic_on_path() {
        let g = path(7).replay().unwrap();
        let all: VertexSet = g.vertices().collect();
        let ds = ProblemAdapter::min_dominating_set(2);
        assert_eq!(find_swap(&ds, &g, &all, 2), find_swap_generic(&ds, &g, &all, 2));
        let is = ProblemAdapter::max_independent_set();
        let s: VertexSet = [VertexId(1), VertexId(4)].into_iter().collect();
        assert_eq!(find_swap(&is, &g, &s, 2), find_swap_generic(&is, &g, &s, 2));
    }

    #[test]
    fn departures_rejected() {
        let mut sas = Sas::new(ProblemAdapter::max_independent_set(), Rational64::one(), 1);
        let mut g = DynamicGraph::new();
        g.apply(&StreamEvent::arrival(0, &[])).unwrap();
        g.apply(&StreamEvent::departure(0)).unwrap();
        assert!(matches!(sas.step(&g, &StreamEvent::departure(0)), Err(AlgorithmError::ModelViolation { .. })));
    }
}
