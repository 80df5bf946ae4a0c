//! Dominating set maintenance in the vertex-arrival model.
//!
//! [`DirectedDomSet`] is 1-stable with ratio `(d+1)^2`. [`PhaseDomSet`]
//! migrates towards a minimum dominating set computed at each phase start,
//! `batch` changes per arrival on top of adding the arriving vertex.

use std::collections::BTreeMap;

use crate::algorithm::{AlgorithmError, StreamAlgorithm};
use crate::graph::{DynamicGraph, StepDelta, Timestamp, VertexId, VertexSet};
use crate::harness::trace::TraceRecord;
use crate::harness::verify::{BoundCheck, BoundsReport, WorstRatio};
use crate::oracle::{self, Oracle, OracleError, Problem};
use crate::stream::StreamEvent;
use crate::validate::Feasibility;

fn arrival_vertex(event: &StreamEvent, algorithm: &'static str) -> Result<VertexId, AlgorithmError> {
    match event {
        StreamEvent::Arrival { vertex, .. } => Ok(*vertex),
        StreamEvent::Departure { vertex } => Err(AlgorithmError::ModelViolation { algorithm, vertex: *vertex }),
    }
}

/// Directed dominating set plus a set `U` of pairwise unrelated vertices.
#[derive(Clone, Debug, Default)]
pub struct DirectedDomSet {
    d_alg: VertexSet,
    u_set: VertexSet,
    /// Member of `U` whose out-closed neighborhood contains the key.
    owner: BTreeMap<VertexId, VertexId>,
}

impl DirectedDomSet {
    pub const NAME: &'static str = "directed";

    pub fn new() -> Self {
        Self::default()
    }

    pub fn u_set(&self) -> &VertexSet {
        &self.u_set
    }

    /// Processes the arrival of `v`, already applied to `g`.
    pub fn arrive(&mut self, g: &DynamicGraph, v: VertexId) -> Result<StepDelta, AlgorithmError> {
        let out_v = g.out_closed_neighborhood(v)?;
        let mut delta = StepDelta::default();
        if out_v.iter().any(|x| self.d_alg.contains(x)) {
            return Ok(delta);
        }
        let related = out_v.iter().filter_map(|x| self.owner.get(x)).min().copied();
        let w = match related {
            None => {
                for x in &out_v {
                    self.owner.insert(*x, v);
                }
                self.u_set.insert(v);
                v
            }
            Some(u) => {
                let out_u = g.out_closed_neighborhood(u)?;
                *out_u.intersection(&out_v).next().expect("u is related to v")
            }
        };
        self.d_alg.insert(w);
        delta.added.insert(w);
        Ok(delta)
    }
}

impl StreamAlgorithm for DirectedDomSet {
    fn name(&self) -> &'static str {
        Self::NAME
    }

    fn stability_bound(&self) -> usize {
        1
    }

    fn feasibility(&self) -> Feasibility {
        Feasibility::DirectedDomination
    }

    fn step(&mut self, g: &DynamicGraph, event: &StreamEvent) -> Result<StepDelta, AlgorithmError> {
        let v = arrival_vertex(event, Self::NAME)?;
        self.arrive(g, v)
    }

    fn solution(&self) -> &VertexSet {
        &self.d_alg
    }

    fn aux(&self) -> Vec<(&'static str, u64)> {
        vec![("u", self.u_set.len() as u64)]
    }
}

/// Where phase targets come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetPolicy {
    pub oracle: Oracle,
    /// Fall back to a greedy dominating set when the oracle gives up. Runs
    /// that used the fallback no longer carry the ratio guarantees.
    pub greedy_fallback: bool,
}

impl Default for TargetPolicy {
    fn default() -> Self {
        TargetPolicy { oracle: Oracle::new(Problem::DomSet), greedy_fallback: false }
    }
}

impl TargetPolicy {
    /// Returns the target and whether it is a true minimum.
    pub fn target(&self, g: &DynamicGraph, t: Timestamp) -> Result<(VertexSet, bool), AlgorithmError> {
        match self.oracle.solve(g) {
            Ok(set) => Ok((set, true)),
            Err(e @ (OracleError::BudgetExceeded { .. } | OracleError::NodeLimit(_))) => {
                if self.greedy_fallback {
                    Ok((oracle::greedy_dominating_set(g), false))
                } else {
                    Err(AlgorithmError::TargetUnavailable { t, source: e })
                }
            }
            Err(e) => Err(e.into()),
        }
    }
}

/// Batch migration variant: batch 2 is 3-stable, batch `22d+1` is
/// `(22d+2)`-stable.
#[derive(Clone, Debug)]
pub struct PhaseDomSet {
    d_alg: VertexSet,
    d_plus: VertexSet,
    d_minus: VertexSet,
    batch: usize,
    policy: TargetPolicy,
    phases: u64,
    phase_started: bool,
    all_targets_exact: bool,
    name: &'static str,
}

impl PhaseDomSet {
    pub fn new(batch: usize, policy: TargetPolicy) -> Self {
        assert!(batch >= 2, "batch must be at least 2");
        PhaseDomSet {
            d_alg: VertexSet::new(),
            d_plus: VertexSet::new(),
            d_minus: VertexSet::new(),
            batch,
            policy,
            phases: 0,
            phase_started: false,
            all_targets_exact: true,
            name: if batch == 2 { "phase2" } else { "phasek" },
        }
    }

    pub fn three_stable(policy: TargetPolicy) -> Self {
        Self::new(2, policy)
    }

    /// Batch `22d+1` for maximum arrival degree `d` (taken as at least 1).
    pub fn with_degree_bound(d: usize, policy: TargetPolicy) -> Self {
        Self::new(22 * d.max(1) + 1, policy)
    }

    pub fn batch(&self) -> usize {
        self.batch
    }

    pub fn pending_additions(&self) -> &VertexSet {
        &self.d_plus
    }

    pub fn pending_removals(&self) -> &VertexSet {
        &self.d_minus
    }

    pub fn all_targets_exact(&self) -> bool {
        self.all_targets_exact
    }

    pub fn arrive(&mut self, g: &DynamicGraph, v: VertexId) -> Result<StepDelta, AlgorithmError> {
        let before = self.d_alg.clone();
        self.d_alg.insert(v);
        self.phase_started = self.d_plus.is_empty() && self.d_minus.is_empty();
        if self.phase_started {
            let (target, exact) = self.policy.target(g, g.current_time())?;
            self.all_targets_exact &= exact;
            self.phases += 1;
            // `v` already joined above, so it is never pending
            self.d_plus = target.iter().filter(|x| !self.d_alg.contains(x)).copied().collect();
            self.d_minus = before.difference(&target).copied().collect();
        }
        let m_plus = self.batch.min(self.d_plus.len());
        for _ in 0..m_plus {
            let x = self.d_plus.pop_first().expect("counted");
            self.d_alg.insert(x);
        }
        let m_minus = (self.batch - m_plus).min(self.d_minus.len());
        for _ in 0..m_minus {
            let x = self.d_minus.pop_first().expect("counted");
            self.d_alg.remove(&x);
        }
        Ok(StepDelta::between(&before, &self.d_alg))
    }
}

impl StreamAlgorithm for PhaseDomSet {
    fn name(&self) -> &'static str {
        self.name
    }

    fn stability_bound(&self) -> usize {
        self.batch + 1
    }

    fn feasibility(&self) -> Feasibility {
        Feasibility::Domination
    }

    fn step(&mut self, g: &DynamicGraph, event: &StreamEvent) -> Result<StepDelta, AlgorithmError> {
        let v = arrival_vertex(event, self.name)?;
        self.arrive(g, v)
    }

    fn solution(&self) -> &VertexSet {
        &self.d_alg
    }

    fn aux(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("batch", self.batch as u64),
            ("d_minus", self.d_minus.len() as u64),
            ("d_plus", self.d_plus.len() as u64),
            ("phase", self.phases),
            ("phase_start", self.phase_started as u64),
            ("target_exact", self.all_targets_exact as u64),
        ]
    }
}

/// Which lemma set applies to a phase run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseVariant {
    /// Batch 2: `|D(t)| <= 9/2 max-opt(t)`, phase start `|D(t-1)| <= 3 max-opt(t-1)`.
    BatchTwo,
    /// Batch `22d+1`: `|D(t)| <= 45/2 opt(t)`, phase start `|D(t-1)| <= 9/2 opt(t-1)`.
    DegreeBatch,
}

impl PhaseVariant {
    pub fn for_batch(batch: usize) -> Self {
        if batch == 2 {
            PhaseVariant::BatchTwo
        } else {
            PhaseVariant::DegreeBatch
        }
    }
}

/// Checks the phase lemmas on a trace with oracle values.
///
/// Records without an optimum are skipped. If any record says its target was
/// not exact, the report is marked not applicable and carries no checks.
pub fn phase_domset_bounds(records: &[TraceRecord], variant: PhaseVariant) -> BoundsReport {
    let mut report = BoundsReport::applicable();
    if records.iter().any(|r| r.aux_value("target_exact") == Some(0)) {
        return BoundsReport::not_applicable("a phase target was not a minimum dominating set");
    }
    let mut prev: Option<&TraceRecord> = None;
    for r in records {
        let sol = r.sol_size as u64;
        match variant {
            PhaseVariant::BatchTwo => {
                if let Some(max_opt) = r.max_opt {
                    report.push(BoundCheck::new(r.t, "2|D(t)| <= 9 max-opt(t)", 2 * sol, 9 * max_opt as u64));
                    report.observe_ratio(WorstRatio::new(sol, max_opt as u64, r.t));
                }
            }
            PhaseVariant::DegreeBatch => {
                if let Some(opt) = r.opt {
                    report.push(BoundCheck::new(r.t, "2|D(t)| <= 45 opt(t)", 2 * sol, 45 * opt as u64));
                    report.observe_ratio(WorstRatio::new(sol, opt as u64, r.t));
                }
            }
        }
        if r.aux_value("phase_start") == Some(1) {
            let prev_sol = prev.map_or(0, |p| p.sol_size as u64);
            match (variant, prev) {
                (PhaseVariant::BatchTwo, Some(p)) => {
                    if let Some(max_opt) = p.max_opt {
                        report.push(BoundCheck::new(
                            r.t,
                            "phase start |D(t-1)| <= 3 max-opt(t-1)",
                            prev_sol,
                            3 * max_opt as u64,
                        ));
                    }
                }
                (PhaseVariant::DegreeBatch, Some(p)) => {
                    if let Some(opt) = p.opt {
                        report.push(BoundCheck::new(
                            r.t,
                            "phase start 2|D(t-1)| <= 9 opt(t-1)",
                            2 * prev_sol,
                            9 * opt as u64,
                        ));
                    }
                }
                (_, None) => {}
            }
        }
        prev = Some(r);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn set(ids: &[u32]) -> VertexSet {
        ids.iter().copied().map(VertexId).collect()
    }

    fn feed(alg: &mut dyn StreamAlgorithm, g: &mut DynamicGraph, events: &[StreamEvent]) -> Vec<StepDelta> {
        events
            .iter()
            .map(|e| {
                g.apply(e).unwrap();
                alg.step(g, e).unwrap()
            })
            .collect()
    }

    #[test]
    fn directed_first_vertex_joins_u() {
        let mut g = DynamicGraph::new();
        let mut alg = DirectedDomSet::new();
        let deltas = feed(&mut alg, &mut g, &[StreamEvent::arrival(1, &[]), StreamEvent::arrival(2, &[1])]);
        assert_eq!(deltas[0].added, set(&[1]));
        assert!(deltas[1].is_empty());
        assert_eq!(alg.u_set(), &set(&[1]));
    }

    #[test]
    fn directed_related_case_adds_shared_vertex() {
        let mut g = DynamicGraph::new();
        let mut alg = DirectedDomSet::new();
        let deltas = feed(
            &mut alg,
            &mut g,
            &[
                StreamEvent::arrival(0, &[]),
                StreamEvent::arrival(1, &[]),
                StreamEvent::arrival(2, &[0]),
                StreamEvent::arrival(3, &[2]),
                StreamEvent::arrival(4, &[2]),
            ],
        );
        assert!(deltas[2].is_empty());
        // N_out[3] = {3,2}; 2 is owned by nobody in U yet, so 3 joins U
        assert_eq!(deltas[3].added, set(&[3]));
        // N_out[4] = {4,2} meets N_out[3] in 2
        assert_eq!(deltas[4].added, set(&[2]));
        assert_eq!(alg.u_set(), &set(&[0, 1, 3]));
        assert!(validate::is_directed_dominating(&g, alg.solution()));
    }

    #[test]
    fn departures_are_rejected() {
        let mut g = DynamicGraph::new();
        g.apply_arrival(v(0), &[]).unwrap();
        g.apply_departure(v(0)).unwrap();
        let err = DirectedDomSet::new().step(&g, &StreamEvent::departure(0)).unwrap_err();
        assert!(matches!(err, AlgorithmError::ModelViolation { .. }));
        let err = PhaseDomSet::three_stable(TargetPolicy::default()).step(&g, &StreamEvent::departure(0)).unwrap_err();
        assert!(matches!(err, AlgorithmError::ModelViolation { .. }));
    }

    #[test]
    fn phase_singleton_start() {
        let mut g = DynamicGraph::new();
        let mut alg = PhaseDomSet::three_stable(TargetPolicy::default());
        let deltas = feed(&mut alg, &mut g, &[StreamEvent::arrival(1, &[])]);
        assert_eq!(deltas[0].added, set(&[1]));
        assert_eq!(deltas[0].stability(), 1);
        assert!(alg.pending_additions().is_empty());
        assert_eq!(alg.aux().iter().find(|(k, _)| *k == "phase_start"), Some(&("phase_start", 1)));
    }

    #[test]
    fn phase_moves_at_most_batch_pending_vertices() {
        // five singletons, then a star center joining all of them. The next
        // arrival starts a phase towards {5}-centred optimum.
        let mut g = DynamicGraph::new();
        let mut alg = PhaseDomSet::three_stable(TargetPolicy::default());
        let mut events: Vec<StreamEvent> = (0..5).map(|i| StreamEvent::arrival(i, &[])).collect();
        events.push(StreamEvent::arrival(5, &[0, 1, 2, 3, 4]));
        events.push(StreamEvent::arrival(6, &[5]));
        events.push(StreamEvent::arrival(7, &[5]));
        events.push(StreamEvent::arrival(8, &[5]));
        let deltas = feed(&mut alg, &mut g, &events);
        for d in &deltas {
            assert!(d.stability() <= 3);
        }
        assert!(validate::is_dominating(&g, alg.solution()));
    }

    #[test]
    fn pending_batch_of_two() {
        let mut alg = PhaseDomSet::three_stable(TargetPolicy::default());
        alg.d_plus = set(&[10, 11, 12, 13, 14]);
        let mut g = DynamicGraph::new();
        for i in 10..=15 {
            g.apply_arrival(v(i), &[]).unwrap();
        }
        let delta = alg.arrive(&g, v(15)).unwrap();
        assert_eq!(delta.added, set(&[10, 11, 15]));
        assert_eq!(alg.pending_additions(), &set(&[12, 13, 14]));
    }

    #[test]
    fn target_unavailable_without_fallback() {
        let mut g = DynamicGraph::new();
        for i in 0..30 {
            g.apply_arrival(v(i), &[]).unwrap();
        }
        let policy = TargetPolicy::default();
        assert!(matches!(policy.target(&g, 30), Err(AlgorithmError::TargetUnavailable { .. })));
        let fallback = TargetPolicy { greedy_fallback: true, ..policy };
        let (target, exact) = fallback.target(&g, 30).unwrap();
        assert_eq!(target.len(), 30);
        assert!(!exact);
    }

    #[test]
    fn empty_trace_is_vacuous() {
        let report = phase_domset_bounds(&[], PhaseVariant::BatchTwo);
        assert!(report.all_hold());
        assert!(report.worst_ratio.is_none());
    }
}
