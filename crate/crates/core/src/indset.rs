//! Independent set maintenance for graphs of bounded average degree.
//!
//! A working set `W` of low-degree vertices is migrated towards a target
//! chosen at each phase start; the output `I` is grown greedily inside `W`.
//! Insertion-only mode is 2-stable, fully dynamic mode is 6-stable.

use num_rational::Rational64;

use crate::algorithm::{AlgorithmError, StreamAlgorithm};
use crate::graph::{DynamicGraph, StepDelta, VertexId, VertexSet};
use crate::harness::trace::TraceRecord;
use crate::harness::verify::{BoundCheck, BoundsReport, WorstRatio};
use crate::stream::StreamEvent;
use crate::validate::{self, Feasibility};

/// Working-set degree cap is `DEGREE_CAP_FACTOR * d`.
pub const DEGREE_CAP_FACTOR: usize = 100;
/// `|W| <= C_FACTOR * d * |I|` at all times.
pub const C_FACTOR: usize = 102;

/// Number of target vertices for `n` alive vertices: `ceil(99n/100)`.
pub fn target_size(n: usize) -> usize {
    n - n / 100
}

/// The `ceil(0.99|V|)` alive vertices of lowest degree, ties by id.
///
/// Fails if the average degree exceeds `d`, since the degree cap is then no
/// longer guaranteed. The cap itself is asserted as an invariant.
pub fn select_low_degree_target(g: &DynamicGraph, d: usize) -> Result<VertexSet, AlgorithmError> {
    let n = g.vertex_count();
    if 2 * g.edge_count() > d * n {
        return Err(AlgorithmError::AverageDegreeExceeded {
            t: g.current_time(),
            average: Rational64::new(2 * g.edge_count() as i64, n as i64).to_string(),
            d,
        });
    }
    let mut order: Vec<(usize, VertexId)> = g.vertices().map(|v| (g.degree(v).expect("alive"), v)).collect();
    order.sort_unstable();
    let target: VertexSet = order.into_iter().take(target_size(n)).map(|(_, v)| v).collect();
    if g.induced_max_degree(&target) > DEGREE_CAP_FACTOR * d {
        return Err(AlgorithmError::InvariantBreached { t: g.current_time(), name: "target degree cap".into() });
    }
    Ok(target)
}

/// Adds up to `max_adds` vertices of `w_star \ i_star` to `i_star`, trying
/// the largest count first and taking the lexicographically first feasible
/// combination. Returns the added vertices.
pub fn greedy_addition(
    g: &DynamicGraph,
    i_star: &mut VertexSet,
    w_star: &VertexSet,
    max_adds: usize,
) -> Result<VertexSet, AlgorithmError> {
    if !validate::is_independent(g, i_star) {
        return Err(AlgorithmError::NotIndependent);
    }
    let candidates: Vec<VertexId> = w_star
        .iter()
        .filter(|c| !i_star.contains(c) && g.is_alive(**c))
        .filter(|c| g.neighbors(**c).expect("alive").iter().all(|u| !i_star.contains(u)))
        .copied()
        .collect();
    for k in (1..=max_adds).rev() {
        if let Some(pick) = first_independent_combination(g, &candidates, k) {
            i_star.extend(pick.iter().copied());
            return Ok(pick);
        }
    }
    Ok(VertexSet::new())
}

/// Lexicographically first pairwise non-adjacent `k`-subset of `cands`.
fn first_independent_combination(g: &DynamicGraph, cands: &[VertexId], k: usize) -> Option<VertexSet> {
    fn rec(g: &DynamicGraph, cands: &[VertexId], start: usize, k: usize, chosen: &mut Vec<VertexId>) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in start..cands.len() {
            if cands.len() - i < k - chosen.len() {
                return false;
            }
            let c = cands[i];
            if chosen.iter().all(|x| !g.has_edge(*x, c)) {
                chosen.push(c);
                if rec(g, cands, i + 1, k, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(k);
    rec(g, cands, 0, k, &mut chosen).then(|| chosen.into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndSetMode {
    InsertionOnly,
    FullyDynamic,
}

impl IndSetMode {
    fn batch(self) -> usize {
        match self {
            IndSetMode::InsertionOnly => 1,
            IndSetMode::FullyDynamic => 2,
        }
    }

    fn max_adds(self) -> usize {
        match self {
            IndSetMode::InsertionOnly => 1,
            IndSetMode::FullyDynamic => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PhaseIndSet {
    mode: IndSetMode,
    d: usize,
    w_set: VertexSet,
    w_plus: VertexSet,
    w_minus: VertexSet,
    i_alg: VertexSet,
    phases: u64,
    phase_started: bool,
    /// `(|W(t-1)|, |V(t-1)|)` when the current step started a phase.
    phase_start_sizes: (usize, usize),
    claim_failures: u64,
    prev_n: usize,
}

impl PhaseIndSet {
    /// `d` is the average-degree bound; values below 1 are raised to 1 so the
    /// `102d` size bound stays meaningful on edgeless prefixes.
    pub fn new(mode: IndSetMode, d: usize) -> Self {
        PhaseIndSet {
            mode,
            d: d.max(1),
            w_set: VertexSet::new(),
            w_plus: VertexSet::new(),
            w_minus: VertexSet::new(),
            i_alg: VertexSet::new(),
            phases: 0,
            phase_started: false,
            phase_start_sizes: (0, 0),
            claim_failures: 0,
            prev_n: 0,
        }
    }

    pub fn insertion_only(d: usize) -> Self {
        Self::new(IndSetMode::InsertionOnly, d)
    }

    pub fn fully_dynamic(d: usize) -> Self {
        Self::new(IndSetMode::FullyDynamic, d)
    }

    pub fn mode(&self) -> IndSetMode {
        self.mode
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn working_set(&self) -> &VertexSet {
        &self.w_set
    }

    pub fn pending_additions(&self) -> &VertexSet {
        &self.w_plus
    }

    pub fn pending_removals(&self) -> &VertexSet {
        &self.w_minus
    }

    /// Steps where `|W| > 102d|I|` held before greedy addition and nothing
    /// could be added. Always zero unless the degree cap broke.
    pub fn claim_failures(&self) -> u64 {
        self.claim_failures
    }

    pub fn apply(&mut self, g: &DynamicGraph, event: &StreamEvent) -> Result<StepDelta, AlgorithmError> {
        let before = self.i_alg.clone();
        let n_before = self.prev_n;
        let w_before = self.w_set.len();
        if let StreamEvent::Departure { vertex } = event {
            if self.mode == IndSetMode::InsertionOnly {
                return Err(AlgorithmError::ModelViolation { algorithm: self.name(), vertex: *vertex });
            }
            for s in [&mut self.w_set, &mut self.w_plus, &mut self.w_minus, &mut self.i_alg] {
                s.remove(vertex);
            }
        }
        self.phase_started = self.w_plus.is_empty() && self.w_minus.is_empty();
        if self.phase_started {
            self.phases += 1;
            self.phase_start_sizes = (w_before, n_before);
            let target = select_low_degree_target(g, self.d)?;
            self.w_plus = target.difference(&self.w_set).copied().collect();
            self.w_minus = self.w_set.difference(&target).copied().collect();
        }
        let batch = self.mode.batch();
        let m_minus = batch.min(self.w_minus.len());
        for _ in 0..m_minus {
            let x = self.w_minus.pop_first().expect("counted");
            self.w_set.remove(&x);
            self.i_alg.remove(&x);
        }
        let m_plus = (batch - m_minus).min(self.w_plus.len());
        for _ in 0..m_plus {
            let x = self.w_plus.pop_first().expect("counted");
            self.w_set.insert(x);
        }
        let over = self.w_set.len() > C_FACTOR * self.d * self.i_alg.len();
        let added = greedy_addition(g, &mut self.i_alg, &self.w_set, self.mode.max_adds())?;
        if over && added.is_empty() {
            self.claim_failures += 1;
        }
        if g.induced_max_degree(&self.w_set) > DEGREE_CAP_FACTOR * self.d {
            return Err(AlgorithmError::InvariantBreached {
                t: g.current_time(),
                name: "working set degree cap".into(),
            });
        }
        self.prev_n = g.vertex_count();
        Ok(StepDelta::between(&before, &self.i_alg))
    }
}

impl StreamAlgorithm for PhaseIndSet {
    fn name(&self) -> &'static str {
        match self.mode {
            IndSetMode::InsertionOnly => "is2",
            IndSetMode::FullyDynamic => "is6",
        }
    }

    fn stability_bound(&self) -> usize {
        match self.mode {
            IndSetMode::InsertionOnly => 2,
            IndSetMode::FullyDynamic => 6,
        }
    }

    fn feasibility(&self) -> Feasibility {
        Feasibility::Independence
    }

    fn step(&mut self, g: &DynamicGraph, event: &StreamEvent) -> Result<StepDelta, AlgorithmError> {
        self.apply(g, event)
    }

    fn solution(&self) -> &VertexSet {
        &self.i_alg
    }

    fn aux(&self) -> Vec<(&'static str, u64)> {
        let mut aux = vec![
            ("claim_failures", self.claim_failures),
            ("d", self.d as u64),
            ("phase", self.phases),
            ("phase_start", self.phase_started as u64),
            ("w", self.w_set.len() as u64),
            ("w_minus", self.w_minus.len() as u64),
            ("w_plus", self.w_plus.len() as u64),
        ];
        if self.phase_started {
            aux.push(("prev_n", self.phase_start_sizes.1 as u64));
            aux.push(("prev_w", self.phase_start_sizes.0 as u64));
        }
        aux
    }
}

/// Size and ratio lemmas of the working-set algorithms over a trace produced
/// by [`PhaseIndSet`] (needs the `w`, `d`, `phase_start`, `prev_w`, `prev_n`
/// aux columns). Oracle checks use `opt` where present.
pub fn indset_ratio_report(records: &[TraceRecord], mode: IndSetMode) -> BoundsReport {
    let mut report = BoundsReport::applicable();
    for r in records {
        let (Some(w), Some(d)) = (r.aux_value("w"), r.aux_value("d")) else {
            return BoundsReport::not_applicable("trace lacks working-set columns");
        };
        let i = r.sol_size as u64;
        let n = r.n_alive as u64;
        let c = C_FACTOR as u64 * d;
        report.push(BoundCheck::new(r.t, "|W| <= 102d|I|", w, c * i));
        match mode {
            IndSetMode::InsertionOnly => report.push(BoundCheck::at_least(r.t, "1000|W| >= 455|V|", 1000 * w, 455 * n)),
            IndSetMode::FullyDynamic => report.push(BoundCheck::at_least(r.t, "603|W| >= 89|V|", 603 * w, 89 * n)),
        }
        if r.aux_value("phase_start") == Some(1) {
            let (pw, pn) = (r.aux_value("prev_w").unwrap_or(0), r.aux_value("prev_n").unwrap_or(0));
            match mode {
                IndSetMode::InsertionOnly => report.push(BoundCheck::at_least(
                    r.t,
                    "phase start 1000|W(t-1)| >= 495|V(t-1)|",
                    1000 * pw,
                    495 * pn,
                )),
                IndSetMode::FullyDynamic => {
                    report.push(BoundCheck::at_least(r.t, "phase start 300|W(t-1)| >= 98|V(t-1)|", 300 * pw, 98 * pn))
                }
            }
        }
        if let Some(claim) = r.aux_value("claim_failures") {
            report.push(BoundCheck::new(r.t, "greedy addition claim failures", claim, 0));
        }
        if let Some(opt) = r.opt {
            // opt <= |V| <= (1000/455)|W| <= (1000/455) 102d |I|
            report.push(BoundCheck::new(r.t, "455 opt <= 1000 * 102d|I|", 455 * opt as u64, 1000 * c * i));
            report.observe_ratio(WorstRatio::new(opt as u64, i, r.t));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::EventStream;
    use std::collections::BTreeMap;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn set(ids: &[u32]) -> VertexSet {
        ids.iter().copied().map(VertexId).collect()
    }

    fn path_abc() -> DynamicGraph {
        EventStream::new(
            None,
            vec![StreamEvent::arrival(0, &[]), StreamEvent::arrival(1, &[0]), StreamEvent::arrival(2, &[1])],
        )
        .replay()
        .unwrap()
    }

    #[test]
    fn target_sizes() {
        assert_eq!(target_size(200), 198);
        assert_eq!(target_size(50), 50);
        assert_eq!(target_size(1), 1);
        assert_eq!(target_size(100), 99);
    }

    #[test]
    fn target_of_isolated_vertices() {
        let mut g = DynamicGraph::new();
        for i in 0..50 {
            g.apply_arrival(v(i), &[]).unwrap();
        }
        let t = select_low_degree_target(&g, 1).unwrap();
        assert_eq!(t.len(), 50);
        assert_eq!(g.induced_max_degree(&t), 0);
    }

    #[test]
    fn target_rejects_dense_graph() {
        let g = path_abc();
        assert!(select_low_degree_target(&g, 2).is_ok());
        let mut k4 = DynamicGraph::new();
        for i in 0..4u32 {
            let nbrs: Vec<VertexId> = (0..i).map(VertexId).collect();
            k4.apply_arrival(v(i), &nbrs).unwrap();
        }
        assert!(matches!(select_low_degree_target(&k4, 2), Err(AlgorithmError::AverageDegreeExceeded { .. })));
    }

    #[test]
    fn greedy_examples() {
        let g = path_abc();
        let mut i = VertexSet::new();
        assert!(greedy_addition(&g, &mut i, &VertexSet::new(), 1).unwrap().is_empty());
        assert_eq!(greedy_addition(&g, &mut i, &set(&[0, 1, 2]), 1).unwrap(), set(&[0]));
        assert_eq!(greedy_addition(&g, &mut i, &set(&[0, 1, 2]), 1).unwrap(), set(&[2]));
        let mut bad = set(&[0, 1]);
        assert_eq!(greedy_addition(&g, &mut bad, &set(&[2]), 1), Err(AlgorithmError::NotIndependent));
    }

    #[test]
    fn greedy_prefers_larger_batches() {
        let g = path_abc();
        let mut i = VertexSet::new();
        // no independent triple in a path of three; the first pair is {0,2}
        assert_eq!(greedy_addition(&g, &mut i, &set(&[0, 1, 2]), 3).unwrap(), set(&[0, 2]));
    }

    #[test]
    fn first_arrival() {
        let mut g = DynamicGraph::new();
        g.apply_arrival(v(1), &[]).unwrap();
        let mut alg = PhaseIndSet::insertion_only(1);
        let delta = alg.step(&g, &StreamEvent::arrival(1, &[])).unwrap();
        assert_eq!(alg.working_set(), &set(&[1]));
        assert_eq!(alg.solution(), &set(&[1]));
        assert!(delta.stability() <= 2);
    }

    #[test]
    fn insertion_only_rejects_departures() {
        let mut g = DynamicGraph::new();
        g.apply_arrival(v(1), &[]).unwrap();
        g.apply_departure(v(1)).unwrap();
        let err = PhaseIndSet::insertion_only(1).step(&g, &StreamEvent::departure(1)).unwrap_err();
        assert!(matches!(err, AlgorithmError::ModelViolation { .. }));
    }

    #[test]
    fn departure_counts_forced_removal() {
        let mut g = DynamicGraph::new();
        let mut alg = PhaseIndSet::fully_dynamic(1);
        for e in [StreamEvent::arrival(0, &[]), StreamEvent::arrival(1, &[0]), StreamEvent::departure(0)] {
            g.apply(&e).unwrap();
            let delta = alg.step(&g, &e).unwrap();
            assert!(delta.stability() <= 6);
            assert!(validate::is_independent(&g, alg.solution()));
        }
        assert_eq!(alg.solution(), &set(&[1]));
    }

    #[test]
    fn empty_output_with_nonempty_w_is_flagged() {
        let r = TraceRecord {
            t: 5,
            event: crate::stream::EventKind::Add,
            n_alive: 5,
            sol_size: 0,
            opt: None,
            max_opt: None,
            added: 0,
            removed: 0,
            aux: BTreeMap::from([("w".to_string(), 3), ("d".to_string(), 1)]),
        };
        let report = indset_ratio_report(&[r], IndSetMode::InsertionOnly);
        assert!(!report.all_hold());
    }
}
