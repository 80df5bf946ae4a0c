use num_rational::Rational64;
use proptest::prelude::*;
use stabledg::adversary::random::{
    arrival_degree_stream, average_degree_stream, fully_dynamic_stream, gnp_arrival_stream,
};
use stabledg::harness::verify::domset_lemma_suite;
use stabledg::harness::{check_trace, replay_stream};
use stabledg::stabilize::{find_swap, find_swap_generic};
use stabledg::{
    AlgorithmId, DirectedDomSet, DynamicGraph, EventStream, Oracle, OracleMode, Problem, ProblemAdapter, RunConfig,
    StreamAlgorithm, VertexId, VertexSet,
};

fn run_checked(cfg: &RunConfig, stream: &EventStream) {
    let trace = replay_stream(cfg, stream).unwrap();
    assert!(trace.violations.is_empty(), "{:?}", trace.violations);
    let report = check_trace(&trace.records, &trace.meta);
    let bad: Vec<String> = report.violations().map(|c| c.to_string()).collect();
    assert!(bad.is_empty(), "{}: {bad:?}", cfg.algorithm);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn directed_keeps_u_unrelated(n in 1usize..40, d in 1usize..=3, seed in any::<u64>()) {
        let s = arrival_degree_stream(n, d, seed);
        let mut g = DynamicGraph::new();
        let mut alg = DirectedDomSet::new();
        for e in &s.events {
            g.apply(e).unwrap();
            prop_assert!(alg.step(&g, e).unwrap().stability() <= 1);
        }
        let u: Vec<VertexId> = alg.u_set().iter().copied().collect();
        for (i, a) in u.iter().enumerate() {
            let na = g.out_closed_neighborhood(*a).unwrap();
            for b in &u[i + 1..] {
                prop_assert!(na.is_disjoint(&g.out_closed_neighborhood(*b).unwrap()));
            }
        }
        // |U| lower-bounds the directed optimum
        prop_assert!(u.len() <= Oracle::new(Problem::DirectedDomSet).optimum(&g).unwrap_or(usize::MAX));
    }

    #[test]
    fn domset_algorithms_with_oracle(n in 1usize..=20, d in 1usize..=3, seed in any::<u64>()) {
        let s = arrival_degree_stream(n, d, seed);
        for alg in [AlgorithmId::Directed, AlgorithmId::Phase2, AlgorithmId::PhaseK] {
            run_checked(&RunConfig::new(alg).with_oracle(OracleMode::Exact).strict(), &s);
        }
    }

    #[test]
    fn indset_algorithms_with_oracle(n in 1usize..=36, d in 1usize..=3, seed in any::<u64>()) {
        let s = average_degree_stream(n, d, seed);
        for alg in [AlgorithmId::Is2, AlgorithmId::Is6] {
            run_checked(&RunConfig::new(alg).with_oracle(OracleMode::Exact).strict(), &s);
        }
    }

    #[test]
    fn is6_on_fully_dynamic(events in 1usize..200, d in 1usize..=3, seed in any::<u64>()) {
        let s = fully_dynamic_stream(events, d, 0.3, seed);
        run_checked(&RunConfig::new(AlgorithmId::Is6).strict(), &s);
    }

    #[test]
    fn domset_lemmas(n in 1usize..=18, d in 1usize..=3, seed in any::<u64>()) {
        let s = arrival_degree_stream(n, d, seed);
        let report = domset_lemma_suite(&s, d, &Oracle::new(Problem::DomSet), &Oracle::new(Problem::DirectedDomSet)).unwrap();
        prop_assert!(report.all_hold(), "{:?}", report.violations().collect::<Vec<_>>());
    }

    #[test]
    fn swap_search_matches_brute_force(n in 2usize..=9, p in 0.1f64..0.7, seed in any::<u64>(), mask in any::<u16>(), f in 1usize..=3) {
        let g = gnp_arrival_stream(n, p, seed).replay().unwrap();
        let all: Vec<VertexId> = g.vertices().collect();
        let pick: VertexSet = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect();

        let is = ProblemAdapter::max_independent_set();
        let greedy_is: VertexSet = pick.iter().copied().filter(|v| g.neighbors(*v).unwrap().iter().all(|u| !pick.contains(u) || u > v)).collect();
        if is.feasible(&g, &greedy_is) {
            prop_assert_eq!(find_swap(&is, &g, &greedy_is, f), find_swap_generic(&is, &g, &greedy_is, f));
        }

        let ds = ProblemAdapter::min_dominating_set(2);
        let mut dominating = pick.clone();
        dominating.extend(all.iter().copied().filter(|v| g.closed_neighborhood(*v).unwrap().is_disjoint(&pick)));
        prop_assert_eq!(find_swap(&ds, &g, &dominating, f), find_swap_generic(&ds, &g, &dominating, f));
    }
}

#[test]
fn sas_max_is_on_random_sparse_streams() {
    for seed in 0..10 {
        let s = average_degree_stream(20, 2, seed);
        let cfg = RunConfig::new(AlgorithmId::Sas)
            .with_sas(stabledg::harness::SasParams {
                problem: stabledg::harness::SasProblem::MaxIs,
                epsilon: Rational64::new(1, 2),
                f: 3,
            })
            .with_oracle(OracleMode::Exact);
        match replay_stream(&cfg, &s) {
            Ok(trace) => {
                let report = check_trace(&trace.records, &trace.meta);
                assert!(report.all_hold(), "seed {seed}");
            }
            // the local search may legitimately get stuck on general graphs
            Err(stabledg::HarnessError::Algorithm {
                source: stabledg::AlgorithmError::NoImprovingSwap { .. }, ..
            }) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
}
