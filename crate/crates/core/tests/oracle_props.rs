use proptest::prelude::*;
use stabledg::adversary::random::{arrival_degree_stream, gnp_arrival_stream};
use stabledg::validate;
use stabledg::{DynamicGraph, Engine, Oracle, Problem, VertexId, VertexSet};

fn subset(vertices: &[VertexId], mask: u32) -> VertexSet {
    vertices.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect()
}

/// Optimum size by checking every subset.
fn brute_force(g: &DynamicGraph, problem: Problem) -> usize {
    let vertices: Vec<VertexId> = g.vertices().collect();
    let feasible = (0..1u32 << vertices.len())
        .map(|m| subset(&vertices, m))
        .filter(|s| problem.feasibility().check(g, s))
        .map(|s| s.len());
    match problem {
        Problem::IndSet => feasible.max().unwrap(),
        _ => feasible.min().unwrap(),
    }
}

fn engines_agree(g: &DynamicGraph, problem: Problem) {
    let a = Oracle::new(problem).with_engine(Engine::Enumeration).solve(g).unwrap();
    let b = Oracle::new(problem).with_engine(Engine::BranchAndBound).solve(g).unwrap();
    assert_eq!(a, b, "{problem:?}");
    assert!(problem.feasibility().check(g, &a));
}

#[test]
fn brute_force_on_gnp_12() {
    for seed in 0..10 {
        let g = gnp_arrival_stream(12, 0.3, seed).replay().unwrap();
        for problem in [Problem::DomSet, Problem::IndSet, Problem::DirectedDomSet] {
            let opt = Oracle::new(problem).optimum(&g).unwrap();
            assert_eq!(opt, brute_force(&g, problem), "seed {seed} {problem:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engines_agree_on_small_graphs(n in 1usize..=10, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = gnp_arrival_stream(n, p, seed).replay().unwrap();
        for problem in [Problem::DomSet, Problem::IndSet, Problem::DirectedDomSet] {
            engines_agree(&g, problem);
        }
    }

    #[test]
    fn domination_number_at_most_independence_number(n in 1usize..=14, d in 1usize..=3, seed in any::<u64>()) {
        // every maximal independent set dominates, so mds <= mis
        let g = arrival_degree_stream(n, d, seed).replay().unwrap();
        let ds = Oracle::new(Problem::DomSet).optimum(&g).unwrap();
        let is = Oracle::new(Problem::IndSet).solve(&g).unwrap();
        prop_assert!(ds <= is.len());
        prop_assert!(validate::is_independent(&g, &is));
        let directed = Oracle::new(Problem::DirectedDomSet).optimum(&g).unwrap();
        prop_assert!(ds <= directed);
    }
}
