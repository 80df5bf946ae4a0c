//! Exact exponential-time solvers used as ground truth.
//!
//! Two engines share one bitmask encoding of the instance: lexicographic
//! subset enumeration ([`enumerate`]) and branch-and-bound ([`bnb`]). Both
//! return the lexicographically smallest optimum (comparing sorted id
//! sequences), so they are interchangeable and can be cross-checked.

pub mod bnb;
pub mod enumerate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DynamicGraph, VertexId, VertexSet};
use crate::stream::{EventStream, StreamError};
use crate::validate::{self, Feasibility};

/// Hard limit of the bitmask encoding.
pub const MAX_ENCODABLE: usize = 64;
/// Largest instance the enumeration engine accepts.
pub const ENUMERATION_LIMIT: usize = 24;
/// `Engine::Auto` switches from enumeration to branch-and-bound above this.
pub const AUTO_ENUMERATION_CUTOFF: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    DomSet,
    IndSet,
    DirectedDomSet,
}

impl Problem {
    pub fn is_minimization(self) -> bool {
        !matches!(self, Problem::IndSet)
    }

    pub fn feasibility(self) -> Feasibility {
        match self {
            Problem::DomSet => Feasibility::Domination,
            Problem::IndSet => Feasibility::Independence,
            Problem::DirectedDomSet => Feasibility::DirectedDomination,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_nodes_explored: u64,
}

impl OracleBudget {
    pub const DEFAULT_NODES: u64 = 50_000_000;

    /// 24 vertices for the dominating-set problems, 40 for independent set.
    pub fn for_problem(problem: Problem) -> Self {
        let max_vertices = match problem {
            Problem::IndSet => 40,
            Problem::DomSet | Problem::DirectedDomSet => 24,
        };
        OracleBudget { max_vertices, max_nodes_explored: Self::DEFAULT_NODES }
    }

    pub fn with_max_vertices(mut self, max_vertices: usize) -> Self {
        self.max_vertices = max_vertices;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Auto,
    Enumeration,
    BranchAndBound,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {vertices} alive vertices, budget allows {limit}")]
    BudgetExceeded { vertices: usize, limit: usize },
    #[error("search explored more than {0} nodes")]
    NodeLimit(u64),
    #[error("enumeration engine refuses {0} vertices (limit {ENUMERATION_LIMIT})")]
    EngineLimit(usize),
    #[error("solver returned an infeasible {0} set")]
    Infeasible(&'static str),
    #[error("opt trace stopped after {solved_prefixes} solved prefixes: {source}")]
    TraceBudgetExceeded { solved_prefixes: usize, source: Box<OracleError> },
    /// The replayed stream was invalid. Kept as text so the error stays `Clone`.
    #[error("invalid stream: {0}")]
    Stream(String),
}

impl From<StreamError> for OracleError {
    fn from(e: StreamError) -> Self {
        OracleError::Stream(e.to_string())
    }
}

/// Bitmask view of the alive graph. Index order equals id order.
#[derive(Clone, Debug)]
pub struct Encoded {
    pub ids: Vec<VertexId>,
    /// Open neighborhoods.
    pub adj: Vec<u64>,
    /// For covering problems: candidates any of which satisfies vertex `i`.
    pub req: Vec<u64>,
}

impl Encoded {
    pub fn new(g: &DynamicGraph, problem: Problem) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        assert!(ids.len() <= MAX_ENCODABLE, "bitmask encoding holds at most 64 vertices");
        let index = |v: &VertexId| ids.binary_search(v).ok();
        let mut adj = vec![0u64; ids.len()];
        for (i, v) in ids.iter().enumerate() {
            for u in g.neighbors(*v).expect("alive") {
                adj[i] |= 1 << index(u).expect("alive neighbor");
            }
        }
        let req = match problem {
            Problem::DomSet => (0..ids.len()).map(|i| adj[i] | 1 << i).collect(),
            Problem::DirectedDomSet => ids
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    g.arrival_neighbors(*v).expect("alive").iter().filter_map(index).fold(1u64 << i, |m, j| m | 1 << j)
                })
                .collect(),
            Problem::IndSet => Vec::new(),
        };
        Encoded { ids, adj, req }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn full(&self) -> u64 {
        mask_below(self.len())
    }

    pub fn decode(&self, mask: u64) -> VertexSet {
        bits(mask).map(|i| self.ids[i]).collect()
    }
}

/// Mask with bits `0..n` set.
pub fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of set bits in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Configured exact solver for one problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub problem: Problem,
    pub budget: OracleBudget,
    pub engine: Engine,
}

impl Oracle {
    pub fn new(problem: Problem) -> Self {
        Oracle { problem, budget: OracleBudget::for_problem(problem), engine: Engine::Auto }
    }

    pub fn with_budget(mut self, budget: OracleBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    /// Lexicographically smallest optimal solution of `g`.
    pub fn solve(&self, g: &DynamicGraph) -> Result<VertexSet, OracleError> {
        let n = g.vertex_count();
        let limit = self.budget.max_vertices.min(MAX_ENCODABLE);
        if n > limit {
            return Err(OracleError::BudgetExceeded { vertices: n, limit });
        }
        let enc = Encoded::new(g, self.problem);
        let use_enumeration = match self.engine {
            Engine::Enumeration => true,
            Engine::BranchAndBound => false,
            Engine::Auto => n <= AUTO_ENUMERATION_CUTOFF,
        };
        let mask = if use_enumeration {
            if n > ENUMERATION_LIMIT {
                return Err(OracleError::EngineLimit(n));
            }
            match self.problem {
                Problem::IndSet => enumerate::max_independent(&enc),
                _ => enumerate::min_cover(&enc),
            }
        } else {
            let max_nodes = self.budget.max_nodes_explored;
            match self.problem {
                Problem::IndSet => bnb::max_independent(&enc, max_nodes)?,
                _ => bnb::min_cover(&enc, max_nodes)?,
            }
        };
        let set = enc.decode(mask);
        let kind = self.problem.feasibility();
        if !kind.check(g, &set) {
            return Err(OracleError::Infeasible(kind.name()));
        }
        Ok(set)
    }

    pub fn optimum(&self, g: &DynamicGraph) -> Result<usize, OracleError> {
        self.solve(g).map(|s| s.len())
    }
}

pub fn min_dominating_set(g: &DynamicGraph, budget: &OracleBudget) -> Result<VertexSet, OracleError> {
    Oracle::new(Problem::DomSet).with_budget(*budget).solve(g)
}

pub fn max_independent_set(g: &DynamicGraph, budget: &OracleBudget) -> Result<VertexSet, OracleError> {
    Oracle::new(Problem::IndSet).with_budget(*budget).solve(g)
}

pub fn min_directed_dominating_set(g: &DynamicGraph, budget: &OracleBudget) -> Result<VertexSet, OracleError> {
    Oracle::new(Problem::DirectedDomSet).with_budget(*budget).solve(g)
}

/// Optimum after every event of a stream, plus its running maximum.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptTrace {
    pub opt: Vec<usize>,
    pub max_opt: Vec<usize>,
}

impl OptTrace {
    pub fn len(&self) -> usize {
        self.opt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opt.is_empty()
    }
}

pub fn opt_trace(stream: &EventStream, oracle: &Oracle) -> Result<OptTrace, OracleError> {
    let mut g = DynamicGraph::new();
    let mut trace = OptTrace::default();
    for ev in &stream.events {
        g.apply(ev).map_err(|e| OracleError::from(StreamError::Invalid { index: trace.len(), source: e }))?;
        let opt = oracle
            .optimum(&g)
            .map_err(|e| OracleError::TraceBudgetExceeded { solved_prefixes: trace.len(), source: Box::new(e) })?;
        let prev = trace.max_opt.last().copied().unwrap_or(0);
        trace.opt.push(opt);
        trace.max_opt.push(prev.max(opt));
    }
    Ok(trace)
}

/// Greedy dominating set: repeatedly take the vertex dominating the most
/// undominated vertices, lowest id on ties. Works at any size.
pub fn greedy_dominating_set(g: &DynamicGraph) -> VertexSet {
    let mut undominated: VertexSet = g.vertices().collect();
    let mut chosen = VertexSet::new();
    while !undominated.is_empty() {
        let best = g
            .vertices()
            .filter(|v| !chosen.contains(v))
            .map(|v| {
                let gain = g.closed_neighborhood(v).expect("alive").iter().filter(|u| undominated.contains(u)).count();
                (gain, std::cmp::Reverse(v))
            })
            .max()
            .map(|(_, std::cmp::Reverse(v))| v)
            .expect("undominated vertices exist");
        for u in g.closed_neighborhood(best).expect("alive") {
            undominated.remove(&u);
        }
        chosen.insert(best);
    }
    debug_assert!(validate::is_dominating(g, &chosen));
    chosen
}
