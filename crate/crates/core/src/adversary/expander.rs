//! Bipartite vertex expanders built from random cubic bipartite graphs.
//!
//! A 3-regular bipartite host `H` on parts `A`, `B` of size `m =
//! ceil((1+eps)n)` comes from the configuration model. A set `T ⊂ A` of
//! `m - n` pairwise distant vertices is removed; what remains is `L = B`,
//! `R = A \ T`.

use std::collections::VecDeque;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Attempts before the configuration model gives up on finding a simple graph.
pub const CONFIG_MODEL_ATTEMPTS: usize = 1000;
/// Subsets `verify_expansion` is willing to enumerate.
pub const ENUMERATION_BUDGET: u64 = 200_000_000;
pub const DEFAULT_MU: f64 = 0.005;
pub const DEFAULT_DELTA: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpanderError {
    #[error("n must be at least 4, got {0}")]
    TooSmall(usize),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("mu must be positive")]
    NonPositiveMu,
    #[error("no simple 3-regular bipartite graph after {0} attempts")]
    ConfigModelStuck(usize),
    #[error("only {found} of {needed} pairwise distant vertices could be selected")]
    SelectionFailed { found: usize, needed: usize },
    #[error("{subsets} subsets over {right} right vertices is beyond exhaustive enumeration")]
    TooLarge { subsets: u64, right: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderParams {
    pub n: usize,
    pub epsilon: Rational64,
    pub mu: f64,
    /// Only echoed; it appears in the analysis, not in the construction.
    pub delta: f64,
    pub t_radius: usize,
    pub seed: u64,
}

impl ExpanderParams {
    pub fn new(n: usize, epsilon: Rational64, mu: f64, seed: u64) -> Self {
        ExpanderParams { n, epsilon, mu, delta: DEFAULT_DELTA, t_radius: t_radius(mu), seed }
    }

    /// Size of each part of the host graph.
    pub fn host_size(&self) -> usize {
        (Rational64::from_integer(self.n as i64) * (Rational64::from_integer(1) + self.epsilon)).ceil().to_integer()
            as usize
    }

    /// Whether `eps <= 3^-(2t+1)`, the regime where the construction is
    /// known to work asymptotically.
    pub fn epsilon_in_advised_range(&self) -> bool {
        let exp = 2 * self.t_radius + 1;
        if exp >= 39 {
            // 3^39 overflows i64; any epsilon representable here is larger
            return false;
        }
        self.epsilon <= Rational64::new(1, 3i64.pow(exp as u32))
    }
}

/// `ceil(1/mu) + 1`.
pub fn t_radius(mu: f64) -> usize {
    (1.0 / mu).ceil() as usize + 1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteExpander {
    pub left_size: usize,
    pub right_size: usize,
    /// `(left index, right index)`, sorted.
    pub edges: Vec<(u32, u32)>,
    pub params: ExpanderParams,
    /// Host edges `(a, b)` with `a ∈ A`, `b ∈ B`; empty for hand-built graphs.
    pub host_edges: Vec<(u32, u32)>,
    /// Removed part-`A` vertices, in host indices.
    pub removed: Vec<u32>,
}

impl BipartiteExpander {
    /// A graph given directly by its edge list, without a host.
    pub fn from_edges(left_size: usize, right_size: usize, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let n = right_size;
        let epsilon =
            if n == 0 { Rational64::from_integer(0) } else { Rational64::new(left_size as i64 - n as i64, n as i64) };
        BipartiteExpander {
            left_size,
            right_size,
            edges,
            params: ExpanderParams::new(n, epsilon, DEFAULT_MU, 0),
            host_edges: Vec::new(),
            removed: Vec::new(),
        }
    }

    pub fn left_neighbors(&self, l: u32) -> Vec<u32> {
        self.edges.iter().filter(|(a, _)| *a == l).map(|(_, r)| *r).collect()
    }

    pub fn left_degree(&self, l: u32) -> usize {
        self.edges.iter().filter(|(a, _)| *a == l).count()
    }

    pub fn right_degree(&self, r: u32) -> usize {
        self.edges.iter().filter(|(_, b)| *b == r).count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg_l = vec![0usize; self.left_size];
        let mut deg_r = vec![0usize; self.right_size];
        for (l, r) in &self.edges {
            deg_l[*l as usize] += 1;
            deg_r[*r as usize] += 1;
        }
        deg_l.into_iter().chain(deg_r).max().unwrap_or(0)
    }

    /// Smallest host distance between two removed vertices, or `None` with
    /// fewer than two (or no host).
    pub fn min_removed_distance(&self) -> Option<usize> {
        if self.removed.len() < 2 || self.host_edges.is_empty() {
            return None;
        }
        let m = self.params.host_size();
        let adj = host_adjacency(m, &self.host_edges);
        self.removed
            .iter()
            .map(|&a| {
                let dist = bfs(&adj, a as usize, usize::MAX);
                self.removed.iter().filter(|&&b| b != a).map(|&b| dist[b as usize]).min().unwrap()
            })
            .min()
    }
}

/// Host vertices: `A` is `0..m`, `B` is `m..2m`.
fn host_adjacency(m: usize, edges: &[(u32, u32)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); 2 * m];
    for &(a, b) in edges {
        adj[a as usize].push(m + b as usize);
        adj[m + b as usize].push(a as usize);
    }
    adj
}

/// Distances from `src`, `usize::MAX` beyond `limit` or unreachable.
fn bfs(adj: &[Vec<usize>], src: usize, limit: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        if dist[x] >= limit {
            continue;
        }
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Random simple 3-regular bipartite graph on parts of size `m`.
fn configuration_model(m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>, ExpanderError> {
    let left_stubs: Vec<u32> = (0..m as u32).flat_map(|a| [a; 3]).collect();
    let mut right_stubs: Vec<u32> = (0..m as u32).flat_map(|b| [b; 3]).collect();
    for _ in 0..CONFIG_MODEL_ATTEMPTS {
        right_stubs.shuffle(rng);
        let mut edges: Vec<(u32, u32)> = left_stubs.iter().copied().zip(right_stubs.iter().copied()).collect();
        edges.sort_unstable();
        if edges.windows(2).all(|w| w[0] != w[1]) {
            return Ok(edges);
        }
    }
    Err(ExpanderError::ConfigModelStuck(CONFIG_MODEL_ATTEMPTS))
}

/// Builds one candidate; it still has to be certified with
/// [`verify_expansion`].
pub fn generate_expander_candidate(params: ExpanderParams) -> Result<BipartiteExpander, ExpanderError> {
    if params.n < 4 {
        return Err(ExpanderError::TooSmall(params.n));
    }
    if params.epsilon <= Rational64::from_integer(0) {
        return Err(ExpanderError::NonPositiveEpsilon);
    }
    if params.mu.is_nan() || params.mu <= 0.0 {
        return Err(ExpanderError::NonPositiveMu);
    }
    let m = params.host_size();
    let needed = m - params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let host = configuration_model(m, &mut rng)?;
    let adj = host_adjacency(m, &host);

    // greedy in index order; a chosen vertex blocks its radius-2t ball
    let mut blocked = vec![false; m];
    let mut removed = Vec::with_capacity(needed);
    for a in 0..m {
        if removed.len() == needed {
            break;
        }
        if blocked[a] {
            continue;
        }
        removed.push(a as u32);
        let dist = bfs(&adj, a, 2 * params.t_radius);
        for (b, flag) in blocked.iter_mut().enumerate() {
            if dist[b] <= 2 * params.t_radius {
                *flag = true;
            }
        }
    }
    if removed.len() < needed {
        return Err(ExpanderError::SelectionFailed { found: removed.len(), needed });
    }

    let mut right_index = vec![u32::MAX; m];
    let mut next = 0u32;
    for (a, slot) in right_index.iter_mut().enumerate() {
        if !removed.contains(&(a as u32)) {
            *slot = next;
            next += 1;
        }
    }
    let mut edges: Vec<(u32, u32)> = host
        .iter()
        .filter(|(a, _)| right_index[*a as usize] != u32::MAX)
        .map(|&(a, b)| (b, right_index[a as usize]))
        .collect();
    edges.sort_unstable();
    Ok(BipartiteExpander { left_size: m, right_size: params.n, edges, params, host_edges: host, removed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum ExpansionCheck {
    Certified { cap: usize, subsets: u64 },
    Counterexample { subset: Vec<u32>, neighbors: usize },
}

impl ExpansionCheck {
    pub fn is_certified(&self) -> bool {
        matches!(self, ExpansionCheck::Certified { .. })
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Checks `|N(S)| >= factor |S|` for every `S ⊆ L` with `1 <= |S| <= cap`,
/// returning the first violating set in lexicographic order by size.
pub fn verify_expansion(exp: &BipartiteExpander, cap: usize, factor: f64) -> Result<ExpansionCheck, ExpanderError> {
    let cap = cap.min(exp.left_size);
    let subsets: u64 = (1..=cap as u64).map(|k| binomial(exp.left_size as u64, k)).fold(0, u64::saturating_add);
    if exp.right_size > 128 || subsets > ENUMERATION_BUDGET {
        return Err(ExpanderError::TooLarge { subsets, right: exp.right_size });
    }
    let mut masks = vec![0u128; exp.left_size];
    for &(l, r) in &exp.edges {
        masks[l as usize] |= 1u128 << r;
    }

    // smallest violating size first, then lexicographic within a size
    for k in 1..=cap {
        let mut chosen = Vec::with_capacity(k);
        if let Some(n) = search(&masks, k, factor, 0, 0, &mut chosen) {
            return Ok(ExpansionCheck::Counterexample { subset: chosen, neighbors: n });
        }
    }
    Ok(ExpansionCheck::Certified { cap, subsets })
}

fn search(masks: &[u128], k: usize, factor: f64, start: usize, acc: u128, chosen: &mut Vec<u32>) -> Option<usize> {
    if chosen.len() == k {
        let n = acc.count_ones() as usize;
        return ((n as f64) < factor * k as f64).then_some(n);
    }
    for i in start..masks.len() {
        if masks.len() - i < k - chosen.len() {
            break;
        }
        chosen.push(i as u32);
        if let Some(n) = search(masks, k, factor, i + 1, acc | masks[i], chosen) {
            return Some(n);
        }
        chosen.pop();
    }
    None
}

/// Hand-built expander with `|R| = n` and `|L| = n + 1`: `ℓ_j` is joined to
/// `r_(j mod n)` and `r_(j+1 mod n)`, so every left vertex has two
/// neighbors and `ℓ_j - r_j` is a matching saturating `R`.
pub fn tiny_expander(n: usize) -> BipartiteExpander {
    assert!(n >= 2, "tiny expanders need at least two right vertices");
    let edges = (0..=n as u32).flat_map(|j| [(j, j % n as u32), (j, (j + 1) % n as u32)]).collect();
    BipartiteExpander::from_edges(n + 1, n, edges)
}

/// Generates candidates for seeds `seed, seed+1, ...` until one certifies at
/// `cap`, returning it with the number of attempts used.
pub fn generate_certified(
    n: usize,
    epsilon: Rational64,
    mu: f64,
    seed: u64,
    cap: usize,
    attempts: usize,
) -> Result<Option<(BipartiteExpander, usize)>, ExpanderError> {
    for i in 0..attempts {
        let params = ExpanderParams::new(n, epsilon, mu, seed + i as u64);
        let exp = match generate_expander_candidate(params) {
            Ok(exp) => exp,
            Err(ExpanderError::ConfigModelStuck(_) | ExpanderError::SelectionFailed { .. }) => continue,
            Err(e) => return Err(e),
        };
        if verify_expansion(&exp, cap, 2.0 - 2.0 * mu)?.is_certified() {
            return Ok(Some((exp, i + 1)));
        }
    }
    Ok(None)
}
