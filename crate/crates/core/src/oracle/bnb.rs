//! Branch-and-bound engine.
//!
//! The optimum size is found first; the lexicographically smallest optimum is
//! then rebuilt one position at a time by constrained feasibility searches
//! ("is there an optimum extending this prefix using only larger indices?").

use super::{bits, mask_below, Encoded, OracleError};

fn above(i: usize) -> u64 {
    !mask_below(i + 1)
}

struct NodeCounter {
    used: u64,
    limit: u64,
}

impl NodeCounter {
    fn tick(&mut self) -> Result<(), OracleError> {
        self.used += 1;
        if self.used > self.limit {
            Err(OracleError::NodeLimit(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Minimum hitting-set search over `req`.
struct CoverSearch<'a> {
    req: &'a [u64],
    /// `covers[c]`: vertices satisfied by picking candidate `c`.
    covers: Vec<u64>,
    best: Option<u64>,
    best_size: usize,
    nodes: NodeCounter,
}

impl<'a> CoverSearch<'a> {
    fn new(enc: &'a Encoded, limit: u64) -> Self {
        let n = enc.len();
        let mut covers = vec![0u64; n];
        for (v, r) in enc.req.iter().enumerate() {
            for c in bits(*r) {
                covers[c] |= 1 << v;
            }
        }
        CoverSearch { req: &enc.req, covers, best: None, best_size: usize::MAX, nodes: NodeCounter { used: 0, limit } }
    }

    fn uncovered(&self, chosen: u64) -> u64 {
        bits(chosen).fold(mask_below(self.req.len()), |u, c| u & !self.covers[c])
    }

    /// Smallest cover that contains `chosen`, adds only `allowed` vertices and
    /// has fewer than `upper` members.
    fn run(&mut self, chosen: u64, allowed: u64, upper: usize) -> Result<Option<u64>, OracleError> {
        self.best = None;
        self.best_size = upper;
        let uncovered = self.uncovered(chosen);
        self.rec(chosen, uncovered, allowed, chosen.count_ones() as usize)?;
        Ok(self.best)
    }

    fn rec(&mut self, chosen: u64, uncovered: u64, allowed: u64, size: usize) -> Result<(), OracleError> {
        self.nodes.tick()?;
        if uncovered == 0 {
            if size < self.best_size {
                self.best = Some(chosen);
                self.best_size = size;
            }
            return Ok(());
        }
        if size + 1 >= self.best_size {
            return Ok(());
        }
        let max_gain = bits(allowed).map(|c| (self.covers[c] & uncovered).count_ones()).max().unwrap_or(0) as usize;
        if max_gain == 0 {
            return Ok(());
        }
        let lower = (uncovered.count_ones() as usize).div_ceil(max_gain);
        if size + lower >= self.best_size {
            return Ok(());
        }
        // branch on the uncovered vertex with the fewest remaining options
        let (_, u) =
            bits(uncovered).map(|u| ((self.req[u] & allowed).count_ones(), u)).min().expect("uncovered is nonempty");
        let mut options = self.req[u] & allowed;
        let mut allowed = allowed;
        while options != 0 {
            let c = options.trailing_zeros() as usize;
            options &= options - 1;
            allowed &= !(1 << c);
            self.rec(chosen | 1 << c, uncovered & !self.covers[c], allowed, size + 1)?;
        }
        Ok(())
    }
}

/// Lexicographically smallest minimum cover.
pub fn min_cover(enc: &Encoded, max_nodes: u64) -> Result<u64, OracleError> {
    let full = enc.full();
    let mut search = CoverSearch::new(enc, max_nodes);
    let opt = search.run(0, full, enc.len() + 1)?.expect("the full vertex set is always a cover").count_ones() as usize;
    let mut chosen = 0u64;
    let mut next = 0;
    while (chosen.count_ones() as usize) < opt {
        let c = (next..enc.len())
            .map(|c| -> Result<Option<usize>, OracleError> {
                let with = chosen | 1 << c;
                Ok(search.run(with, full & above(c), opt + 1)?.map(|_| c))
            })
            .find_map(|r| r.transpose())
            .expect("an optimum extends the current prefix")?;
        chosen |= 1 << c;
        next = c + 1;
    }
    Ok(chosen)
}

/// Maximum independent set search with degree-0/1 reductions and a greedy
/// clique-cover upper bound.
struct IndSearch<'a> {
    adj: &'a [u64],
    best_size: usize,
    target: usize,
    found: Option<u64>,
    nodes: NodeCounter,
}

impl<'a> IndSearch<'a> {
    fn clique_cover_bound(&self, mut p: u64) -> usize {
        let mut count = 0;
        while p != 0 {
            let v = p.trailing_zeros() as usize;
            let mut clique = 1u64 << v;
            let mut cand = p & self.adj[v];
            while cand != 0 {
                let u = cand.trailing_zeros() as usize;
                clique |= 1 << u;
                cand &= self.adj[u];
            }
            p &= !clique;
            count += 1;
        }
        count
    }

    /// Largest independent set inside `p` together with `cur`, stopping as
    /// soon as one of size `target` is found.
    fn run(&mut self, p: u64, cur: u64, at_least: usize, target: usize) -> Result<Option<u64>, OracleError> {
        self.best_size = at_least.saturating_sub(1);
        self.target = target;
        self.found = None;
        if at_least == 0 {
            self.found = Some(cur);
            self.best_size = cur.count_ones() as usize;
        }
        self.rec(cur, cur.count_ones() as usize, p)?;
        Ok(self.found)
    }

    fn rec(&mut self, cur: u64, size: usize, mut p: u64) -> Result<(), OracleError> {
        self.nodes.tick()?;
        if self.best_size >= self.target {
            return Ok(());
        }
        let mut cur = cur;
        let mut size = size;
        // degree <= 1 vertices always belong to some maximum solution
        loop {
            let low = bits(p).find(|&v| (self.adj[v] & p).count_ones() <= 1);
            match low {
                Some(v) => {
                    cur |= 1 << v;
                    size += 1;
                    p &= !(self.adj[v] | 1 << v);
                }
                None => break,
            }
        }
        if p == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.found = Some(cur);
            }
            return Ok(());
        }
        if size + self.clique_cover_bound(p) <= self.best_size {
            return Ok(());
        }
        let v = bits(p).max_by_key(|&v| ((self.adj[v] & p).count_ones(), std::cmp::Reverse(v))).expect("p is nonempty");
        self.rec(cur | 1 << v, size + 1, p & !(self.adj[v] | 1 << v))?;
        self.rec(cur, size, p & !(1 << v))
    }
}

/// Lexicographically smallest maximum independent set.
pub fn max_independent(enc: &Encoded, max_nodes: u64) -> Result<u64, OracleError> {
    let full = enc.full();
    let mut search = IndSearch {
        adj: &enc.adj,
        best_size: 0,
        target: usize::MAX,
        found: None,
        nodes: NodeCounter { used: 0, limit: max_nodes },
    };
    let opt = search.run(full, 0, 0, usize::MAX)?.map_or(0, |m| m.count_ones() as usize);
    let mut chosen = 0u64;
    let mut pool = full;
    while (chosen.count_ones() as usize) < opt {
        let need = opt - chosen.count_ones() as usize - 1;
        let mut picked = None;
        for c in bits(pool) {
            let rest = pool & above(c) & !enc.adj[c];
            if need == 0 || search.run(rest, 0, need, need)?.is_some() {
                picked = Some((c, rest));
                break;
            }
        }
        let (c, rest) = picked.expect("an optimum extends the current prefix");
        chosen |= 1 << c;
        pool = rest;
    }
    Ok(chosen)
}
