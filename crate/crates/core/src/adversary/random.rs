//! Seeded random streams for property tests and experiments.

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stream::{EventStream, Model, StreamEvent, StreamMeta};

fn meta(d: usize, model: Model, desc: &str) -> Option<StreamMeta> {
    Some(StreamMeta { d: Some(d), model, desc: Some(desc.to_string()) })
}

/// `n` arrivals, each joined to a uniform number in `0..=min(d, alive)` of
/// uniformly chosen earlier vertices.
pub fn arrival_degree_stream(n: usize, d: usize, seed: u64) -> EventStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let k = rng.gen_range(0..=d.min(v as usize));
        let mut nbrs = (0..v).choose_multiple(&mut rng, k);
        nbrs.sort_unstable();
        events.push(StreamEvent::arrival(v, &nbrs));
    }
    EventStream::new(meta(d, Model::Arrival, "random arrival degree"), events)
}

/// Number of edges an arrival may bring while keeping `2|E| <= d|V|`.
fn edge_allowance(d: usize, vertices: usize, edges: usize) -> usize {
    (d * (vertices + 1)).saturating_sub(2 * edges) / 2
}

/// Picks `k` distinct vertices from `alive`, each draw preferential to
/// `degree + 1` with probability one half and uniform otherwise.
fn pick_neighbors(rng: &mut ChaCha8Rng, alive: &[u32], degree: &[usize], k: usize) -> Vec<u32> {
    let mut pool: Vec<u32> = alive.to_vec();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let idx = if rng.gen_bool(0.5) {
            let total: usize = pool.iter().map(|&v| degree[v as usize] + 1).sum();
            let mut x = rng.gen_range(0..total);
            pool.iter()
                .position(|&v| {
                    let w = degree[v as usize] + 1;
                    if x < w {
                        true
                    } else {
                        x -= w;
                        false
                    }
                })
                .expect("weights sum to total")
        } else {
            rng.gen_range(0..pool.len())
        };
        out.push(pool.swap_remove(idx));
    }
    out.sort_unstable();
    out
}

/// `n` arrivals keeping the average degree at most `d` after every event.
/// Arrival degrees are unbounded; hubs form through preferential choices.
pub fn average_degree_stream(n: usize, d: usize, seed: u64) -> EventStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n];
    let mut alive: Vec<u32> = Vec::with_capacity(n);
    let mut edges = 0;
    let mut events = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let cap = edge_allowance(d, alive.len(), edges).min(alive.len());
        let k = rng.gen_range(0..=cap);
        let nbrs = pick_neighbors(&mut rng, &alive, &degree, k);
        for &u in &nbrs {
            degree[u as usize] += 1;
        }
        degree[v as usize] = k;
        edges += k;
        alive.push(v);
        events.push(StreamEvent::arrival(v, &nbrs));
    }
    EventStream::new(meta(d, Model::Arrival, "random average degree"), events)
}

/// `events` arrivals and departures, departures with probability
/// `departure_rate`, keeping the average degree at most `d` after every
/// event. Ids are never reused.
pub fn fully_dynamic_stream(events: usize, d: usize, departure_rate: f64, seed: u64) -> EventStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<u32>> = Vec::new();
    let mut alive: Vec<u32> = Vec::new();
    let mut edges = 0usize;
    let mut out = Vec::with_capacity(events);
    while out.len() < events {
        if !alive.is_empty() && rng.gen_bool(departure_rate) {
            // only departures that keep 2(|E| - deg) <= d(|V| - 1)
            let ok: Vec<usize> = (0..alive.len())
                .filter(|&i| 2 * (edges - adj[alive[i] as usize].len()) <= d * (alive.len() - 1))
                .collect();
            if let Some(&i) = ok.choose(&mut rng) {
                let v = alive.swap_remove(i);
                for u in std::mem::take(&mut adj[v as usize]) {
                    adj[u as usize].retain(|x| *x != v);
                    edges -= 1;
                }
                out.push(StreamEvent::departure(v));
                continue;
            }
        }
        let v = adj.len() as u32;
        let cap = edge_allowance(d, alive.len(), edges).min(alive.len());
        let k = rng.gen_range(0..=cap);
        let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let nbrs = pick_neighbors(&mut rng, &alive, &degree, k);
        adj.push(nbrs.clone());
        for &u in &nbrs {
            adj[u as usize].push(v);
        }
        edges += k;
        alive.push(v);
        out.push(StreamEvent::arrival(v, &nbrs));
    }
    EventStream::new(meta(d, Model::FullyDynamic, "random fully dynamic"), out)
}

/// Path `0 - 1 - ... - (n-1)` in order.
pub fn path_stream(n: usize) -> EventStream {
    let events =
        (0..n as u32).map(|v| if v == 0 { StreamEvent::arrival(0, &[]) } else { StreamEvent::arrival(v, &[v - 1]) });
    EventStream::new(meta(1, Model::Arrival, "path"), events.collect())
}

/// Path whose last vertex also closes the cycle; needs `n >= 3`.
pub fn cycle_stream(n: usize) -> EventStream {
    assert!(n >= 3, "a cycle needs three vertices");
    let mut events = path_stream(n - 1).events;
    let last = n as u32 - 1;
    events.push(StreamEvent::arrival(last, &[0, last - 1]));
    EventStream::new(meta(2, Model::Arrival, "cycle"), events)
}

/// Arrival order of a `G(n, p)` graph: each vertex brings its edges to
/// earlier vertices.
pub fn gnp_arrival_stream(n: usize, p: f64, seed: u64) -> EventStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events: Vec<StreamEvent> = (0..n as u32)
        .map(|v| {
            let nbrs: Vec<u32> = (0..v).filter(|_| rng.gen_bool(p)).collect();
            StreamEvent::arrival(v, &nbrs)
        })
        .collect();
    let d =
        events.iter().map(|e| if let StreamEvent::Arrival { neighbors, .. } = e { neighbors.len() } else { 0 }).max();
    EventStream::new(meta(d.unwrap_or(0), Model::Arrival, "gnp"), events)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrival_degree_bounded() {
        for seed in 0..20 {
            let s = arrival_degree_stream(40, 3, seed);
            assert!(s.max_arrival_degree() <= 3);
            s.validate().unwrap();
        }
    }

    #[test]
    fn average_degree_bounded() {
        for seed in 0..20 {
            let s = average_degree_stream(50, 2, seed);
            assert!(s.max_average_degree_ceil().unwrap() <= 2);
        }
    }

    #[test]
    fn fully_dynamic_bounded_with_departures() {
        let s = fully_dynamic_stream(200, 3, 0.3, 5);
        assert_eq!(s.len(), 200);
        assert!(s.has_departures());
        assert!(s.max_average_degree_ceil().unwrap() <= 3);
    }

    #[test]
    fn deterministic() {
        assert_eq!(fully_dynamic_stream(50, 2, 0.3, 9), fully_dynamic_stream(50, 2, 0.3, 9));
        assert_ne!(average_degree_stream(50, 2, 1), average_degree_stream(50, 2, 2));
    }

    #[test]
    fn cycle_closes() {
        let g = cycle_stream(5).replay().unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.max_degree(), 2);
    }
}
