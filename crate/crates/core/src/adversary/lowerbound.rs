//! Oblivious adversarial streams: the expander-based lower-bound streams for
//! independent and dominating set, the tight instance of the directed
//! algorithm, and the star.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::adversary::expander::BipartiteExpander;
use crate::graph::{Timestamp, VertexId};
use crate::stream::{EventStream, Model, StreamEvent, StreamMeta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layer {
    U,
    V,
    W,
    Bag,
    R,
    L,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundStream {
    #[serde(skip)]
    pub stream: EventStream,
    pub landmarks: BTreeMap<String, Timestamp>,
    pub layers: BTreeMap<VertexId, Layer>,
}

impl LowerBoundStream {
    pub fn landmark(&self, name: &str) -> Option<Timestamp> {
        self.landmarks.get(name).copied()
    }

    pub fn layer_members(&self, layer: Layer) -> Vec<VertexId> {
        self.layers.iter().filter(|(_, l)| **l == layer).map(|(v, _)| *v).collect()
    }
}

fn meta(d: usize, desc: &str) -> Option<StreamMeta> {
    Some(StreamMeta { d: Some(d), model: Model::Arrival, desc: Some(desc.to_string()) })
}

/// `R` arrives as singletons with ids `0..N`, then each `ℓ_j` (id `N + j`)
/// with its expander edges. Landmark `t` is the last event.
pub fn is_lowerbound_stream(exp: &BipartiteExpander) -> LowerBoundStream {
    let n = exp.right_size as u32;
    let mut events = Vec::with_capacity(exp.left_size + exp.right_size);
    let mut layers = BTreeMap::new();
    for r in 0..n {
        events.push(StreamEvent::arrival(r, &[]));
        layers.insert(VertexId(r), Layer::R);
    }
    for l in 0..exp.left_size as u32 {
        events.push(StreamEvent::arrival(n + l, &exp.left_neighbors(l)));
        layers.insert(VertexId(n + l), Layer::L);
    }
    let t = events.len() as Timestamp;
    LowerBoundStream {
        stream: EventStream::new(meta(3, "independent set lower bound"), events),
        landmarks: BTreeMap::from([("t".to_string(), t)]),
        layers,
    }
}

/// The five-layer dominating-set stream.
///
/// With `L = |L|`: `u_j = j`, `v_j = L + j` (joined to `u_j`), `w_j = 2L + j`
/// (joined to `v_j`), then the bags from id `3L` on, bag `j` holding
/// `deg(ℓ_j)` vertices joined to `w_j`, and finally `r_i` joined to `v_i` and
/// to the lowest unassigned vertex of the bag of every expander neighbor.
/// Landmarks `t1` (last bag vertex) and `t2` (last `r`).
pub fn domset_lowerbound_stream(exp: &BipartiteExpander) -> LowerBoundStream {
    let l = exp.left_size as u32;
    let mut events = Vec::new();
    let mut layers = BTreeMap::new();
    let mut push = |events: &mut Vec<StreamEvent>, v: u32, nbrs: &[u32], layer: Layer| {
        events.push(StreamEvent::arrival(v, nbrs));
        layers.insert(VertexId(v), layer);
    };
    for j in 0..l {
        push(&mut events, j, &[], Layer::U);
    }
    for j in 0..l {
        push(&mut events, l + j, &[j], Layer::V);
    }
    for j in 0..l {
        push(&mut events, 2 * l + j, &[l + j], Layer::W);
    }
    let mut next = 3 * l;
    let mut bags: Vec<Vec<u32>> = Vec::with_capacity(l as usize);
    for j in 0..l {
        let bag: Vec<u32> = (next..next + exp.left_degree(j) as u32).collect();
        for &b in &bag {
            push(&mut events, b, &[2 * l + j], Layer::Bag);
        }
        next += bag.len() as u32;
        bags.push(bag);
    }
    let t1 = events.len() as Timestamp;
    let mut used = vec![0usize; l as usize];
    for i in 0..exp.right_size as u32 {
        let mut nbrs = vec![l + i];
        for &(j, r) in &exp.edges {
            if r == i {
                let bag = &bags[j as usize];
                assert!(used[j as usize] < bag.len(), "bag of left vertex {j} is exhausted");
                nbrs.push(bag[used[j as usize]]);
                used[j as usize] += 1;
            }
        }
        push(&mut events, next + i, &nbrs, Layer::R);
    }
    assert!(used.iter().zip(&bags).all(|(u, b)| *u == b.len()), "every bag vertex gets one r");
    let t2 = events.len() as Timestamp;
    LowerBoundStream {
        stream: EventStream::new(meta(4, "dominating set lower bound"), events),
        landmarks: BTreeMap::from([("t1".to_string(), t1), ("t2".to_string(), t2)]),
        layers,
    }
}

/// Ids of the named vertices of the tight instance for `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightLayout {
    pub a1: u32,
    pub a2: u32,
    pub v: Vec<u32>,
    pub w: Vec<u32>,
    pub x: Vec<u32>,
    pub q: u32,
    pub z: u32,
}

/// Instance on which the directed algorithm ends with `d^2 + 2` vertices
/// while `{a1, a2, z}` dominates the final graph.
///
/// Order: `a1`; `a2 -> a1`; `v_1..v_{d^2} -> a1`; `w_j` to the `j`-th group
/// of `d` v's; `d(d-1)` x's, each to `a2` and a distinct v among the last
/// `d-1` of its group; `q -> a2`; `z -> w_1..w_d`.
pub fn directed_domset_tight_stream(d: usize) -> (EventStream, TightLayout) {
    assert!(d >= 2, "the tight instance needs d >= 2");
    let d32 = d as u32;
    let (a1, a2) = (0u32, 1u32);
    let v: Vec<u32> = (2..2 + d32 * d32).collect();
    let w: Vec<u32> = (0..d32).map(|j| 2 + d32 * d32 + j).collect();
    let x_start = 2 + d32 * d32 + d32;
    let x: Vec<u32> = (0..d32 * (d32 - 1)).map(|k| x_start + k).collect();
    let q = x_start + d32 * (d32 - 1);
    let z = q + 1;

    let mut events = vec![StreamEvent::arrival(a1, &[]), StreamEvent::arrival(a2, &[a1])];
    events.extend(v.iter().map(|&vi| StreamEvent::arrival(vi, &[a1])));
    for (j, &wj) in w.iter().enumerate() {
        events.push(StreamEvent::arrival(wj, &v[j * d..(j + 1) * d]));
    }
    let targets = (0..d).flat_map(|j| v[j * d + 1..(j + 1) * d].iter().copied());
    for (&xk, target) in x.iter().zip(targets) {
        events.push(StreamEvent::arrival(xk, &[target, a2]));
    }
    events.push(StreamEvent::arrival(q, &[a2]));
    events.push(StreamEvent::arrival(z, &w));
    let stream = EventStream::new(meta(d, "directed dominating set tight instance"), events);
    (stream, TightLayout { a1, a2, v, w, x, q, z })
}

/// A center `0` followed by `n - 1` leaves attached to it.
pub fn star_adversary_stream(n: usize) -> EventStream {
    assert!(n >= 2, "a star needs at least two vertices");
    let events =
        (0..n as u32).map(|i| if i == 0 { StreamEvent::arrival(0, &[]) } else { StreamEvent::arrival(i, &[0]) });
    EventStream::new(meta(2, "star"), events.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::expander::tiny_expander;

    #[test]
    fn is_stream_shape() {
        let exp = BipartiteExpander::from_edges(6, 5, (0..6).map(|j| (j, j % 5)).collect());
        let lb = is_lowerbound_stream(&exp);
        assert_eq!(lb.stream.len(), 11);
        assert!(lb.stream.events[..5]
            .iter()
            .all(|e| matches!(e, StreamEvent::Arrival { neighbors, .. } if neighbors.is_empty())));
        assert_eq!(lb.landmark("t"), Some(11));
    }

    #[test]
    fn ds_stream_counts() {
        let exp = tiny_expander(3);
        let lb = domset_lowerbound_stream(&exp);
        let l = exp.left_size;
        let sum_deg = exp.edges.len();
        assert_eq!(lb.landmark("t1"), Some((3 * l + sum_deg) as u64));
        assert_eq!(lb.landmark("t2"), Some((3 * l + sum_deg + 3) as u64));
        let g = lb.stream.replay().unwrap();
        assert!(g.max_degree() <= 4);
        for b in lb.layer_members(Layer::Bag) {
            let rs = g.neighbors(b).unwrap().iter().filter(|u| lb.layers[u] == Layer::R).count();
            assert_eq!(rs, 1);
        }
    }

    #[test]
    fn tight_sizes() {
        let (s, layout) = directed_domset_tight_stream(3);
        assert_eq!(s.len(), 2 * 9 + 4);
        assert_eq!(s.max_arrival_degree(), 3);
        assert_eq!(layout.x.len(), 6);
        s.replay().unwrap();
    }

    #[test]
    fn star_shape() {
        let s = star_adversary_stream(5);
        let g = s.replay().unwrap();
        assert_eq!(g.degree(VertexId(0)), Some(4));
        assert_eq!(s.max_average_degree_ceil().unwrap(), 2);
    }
}
