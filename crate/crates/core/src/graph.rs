//! Dynamic undirected graph under vertex arrivals and departures.
//!
//! Every arrival records the neighbor list the vertex came with, so the
//! arrival orientation (edges pointing from a vertex towards older
//! vertices) can still be answered after later arrivals or departures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stream::StreamEvent;

/// Identifier of a vertex. Never reused within one stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// 1-based event index. Arrivals and departures each advance it by one.
pub type Timestamp = u64;

pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} was already used in this stream")]
    DuplicateVertex(VertexId),
    #[error("neighbor {neighbor} of arriving vertex {vertex} is not alive")]
    UnknownNeighbor { vertex: VertexId, neighbor: VertexId },
    #[error("vertex {0} lists itself as a neighbor")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} lists neighbor {neighbor} more than once")]
    DuplicateNeighbor { vertex: VertexId, neighbor: VertexId },
    #[error("vertex {0} is not known to the graph")]
    UnknownVertex(VertexId),
    #[error("graph has no alive vertices")]
    EmptyGraph,
}

/// The graph `G(t)` plus the arrival record of every vertex ever seen.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DynamicGraph {
    adjacency: BTreeMap<VertexId, VertexSet>,
    arrival_time: BTreeMap<VertexId, Timestamp>,
    arrival_nbrs: BTreeMap<VertexId, Vec<VertexId>>,
    edge_count: usize,
    current_time: Timestamp,
}

impl DynamicGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `v` with edges to `nbrs` and returns the new timestamp.
    pub fn apply_arrival(&mut self, v: VertexId, nbrs: &[VertexId]) -> Result<Timestamp, GraphError> {
        if self.arrival_time.contains_key(&v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        let mut seen = BTreeSet::new();
        for &u in nbrs {
            if u == v {
                return Err(GraphError::SelfLoop(v));
            }
            if !self.adjacency.contains_key(&u) {
                return Err(GraphError::UnknownNeighbor { vertex: v, neighbor: u });
            }
            if !seen.insert(u) {
                return Err(GraphError::DuplicateNeighbor { vertex: v, neighbor: u });
            }
        }
        self.current_time += 1;
        for &u in &seen {
            self.adjacency.get_mut(&u).expect("checked alive").insert(v);
        }
        self.edge_count += seen.len();
        self.adjacency.insert(v, seen.iter().copied().collect());
        self.arrival_time.insert(v, self.current_time);
        self.arrival_nbrs.insert(v, seen.into_iter().collect());
        Ok(self.current_time)
    }

    /// Removes `v` and its incident edges. The arrival record is kept.
    pub fn apply_departure(&mut self, v: VertexId) -> Result<Timestamp, GraphError> {
        let nbrs = self.adjacency.remove(&v).ok_or(GraphError::UnknownVertex(v))?;
        for u in &nbrs {
            if let Some(adj) = self.adjacency.get_mut(u) {
                adj.remove(&v);
            }
        }
        self.edge_count -= nbrs.len();
        self.current_time += 1;
        Ok(self.current_time)
    }

    pub fn apply(&mut self, event: &StreamEvent) -> Result<Timestamp, GraphError> {
        match event {
            StreamEvent::Arrival { vertex, neighbors } => self.apply_arrival(*vertex, neighbors),
            StreamEvent::Departure { vertex } => self.apply_departure(*vertex),
        }
    }

    pub fn current_time(&self) -> Timestamp {
        self.current_time
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.adjacency.contains_key(&v)
    }

    /// True for alive and departed vertices alike.
    pub fn is_known(&self, v: VertexId) -> bool {
        self.arrival_time.contains_key(&v)
    }

    /// Alive vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Current neighbors of an alive vertex.
    pub fn neighbors(&self, v: VertexId) -> Option<&VertexSet> {
        self.adjacency.get(&v)
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.adjacency.get(&v).map(BTreeSet::len)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency.get(&u).is_some_and(|adj| adj.contains(&v))
    }

    /// `N[v]` in the current graph.
    pub fn closed_neighborhood(&self, v: VertexId) -> Option<VertexSet> {
        self.adjacency.get(&v).map(|adj| {
            let mut set = adj.clone();
            set.insert(v);
            set
        })
    }

    pub fn arrival_time(&self, v: VertexId) -> Option<Timestamp> {
        self.arrival_time.get(&v).copied()
    }

    /// Neighbor list recorded when `v` arrived, sorted by id.
    pub fn arrival_neighbors(&self, v: VertexId) -> Result<&[VertexId], GraphError> {
        self.arrival_nbrs.get(&v).map(Vec::as_slice).ok_or(GraphError::UnknownVertex(v))
    }

    /// `{v}` plus the neighbors `v` arrived with.
    pub fn out_closed_neighborhood(&self, v: VertexId) -> Result<VertexSet, GraphError> {
        let nbrs = self.arrival_neighbors(v)?;
        let mut set: VertexSet = nbrs.iter().copied().collect();
        set.insert(v);
        Ok(set)
    }

    pub fn arrival_degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.arrival_neighbors(v).map(<[VertexId]>::len)
    }

    /// Largest arrival degree over every vertex seen so far.
    pub fn max_arrival_degree(&self) -> usize {
        self.arrival_nbrs.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Exact average degree `2|E| / |V|` of the alive graph.
    pub fn average_degree(&self) -> Result<Rational64, GraphError> {
        if self.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        Ok(Rational64::new(2 * self.edge_count as i64, self.vertex_count() as i64))
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Maximum degree of the subgraph induced by `subset` (alive members only).
    pub fn induced_max_degree(&self, subset: &VertexSet) -> usize {
        subset
            .iter()
            .filter_map(|v| self.adjacency.get(v))
            .map(|adj| adj.iter().filter(|u| subset.contains(u)).count())
            .max()
            .unwrap_or(0)
    }
}

/// Changes made to an output set by one event.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDelta {
    pub added: VertexSet,
    pub removed: VertexSet,
}

impl StepDelta {
    /// Symmetric difference between two snapshots of an output set.
    pub fn between(before: &VertexSet, after: &VertexSet) -> Self {
        StepDelta {
            added: after.difference(before).copied().collect(),
            removed: before.difference(after).copied().collect(),
        }
    }

    pub fn stability(&self) -> usize {
        self.added.len() + self.removed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }
}
