//! Common interface of the stream algorithms.

use thiserror::Error;

use crate::graph::{DynamicGraph, GraphError, StepDelta, Timestamp, VertexId, VertexSet};
use crate::oracle::OracleError;
use crate::stream::StreamEvent;
use crate::validate::Feasibility;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgorithmError {
    #[error("{algorithm} does not accept the departure of vertex {vertex}")]
    ModelViolation { algorithm: &'static str, vertex: VertexId },
    #[error("no target solution available at t={t}: {source}")]
    TargetUnavailable { t: Timestamp, source: OracleError },
    #[error("average degree {average} exceeds the declared bound d={d} at t={t}")]
    AverageDegreeExceeded { t: Timestamp, average: String, d: usize },
    #[error("set handed to greedy addition is not independent")]
    NotIndependent,
    #[error("no improving swap with at most {f} removals exists at t={t}")]
    NoImprovingSwap { t: Timestamp, f: usize },
    #[error("optimum moved from {before} to {after} at t={t}, more than the continuity constant {d}")]
    ContinuityViolated { t: Timestamp, before: usize, after: usize, d: usize },
    #[error("invariant {name} breached at t={t}")]
    InvariantBreached { t: Timestamp, name: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A maintainer of one output set over a stream.
///
/// `step` is called after the event has been applied to `g` and returns the
/// symmetric difference of the output set across the event, including any
/// removal forced by a departure.
pub trait StreamAlgorithm: Send {
    fn name(&self) -> &'static str;

    /// Worst-case number of changes per event the algorithm guarantees.
    fn stability_bound(&self) -> usize;

    /// What the output set has to satisfy after every step.
    fn feasibility(&self) -> Feasibility;

    fn step(&mut self, g: &DynamicGraph, event: &StreamEvent) -> Result<StepDelta, AlgorithmError>;

    fn solution(&self) -> &VertexSet;

    /// Algorithm-specific counters recorded in the trace.
    fn aux(&self) -> Vec<(&'static str, u64)> {
        Vec::new()
    }
}
