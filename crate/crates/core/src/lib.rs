//! Bounded-recourse maintenance of dominating sets and independent sets over
//! vertex-arrival and fully dynamic graph streams.
//!
//! Every algorithm consumes one [`StreamEvent`] at a time and reports the
//! [`StepDelta`] it applied to its output set; the number of changes per
//! event is the algorithm's stability. Exact solvers in [`oracle`] provide
//! ground truth, [`adversary`] generates lower-bound and random streams, and
//! [`harness`] replays streams into per-event traces.

pub mod adversary;
pub mod algorithm;
pub mod domset;
pub mod graph;
pub mod harness;
pub mod indset;
pub mod oracle;
pub mod stabilize;
pub mod stream;
pub mod validate;

pub use algorithm::{AlgorithmError, StreamAlgorithm};
pub use domset::{DirectedDomSet, PhaseDomSet, TargetPolicy};
pub use graph::{DynamicGraph, GraphError, StepDelta, Timestamp, VertexId, VertexSet};
pub use harness::{AlgorithmId, HarnessError, OracleMode, RunConfig, Summary, Trace, TraceRecord};
pub use indset::{IndSetMode, PhaseIndSet};
pub use oracle::{Engine, OptTrace, Oracle, OracleBudget, OracleError, Problem};
pub use stabilize::{ProblemAdapter, Sas, Sense};
pub use stream::{EventKind, EventStream, Model, StreamError, StreamEvent, StreamMeta};
pub use validate::Feasibility;
