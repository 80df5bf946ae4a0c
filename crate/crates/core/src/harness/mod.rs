//! Running algorithms over streams and checking what they produced.

pub mod replay;
pub mod summary;
pub mod trace;
pub mod verify;

pub use replay::{
    replay, replay_stream, run_batch, AlgorithmId, HarnessError, OracleMode, RunConfig, SasParams, SasProblem, Trace,
    TraceMeta, Violation,
};
pub use summary::{check_trace, summarize, Summary};
pub use trace::{TraceError, TraceRecord};
pub use verify::{BoundCheck, BoundsReport, WorstRatio};
