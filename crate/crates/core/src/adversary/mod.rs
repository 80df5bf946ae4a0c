//! Stream generators: lower-bound constructions, their expander building
//! blocks, and seeded random streams.

pub mod expander;
pub mod lowerbound;
pub mod random;

pub use expander::{
    generate_certified, generate_expander_candidate, tiny_expander, verify_expansion, BipartiteExpander, ExpanderError,
    ExpanderParams, ExpansionCheck,
};
pub use lowerbound::{
    directed_domset_tight_stream, domset_lowerbound_stream, is_lowerbound_stream, star_adversary_stream, Layer,
    LowerBoundStream, TightLayout,
};
