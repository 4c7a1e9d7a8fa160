//! Exact combinatorial dimensions of finite binary hypothesis classes.
//!
//! The crate computes Littlestone, threshold and VC dimensions, composes
//! classes under arbitrary Boolean aggregation rules, and checks the
//! covering-number and Ramsey-style closure bounds on small instances. Every
//! search returns a certificate that can be re-validated independently.

pub mod aggregator;
pub mod bounds;
pub mod class;
pub mod compose;
pub mod constructions;
pub mod dims;
pub mod error;
pub mod io;
pub mod limits;
pub mod online;
pub mod ramsey;
pub mod random;
pub mod trees;

pub use aggregator::{named_aggregator, BooleanAggregator, NamedRule};
pub use class::{make_class, restrict, HypothesisClass};
pub use compose::{compose, Composition, CompositionWitness};
pub use dims::{
    check_threshold_witness, ldim, ldim_at_least, tdim, vcdim, LdimCertificate, ThresholdWitness,
    WitnessCheck,
};
pub use error::{Error, Result};
pub use limits::Limits;
pub use online::{game_value, run_game, soa_predict, Adversary, GameRecord};
pub use ramsey::{
    color_edges, extract_threshold, find_mono_clique, ramsey_bound, EdgeColor, EdgeColoring,
    StaircaseInstance,
};
pub use trees::{
    canonical_cover, is_zero_cover, min_zero_cover, product_cover, sauer_bound, shatters,
    thicket_count, CoverMode, CoverSet, LabeledTree, TreeKind,
};
