//! Grid and random-sample verification of strict mean inequalities, sharpness
//! probes of their weights, and recovery of the sharp constants from the ratio
//! functions.
//!
//! All margins are normalized by `A(a, b)` and evaluated from cancellation-free
//! normalized means, so margins of order `x^4` near the diagonal keep their sign.
//! Results are floating-point evidence, not proofs.

mod claims;
mod corpus;
mod recover;
mod verify;

pub use claims::{Bound, BoundClaim, ConvexCombination, Relation, SharpAt, Side};
pub use corpus::{
    neuman_verdict, neuman_weights, verify_chain, verify_corpus, CorpusVerdict, Mode, NeumanVerdict,
};
pub use recover::{
    recover_constant, recover_constant_detailed, Attained, Objective, RecoveredConstant,
    SCAN_POINTS,
};
pub use verify::{
    endpoint_dense_grid, sharpness_probe, verify_bound, verify_bound_at_scale, CertificationReport,
    SharpnessReport, DEFAULT_GRID, MIN_GRID, PROBE_STEPS, STRICTNESS_FLOOR,
};
