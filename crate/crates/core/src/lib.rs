//! Bivariate means, the Neuman-Sandor mean, and a numerical harness that
//! checks and sharpness-probes weighted-mean bounds for it.

pub mod certify;
pub mod elementary;
pub mod error;
pub mod means;
pub mod ratio;
pub mod search;
pub mod series;

pub use error::{Error, Result};
pub use means::{
    evaluate_mean, mean_excess, normalized_gap, normalized_mean, pair_from_gap, MeanKind,
    NormalizedGap, PositivePair,
};
