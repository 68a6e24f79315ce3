use rayon::prelude::*;
use serde::Serialize;

use super::claims::{BoundClaim, SharpAt};
use crate::error::{domain, Error, Result};
use crate::means::{normalized_gap, pair_from_gap, NormalizedGap, PositivePair};
use crate::search::golden_section_max;

/// Margins (already divided by `A`) with absolute value at or below this are
/// numerically indistinguishable from zero.
pub const STRICTNESS_FLOOR: f64 = 1e-15;

/// Default number of grid points for [`verify_bound`].
pub const DEFAULT_GRID: usize = 100_000;

/// Smallest grid accepted by [`verify_bound`].
pub const MIN_GRID: usize = 100;

/// Innermost gap of the grid, on both ends.
const GRID_EDGE: f64 = 1e-8;

/// Geometric steps of [`sharpness_probe`] toward the sharp endpoint.
pub const PROBE_STEPS: usize = 60;

/// Closest approach of [`sharpness_probe`] to either end of the gap interval.
const PROBE_EDGE: f64 = 1e-15;

/// Outcome of checking a strict inequality on a grid or a random sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub claim: String,
    /// Number of points evaluated (grid points or random samples).
    pub grid_size: usize,
    /// Generator seed for randomly sampled reports.
    pub seed: Option<u64>,
    /// Smallest margin that is distinguishable from zero, normalized by `A`.
    pub min_margin: f64,
    pub worst_pair: PositivePair,
    pub worst_gap: f64,
    /// Points whose margin fell below `-STRICTNESS_FLOOR`.
    pub violations: usize,
    /// Points whose margin was within `STRICTNESS_FLOOR` of zero.
    pub indistinguishable: usize,
    pub holds: bool,
    pub scale: f64,
}

/// Outcome of perturbing a claim's weight toward failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub claim: String,
    pub perturbation: f64,
    pub perturbed_weight: f64,
    pub witness: PositivePair,
    pub witness_gap: NormalizedGap,
    /// Margin of the perturbed claim at the witness; negative when violated.
    pub witness_margin: f64,
    pub violated: bool,
}

/// A point with its margin, ordered for the min/argmin reduction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    pub gap: f64,
    pub margin: f64,
    pub pair: Option<PositivePair>,
}

/// Associative reduction of margins into the report statistics.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tally {
    worst: Option<Sample>,
    violations: usize,
    indistinguishable: usize,
    count: usize,
}

impl Tally {
    pub fn empty() -> Self {
        Tally {
            worst: None,
            violations: 0,
            indistinguishable: 0,
            count: 0,
        }
    }

    pub fn of(sample: Sample) -> Self {
        let m = sample.margin;
        let mut t = Tally {
            worst: None,
            violations: 0,
            indistinguishable: 0,
            count: 1,
        };
        if m.is_nan() || m < -STRICTNESS_FLOOR {
            t.violations = 1;
            t.worst = Some(sample);
        } else if m <= STRICTNESS_FLOOR {
            t.indistinguishable = 1;
        } else {
            t.worst = Some(sample);
        }
        t
    }

    pub fn merge(self, other: Self) -> Self {
        let worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(if less(&b, &a) { b } else { a }),
            (a, b) => a.or(b),
        };
        Tally {
            worst,
            violations: self.violations + other.violations,
            indistinguishable: self.indistinguishable + other.indistinguishable,
            count: self.count + other.count,
        }
    }

    pub fn into_report(
        self,
        claim: String,
        seed: Option<u64>,
        scale: f64,
    ) -> Result<CertificationReport> {
        let worst = self.worst.ok_or_else(|| {
            Error::Evaluation(format!(
                "no margin of '{claim}' is distinguishable from zero"
            ))
        })?;
        let worst_pair = match worst.pair {
            Some(p) => p,
            None => pair_from_gap(NormalizedGap::new(worst.gap)?, scale)?,
        };
        Ok(CertificationReport {
            claim,
            grid_size: self.count,
            seed,
            min_margin: worst.margin,
            worst_pair,
            worst_gap: worst.gap,
            violations: self.violations,
            indistinguishable: self.indistinguishable,
            holds: self.violations == 0 && worst.margin > 0.0,
            scale,
        })
    }
}

/// NaN sorts first so that a failed evaluation is always reported; ties go to the smaller gap.
fn less(a: &Sample, b: &Sample) -> bool {
    match (a.margin.is_nan(), b.margin.is_nan()) {
        (true, false) => true,
        (false, true) => false,
        _ => a.margin < b.margin || (a.margin == b.margin && a.gap < b.gap),
    }
}

/// Gaps placed geometrically toward both ends of `(0, 1)`: half of the points
/// in `[1e-8, 0.5]`, the other half mirrored as `1 - x`.
pub fn endpoint_dense_grid(size: usize) -> Vec<f64> {
    let low = size / 2;
    let high = size - low;
    let geometric = |n: usize| -> Vec<f64> {
        if n == 1 {
            return vec![GRID_EDGE];
        }
        let ratio = (0.5 / GRID_EDGE).ln() / (n - 1) as f64;
        let mut xs: Vec<f64> = (0..n)
            .map(|i| (GRID_EDGE.ln() + ratio * i as f64).exp())
            .collect();
        xs[0] = GRID_EDGE;
        xs[n - 1] = 0.5;
        xs
    };
    let mut grid = geometric(low);
    grid.extend(geometric(high).into_iter().rev().map(|x| 1.0 - x));
    grid
}

/// Checks the strict inequality of `claim` on an endpoint-dense gap grid at scale 1.
pub fn verify_bound(claim: &BoundClaim, grid_size: usize) -> Result<CertificationReport> {
    verify_bound_at_scale(claim, grid_size, 1.0)
}

/// As [`verify_bound`], with the worst pair reported at `scale`.
///
/// Margins are homogeneous of degree zero, so they are evaluated once per
/// normalized gap; the scale only fixes the reported pair.
pub fn verify_bound_at_scale(
    claim: &BoundClaim,
    grid_size: usize,
    scale: f64,
) -> Result<CertificationReport> {
    if grid_size < MIN_GRID {
        return domain(format!(
            "grid size {grid_size} is below the minimum of {MIN_GRID}"
        ));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return domain(format!("scale {scale} must be positive and finite"));
    }
    let grid = endpoint_dense_grid(grid_size);
    let tally = grid
        .par_iter()
        .map(|&x| -> Result<Tally> {
            let margin = claim.margin(NormalizedGap::new(x)?)?;
            Ok(Tally::of(Sample {
                gap: x,
                margin,
                pair: None,
            }))
        })
        .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))?;
    tally.into_report(claim.id.clone(), None, scale)
}

/// Perturbs the weight by `epsilon` toward failure and searches for a violating pair
/// near the claim's sharp endpoint.
///
/// The search takes geometric steps from gap 1/2 toward the endpoint (down to a
/// distance of `1e-15`), then refines the most negative margin by golden-section search.
pub fn sharpness_probe(claim: &BoundClaim, epsilon: f64) -> Result<SharpnessReport> {
    if !(epsilon > 0.0 && epsilon <= 1e-2) {
        return domain(format!("epsilon {epsilon} outside (0, 0.01]"));
    }
    let perturbed_weight = claim.falsifying_weight(epsilon);
    let perturbed = claim.reweighted(perturbed_weight)?;
    // distance from the sharp endpoint, as a gap
    let to_gap = |d: f64| match claim.sharp_at {
        SharpAt::GapZero => d,
        SharpAt::GapOne => 1.0 - d,
    };
    let margin_at = |d: f64| -> f64 {
        NormalizedGap::new(to_gap(d))
            .and_then(|g| perturbed.margin(g))
            .unwrap_or(f64::NAN)
    };
    let ratio = (PROBE_EDGE / 0.5).powf(1.0 / (PROBE_STEPS - 1) as f64);
    let distances: Vec<f64> = (0..PROBE_STEPS)
        .map(|k| (0.5 * ratio.powi(k as i32)).max(PROBE_EDGE))
        .collect();
    let margins: Vec<f64> = distances.iter().map(|&d| margin_at(d)).collect();
    let (k, _) = margins
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_nan())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Evaluation("every probe margin failed to evaluate".into()))?;

    // refine between the neighbouring steps
    let outer = distances[k.saturating_sub(1)];
    let inner = distances[(k + 1).min(PROBE_STEPS - 1)];
    let (d_best, _) = golden_section_max(
        |d| {
            let m = margin_at(d);
            if m.is_nan() {
                f64::NEG_INFINITY
            } else {
                -m
            }
        },
        inner,
        outer,
        1e-3 * inner,
    );
    let d = if margin_at(d_best) <= margins[k] {
        d_best
    } else {
        distances[k]
    };

    let witness = pair_from_gap(NormalizedGap::new(to_gap(d))?, 1.0)?;
    let witness_gap = normalized_gap(witness);
    let witness_margin = perturbed.margin(witness_gap)?;
    Ok(SharpnessReport {
        claim: claim.id.clone(),
        perturbation: epsilon,
        perturbed_weight,
        witness,
        witness_gap,
        witness_margin,
        violated: witness_margin < -STRICTNESS_FLOOR,
    })
}
