use serde::Serialize;

use crate::error::{domain, Result};
use crate::ratio::{Endpoint, RatioFunctionKind};
use crate::search::golden_section_max;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Objective {
    Supremum,
    Infimum,
}

/// Where the recovered extremum was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Attained {
    /// In the limit at an end of the domain.
    Limit(Endpoint),
    /// At an interior point.
    Interior(f64),
}

/// Details of a [`recover_constant`] search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveredConstant {
    pub function: RatioFunctionKind,
    pub objective: Objective,
    pub value: f64,
    pub attained: Attained,
    /// Best interior value after the grid scan and golden-section refinement.
    pub best_interior: f64,
    pub best_interior_at: f64,
    /// Closed-form limits at the lower and upper end.
    pub limits: (f64, f64),
    /// Limits estimated numerically by Richardson extrapolation of the function itself.
    pub extrapolated_limits: (f64, f64),
    /// True if some interior point beats both endpoint limits.
    pub interior_exceeds_limits: bool,
}

/// Interior points of the initial scan in [`recover_constant`].
pub const SCAN_POINTS: usize = 2000;

/// Leading power of the distance to each end in the expansion of the function there.
///
/// The `t`-functions are even at 0 and smooth at `ln(1 + sqrt 2)`;
/// `(Q - M)/(Q - G)` is even at 0 and expands in `sqrt(1 - x)` at 1.
fn expansion_power(kind: RatioFunctionKind, end: Endpoint) -> f64 {
    match (kind, end) {
        (_, Endpoint::Lower) => 2.0,
        (RatioFunctionKind::RatioGQ, Endpoint::Upper) => 0.5,
        (_, Endpoint::Upper) => 1.0,
    }
}

/// Two-level Richardson extrapolation of `f(end -/+ h)` for `h -> 0`, assuming
/// `f = L + c1 h^k + c2 h^(2k) + ...`.
fn extrapolate_limit(kind: RatioFunctionKind, end: Endpoint) -> Result<f64> {
    let (lo, hi) = kind.domain();
    let k = expansion_power(kind, end);
    // keep h^(3k) near 1e-15 while the samples stay well resolved
    let h0 = 10f64.powf(-5.0 / k).min(1e-2);
    let at = |h: f64| match end {
        Endpoint::Lower => kind.evaluate(lo + h),
        Endpoint::Upper => kind.evaluate(hi - h),
    };
    let (f0, f1, f2) = (at(h0)?, at(h0 / 2.0)?, at(h0 / 4.0)?);
    let r1 = 2f64.powf(k);
    let (g0, g1) = ((r1 * f1 - f0) / (r1 - 1.0), (r1 * f2 - f1) / (r1 - 1.0));
    let r2 = 2f64.powf(2.0 * k);
    Ok((r2 * g1 - g0) / (r2 - 1.0))
}

/// Extremum of a ratio function over its open domain, to within `tol`.
///
/// A grid scan locates the best interior point, golden-section search refines
/// it, and the result is compared with the closed-form endpoint limits; when a
/// limit is at least as extreme as every interior value, the limit is returned.
pub fn recover_constant(kind: RatioFunctionKind, objective: Objective, tol: f64) -> Result<f64> {
    recover_constant_detailed(kind, objective, tol).map(|r| r.value)
}

pub fn recover_constant_detailed(
    kind: RatioFunctionKind,
    objective: Objective,
    tol: f64,
) -> Result<RecoveredConstant> {
    if !(tol >= 1e-12) {
        return domain(format!("tolerance {tol} is below 1e-12"));
    }
    let sign = match objective {
        Objective::Supremum => 1.0,
        Objective::Infimum => -1.0,
    };
    let (lo, hi) = kind.domain();
    let step = (hi - lo) / (SCAN_POINTS + 1) as f64;
    let scan: Vec<(f64, f64)> = (1..=SCAN_POINTS)
        .map(|i| {
            let x = lo + step * i as f64;
            kind.evaluate(x).map(|v| (x, sign * v))
        })
        .collect::<Result<_>>()?;
    let (i_best, _) = scan
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("scan is non-empty");
    let left = if i_best == 0 {
        lo + 0.5 * step
    } else {
        scan[i_best - 1].0
    };
    let right = if i_best + 1 == scan.len() {
        hi - 0.5 * step
    } else {
        scan[i_best + 1].0
    };
    let (at, best) = golden_section_max(
        |x| {
            kind.evaluate(x)
                .map(|v| sign * v)
                .unwrap_or(f64::NEG_INFINITY)
        },
        left,
        right,
        tol.min(1e-9) * (hi - lo),
    );
    let best_interior = sign * best;

    let limits = (
        kind.limit_at(Endpoint::Lower),
        kind.limit_at(Endpoint::Upper),
    );
    let extrapolated_limits = (
        extrapolate_limit(kind, Endpoint::Lower)?,
        extrapolate_limit(kind, Endpoint::Upper)?,
    );
    let (end, limit) = if sign * limits.0 >= sign * limits.1 {
        (Endpoint::Lower, limits.0)
    } else {
        (Endpoint::Upper, limits.1)
    };
    let interior_exceeds_limits = scan
        .iter()
        .any(|&(_, v)| v > sign * limits.0 && v > sign * limits.1);
    let (value, attained) = if sign * limit >= best {
        (limit, Attained::Limit(end))
    } else {
        (best_interior, Attained::Interior(at))
    };
    Ok(RecoveredConstant {
        function: kind,
        objective,
        value,
        attained,
        best_interior,
        best_interior_at: at,
        limits,
        extrapolated_limits,
        interior_exceeds_limits,
    })
}
