//! Ratio functions whose ranges are the admissible weights, the auxiliary
//! family `f_p, g_p, h, mu` used to bound `(Q - M)/(Q - G)`, and the sharp
//! constants.
//!
//! With `x = (a - b)/(a + b)` and `t = asinh x`:
//!
//! * `(Q - M)/(Q - H) = (t cosh t - sinh t) / (t (cosh(2t)/2 + cosh t - 3/2))`,
//!   strictly decreasing from `2/9` to `lambda0` ([`phi_hq`]);
//! * `(C - M)/(C - H) = (t (cosh 2t + 1) - 2 sinh t) / (2t (cosh 2t - 1))`,
//!   even and strictly increasing on `t > 0` from `5/12` to `alpha3` ([`phi_hc`]);
//! * `(Q - M)/(Q - G)`, from `1/3` at `x -> 0` to `lambda0` at `x -> 1` ([`ratio_gq`]).

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::elementary::{self, horner};
use crate::error::{domain, Error, Result};
use crate::means::{mean_excess, MeanKind, NormalizedGap};
use crate::series::{self, CoefficientKind};

/// Below this argument the ratio functions are evaluated from power series.
pub const SERIES_SWITCH: f64 = 0.25;

/// `ln(1 + sqrt 2) = asinh(1)`, the right end of the `t` domain.
pub fn t_max() -> f64 {
    std::f64::consts::SQRT_2.ln_1p()
}

/// The sharp weights, `lambda0`, and the root `p0`, at working precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpConstants {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub alpha3: f64,
    pub beta3: f64,
    pub lambda0: f64,
    pub p0: f64,
}

impl SharpConstants {
    pub fn get() -> &'static SharpConstants {
        static CONSTANTS: OnceLock<SharpConstants> = OnceLock::new();
        CONSTANTS.get_or_init(|| {
            let l = t_max();
            let lambda0 = 1.0 - 1.0 / (std::f64::consts::SQRT_2 * l);
            SharpConstants {
                alpha1: 2.0 / 9.0,
                beta1: lambda0,
                alpha2: 1.0 / 3.0,
                beta2: lambda0,
                alpha3: 1.0 - 1.0 / (2.0 * l),
                beta3: 5.0 / 12.0,
                lambda0,
                p0: series::solve_p0(1e-15).expect("p0 bracket [1, 3] is valid"),
            }
        })
    }
}

pub fn lambda0() -> f64 {
    SharpConstants::get().lambda0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RatioFunctionKind {
    /// `(Q - M)/(Q - H)` as a function of `t`.
    PhiHQ,
    /// `(C - M)/(C - H)` as a function of `t`.
    PhiHC,
    /// `(Q - M)/(Q - G)` as a function of `x`.
    RatioGQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Endpoint {
    Lower,
    Upper,
}

impl RatioFunctionKind {
    pub const ALL: [RatioFunctionKind; 3] = [
        RatioFunctionKind::PhiHQ,
        RatioFunctionKind::PhiHC,
        RatioFunctionKind::RatioGQ,
    ];

    /// The open interval `(lo, hi)` of the argument (positive half for `PhiHC`).
    pub fn domain(self) -> (f64, f64) {
        match self {
            RatioFunctionKind::PhiHQ | RatioFunctionKind::PhiHC => (0.0, t_max()),
            RatioFunctionKind::RatioGQ => (0.0, 1.0),
        }
    }

    pub fn evaluate(self, arg: f64) -> Result<f64> {
        match self {
            RatioFunctionKind::PhiHQ => phi_hq(arg),
            RatioFunctionKind::PhiHC => phi_hc(arg),
            RatioFunctionKind::RatioGQ => ratio_gq(arg),
        }
    }

    /// Closed-form one-sided limit at an end of the domain.
    pub fn limit_at(self, end: Endpoint) -> f64 {
        let c = SharpConstants::get();
        match (self, end) {
            (RatioFunctionKind::PhiHQ, Endpoint::Lower) => c.alpha1,
            (RatioFunctionKind::PhiHQ, Endpoint::Upper) => c.beta1,
            (RatioFunctionKind::PhiHC, Endpoint::Lower) => c.beta3,
            (RatioFunctionKind::PhiHC, Endpoint::Upper) => c.alpha3,
            (RatioFunctionKind::RatioGQ, Endpoint::Lower) => c.alpha2,
            (RatioFunctionKind::RatioGQ, Endpoint::Upper) => c.beta2,
        }
    }
}

/// `(t cosh t - sinh t) / (t (cosh(2t)/2 + cosh t - 3/2))` on `0 < t < ln(1 + sqrt 2)`.
pub fn phi_hq(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < t_max()) {
        return domain(format!("phi_hq argument {t} outside (0, ln(1+sqrt 2))"));
    }
    if t < SERIES_SWITCH {
        return series::truncated_quotient(
            CoefficientKind::A,
            CoefficientKind::B,
            t,
            series::DEFAULT_TERMS,
        );
    }
    let num = t * t.cosh() - t.sinh();
    let den = t * (0.5 * (2.0 * t).cosh() + t.cosh() - 1.5);
    Ok(num / den)
}

/// `(t (cosh 2t + 1) - 2 sinh t) / (2t (cosh 2t - 1))` on `0 < |t| < ln(1 + sqrt 2)`.
pub fn phi_hc(t: f64) -> Result<f64> {
    let t = t.abs();
    if !(t > 0.0 && t < t_max()) {
        return domain(format!(
            "phi_hc argument {t} outside 0 < |t| < ln(1+sqrt 2)"
        ));
    }
    if t < SERIES_SWITCH {
        return series::truncated_quotient(
            CoefficientKind::C,
            CoefficientKind::D,
            t,
            series::DEFAULT_TERMS,
        );
    }
    let c2 = (2.0 * t).cosh();
    Ok((t * (c2 + 1.0) - 2.0 * t.sinh()) / (2.0 * t * (c2 - 1.0)))
}

/// `(sqrt(1+x^2) asinh x - x) / ((sqrt(1+x^2) - sqrt(1-x^2)) asinh x)` on `0 < x < 1`.
pub fn ratio_gq(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return domain(format!("ratio_gq argument {x} outside (0, 1)"));
    }
    let up = (1.0 + x * x).sqrt();
    let down = ((1.0 - x) * (1.0 + x)).sqrt();
    let s = elementary::asinh(x);
    if x < SERIES_SWITCH {
        // numerator / x^3 from its series; denominator / x^3 rewritten as
        // 2 (asinh x / x) / (sqrt(1+x^2) + sqrt(1-x^2)).
        let num = horner(gq_numerator_series(), x * x);
        let den = 2.0 * (s / x) / (up + down);
        return Ok(num / den);
    }
    Ok((up * s - x) / ((up - down) * s))
}

/// Coefficients `e_1, e_2, ...` of `sqrt(1+x^2) asinh x - x = sum e_n x^{2n+1}`.
///
/// From `asinh(x)/sqrt(1+x^2) = sum_n (-1)^n 4^n (n!)^2/(2n+1)! x^{2n+1}`,
/// multiplying by `1 + x^2` gives `e_n = s_n + s_{n-1}`.
pub(crate) fn gq_numerator_exact(terms: usize) -> Vec<BigRational> {
    let s: Vec<BigRational> = (0..=terms as u32)
        .map(|n| {
            let mut fact_n = BigInt::one();
            for k in 2..=n {
                fact_n *= k;
            }
            let mut fact_2n1 = BigInt::one();
            for k in 2..=(2 * n + 1) {
                fact_2n1 *= k;
            }
            let num = (BigInt::one() << (2 * n) as usize) * &fact_n * &fact_n;
            let v = BigRational::new(num, fact_2n1);
            if n % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    (1..=terms).map(|n| &s[n] + &s[n - 1]).collect()
}

fn gq_numerator_series() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        gq_numerator_exact(48)
            .iter()
            .map(elementary::to_f64)
            .collect()
    })
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("parameter p = {p} outside (0, 1)"));
    }
    Ok(())
}

fn check_unit(x: f64, hi: f64) -> Result<()> {
    if !(0.0..=hi).contains(&x) {
        return domain(format!("argument {x} outside [0, {hi}]"));
    }
    Ok(())
}

/// The pieces shared by `f_p` and `g_p`, each free of cancellation:
/// `u = sqrt(1+x^2) - 1`, `d = sqrt(1+x^2) - sqrt(1-x^2)` and
/// `e = u - p d`, so that `sqrt(1+x^2) - p d = 1 + e`.
struct Radicals {
    down: f64,
    d: f64,
    e: f64,
}

impl Radicals {
    fn new(p: f64, x: f64) -> Self {
        let x2 = x * x;
        let up = (1.0 + x2).sqrt();
        let down = ((1.0 - x) * (1.0 + x)).sqrt();
        let u = x2 / (1.0 + up);
        let d = 2.0 * x2 / (up + down);
        Radicals {
            down,
            d,
            e: u - p * d,
        }
    }
}

/// `f_p(x) = asinh x - x / (sqrt(1+x^2) - p (sqrt(1+x^2) - sqrt(1-x^2)))`.
///
/// `pG + (1-p)Q - M` has the sign of `f_p` at the pair's normalized gap.
/// Evaluated as `x (e / (1 + e) - eps_M / (1 + eps_M))` with `eps_M = x/asinh x - 1`,
/// which keeps the sign reliable down to `x ~ 1e-7` although `f_{1/3}` is `O(x^5)`.
pub fn f_p(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    check_unit(x, 1.0)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let r = Radicals::new(p, x);
    let den = 1.0 + r.e;
    if !(den > 0.0) {
        return Err(Error::Evaluation(format!(
            "f_p denominator {den} is not positive"
        )));
    }
    let eps_m = if x < 1.0 {
        mean_excess(MeanKind::NeumanSandor, NormalizedGap::new(x)?)?
    } else {
        1.0 / elementary::asinh(1.0) - 1.0
    };
    Ok(x * (r.e / den - eps_m / (1.0 + eps_m)))
}

/// `g_p(x) = sqrt(1-x^2) (sqrt(1+x^2) + p (sqrt(1-x^2) - sqrt(1+x^2)))^2
///           - sqrt(1-x^2) - p (sqrt(1+x^2) - sqrt(1-x^2))`, the numerator of `f_p'`.
///
/// Evaluated as `sqrt(1-x^2) e (2 + e) - p d`.
pub fn g_p(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    check_unit(x, 1.0)?;
    let r = Radicals::new(p, x);
    Ok(r.down * r.e * (2.0 + r.e) - p * r.d)
}

/// `h_{1/3}(x) = 14 / (9 s) - s - sqrt(1-x^2)/3` with `s = sqrt(1+x^2) + sqrt(1-x^2)`.
pub fn h_onethird(x: f64) -> Result<f64> {
    check_unit(x, 1.0)?;
    let down = ((1.0 - x) * (1.0 + x)).sqrt();
    let s = (1.0 + x * x).sqrt() + down;
    Ok(14.0 / (9.0 * s) - s - down / 3.0)
}

/// `[(2 - 3l - 2l^2) - (3 - 6l) x^2] sqrt(1+x^2)
///  - [(3l - 2l^2) + (6l - 6l^2) x^2] sqrt(1-x^2)` with `l = lambda0`.
pub fn h_lambda0(x: f64) -> Result<f64> {
    check_unit(x, 1.0)?;
    let l = lambda0();
    let x2 = x * x;
    let first = (2.0 - 3.0 * l - 2.0 * l * l) - (3.0 - 6.0 * l) * x2;
    let second = (3.0 * l - 2.0 * l * l) + (6.0 * l - 6.0 * l * l) * x2;
    Ok(first * (1.0 + x2).sqrt() - second * ((1.0 - x) * (1.0 + x)).sqrt())
}

/// First bracket of [`mu_lambda0`], `(18l - 18l^2) x^2 - (9l - 10l^2)`.
pub fn mu_first_bracket(x: f64) -> f64 {
    let l = lambda0();
    (18.0 * l - 18.0 * l * l) * x * x - (9.0 * l - 10.0 * l * l)
}

/// Second bracket of [`mu_lambda0`], `(9 - 18l) x^2 + (4 - 9l + 2l^2)`.
pub fn mu_second_bracket(x: f64) -> f64 {
    let l = lambda0();
    (9.0 - 18.0 * l) * x * x + (4.0 - 9.0 * l + 2.0 * l * l)
}

/// `mu(x) = first(x) sqrt(1+x^2) - second(x) sqrt(1-x^2)` on `[0, 0.9]`,
/// where `h_lambda0'(x) = x mu(x) / sqrt(1 - x^4)`.
pub fn mu_lambda0(x: f64) -> Result<f64> {
    check_unit(x, 0.9)?;
    Ok(mu_first_bracket(x) * (1.0 + x * x).sqrt()
        - mu_second_bracket(x) * ((1.0 - x) * (1.0 + x)).sqrt())
}

/// The numeric bounds that make `mu < 0` on `[1/2, 0.9]` and `(0, 1/2)`,
/// and `h_lambda0 < 0` on `(0.9, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuBounds {
    /// `first(0.9) = 5.58 l - 4.58 l^2`, an upper bound of the first bracket on `[1/2, 0.9]`.
    pub first_bracket_at_0_9: f64,
    /// `second(1/2) = 6.25 - 13.5 l + 2 l^2`, a lower bound of the second bracket on `[1/2, 0.9]`.
    pub second_bracket_at_half: f64,
    /// `first(0.9) sqrt(1.81) - second(1/2) sqrt(0.19)`, an upper bound of `mu` on `[1/2, 0.9]`.
    pub combined_upper_bound: f64,
    /// `first(1/2) = 5.5 l^2 - 4.5 l`, the supremum of the first bracket on `(0, 1/2)`.
    pub first_bracket_at_half: f64,
    /// `(2 - 3l - 2l^2) - (3 - 6l) 0.81`, bounding the leading bracket of `h_lambda0` on `(0.9, 1)`.
    pub h_leading_bracket_at_0_9: f64,
}

pub fn mu_bounds() -> MuBounds {
    let l = lambda0();
    let first = mu_first_bracket(0.9);
    let second = mu_second_bracket(0.5);
    MuBounds {
        first_bracket_at_0_9: first,
        second_bracket_at_half: second,
        combined_upper_bound: first * 1.81f64.sqrt() - second * 0.19f64.sqrt(),
        first_bracket_at_half: mu_first_bracket(0.5),
        h_leading_bracket_at_0_9: (2.0 - 3.0 * l - 2.0 * l * l) - (3.0 - 6.0 * l) * 0.81,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignChange {
    /// Location of the sign change, refined by bisection.
    pub location: f64,
    /// Number of sign changes seen on the scan grid.
    pub grid_sign_changes: usize,
}

/// Scans `h_lambda0` on `grid_points` equispaced points of `[0, 1)` and
/// refines the (expected unique) sign change to `tol` by bisection.
pub fn locate_h_lambda0_sign_change(grid_points: usize, tol: f64) -> Result<SignChange> {
    if grid_points < 2 {
        return domain("need at least two grid points");
    }
    let step = 1.0 / grid_points as f64;
    let values: Vec<(f64, f64)> = (0..grid_points)
        .map(|i| {
            let x = i as f64 * step;
            Ok((x, h_lambda0(x)?))
        })
        .collect::<Result<_>>()?;
    let changes: Vec<(f64, f64)> = values
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .collect();
    let &(lo, hi) = changes
        .first()
        .ok_or_else(|| Error::Evaluation("h_lambda0 has no sign change on the grid".into()))?;
    let h = |x: f64| h_lambda0(x).expect("x in [0, 1]");
    let (mut a, mut b) = (lo, hi);
    let sign_a = h(a).signum();
    while b - a > tol {
        let m = 0.5 * (a + b);
        let hm = h(m);
        if hm == 0.0 {
            return Ok(SignChange {
                location: m,
                grid_sign_changes: changes.len(),
            });
        }
        if hm.signum() == sign_a {
            a = m;
        } else {
            b = m;
        }
    }
    let location = 0.5 * (a + b);
    Ok(SignChange {
        location,
        grid_sign_changes: changes.len(),
    })
}
