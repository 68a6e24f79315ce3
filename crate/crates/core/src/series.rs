//! Power series behind the two monotone ratio functions.
//!
//! With `x = sinh t`, the ratio `(Q - M) / (Q - H)` becomes
//! `sum a_n t^{2n+1} / sum b_n t^{2n+1}` and `(C - M) / (C - H)` becomes
//! `sum c_n t^{2n+1} / sum d_n t^{2n+1}`, where for `n >= 1`
//!
//! ```text
//! a_n = 2n / ((2n+1) (2n)!)        b_n = (2^{2n-1} + 1) / (2n)!
//! c_n = 2^{2n} / (2n)! - 2/(2n+1)!  d_n = 2^{2n+1} / (2n)!
//! ```
//!
//! If the coefficient ratios `num_n / den_n` are strictly monotone and the
//! denominators positive, the quotient of the series is strictly monotone in
//! the same direction on the interval of convergence.
//! [`ratio_sequence_verdict`] checks that hypothesis in exact arithmetic.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::elementary;
use crate::error::{domain, Error, Result};
use crate::search::bisect;

/// Largest index returned as an exact rational by [`coefficient`].
pub const EXACT_LIMIT: u32 = 20;

/// Default truncation depth of [`truncated_quotient`].
pub const DEFAULT_TERMS: usize = 40;

const TABLE_TERMS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoefficientKind {
    A,
    B,
    C,
    D,
}

impl CoefficientKind {
    pub const ALL: [CoefficientKind; 4] = [
        CoefficientKind::A,
        CoefficientKind::B,
        CoefficientKind::C,
        CoefficientKind::D,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

/// A coefficient in one of its two representations.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Exact(BigRational),
    /// Natural logarithm of the (positive) coefficient.
    LogMagnitude(f64),
}

impl Coefficient {
    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Exact(q) => elementary::to_f64(q),
            Coefficient::LogMagnitude(l) => l.exp(),
        }
    }
}

fn check_index(n: u32) -> Result<()> {
    if n < 1 {
        return domain("coefficient index must be at least 1");
    }
    Ok(())
}

fn factorial(m: u32) -> BigInt {
    (2..=m).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

/// The coefficient as an exact rational, for any `n >= 1`.
pub fn exact_coefficient(kind: CoefficientKind, n: u32) -> Result<BigRational> {
    check_index(n)?;
    let two_n = 2 * n;
    let fact = factorial(two_n);
    Ok(match kind {
        CoefficientKind::A => BigRational::new(BigInt::from(two_n), BigInt::from(two_n + 1) * fact),
        CoefficientKind::B => BigRational::new(pow2(two_n - 1) + 1, fact),
        CoefficientKind::C => {
            BigRational::new(pow2(two_n), fact.clone())
                - BigRational::new(BigInt::from(2), fact * BigInt::from(two_n + 1))
        }
        CoefficientKind::D => BigRational::new(pow2(two_n + 1), fact),
    })
}

/// `ln(m!)` as a sum of logarithms.
fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

/// Natural logarithm of the coefficient, evaluated in floating point.
pub fn log_coefficient(kind: CoefficientKind, n: u32) -> Result<f64> {
    check_index(n)?;
    let two_n = 2.0 * n as f64;
    let ln2 = std::f64::consts::LN_2;
    Ok(match kind {
        CoefficientKind::A => two_n.ln() - (two_n + 1.0).ln() - ln_factorial(2 * n),
        CoefficientKind::B => {
            (two_n - 1.0) * ln2 + (-(two_n - 1.0) * ln2).exp().ln_1p() - ln_factorial(2 * n)
        }
        CoefficientKind::C => {
            // ln(4^n (2n+1) - 2) - ln((2n+1)!)
            let lead = two_n * ln2 + (two_n + 1.0).ln();
            lead + (-2.0 * (-lead).exp()).ln_1p() - ln_factorial(2 * n + 1)
        }
        CoefficientKind::D => (two_n + 1.0) * ln2 - ln_factorial(2 * n),
    })
}

/// Exact for `n <= 20`, log-magnitude beyond.
pub fn coefficient(kind: CoefficientKind, n: u32) -> Result<Coefficient> {
    if n <= EXACT_LIMIT {
        exact_coefficient(kind, n).map(Coefficient::Exact)
    } else {
        log_coefficient(kind, n).map(Coefficient::LogMagnitude)
    }
}

fn coefficient_table(kind: CoefficientKind) -> &'static [f64] {
    static TABLES: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        CoefficientKind::ALL
            .iter()
            .map(|&k| {
                (1..=TABLE_TERMS as u32)
                    .map(|n| coefficient(k, n).expect("n >= 1").to_f64())
                    .collect()
            })
            .collect()
    });
    &tables[kind.index()]
}

/// Whether consecutive coefficient ratios rise, fall, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    StrictlyIncreasing,
    StrictlyDecreasing,
    NotMonotone,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityVerdict {
    pub direction: Direction,
    pub checked_up_to: u32,
    /// Smallest `n` at which `r_n -> r_{n+1}` breaks the direction set by `r_1 -> r_2`.
    pub first_violation: Option<u32>,
}

/// Decides whether `num_n / den_n`, `n = 1..=terms`, is strictly monotone.
///
/// Every comparison is made between exact rationals.
pub fn ratio_sequence_verdict(
    numerator: CoefficientKind,
    denominator: CoefficientKind,
    terms: u32,
) -> Result<MonotonicityVerdict> {
    if terms < 2 {
        return domain(format!(
            "need at least 2 terms to compare ratios, got {terms}"
        ));
    }
    let ratios = exact_ratios(numerator, denominator, terms)?;
    let mut direction = None;
    for (i, pair) in ratios.windows(2).enumerate() {
        let n = i as u32 + 1;
        let step = pair[1].cmp(&pair[0]);
        let this = match step {
            std::cmp::Ordering::Greater => Direction::StrictlyIncreasing,
            std::cmp::Ordering::Less => Direction::StrictlyDecreasing,
            std::cmp::Ordering::Equal => Direction::NotMonotone,
        };
        match direction {
            None if this != Direction::NotMonotone => direction = Some(this),
            Some(d) if d == this => {}
            _ => {
                return Ok(MonotonicityVerdict {
                    direction: Direction::NotMonotone,
                    checked_up_to: terms,
                    first_violation: Some(n),
                })
            }
        }
    }
    Ok(MonotonicityVerdict {
        direction: direction.expect("at least one comparison"),
        checked_up_to: terms,
        first_violation: None,
    })
}

/// The ratios `num_n / den_n` for `n = 1..=terms`, exactly.
pub fn exact_ratios(
    numerator: CoefficientKind,
    denominator: CoefficientKind,
    terms: u32,
) -> Result<Vec<BigRational>> {
    (1..=terms)
        .map(|n| {
            let den = exact_coefficient(denominator, n)?;
            if !den.is_positive() {
                return Err(Error::Precondition(format!(
                    "denominator coefficient {denominator:?}_{n} is not positive"
                )));
            }
            Ok(exact_coefficient(numerator, n)? / den)
        })
        .collect()
}

/// `a_{n+1}/b_{n+1} - a_n/b_n` in the closed form
/// `(2 + (2 - 18n - 12n^2) 2^{2n-1}) / ((2n+1)(2n+3)(2^{2n-1}+1)(2^{2n+1}+1))`.
pub fn ab_ratio_step_closed_form(n: u32) -> BigRational {
    let nn = BigInt::from(n);
    let p = pow2(2 * n - 1);
    let num = BigInt::from(2)
        + (BigInt::from(2) - BigInt::from(18) * &nn - BigInt::from(12) * &nn * &nn) * &p;
    let den = BigInt::from(2 * n + 1)
        * BigInt::from(2 * n + 3)
        * (&p + BigInt::one())
        * (pow2(2 * n + 1) + BigInt::one());
    BigRational::new(num, den)
}

/// `c_n / d_n = 1/2 - 1 / ((2n+1) 2^{2n})`.
pub fn cd_ratio_closed_form(n: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
        - BigRational::new(BigInt::one(), BigInt::from(2 * n + 1) * pow2(2 * n))
}

/// `sum_{n=1}^{terms} num_n t^{2n+1} / sum_{n=1}^{terms} den_n t^{2n+1}`.
///
/// The common factor `t^3` is divided out, so `t = 0` returns the limit
/// `num_1 / den_1`.
pub fn truncated_quotient(
    numerator: CoefficientKind,
    denominator: CoefficientKind,
    t: f64,
    terms: usize,
) -> Result<f64> {
    if !(t.abs() < 1.5) {
        return domain(format!(
            "|t| = {} outside the series comfort zone (< 1.5)",
            t.abs()
        ));
    }
    if terms < 1 {
        return domain("need at least one term");
    }
    let y = t * t;
    let num = sum_even(coefficient_table_upto(numerator, terms)?, y);
    let den = sum_even(coefficient_table_upto(denominator, terms)?, y);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Evaluation(format!(
            "denominator series evaluated to {den}"
        )));
    }
    Ok(num / den)
}

fn coefficient_table_upto(
    kind: CoefficientKind,
    terms: usize,
) -> Result<std::borrow::Cow<'static, [f64]>> {
    if terms <= TABLE_TERMS {
        Ok(std::borrow::Cow::Borrowed(
            &coefficient_table(kind)[..terms],
        ))
    } else {
        (1..=terms as u32)
            .map(|n| coefficient(kind, n).map(|c| c.to_f64()))
            .collect::<Result<Vec<_>>>()
            .map(std::borrow::Cow::Owned)
    }
}

fn sum_even(coeffs: std::borrow::Cow<'static, [f64]>, y: f64) -> f64 {
    elementary::horner(&coeffs, y)
}

/// Target of the `p_0` equation, `2 ln(1 + sqrt 2)`.
pub fn p0_target() -> f64 {
    2.0 * std::f64::consts::SQRT_2.ln_1p()
}

/// `(p + 1)^{1/p}`.
pub fn p0_lhs(p: f64) -> f64 {
    (p.ln_1p() / p).exp()
}

/// Root of `(p + 1)^{1/p} = 2 ln(1 + sqrt 2)` by bisection on `[1, 3]`.
///
/// The returned root satisfies `|(p+1)^{1/p} - 2 ln(1 + sqrt 2)| < tolerance`.
pub fn solve_p0(tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return domain(format!("tolerance {tolerance} must be positive"));
    }
    let target = p0_target();
    let residual = |p: f64| p0_lhs(p) - target;
    let root = bisect(residual, 1.0, 3.0, |_, r| r.abs() < tolerance)?;
    if residual(root).abs() >= tolerance {
        return Err(Error::Evaluation(format!(
            "bisection exhausted the bracket with residual {:e} >= {tolerance:e}",
            residual(root)
        )));
    }
    Ok(root)
}
