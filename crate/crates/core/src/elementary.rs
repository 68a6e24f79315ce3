//! Cancellation-free elementary functions and even power series helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Inverse hyperbolic sine without the cancellation of `ln(x + sqrt(1 + x^2))`.
///
/// Evaluated as `ln_1p(u)` with `u = |x| + x^2 / (1 + sqrt(1 + x^2))`, then
/// the sign of `x` is restored.
pub fn asinh(x: f64) -> f64 {
    let ax = x.abs();
    if ax > 1e150 {
        // x^2 overflows; asinh(x) ~ ln(2x)
        return (std::f64::consts::LN_2 + ax.ln()).copysign(x);
    }
    let sq = ax * ax;
    let u = ax + sq / (1.0 + (1.0 + sq).sqrt());
    u.ln_1p().copysign(x)
}

/// `atanh(x)` for `|x| < 1` via `ln_1p(2x / (1 - x)) / 2`.
pub fn atanh(x: f64) -> f64 {
    let ax = x.abs();
    (0.5 * (2.0 * ax / (1.0 - ax)).ln_1p()).copysign(x)
}

/// Evaluates `sum_k coeffs[k] * y^k` by Horner's rule.
pub fn horner(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
}

pub(crate) fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Central binomial coefficient `C(2n, n)` as a big integer.
pub(crate) fn central_binomial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 1..=n {
        acc = acc * BigInt::from(n + k) / BigInt::from(k);
    }
    acc
}

/// Coefficients `r_0..r_{terms-1}` of `1 / s(y)` where `s` has the given
/// coefficients (with `s_0 = 1`), computed exactly.
pub(crate) fn reciprocal_series(s: &[BigRational], terms: usize) -> Vec<BigRational> {
    assert!(!s.is_empty() && s[0] == BigRational::one());
    let mut r: Vec<BigRational> = Vec::with_capacity(terms);
    r.push(BigRational::one());
    for n in 1..terms {
        let mut acc = BigRational::zero();
        for k in 1..=n.min(s.len() - 1) {
            acc += &s[k] * &r[n - k];
        }
        r.push(-acc);
    }
    r
}

pub(crate) fn to_f64(q: &BigRational) -> f64 {
    // Scale down numerator and denominator together so huge factorials
    // never overflow the intermediate conversion.
    let bits_n = q.numer().bits() as i64;
    let bits_d = q.denom().bits() as i64;
    if bits_n < 1000 && bits_d < 1000 {
        return q.to_f64().unwrap_or(f64::NAN);
    }
    let shift = (bits_n.max(bits_d) - 900).max(0) as usize;
    let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asinh_is_odd_and_matches_std_away_from_zero() {
        for &x in &[-3.0, -0.7, 0.5, 1.0, 2.5, 40.0] {
            let ours = asinh(x);
            assert!((ours - f64::asinh(x)).abs() <= 4.0 * f64::EPSILON * ours.abs());
            assert_eq!(asinh(-x), -ours);
        }
        assert_eq!(asinh(0.0), 0.0);
        assert!(asinh(1e300).is_finite());
    }

    #[test]
    fn asinh_keeps_relative_precision_for_tiny_arguments() {
        // asinh(x) = x - x^3/6 + ... ; for x = 1e-10 the cubic term is below an ulp.
        let x = 1e-10;
        assert_eq!(asinh(x), x);
        let x: f64 = 1e-4;
        let series = x - x * x * x / 6.0 + 3.0 * x.powi(5) / 40.0;
        assert!((asinh(x) - series).abs() <= f64::EPSILON * series);
    }

    #[test]
    fn reciprocal_of_geometric_series() {
        // 1 / (1 + y + y^2 + ...) = 1 - y
        let s: Vec<BigRational> = (0..8).map(|_| BigRational::one()).collect();
        let r = reciprocal_series(&s, 8);
        assert_eq!(r[0], BigRational::one());
        assert_eq!(r[1], -BigRational::one());
        assert!(r[2..].iter().all(Zero::is_zero));
    }

    #[test]
    fn central_binomials() {
        let got: Vec<BigInt> = (0..6).map(central_binomial).collect();
        let want: Vec<BigInt> = [1, 2, 6, 20, 70, 252]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(got, want);
    }
}
