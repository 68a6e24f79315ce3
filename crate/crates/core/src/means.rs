//! The ten bivariate means of the chain
//! `H < G < L < P < A < M < T < Q < C`, plus the generalized logarithmic
//! family `L_p`.
//!
//! Every mean is symmetric, so evaluation starts by ordering the pair as
//! `(hi, lo)`; swapping the arguments then yields bit-identical results.
//! On the diagonal `a = b` each mean is defined by continuity as `a`.
//!
//! Two coordinate systems are exposed. [`evaluate_mean`] works on a
//! [`PositivePair`] directly. [`normalized_mean`] and [`mean_excess`] work on
//! the normalized gap `x = |a - b| / (a + b)`, in which every mean becomes
//! `A(a, b) * nu(x)`. The excess `nu(x) - 1` is computed without cancellation
//! so that differences of nearly equal means keep their relative precision.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::elementary::{self, central_binomial, horner, rational, reciprocal_series};
use crate::error::{domain, Error, Result};

/// Below this normalized gap the 0/0 forms are evaluated from power series.
pub const NEAR_DIAGONAL_GAP: f64 = 0.25;

/// `|p|` or `|p + 1|` below this selects the identric or logarithmic special case.
pub const GENERALIZED_LOG_SPECIAL_CASE: f64 = 1e-8;

const SERIES_TERMS: usize = 40;

/// An unordered pair of positive reals, the argument of every mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivePair {
    a: f64,
    b: f64,
}

impl PositivePair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return domain(format!("pair ({a}, {b}) must have finite positive entries"));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The larger entry.
    pub fn hi(&self) -> f64 {
        self.a.max(self.b)
    }

    /// The smaller entry.
    pub fn lo(&self) -> f64 {
        self.a.min(self.b)
    }

    pub fn arithmetic(&self) -> f64 {
        0.5 * self.hi() + 0.5 * self.lo()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.a * factor, self.b * factor)
    }
}

/// `x = |a - b| / (a + b)`, a value in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalizedGap(f64);

impl NormalizedGap {
    pub fn new(x: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return domain(format!("normalized gap {x} must lie in [0, 1)"));
        }
        Ok(Self(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Selector for the mean families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeanKind {
    Harmonic,
    Geometric,
    Logarithmic,
    SeiffertFirst,
    Arithmetic,
    NeumanSandor,
    SeiffertSecond,
    Quadratic,
    ContraHarmonic,
    /// `L_p`; `p = -1` is the logarithmic mean and `p = 0` the identric mean.
    GeneralizedLog(f64),
}

impl MeanKind {
    /// The classical means in increasing order.
    pub const CHAIN: [MeanKind; 9] = [
        MeanKind::Harmonic,
        MeanKind::Geometric,
        MeanKind::Logarithmic,
        MeanKind::SeiffertFirst,
        MeanKind::Arithmetic,
        MeanKind::NeumanSandor,
        MeanKind::SeiffertSecond,
        MeanKind::Quadratic,
        MeanKind::ContraHarmonic,
    ];

    pub fn symbol(&self) -> String {
        match self {
            MeanKind::Harmonic => "H".into(),
            MeanKind::Geometric => "G".into(),
            MeanKind::Logarithmic => "L".into(),
            MeanKind::SeiffertFirst => "P".into(),
            MeanKind::Arithmetic => "A".into(),
            MeanKind::NeumanSandor => "M".into(),
            MeanKind::SeiffertSecond => "T".into(),
            MeanKind::Quadratic => "Q".into(),
            MeanKind::ContraHarmonic => "C".into(),
            MeanKind::GeneralizedLog(p) => format!("Lp:{p}"),
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            MeanKind::GeneralizedLog(p) if !p.is_finite() => domain(format!(
                "generalized logarithmic parameter {p} must be finite"
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol())
    }
}

impl FromStr for MeanKind {
    type Err = Error;

    /// Accepts the one-letter symbols `H G L P A M T Q C` and `Lp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let kind = match s {
            "H" => MeanKind::Harmonic,
            "G" => MeanKind::Geometric,
            "L" => MeanKind::Logarithmic,
            "P" => MeanKind::SeiffertFirst,
            "A" => MeanKind::Arithmetic,
            "M" => MeanKind::NeumanSandor,
            "T" => MeanKind::SeiffertSecond,
            "Q" => MeanKind::Quadratic,
            "C" => MeanKind::ContraHarmonic,
            _ => {
                let p = s
                    .strip_prefix("Lp:")
                    .and_then(|rest| rest.parse::<f64>().ok())
                    .ok_or_else(|| Error::Domain(format!("unknown mean `{s}`")))?;
                MeanKind::GeneralizedLog(p)
            }
        };
        kind.check()?;
        Ok(kind)
    }
}

/// Returns `|a - b| / (a + b)`.
pub fn normalized_gap(pair: PositivePair) -> NormalizedGap {
    let (hi, lo) = (pair.hi(), pair.lo());
    NormalizedGap((hi - lo) / (hi + lo))
}

/// The pair `(scale * (1 + x), scale * (1 - x))`.
pub fn pair_from_gap(gap: NormalizedGap, scale: f64) -> Result<PositivePair> {
    if !(scale.is_finite() && scale > 0.0) {
        return domain(format!("scale {scale} must be finite and positive"));
    }
    let x = gap.value();
    PositivePair::new(scale * (1.0 + x), scale * (1.0 - x))
}

/// Evaluates a mean on a pair.
///
/// The result is symmetric in the pair (bit-exactly), homogeneous of degree
/// one, and clamped into `[min(a, b), max(a, b)]`.
pub fn evaluate_mean(kind: MeanKind, pair: PositivePair) -> Result<f64> {
    kind.check()?;
    let (hi, lo) = (pair.hi(), pair.lo());
    if hi == lo {
        return Ok(hi);
    }
    let sum = hi + lo;
    let arith = 0.5 * hi + 0.5 * lo;
    let diff = hi - lo;
    let x = diff / sum;
    let near = x < NEAR_DIAGONAL_GAP;

    let value = match kind {
        MeanKind::Harmonic => 2.0 * lo * (hi / sum),
        MeanKind::Geometric => hi.sqrt() * lo.sqrt(),
        MeanKind::Arithmetic => arith,
        MeanKind::Quadratic => quadratic(hi, lo),
        MeanKind::ContraHarmonic => hi * (hi / sum) + lo * (lo / sum),
        MeanKind::NeumanSandor if near => arith * (1.0 + series_excess(kind, x)),
        MeanKind::NeumanSandor => diff / (2.0 * elementary::asinh(x)),
        MeanKind::Logarithmic => logarithmic(hi, lo, x, arith),
        MeanKind::SeiffertFirst if near => arith * (1.0 + series_excess(kind, x)),
        MeanKind::SeiffertFirst => diff / (4.0 * (hi / lo).sqrt().atan() - PI),
        MeanKind::SeiffertSecond if near => arith * (1.0 + series_excess(kind, x)),
        MeanKind::SeiffertSecond => diff / (2.0 * x.atan()),
        MeanKind::GeneralizedLog(p) => {
            if p.abs() < GENERALIZED_LOG_SPECIAL_CASE {
                identric(hi, lo, x, arith)
            } else if (p + 1.0).abs() < GENERALIZED_LOG_SPECIAL_CASE {
                logarithmic(hi, lo, x, arith)
            } else if near {
                arith * (1.0 + generalized_log_series_excess(p, x))
            } else {
                // L_p = hi * [(1 - r^q) / (q (1 - r))]^(1/p), r = lo / hi, q = p + 1
                let q = p + 1.0;
                let r = lo / hi;
                let one_minus_r = diff / hi;
                let ln_s = if p.abs() < 0.5 {
                    // s = (1 + u) / q with u = -r expm1(p ln r) / (1 - r); both
                    // logarithms are O(p) and keep their relative precision
                    let u = -r * (p * r.ln()).exp_m1() / one_minus_r;
                    u.ln_1p() - p.ln_1p()
                } else {
                    (-(q * r.ln()).exp_m1() / (q * one_minus_r)).ln()
                };
                hi * (ln_s / p).exp()
            }
        }
    };
    Ok(value.clamp(lo, hi))
}

fn quadratic(hi: f64, lo: f64) -> f64 {
    if hi < 1e150 && lo > 1e-150 {
        (0.5 * (hi * hi + lo * lo)).sqrt()
    } else {
        hi.hypot(lo) * FRAC_1_SQRT_2
    }
}

fn logarithmic(hi: f64, lo: f64, x: f64, arith: f64) -> f64 {
    if x < NEAR_DIAGONAL_GAP {
        arith * (1.0 + series_excess(MeanKind::Logarithmic, x))
    } else {
        (hi - lo) / (hi / lo).ln()
    }
}

fn identric(hi: f64, lo: f64, x: f64, arith: f64) -> f64 {
    if x < NEAR_DIAGONAL_GAP {
        arith * identric_log_ratio_series(x).exp()
    } else {
        // I = hi * exp(-r ln r / (1 - r) - 1)
        let r = lo / hi;
        hi * (-r * r.ln() / ((hi - lo) / hi) - 1.0).exp()
    }
}

/// `nu(x) = mean(1 + x, 1 - x)`, the mean divided by the arithmetic mean.
pub fn normalized_mean(kind: MeanKind, gap: NormalizedGap) -> Result<f64> {
    kind.check()?;
    let x = gap.value();
    if x < NEAR_DIAGONAL_GAP {
        return Ok(1.0 + mean_excess(kind, gap)?);
    }
    Ok(match kind {
        MeanKind::Harmonic => (1.0 - x) * (1.0 + x),
        MeanKind::Geometric => ((1.0 - x) * (1.0 + x)).sqrt(),
        MeanKind::Logarithmic => x / elementary::atanh(x),
        MeanKind::SeiffertFirst => x / x.asin(),
        MeanKind::Arithmetic => 1.0,
        MeanKind::NeumanSandor => x / elementary::asinh(x),
        MeanKind::SeiffertSecond => x / x.atan(),
        MeanKind::Quadratic => x.hypot(1.0),
        MeanKind::ContraHarmonic => 1.0 + x * x,
        MeanKind::GeneralizedLog(p) => normalized_generalized_log(p, x),
    })
}

fn normalized_generalized_log(p: f64, x: f64) -> f64 {
    if p.abs() < GENERALIZED_LOG_SPECIAL_CASE {
        (elementary::atanh(x) / x + 0.5 * (-x * x).ln_1p() - 1.0).exp()
    } else if (p + 1.0).abs() < GENERALIZED_LOG_SPECIAL_CASE {
        x / elementary::atanh(x)
    } else {
        // (1+x)^q - (1-x)^q = (1-x)^q * expm1(2 q atanh x)
        let q = p + 1.0;
        let s =
            (q * (-x).ln_1p()).exp() * (2.0 * q * elementary::atanh(x)).exp_m1() / (2.0 * q * x);
        (s.ln() / p).exp()
    }
}

/// `nu(x) - 1`, evaluated without cancellation for the nine classical means.
///
/// For `L_p` the excess is relative-accurate near the diagonal and
/// absolute-accurate elsewhere.
pub fn mean_excess(kind: MeanKind, gap: NormalizedGap) -> Result<f64> {
    kind.check()?;
    let x = gap.value();
    let x2 = x * x;
    Ok(match kind {
        MeanKind::Harmonic => -x2,
        MeanKind::Geometric => -x2 / (1.0 + ((1.0 - x) * (1.0 + x)).sqrt()),
        MeanKind::Arithmetic => 0.0,
        MeanKind::Quadratic => x2 / (1.0 + x.hypot(1.0)),
        MeanKind::ContraHarmonic => x2,
        MeanKind::Logarithmic
        | MeanKind::SeiffertFirst
        | MeanKind::NeumanSandor
        | MeanKind::SeiffertSecond => {
            if x < NEAR_DIAGONAL_GAP {
                series_excess(kind, x)
            } else {
                let f = match kind {
                    MeanKind::Logarithmic => elementary::atanh(x),
                    MeanKind::SeiffertFirst => x.asin(),
                    MeanKind::NeumanSandor => elementary::asinh(x),
                    _ => x.atan(),
                };
                (x - f) / f
            }
        }
        MeanKind::GeneralizedLog(p) => {
            if p.abs() < GENERALIZED_LOG_SPECIAL_CASE {
                if x < NEAR_DIAGONAL_GAP {
                    identric_log_ratio_series(x).exp_m1()
                } else {
                    normalized_generalized_log(p, x) - 1.0
                }
            } else if (p + 1.0).abs() < GENERALIZED_LOG_SPECIAL_CASE {
                mean_excess(MeanKind::Logarithmic, gap)?
            } else if x < NEAR_DIAGONAL_GAP {
                generalized_log_series_excess(p, x)
            } else {
                normalized_generalized_log(p, x) - 1.0
            }
        }
    })
}

/// Series in `y = x^2` of `x / f(x)` for the four 0/0 forms, without the
/// constant term.
fn series_excess(kind: MeanKind, x: f64) -> f64 {
    let coeffs = match kind {
        MeanKind::Logarithmic => &reciprocal_tables().logarithmic,
        MeanKind::SeiffertFirst => &reciprocal_tables().seiffert_first,
        MeanKind::NeumanSandor => &reciprocal_tables().neuman_sandor,
        MeanKind::SeiffertSecond => &reciprocal_tables().seiffert_second,
        _ => unreachable!("no series for {kind}"),
    };
    let y = x * x;
    y * horner(coeffs, y)
}

struct ReciprocalTables {
    logarithmic: Vec<f64>,
    seiffert_first: Vec<f64>,
    neuman_sandor: Vec<f64>,
    seiffert_second: Vec<f64>,
}

/// Exact coefficients of `f(x) / x` as a series in `y = x^2`:
/// `atanh` gives `1/(2n+1)`, `atan` alternates that, `asin` gives
/// `C(2n,n) / (4^n (2n+1))` and `asinh` alternates that.
pub(crate) fn inverse_function_series(kind: MeanKind, terms: usize) -> Vec<BigRational> {
    (0..terms as u32)
        .map(|n| {
            let odd = rational(1, 2 * n as i64 + 1);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            match kind {
                MeanKind::Logarithmic => odd,
                MeanKind::SeiffertSecond => odd * rational(sign, 1),
                MeanKind::SeiffertFirst | MeanKind::NeumanSandor => {
                    let c = BigRational::new(
                        central_binomial(n),
                        num_bigint::BigInt::from(4u32).pow(n),
                    );
                    let s = if kind == MeanKind::NeumanSandor {
                        sign
                    } else {
                        1
                    };
                    c * odd * rational(s, 1)
                }
                _ => unreachable!(),
            }
        })
        .collect()
}

fn reciprocal_tables() -> &'static ReciprocalTables {
    static TABLES: OnceLock<ReciprocalTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let table = |kind| {
            let r = reciprocal_series(
                &inverse_function_series(kind, SERIES_TERMS + 1),
                SERIES_TERMS + 1,
            );
            r[1..].iter().map(elementary::to_f64).collect::<Vec<f64>>()
        };
        ReciprocalTables {
            logarithmic: table(MeanKind::Logarithmic),
            seiffert_first: table(MeanKind::SeiffertFirst),
            neuman_sandor: table(MeanKind::NeumanSandor),
            seiffert_second: table(MeanKind::SeiffertSecond),
        }
    })
}

/// `ln(I / A) = -sum_{k>=1} x^{2k} / (2k (2k+1))`.
fn identric_log_ratio_series(x: f64) -> f64 {
    let y = x * x;
    let mut term = 1.0;
    let mut acc = 0.0;
    for k in 1..=SERIES_TERMS {
        term *= y;
        let kk = 2.0 * k as f64;
        let t = term / (kk * (kk + 1.0));
        acc += t;
        if t < 1e-20 * acc {
            break;
        }
    }
    -acc
}

/// `L_p / A - 1` near the diagonal, from
/// `S(x) = ((1+x)^q - (1-x)^q) / (2 q x) = sum_k c_k x^{2k}`, `q = p + 1`,
/// with `c_k = prod_{j=1}^{2k} (q - j) / (2k+1)!`.
fn generalized_log_series_excess(p: f64, x: f64) -> f64 {
    let q = p + 1.0;
    let y = x * x;
    let mut coeff = 1.0;
    let mut power = 1.0;
    let mut s_minus_one = 0.0;
    for k in 1..=200 {
        let kk = 2.0 * k as f64;
        coeff *= (q - kk + 1.0) * (q - kk) / (kk * (kk + 1.0));
        power *= y;
        let t = coeff * power;
        s_minus_one += t;
        if t == 0.0 || (k > 2 && t.abs() < 1e-20 * s_minus_one.abs()) {
            break;
        }
    }
    (s_minus_one.ln_1p() / p).exp_m1()
}
