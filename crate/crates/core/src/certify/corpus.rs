use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::verify::{CertificationReport, Sample, Tally};
use crate::error::{domain, Result};
use crate::means::{
    evaluate_mean, mean_excess, normalized_gap, pair_from_gap, MeanKind, NormalizedGap,
    PositivePair,
};
use crate::ratio::{t_max, SharpConstants};

/// Whether a corpus claim must hold or is only evaluated and reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Required,
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusVerdict {
    pub id: &'static str,
    pub statement: &'static str,
    pub mode: Mode,
    pub report: CertificationReport,
}

/// Pairs with log-uniform scale in `[1e-3, 1e3]` and gap uniform in `(0, 1)`.
fn scaled_pairs(samples: usize, seed: u64) -> Result<Vec<PositivePair>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let scale = 10f64.powf(rng.gen_range(-3.0..=3.0));
            let mut x: f64 = rng.gen();
            while x == 0.0 {
                x = rng.gen();
            }
            pair_from_gap(NormalizedGap::new(x)?, scale)
        })
        .collect()
}

/// Pairs with both entries uniform in `(0, 1/2)` and distinct.
fn ky_fan_pairs(samples: usize, seed: u64) -> Vec<PositivePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || loop {
        let v: f64 = rng.gen_range(0.0..0.5);
        if v > 0.0 {
            return v;
        }
    };
    (0..samples)
        .map(|_| loop {
            let (a, b) = (draw(), draw());
            if a != b {
                return PositivePair::new(a, b).expect("entries are positive");
            }
        })
        .collect()
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 1 {
        return domain("need at least one sample");
    }
    Ok(())
}

/// Evaluates the smallest of several margins at every pair and reduces them.
fn sweep<F>(
    claim: &str,
    pairs: &[PositivePair],
    seed: u64,
    margins: F,
) -> Result<CertificationReport>
where
    F: Fn(PositivePair) -> Result<f64> + Sync,
{
    let tally = pairs
        .par_iter()
        .map(|&pair| -> Result<Tally> {
            let margin = margins(pair)?;
            Ok(Tally::of(Sample {
                gap: normalized_gap(pair).value(),
                margin,
                pair: Some(pair),
            }))
        })
        .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))?;
    tally.into_report(claim.to_string(), Some(seed), 1.0)
}

/// `H < G < L < P < A < M < T < Q < C` on random pairs, by direct evaluation.
///
/// The margin at a pair is the smallest gap between consecutive means, divided by `A`.
pub fn verify_chain(samples: usize, seed: u64) -> Result<CertificationReport> {
    check_samples(samples)?;
    let pairs = scaled_pairs(samples, seed)?;
    sweep("chain", &pairs, seed, |pair| {
        let values = MeanKind::CHAIN
            .iter()
            .map(|&k| evaluate_mean(k, pair))
            .collect::<Result<Vec<f64>>>()?;
        let a = pair.arithmetic();
        Ok(values
            .windows(2)
            .map(|w| (w[1] - w[0]) / a)
            .fold(f64::INFINITY, f64::min))
    })
}

fn excesses<const N: usize>(kinds: [MeanKind; N], gap: NormalizedGap) -> Result<[f64; N]> {
    let mut out = [0.0; N];
    for (slot, kind) in out.iter_mut().zip(kinds) {
        *slot = mean_excess(kind, gap)?;
    }
    Ok(out)
}

/// `lambda Q + (1 - lambda) A < M < mu Q + (1 - mu) A` margins.
fn quadratic_arithmetic_margins(gap: NormalizedGap, lambda: f64, mu: f64) -> Result<(f64, f64)> {
    let [q, m] = excesses([MeanKind::Quadratic, MeanKind::NeumanSandor], gap)?;
    Ok((m - lambda * q, mu * q - m))
}

/// Weights of the two published `Q`/`A` bounds for `M`.
pub fn neuman_weights() -> [(f64, f64); 2] {
    let l = t_max();
    let first = (1.0 - l) / ((std::f64::consts::SQRT_2 - 1.0) * l);
    let second = (1.0 - l) / l;
    [(first, 1.0 / 3.0), (second, 1.0 / 6.0)]
}

/// Which of the two published `Q`/`A` constant sets survives sampling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeumanVerdict {
    /// `(lambda, mu, lower holds, upper holds)` for each published set.
    pub sets: [(f64, f64, bool, bool); 2],
    /// Index (0 or 1) of the sets whose both halves hold.
    pub surviving: Vec<usize>,
}

pub fn neuman_verdict(verdicts: &[CorpusVerdict]) -> NeumanVerdict {
    let holds = |id: &str| verdicts.iter().any(|v| v.id == id && v.report.holds);
    let w = neuman_weights();
    let sets = [
        (
            w[0].0,
            w[0].1,
            holds("neuman-qa-1-lower"),
            holds("neuman-qa-1-upper"),
        ),
        (
            w[1].0,
            w[1].1,
            holds("neuman-qa-2-lower"),
            holds("neuman-qa-2-upper"),
        ),
    ];
    let surviving = (0..2).filter(|&i| sets[i].2 && sets[i].3).collect();
    NeumanVerdict { sets, surviving }
}

/// The companion inequalities for `M` and the classical means, each on
/// `samples` seeded random pairs.
///
/// Ky Fan ratios are compared through `ln(m(a, b)) - ln(m(1 - a, 1 - b))`; the
/// product, square and `L_p` claims use cancellation-free differences of
/// normalized means. The two published `Q`/`A` bounds are evaluated in report
/// mode.
pub fn verify_corpus(samples: usize, seed: u64) -> Result<Vec<CorpusVerdict>> {
    check_samples(samples)?;
    let pairs = scaled_pairs(samples, seed)?;
    let ky_fan = ky_fan_pairs(samples, seed);
    let gap = |pair: PositivePair| normalized_gap(pair);
    let p0 = SharpConstants::get().p0;
    let [(l1, m1), (l2, m2)] = neuman_weights();

    let mut out = vec![CorpusVerdict {
        id: "chain",
        statement: "H < G < L < P < A < M < T < Q < C",
        mode: Mode::Required,
        report: verify_chain(samples, seed)?,
    }];

    let ky_kinds = [
        MeanKind::Geometric,
        MeanKind::Logarithmic,
        MeanKind::SeiffertFirst,
        MeanKind::Arithmetic,
        MeanKind::NeumanSandor,
        MeanKind::SeiffertSecond,
    ];
    let report = sweep("ky-fan", &ky_fan, seed, |pair| {
        let mirrored = PositivePair::new(1.0 - pair.a(), 1.0 - pair.b())?;
        let (x, y) = (gap(pair), gap(mirrored));
        // ln(m / A) at both pairs; the ln A terms are common to every ratio
        let logs = ky_kinds
            .iter()
            .map(|&k| Ok(mean_excess(k, x)?.ln_1p() - mean_excess(k, y)?.ln_1p()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(logs
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min))
    })?;
    out.push(CorpusVerdict {
        id: "ky-fan",
        statement: "G/G' < L/L' < P/P' < A/A' < M/M' < T/T' on (0, 1/2)",
        mode: Mode::Required,
        report,
    });

    let report = sweep("product", &pairs, seed, |pair| {
        let [p, m] = excesses([MeanKind::SeiffertFirst, MeanKind::NeumanSandor], gap(pair))?;
        // 1 - (1 + p)(1 + m)
        Ok(-(p + m + p * m))
    })?;
    out.push(CorpusVerdict {
        id: "product",
        statement: "P M < A^2",
        mode: Mode::Required,
        report,
    });

    let report = sweep("square", &pairs, seed, |pair| {
        let [m, t] = excesses(
            [MeanKind::NeumanSandor, MeanKind::SeiffertSecond],
            gap(pair),
        )?;
        let m_sq = 2.0 * m + m * m;
        Ok((m_sq - t).min(t + 0.5 * t * t - m_sq))
    })?;
    out.push(CorpusVerdict {
        id: "square",
        statement: "A T < M^2 < (A^2 + T^2)/2",
        mode: Mode::Required,
        report,
    });

    let report = sweep("lp-sandwich", &pairs, seed, |pair| {
        let [lo, m, hi] = excesses(
            [
                MeanKind::GeneralizedLog(p0),
                MeanKind::NeumanSandor,
                MeanKind::GeneralizedLog(2.0),
            ],
            gap(pair),
        )?;
        Ok((m - lo).min(hi - m))
    })?;
    out.push(CorpusVerdict {
        id: "lp-sandwich",
        statement: "L_p0 < M < L_2",
        mode: Mode::Required,
        report,
    });

    let qa: [(&'static str, &'static str, f64, f64, bool); 4] = [
        (
            "neuman-qa-1-lower",
            "a Q + (1 - a) A < M, a = 0.3249...",
            l1,
            m1,
            true,
        ),
        (
            "neuman-qa-1-upper",
            "M < b Q + (1 - b) A, b = 1/3",
            l1,
            m1,
            false,
        ),
        (
            "neuman-qa-2-lower",
            "l Q + (1 - l) A < M, l = 0.1345...",
            l2,
            m2,
            true,
        ),
        (
            "neuman-qa-2-upper",
            "M < m Q + (1 - m) A, m = 1/6",
            l2,
            m2,
            false,
        ),
    ];
    for (id, statement, lambda, mu, lower) in qa {
        let report = sweep(id, &pairs, seed, |pair| {
            let (below, above) = quadratic_arithmetic_margins(gap(pair), lambda, mu)?;
            Ok(if lower { below } else { above })
        })?;
        out.push(CorpusVerdict {
            id,
            statement,
            mode: Mode::Report,
            report,
        });
    }
    Ok(out)
}
