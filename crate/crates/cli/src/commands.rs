use means_lab::certify::{
    neuman_verdict, recover_constant_detailed, sharpness_probe, verify_bound, verify_chain,
    verify_corpus, Bound, BoundClaim, CertificationReport, CorpusVerdict, Mode, Objective, Side,
    PROBE_STEPS, SCAN_POINTS,
};
use means_lab::ratio::{RatioFunctionKind, SharpConstants};
use means_lab::series::{exact_ratios, p0_lhs, p0_target, ratio_sequence_verdict, solve_p0};
use means_lab::series::{CoefficientKind, Direction};
use means_lab::{evaluate_mean, Error, MeanKind, PositivePair, Result};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::report::{float_json, Cell, Report, Size};
use crate::Pairing;

/// Agreement required between closed-form and recovered constants.
const CONSTANT_TOLERANCE: f64 = 1e-9;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

fn parse_pair(raw: &str) -> Result<PositivePair> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return usage(format!("--pair expects 'a,b', got '{raw}'"));
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| Error::Domain(format!("'{s}' is not a number")))
    };
    PositivePair::new(num(a)?, num(b)?)
}

fn pair_json(pair: PositivePair) -> Value {
    json!([float_json(pair.a()), float_json(pair.b())])
}

pub fn eval(means: &[String], pair: &str) -> Result<Report> {
    let pair = parse_pair(pair)?;
    let kinds = means
        .iter()
        .map(|m| m.parse::<MeanKind>())
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("eval", Size::Samples(1), vec!["mean", "a", "b", "value"]);
    for kind in kinds {
        let value = evaluate_mean(kind, pair)?;
        report.push(vec![
            Cell::text(kind.to_string()),
            Cell::Float(pair.a()),
            Cell::Float(pair.b()),
            Cell::Float(value),
        ]);
    }
    Ok(report)
}

const SAMPLED_COLUMNS: [&str; 9] = [
    "claim",
    "mode",
    "holds",
    "min_margin",
    "worst_a",
    "worst_b",
    "worst_gap",
    "violations",
    "indistinguishable",
];

fn worst_case_json(r: &CertificationReport) -> Value {
    json!({
        "claim": r.claim,
        "min_margin": float_json(r.min_margin),
        "pair": pair_json(r.worst_pair),
        "gap": float_json(r.worst_gap),
    })
}

fn sampled_row(r: &CertificationReport, mode: Mode) -> Vec<Cell> {
    vec![
        Cell::text(r.claim.clone()),
        Cell::text(match mode {
            Mode::Required => "required",
            Mode::Report => "report",
        }),
        Cell::Bool(r.holds),
        Cell::Float(r.min_margin),
        Cell::Float(r.worst_pair.a()),
        Cell::Float(r.worst_pair.b()),
        Cell::Float(r.worst_gap),
        Cell::Int(r.violations as u64),
        Cell::Int(r.indistinguishable as u64),
    ]
}

/// The required report with the smallest margin, or the first failing one.
fn worst<'a>(
    reports: impl Iterator<Item = &'a CertificationReport>,
) -> Option<&'a CertificationReport> {
    reports.min_by(|a, b| {
        (a.holds, a.min_margin)
            .partial_cmp(&(b.holds, b.min_margin))
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

pub fn verify(
    target: &str,
    grid: usize,
    samples: usize,
    seed: u64,
    weight_lower: Option<f64>,
    weight_upper: Option<f64>,
) -> Result<Report> {
    match target {
        "chain" | "corpus" => {
            if weight_lower.is_some() || weight_upper.is_some() {
                return usage(format!("weights do not apply to '{target}'"));
            }
            if target == "chain" {
                verify_chain_report(samples, seed)
            } else {
                verify_corpus_report(samples, seed)
            }
        }
        _ => verify_bound_report(target.parse()?, grid, weight_lower, weight_upper),
    }
}

fn verify_bound_report(
    bound: Bound,
    grid: usize,
    weight_lower: Option<f64>,
    weight_upper: Option<f64>,
) -> Result<Report> {
    let claims = [(Side::Lower, weight_lower), (Side::Upper, weight_upper)]
        .into_iter()
        .map(|(side, w)| match w {
            Some(w) => BoundClaim::with_weight(bound, side, w),
            None => Ok(BoundClaim::sharp(bound, side)),
        })
        .collect::<Result<Vec<_>>>()?;
    let reports = claims
        .iter()
        .map(|c| verify_bound(c, grid))
        .collect::<Result<Vec<_>>>()?;

    let mut report = Report::new(
        format!("verify {}", bound.label()),
        Size::Grid(grid),
        vec![
            "claim",
            "weight",
            "sharp_weight",
            "holds",
            "min_margin",
            "worst_a",
            "worst_b",
            "worst_gap",
            "violations",
            "indistinguishable",
        ],
    );
    for (claim, r) in claims.iter().zip(&reports) {
        report.push(vec![
            Cell::text(claim.id.clone()),
            Cell::Float(claim.weight()),
            Cell::Float(claim.claimed_sharp_weight),
            Cell::Bool(r.holds),
            Cell::Float(r.min_margin),
            Cell::Float(r.worst_pair.a()),
            Cell::Float(r.worst_pair.b()),
            Cell::Float(r.worst_gap),
            Cell::Int(r.violations as u64),
            Cell::Int(r.indistinguishable as u64),
        ]);
    }
    report.ok = reports.iter().all(|r| r.holds);
    report.worst_case = worst(reports.iter()).map_or(Value::Null, worst_case_json);
    report.notes.push(format!(
        "margins within {:e} of zero are counted as indistinguishable",
        means_lab::certify::STRICTNESS_FLOOR
    ));
    Ok(report)
}

fn verify_chain_report(samples: usize, seed: u64) -> Result<Report> {
    let r = verify_chain(samples, seed)?;
    let mut report = Report::new(
        "verify chain",
        Size::Samples(samples),
        SAMPLED_COLUMNS.to_vec(),
    );
    report.seed = Some(seed);
    report.push(sampled_row(&r, Mode::Required));
    report.ok = r.holds;
    report.worst_case = worst_case_json(&r);
    Ok(report)
}

fn verify_corpus_report(samples: usize, seed: u64) -> Result<Report> {
    let verdicts = verify_corpus(samples, seed)?;
    let mut report = Report::new(
        "verify corpus",
        Size::Samples(samples),
        SAMPLED_COLUMNS.to_vec(),
    );
    report.seed = Some(seed);
    for v in &verdicts {
        report.push(sampled_row(&v.report, v.mode));
    }
    let required = || verdicts.iter().filter(|v| v.mode == Mode::Required);
    report.ok = required().all(|v| v.report.holds);
    report.worst_case =
        worst(required().map(|v: &CorpusVerdict| &v.report)).map_or(Value::Null, worst_case_json);

    let n = neuman_verdict(&verdicts);
    let sets: Vec<Value> = n
        .sets
        .iter()
        .map(|&(lambda, mu, lower, upper)| {
            json!({"lambda": lambda, "mu": mu, "lower_holds": lower, "upper_holds": upper})
        })
        .collect();
    report.extra.insert(
        "qa_bounds".into(),
        json!({"sets": sets, "surviving": n.surviving.iter().map(|i| i + 1).collect::<Vec<_>>()}),
    );
    for (i, &(lambda, mu, lower, upper)) in n.sets.iter().enumerate() {
        let status = match (lower, upper) {
            (true, true) => "survives",
            (true, false) => "fails its upper half",
            (false, true) => "fails its lower half",
            (false, false) => "fails both halves",
        };
        report.notes.push(format!(
            "Q/A weight set {} (lambda = {lambda:.6}, mu = {mu:.6}) {status}",
            i + 1
        ));
    }
    Ok(report)
}

pub fn sharpness(bound_label: &str, side: Side, epsilon: f64) -> Result<Report> {
    let bound: Bound = bound_label.parse()?;
    let claim = BoundClaim::sharp(bound, side);
    let probe = sharpness_probe(&claim, epsilon)?;
    let mut report = Report::new(
        format!("sharpness {} {}", bound.label(), side),
        Size::Grid(PROBE_STEPS),
        vec![
            "claim",
            "sharp_weight",
            "epsilon",
            "perturbed_weight",
            "violated",
            "witness_a",
            "witness_b",
            "witness_gap",
            "witness_margin",
        ],
    );
    report.push(vec![
        Cell::text(probe.claim.clone()),
        Cell::Float(claim.weight()),
        Cell::Float(probe.perturbation),
        Cell::Float(probe.perturbed_weight),
        Cell::Bool(probe.violated),
        Cell::Float(probe.witness.a()),
        Cell::Float(probe.witness.b()),
        Cell::Float(probe.witness_gap.value()),
        Cell::Float(probe.witness_margin),
    ]);
    report.ok = probe.violated;
    report.worst_case = json!({
        "claim": probe.claim,
        "margin": float_json(probe.witness_margin),
        "pair": pair_json(probe.witness),
        "gap": float_json(probe.witness_gap.value()),
    });
    Ok(report)
}

pub fn constants() -> Result<Report> {
    let c = SharpConstants::get();
    let rows: [(&str, &str, f64, RatioFunctionKind, Objective); 7] = [
        (
            "alpha1",
            "2/9",
            c.alpha1,
            RatioFunctionKind::PhiHQ,
            Objective::Supremum,
        ),
        (
            "beta1",
            "1 - 1/(sqrt2 ln(1+sqrt2))",
            c.beta1,
            RatioFunctionKind::PhiHQ,
            Objective::Infimum,
        ),
        (
            "alpha2",
            "1/3",
            c.alpha2,
            RatioFunctionKind::RatioGQ,
            Objective::Supremum,
        ),
        (
            "beta2",
            "1 - 1/(sqrt2 ln(1+sqrt2))",
            c.beta2,
            RatioFunctionKind::RatioGQ,
            Objective::Infimum,
        ),
        (
            "alpha3",
            "1 - 1/(2 ln(1+sqrt2))",
            c.alpha3,
            RatioFunctionKind::PhiHC,
            Objective::Supremum,
        ),
        (
            "beta3",
            "5/12",
            c.beta3,
            RatioFunctionKind::PhiHC,
            Objective::Infimum,
        ),
        (
            "lambda0",
            "1 - 1/(sqrt2 ln(1+sqrt2))",
            c.lambda0,
            RatioFunctionKind::RatioGQ,
            Objective::Infimum,
        ),
    ];
    let mut report = Report::new(
        "constants",
        Size::Grid(SCAN_POINTS),
        vec![
            "name",
            "closed_form",
            "value",
            "recovered",
            "extrapolated",
            "abs_diff",
            "match",
        ],
    );
    let mut worst: Option<(f64, &str)> = None;
    for (name, closed_form, value, kind, objective) in rows {
        let rec = recover_constant_detailed(kind, objective, 1e-12)?;
        let extrapolated = match rec.attained {
            means_lab::certify::Attained::Limit(means_lab::ratio::Endpoint::Lower) => {
                rec.extrapolated_limits.0
            }
            means_lab::certify::Attained::Limit(means_lab::ratio::Endpoint::Upper) => {
                rec.extrapolated_limits.1
            }
            means_lab::certify::Attained::Interior(_) => rec.best_interior,
        };
        let diff = (value - rec.value).abs().max((value - extrapolated).abs());
        push_constant(
            &mut report,
            name,
            closed_form,
            value,
            rec.value,
            Some(extrapolated),
            diff,
        );
        if worst.is_none_or(|(d, _)| diff > d) {
            worst = Some((diff, name));
        }
    }
    let p0 = solve_p0(1e-12)?;
    let diff = (c.p0 - p0).abs();
    push_constant(
        &mut report,
        "p0",
        "root of (p+1)^(1/p) = 2 ln(1+sqrt2)",
        c.p0,
        p0,
        None,
        diff,
    );
    report.notes.push(format!(
        "p0 residual |(p0+1)^(1/p0) - 2 ln(1+sqrt2)| = {:e}",
        (p0_lhs(c.p0) - p0_target()).abs()
    ));
    if let Some((diff, name)) = worst {
        report.worst_case = json!({"name": name, "abs_diff": diff});
    }
    Ok(report)
}

fn push_constant(
    report: &mut Report,
    name: &str,
    closed_form: &str,
    value: f64,
    recovered: f64,
    extrapolated: Option<f64>,
    diff: f64,
) {
    let ok = diff < CONSTANT_TOLERANCE;
    report.ok &= ok;
    report.push(vec![
        Cell::text(name),
        Cell::text(closed_form),
        Cell::Fixed(value),
        Cell::Fixed(recovered),
        extrapolated.map_or(Cell::Null, Cell::Fixed),
        Cell::Float(diff),
        Cell::Bool(ok),
    ]);
}

pub fn series(pairing: Pairing, terms: u32) -> Result<Report> {
    let (num, den, expected, label) = match pairing {
        Pairing::Hq => (
            CoefficientKind::A,
            CoefficientKind::B,
            Direction::StrictlyDecreasing,
            "HQ",
        ),
        Pairing::Hc => (
            CoefficientKind::C,
            CoefficientKind::D,
            Direction::StrictlyIncreasing,
            "HC",
        ),
    };
    let verdict = ratio_sequence_verdict(num, den, terms)?;
    let mut report = Report::new(
        format!("series {label}"),
        Size::Terms(terms as usize),
        vec![
            "pairing",
            "direction",
            "checked_up_to",
            "first_violation",
            "expected",
        ],
    );
    report.push(vec![
        Cell::text(label),
        Cell::text(format!("{:?}", verdict.direction)),
        Cell::Int(verdict.checked_up_to as u64),
        verdict
            .first_violation
            .map_or(Cell::Null, |n| Cell::Int(n as u64)),
        Cell::text(format!("{expected:?}")),
    ]);
    report.ok = verdict.direction == expected;
    report.worst_case = match verdict.first_violation {
        Some(n) => json!({"first_violation": n}),
        None => Value::Null,
    };
    let ratios = exact_ratios(num, den, terms.min(10))?;
    let listed: Vec<Value> = ratios
        .iter()
        .enumerate()
        .map(|(i, r)| json!({"n": i + 1, "exact": r.to_string(), "value": float_json(r.to_f64().unwrap_or(f64::NAN))}))
        .collect();
    for (i, r) in ratios.iter().enumerate() {
        report.notes.push(format!("  ratio {:>2} = {r}", i + 1));
    }
    report
        .extra
        .insert("first_ratios".into(), Value::Array(listed));
    Ok(report)
}
