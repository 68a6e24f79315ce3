mod common;

use common::{oracle_phi_hc, oracle_phi_hq, rel_err, Oracle};
use means_lab::series::{
    ab_ratio_step_closed_form, cd_ratio_closed_form, coefficient, exact_coefficient, exact_ratios,
    log_coefficient, p0_lhs, p0_target, ratio_sequence_verdict, solve_p0, truncated_quotient,
    Coefficient, CoefficientKind, Direction, DEFAULT_TERMS, EXACT_LIMIT,
};
use means_lab::Error;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use CoefficientKind::{A, B, C, D};

fn exact(kind: CoefficientKind, n: u32) -> BigRational {
    exact_coefficient(kind, n).unwrap()
}

#[test]
fn first_coefficients_by_hand() {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    // t cosh t - sinh t = t^3/3 + t^5/30 + ...
    assert_eq!(exact(A, 1), q(1, 3));
    assert_eq!(exact(A, 2), q(1, 30));
    // cosh(2t)/2 + cosh t - 3/2 = 3 t^2 / 2 + 3 t^4 / 8 + ...
    assert_eq!(exact(B, 1), q(3, 2));
    assert_eq!(exact(B, 2), q(9, 24));
    assert_eq!(exact(C, 1), q(5, 3));
    assert_eq!(exact(D, 1), q(4, 1));
}

#[test]
fn ab_ratio_steps_match_the_closed_form() {
    let ratios = exact_ratios(A, B, 11).unwrap();
    for n in 1..=10u32 {
        let step = &ratios[n as usize] - &ratios[n as usize - 1];
        assert_eq!(step, ab_ratio_step_closed_form(n), "n = {n}");
        assert!(step < BigRational::from_integer(0.into()));
    }
}

#[test]
fn cd_ratios_match_the_closed_form() {
    let ratios = exact_ratios(C, D, 10).unwrap();
    for n in 1..=10u32 {
        assert_eq!(ratios[n as usize - 1], cd_ratio_closed_form(n), "n = {n}");
    }
}

#[test]
fn exact_and_log_representations_agree() {
    for kind in CoefficientKind::ALL {
        for n in 1..=EXACT_LIMIT {
            let e = exact(kind, n).to_f64().unwrap();
            let l = log_coefficient(kind, n).unwrap().exp();
            assert!(((e - l) / e).abs() < 1e-13, "{kind:?}_{n}: {e} vs {l}");
        }
    }
}

#[test]
fn coefficient_switches_representation_past_the_exact_limit() {
    assert!(matches!(
        coefficient(A, EXACT_LIMIT).unwrap(),
        Coefficient::Exact(_)
    ));
    assert!(matches!(
        coefficient(A, EXACT_LIMIT + 1).unwrap(),
        Coefficient::LogMagnitude(_)
    ));
    // A_25 = 50 / (51 * 50!) is far below the f64 range of factorial reciprocals
    let c = coefficient(A, 25).unwrap().to_f64();
    let want = 50.0 / 51.0 / (1..=50).map(|k| k as f64).product::<f64>();
    assert!(((c - want) / want).abs() < 1e-12);
}

#[test]
fn index_zero_is_rejected() {
    for kind in CoefficientKind::ALL {
        assert!(matches!(coefficient(kind, 0), Err(Error::Domain(_))));
    }
}

#[test]
fn monotonicity_verdicts() {
    let ab = ratio_sequence_verdict(A, B, 50).unwrap();
    assert_eq!(ab.direction, Direction::StrictlyDecreasing);
    assert_eq!(ab.checked_up_to, 50);
    assert_eq!(ab.first_violation, None);

    let cd = ratio_sequence_verdict(C, D, 50).unwrap();
    assert_eq!(cd.direction, Direction::StrictlyIncreasing);
    assert_eq!(cd.first_violation, None);

    // a constant ratio is not strictly monotone
    let bb = ratio_sequence_verdict(B, B, 10).unwrap();
    assert_eq!(bb.direction, Direction::NotMonotone);
    assert_eq!(bb.first_violation, Some(1));

    assert!(matches!(
        ratio_sequence_verdict(A, B, 1),
        Err(Error::Domain(_))
    ));
}

#[test]
fn verdicts_hold_far_into_the_tail() {
    // the ratio steps shrink like 4^-n, below f64 resolution long before n = 120
    assert_eq!(
        ratio_sequence_verdict(A, B, 120).unwrap().direction,
        Direction::StrictlyDecreasing
    );
    assert_eq!(
        ratio_sequence_verdict(C, D, 120).unwrap().direction,
        Direction::StrictlyIncreasing
    );
}

/// Natural logarithm of a positive big integer of any size.
fn ln_big(v: &num_bigint::BigInt) -> f64 {
    let shift = v.bits().saturating_sub(64);
    (v >> shift as usize).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[test]
fn truncated_quotients_match_the_closed_forms() {
    let mut o = Oracle::new();
    for &t in &[1e-4, 0.01, 0.1, 0.25, 0.5, 0.8, 0.88] {
        let hq = truncated_quotient(A, B, t, DEFAULT_TERMS).unwrap();
        let want = oracle_phi_hq(&mut o, t);
        assert!(rel_err(&o, hq, &want) < 1e-12, "A/B at {t}");
        let hc = truncated_quotient(C, D, t, DEFAULT_TERMS).unwrap();
        let want = oracle_phi_hc(&mut o, t);
        assert!(rel_err(&o, hc, &want) < 1e-12, "C/D at {t}");
    }
}

#[test]
fn truncated_quotient_limits_and_domain() {
    assert!((truncated_quotient(A, B, 0.0, DEFAULT_TERMS).unwrap() - 2.0 / 9.0).abs() < 1e-16);
    assert!((truncated_quotient(C, D, 0.0, DEFAULT_TERMS).unwrap() - 5.0 / 12.0).abs() < 1e-16);
    assert!(matches!(
        truncated_quotient(A, B, 1.5, 10),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        truncated_quotient(A, B, 0.1, 0),
        Err(Error::Domain(_))
    ));
    // more terms than the cached table still works
    let long = truncated_quotient(A, B, 0.5, 120).unwrap();
    let short = truncated_quotient(A, B, 0.5, DEFAULT_TERMS).unwrap();
    assert!((long - short).abs() < 1e-15);
}

#[test]
fn p0_root() {
    let p0 = solve_p0(1e-12).unwrap();
    assert!((p0_lhs(p0) - p0_target()).abs() < 1e-12);
    assert!((p0 - 1.843_520_518_431).abs() < 1e-11);
    let tight = solve_p0(1e-15).unwrap();
    // 1.84352051843114045... from a 50-digit solve
    assert!((tight - 1.843_520_518_431_140_5).abs() < 1e-14);
    assert!(matches!(solve_p0(0.0), Err(Error::Domain(_))));
}

#[test]
fn p0_bracket_signs_against_the_oracle() {
    let mut o = Oracle::new();
    // (1 + p)^(1/p) at p = 1 and p = 3 versus 2 ln(1 + sqrt 2)
    let two = o.int(2);
    let root2 = o.sqrt(&two);
    let l = o.ln(&o.add(&o.int(1), &root2));
    let target = o.add(&l, &l).f64();
    assert!(2.0 > target && 4f64.powf(1.0 / 3.0) < target);
    assert!((p0_target() - target).abs() < 1e-15);
}

proptest! {
    #[test]
    fn log_magnitudes_track_exact_values(n in 1u32..70, k in 0usize..4) {
        let kind = CoefficientKind::ALL[k];
        let e = exact(kind, n);
        let ln_e = ln_big(e.numer()) - ln_big(e.denom());
        let l = log_coefficient(kind, n).unwrap();
        prop_assert!((l - ln_e).abs() < 1e-12 * ln_e.abs().max(1.0));
    }

    #[test]
    fn ratio_steps_keep_their_sign(n in 1u32..60) {
        prop_assert!(ab_ratio_step_closed_form(n) < BigRational::from_integer(0.into()));
        let next = cd_ratio_closed_form(n + 1);
        prop_assert!(next > cd_ratio_closed_form(n));
    }
}
