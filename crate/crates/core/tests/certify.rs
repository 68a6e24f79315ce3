use means_lab::certify::{
    neuman_verdict, recover_constant, recover_constant_detailed, sharpness_probe, verify_bound,
    verify_bound_at_scale, verify_chain, verify_corpus, Attained, Bound, BoundClaim, Mode,
    Objective, SharpAt, Side, DEFAULT_GRID,
};
use means_lab::ratio::{phi_hq, Endpoint, RatioFunctionKind, SharpConstants};
use means_lab::{evaluate_mean, pair_from_gap, MeanKind, NormalizedGap, PositivePair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_claims() -> Vec<BoundClaim> {
    Bound::ALL
        .iter()
        .flat_map(|&b| [Side::Lower, Side::Upper].map(|s| BoundClaim::sharp(b, s)))
        .collect()
}

#[test]
fn sharp_claims_hold_on_the_default_grid() {
    for claim in all_claims() {
        let r = verify_bound(&claim, DEFAULT_GRID).unwrap();
        assert!(r.holds, "{}: {r:?}", claim.id);
        assert!(r.min_margin > 0.0);
        assert_eq!(r.violations, 0);
        assert_eq!(r.grid_size, DEFAULT_GRID);
    }
}

#[test]
fn degenerate_weight_reduces_to_the_chain() {
    // w = 0: the combination is Q itself, and M < Q
    let claim = BoundClaim::with_weight(Bound::HarmonicQuadratic, Side::Upper, 0.0).unwrap();
    let r = verify_bound(&claim, 1000).unwrap();
    assert!(r.holds);
    let x = r.worst_gap;
    let gap = NormalizedGap::new(x).unwrap();
    let q = means_lab::mean_excess(MeanKind::Quadratic, gap).unwrap();
    let m = means_lab::mean_excess(MeanKind::NeumanSandor, gap).unwrap();
    assert!((r.min_margin - (q - m)).abs() < 1e-18);
}

#[test]
fn weights_past_the_sharp_constant_fail_verification() {
    let claim = BoundClaim::with_weight(Bound::HarmonicQuadratic, Side::Lower, 0.2210).unwrap();
    let r = verify_bound(&claim, DEFAULT_GRID).unwrap();
    assert!(!r.holds);
    assert!(r.violations > 0 && r.min_margin < 0.0);
    assert!(r.worst_gap < 0.2);
}

#[test]
fn sharpness_duality() {
    for claim in all_claims() {
        let probe = sharpness_probe(&claim, 1e-3).unwrap();
        assert!(probe.violated, "{}: {probe:?}", claim.id);
        assert!(probe.witness_margin < 0.0);
        let x = probe.witness_gap.value();
        match claim.sharp_at {
            SharpAt::GapZero => assert!(x < 0.2, "{}: witness gap {x}", claim.id),
            SharpAt::GapOne => assert!(x > 0.95, "{}: witness gap {x}", claim.id),
        }
        // the witness also fails when the combination is evaluated on the pair itself
        let perturbed = claim.reweighted(probe.perturbed_weight).unwrap();
        let direct = perturbed.combination.value(probe.witness).unwrap();
        let m = evaluate_mean(MeanKind::NeumanSandor, probe.witness).unwrap();
        let a = probe.witness.arithmetic();
        if probe.witness_margin.abs() > 1e-12 {
            let signed = match claim.relation {
                means_lab::certify::Relation::LessThanM => m - direct,
                means_lab::certify::Relation::GreaterThanM => direct - m,
            };
            assert!(signed / a < 0.0, "{}", claim.id);
        }
    }
}

#[test]
fn sharpness_witness_examples() {
    let hq = sharpness_probe(
        &BoundClaim::sharp(Bound::HarmonicQuadratic, Side::Lower),
        1e-3,
    )
    .unwrap();
    assert!(hq.violated && hq.witness_gap.value() < 0.2);
    assert!((hq.perturbed_weight - (2.0 / 9.0 - 1e-3)).abs() < 1e-16);
    let hc = sharpness_probe(
        &BoundClaim::sharp(Bound::HarmonicContraharmonic, Side::Upper),
        1e-3,
    )
    .unwrap();
    assert!(hc.violated && hc.witness_gap.value() < 0.2);
}

#[test]
fn scale_invariance() {
    for claim in all_claims() {
        let unit = verify_bound_at_scale(&claim, 2000, 1.0).unwrap();
        let big = verify_bound_at_scale(&claim, 2000, 1e3).unwrap();
        assert!(((unit.min_margin - big.min_margin) / unit.min_margin).abs() <= 1e-12);
        assert_eq!(unit.worst_gap, big.worst_gap);
        assert!((big.worst_pair.hi() / unit.worst_pair.hi() - 1e3).abs() < 1e-9);
        // the worst pair at scale 1e3 re-evaluated directly gives the same normalized margin
        let direct = |p: PositivePair| {
            let m = evaluate_mean(MeanKind::NeumanSandor, p).unwrap();
            let c = claim.combination.value(p).unwrap();
            (m - c) / p.arithmetic()
        };
        if unit.min_margin > 1e-6 {
            let (u, b) = (direct(unit.worst_pair), direct(big.worst_pair));
            assert!(((u - b) / u).abs() < 1e-9, "{}", claim.id);
        }
    }
}

#[test]
fn ratio_and_margin_signs_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..10_000 {
        let w: f64 = rng.gen_range(0.15..0.3);
        let x: f64 = rng.gen_range(1e-3..0.999);
        let phi = phi_hq(x.asinh()).unwrap();
        if (w - phi).abs() < 1e-9 {
            continue;
        }
        let claim = BoundClaim::with_weight(Bound::HarmonicQuadratic, Side::Lower, w).unwrap();
        let margin = claim.margin(NormalizedGap::new(x).unwrap()).unwrap();
        // M - (wH + (1-w)Q) = (Q - H)(w - phi)
        assert_eq!(margin > 0.0, w > phi, "w={w} x={x}");
        checked += 1;
    }
    assert!(checked > 9_000);
}

#[test]
fn recovered_constants_match_the_closed_forms() {
    let c = SharpConstants::get();
    let cases = [
        (RatioFunctionKind::PhiHQ, Objective::Supremum, c.alpha1),
        (RatioFunctionKind::PhiHQ, Objective::Infimum, c.beta1),
        (RatioFunctionKind::RatioGQ, Objective::Supremum, c.alpha2),
        (RatioFunctionKind::RatioGQ, Objective::Infimum, c.beta2),
        (RatioFunctionKind::PhiHC, Objective::Supremum, c.alpha3),
        (RatioFunctionKind::PhiHC, Objective::Infimum, c.beta3),
    ];
    for (kind, objective, want) in cases {
        let got = recover_constant(kind, objective, 1e-12).unwrap();
        assert!(
            (got - want).abs() < 1e-9,
            "{kind:?} {objective:?}: {got} vs {want}"
        );
        let detail = recover_constant_detailed(kind, objective, 1e-12).unwrap();
        assert!(matches!(detail.attained, Attained::Limit(_)));
        assert!(!detail.interior_exceeds_limits);
        let end = match detail.attained {
            Attained::Limit(end) => end,
            Attained::Interior(_) => unreachable!(),
        };
        let est = match end {
            Endpoint::Lower => detail.extrapolated_limits.0,
            Endpoint::Upper => detail.extrapolated_limits.1,
        };
        assert!(
            (est - want).abs() < 1e-9,
            "{kind:?} {objective:?}: extrapolated {est}"
        );
        // the best interior value approaches the limit from inside
        let gap = match objective {
            Objective::Supremum => want - detail.best_interior,
            Objective::Infimum => detail.best_interior - want,
        };
        assert!(gap > 0.0 && gap < 1e-2, "{kind:?} {objective:?}: {gap}");
    }
}

#[test]
fn chain_holds_on_seeded_samples() {
    let r = verify_chain(100_000, 42).unwrap();
    assert!(r.holds, "{r:?}");
    assert_eq!(r.seed, Some(42));
    assert_eq!(r.grid_size, 100_000);
    assert_eq!(verify_chain(500, 7).unwrap(), verify_chain(500, 7).unwrap());
}

#[test]
fn chain_is_ordered_at_one_two() {
    let pair = PositivePair::new(1.0, 2.0).unwrap();
    let values: Vec<f64> = MeanKind::CHAIN
        .iter()
        .map(|&k| evaluate_mean(k, pair).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    let diag = pair_from_gap(NormalizedGap::new(0.0).unwrap(), 1.0).unwrap();
    assert!(MeanKind::CHAIN
        .iter()
        .all(|&k| evaluate_mean(k, diag).unwrap() == 1.0));
}

#[test]
fn corpus_claims() {
    let verdicts = verify_corpus(10_000, 2024).unwrap();
    for v in &verdicts {
        if v.mode == Mode::Required {
            assert!(v.report.holds, "{}: {:?}", v.id, v.report);
        }
        assert_eq!(v.report.grid_size, 10_000);
    }
    let ids: Vec<&str> = verdicts.iter().map(|v| v.id).collect();
    for id in ["chain", "ky-fan", "product", "square", "lp-sandwich"] {
        assert!(ids.contains(&id));
    }
    let n = neuman_verdict(&verdicts);
    assert_eq!(n.surviving, vec![0]);
    // the second published set keeps its lower half but loses the upper half near the diagonal
    assert!(n.sets[1].2 && !n.sets[1].3);
    let upper = verdicts
        .iter()
        .find(|v| v.id == "neuman-qa-2-upper")
        .unwrap();
    assert!(upper.report.min_margin < 0.0 && upper.report.violations > 0);
}
