use proptest::prelude::*;
use zerodp::*;

/// Valid `(delta, sensitivity, alpha)`.
fn palpha_params() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.001f64..0.999, 0.01f64..100.0, 0.0f64..0.999).prop_map(|(delta, sens, frac)| (delta, sens, frac * delta))
}

/// Histogram of `P_alpha` with exact bin masses taken from the CDF.
fn exact_histogram(d: &PAlphaDist, bins: usize) -> Histogram {
    let reach = d.half_width() + d.sensitivity();
    let w = 2.0 * reach / bins as f64;
    let masses: Vec<f64> = (0..bins)
        .map(|i| {
            let a = -reach + w * i as f64;
            // continuous part only: subtract the atom where the bin holds zero
            let atom = if a <= 0.0 && 0.0 < a + w { d.alpha() } else { 0.0 };
            (d.cdf(a + w) - d.cdf(a) - atom).max(0.0)
        })
        .collect();
    let total: f64 = masses.iter().sum();
    let masses = masses.iter().map(|m| m * (1.0 - d.alpha()) / total).collect();
    Histogram::new(-reach, reach, masses, d.alpha()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn total_mass_is_one((delta, sens, alpha) in palpha_params()) {
        let d = PAlphaDist::new(delta, sens, alpha).unwrap();
        prop_assert!((d.alpha() + 2.0 * d.half_width() * d.density() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn central_interval_carries_exactly_delta((delta, sens, alpha) in palpha_params()) {
        let d = PAlphaDist::new(delta, sens, alpha).unwrap();
        let p = d.interval_prob(-sens / 2.0, sens / 2.0).unwrap();
        prop_assert!((p - delta).abs() <= 1e-12);
        prop_assert!(check_dp(&d, delta));
        prop_assert!((analytic_delta_palpha(&d).delta_hat - delta).abs() <= 1e-12);
    }

    #[test]
    fn cdf_is_symmetric((delta, sens, alpha) in palpha_params(), t in -1.5f64..1.5) {
        let d = PAlphaDist::new(delta, sens, alpha).unwrap();
        let x = t * d.half_width();
        let atom = if x == 0.0 { d.alpha() } else { 0.0 };
        prop_assert!((d.cdf(x) + d.cdf(-x) - 1.0 - atom).abs() <= 1e-12);
    }

    #[test]
    fn cdf_is_monotone_and_bounded((delta, sens, alpha) in palpha_params(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let d = PAlphaDist::new(delta, sens, alpha).unwrap();
        let (x, y) = (a.min(b) * d.half_width(), a.max(b) * d.half_width());
        prop_assert!(d.cdf(x) <= d.cdf(y));
        prop_assert!((0.0..=1.0).contains(&d.cdf(x)));
        prop_assert_eq!(d.cdf(-d.half_width() * 1.000001), 0.0);
        prop_assert_eq!(d.cdf(d.half_width()), 1.0);
    }

    #[test]
    fn json_round_trip((delta, sens, alpha) in palpha_params()) {
        let d = PAlphaDist::new(delta, sens, alpha).unwrap();
        let back: PAlphaDist = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert_eq!(back, d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_form_is_optimal_within_family(delta in 0.01f64..0.99, n in 1.0f64..5.0, seed in any::<u64>()) {
        use rand::Rng;
        let best = min_cost_ln(delta, 1.0, n).unwrap();
        let alpha_star = optimal_alpha_ln(delta, n).unwrap();
        let at_star = PAlphaDist::new(delta, 1.0, alpha_star).unwrap().expected_cost_ln(n).unwrap();
        prop_assert!((at_star - best).abs() <= 1e-10 * best.max(1.0));
        let mut rng = seeded_rng(seed, 0);
        for _ in 0..50 {
            let alpha = rng.random::<f64>() * delta * 0.999;
            let cost = PAlphaDist::new(delta, 1.0, alpha).unwrap().expected_cost_ln(n).unwrap();
            prop_assert!(best <= cost + 1e-10 * best.max(1.0), "alpha {} cost {} < {}", alpha, cost, best);
            if (alpha - alpha_star).abs() > 1e-3 {
                prop_assert!(cost > best);
            }
        }
    }

    #[test]
    fn generic_cost_matches_ln((delta, sens, alpha) in palpha_params(), idx in 0usize..5) {
        let n = [1.0, 1.5, 2.0, 3.0, 5.0][idx];
        let sens = sens.min(10.0);
        let d = PAlphaDist::new(delta, sens, alpha).unwrap();
        let closed = d.expected_cost_ln(n).unwrap();
        let tol = 1e-10 * closed.max(1.0);
        let generic = expected_cost_generic(&d, &CostSpec::generic("pow", move |x: f64| x.abs().powf(n)), tol).unwrap();
        prop_assert!((generic - closed).abs() <= tol.max(1e-10) * 4.0, "{} vs {}", generic, closed);
        let via_ln = expected_cost_generic(&d, &CostSpec::ln(n).unwrap(), tol).unwrap();
        prop_assert!((via_ln - closed).abs() <= tol.max(1e-10) * 4.0);
    }

    #[test]
    fn scale_law(delta in 0.01f64..0.99, n in 1.0f64..4.0, idx in 0usize..3) {
        let c = [0.5, 2.0, 10.0][idx];
        let base = min_cost_ln(delta, 1.0, n).unwrap();
        let scaled = min_cost_ln(delta, c, n).unwrap();
        prop_assert!((scaled - c.powf(n) * base).abs() <= 1e-12 * scaled);
    }

    #[test]
    fn symmetrization_never_increases_leakage(
        masses in prop::collection::vec(0.0f64..1.0, 41..120),
        atom in 0.0f64..0.5,
        sens in 0.05f64..1.0,
    ) {
        let total: f64 = masses.iter().sum::<f64>().max(1e-9);
        let masses: Vec<f64> = masses.iter().map(|m| m / total * (1.0 - atom)).collect();
        let h = Histogram::new(-1.0, 1.0, masses, atom).unwrap();
        let s = h.symmetrize().unwrap();
        // an even bin count puts the origin on an edge; the unmirrored atom may move up to `atom`
        let slack = if h.bins().is_multiple_of(2) { atom } else { 0.0 } + 1e-12;
        let before = h.shift_profile(sens, 16).unwrap();
        let after = s.shift_profile(sens, 16).unwrap();
        for ((_, b), (_, a)) in before.iter().zip(&after) {
            prop_assert!(*a <= *b + slack, "{} > {}", a, b);
        }
        let mass: f64 = s.masses().iter().sum::<f64>() + s.atom_at_zero();
        prop_assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_palpha_histogram_audit((delta, sens, alpha) in palpha_params()) {
        let d = PAlphaDist::new(delta, sens, alpha).unwrap();
        let h = exact_histogram(&d, 1001);
        let profile = h.shift_profile(sens, 64).unwrap();
        // monotone in the shift
        for w in profile.windows(2) {
            prop_assert!(w[1].1 >= w[0].1 - 1e-12);
        }
        // δ̂(kw) = alpha + density * kw, with kw within half a bin of Δ
        let r = h.audit(sens, 64, 0).unwrap();
        let slack = d.density() * h.bin_width() + 1e-9;
        prop_assert!((r.delta_hat - delta).abs() <= slack, "{} vs {}", r.delta_hat, delta);
        prop_assert!(r.worst_shift <= sens && r.worst_shift >= sens * (1.0 - 1.0 / 64.0) - 1e-12);
    }

    #[test]
    fn histogram_csv_round_trip(masses in prop::collection::vec(0.0f64..1.0, 1..60), atom in 0.0f64..1.0, reach in 0.1f64..50.0) {
        let total: f64 = masses.iter().sum::<f64>().max(1e-9);
        let masses: Vec<f64> = masses.iter().map(|m| m / total * (1.0 - atom)).collect();
        let h = Histogram::new(-reach, reach, masses, atom).unwrap();
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let back = Histogram::read_csv(&buf[..]).unwrap();
        prop_assert_eq!(back.bins(), h.bins());
        prop_assert!((back.atom_at_zero() - h.atom_at_zero()).abs() <= 5e-12 * h.atom_at_zero());
        for (a, b) in back.masses().iter().zip(h.masses()) {
            prop_assert!((a - b).abs() <= 5e-12 * b);
        }
    }
}

#[test]
fn branch_continuity_at_onset() {
    for n in [1.0, 2.0, 3.0] {
        for sens in [0.5, 1.0, 4.0] {
            let onset = n / (n + 1.0);
            let below = min_cost_ln(onset - 1e-9, sens, n).unwrap();
            let above = min_cost_ln(onset + 1e-9, sens, n).unwrap();
            assert!((below - above).abs() <= 1e-6 * f64::powf(sens, n));
        }
    }
}

#[test]
fn gaussian_meets_its_target() {
    for i in 1..1000 {
        let delta = i as f64 / 1000.0;
        let g = calibrate_gaussian(delta, 1.0).unwrap();
        let r = analytic_delta_gaussian(g.sigma(), 1.0).unwrap();
        assert!(r.delta_hat <= delta, "{delta}: {}", r.delta_hat);
    }
}

#[test]
fn ratio_identities_and_low_privacy_limit() {
    for i in 1..=500 {
        let delta = i as f64 / 1000.0;
        let c = compare(delta, 1.0, 1.0, Convention::PaperSigma).unwrap();
        assert!((c.ratio - 0.5).abs() < 1e-12);
    }
    for i in 1..=666 {
        let delta = i as f64 / 1000.0;
        let c = compare(delta, 1.0, 2.0, Convention::PaperSigma).unwrap();
        assert!((c.ratio - 1.0 / 3.0).abs() < 1e-12);
    }
    // delta -> 1: Gaussian costs -> Δ/2, Δ²/4; optimal costs ∝ (1 - delta)
    let near = compare(0.999_999, 2.0, 1.0, Convention::PaperSigma).unwrap();
    assert!((near.gaussian_cost - 1.0).abs() < 1e-5);
    assert!((near.optimal_cost / (1.0 - 0.999_999) - 2.0).abs() < 1e-6);
    let near = compare(0.999_999, 2.0, 2.0, Convention::PaperSigma).unwrap();
    assert!((near.gaussian_cost - 1.0).abs() < 1e-5);
    assert!((near.optimal_cost / (1.0 - 0.999_999) - 9.0 / 16.0 * 4.0).abs() < 1e-6);
}

#[test]
fn curve_csv_round_trip() {
    for n in [1.0, 2.0, 1.5] {
        let t = CurveTable::build(n, 1.7, 0.01, 0.99, 0.01, Convention::PaperSigma).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = CurveTable::read_csv(&buf[..], n, 1.7).unwrap();
        assert_eq!(back.rows.len(), t.rows.len());
        for (a, b) in back.rows.iter().zip(&t.rows) {
            for (x, y) in [(a.delta, b.delta), (a.optimal_cost, b.optimal_cost), (a.gaussian_cost, b.gaussian_cost), (a.ratio, b.ratio)] {
                assert!((x - y).abs() <= 5e-12 * y.abs(), "{x} vs {y}");
            }
        }
        for r in &t.rows {
            assert!((r.ratio - r.optimal_cost / r.gaussian_cost).abs() <= 1e-12);
        }
    }
}
