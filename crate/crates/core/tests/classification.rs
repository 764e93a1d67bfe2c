use epifront_core::classify::{
    classify_analytic, critical_length, simulate_and_classify, DetectionCriteria, Verdict,
};
use epifront_core::config::example_params;
use epifront_core::eigen::principal_eigenvalue_monodromy;
use epifront_core::model::{ImpulseFn, InitialData, ModelParams};
use epifront_core::solver::{run, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn coarse() -> SolverConfig {
    SolverConfig::with_resolution(128, 400)
}

#[test]
fn critical_length_matches_the_determinant_root() {
    let p = example_params(15.0, ImpulseFn::Identity);
    // det B(x) = 0 reduces to 0.04 x^2 + 0.13 x - 0.02 = 0 for these coefficients.
    let x = (-0.13 + (0.13f64 * 0.13 + 4.0 * 0.04 * 0.02).sqrt()) / (2.0 * 0.04);
    let expected = std::f64::consts::PI / x.sqrt();
    let l = critical_length(&p, 1e-10).unwrap();
    assert!((l - expected).abs() < 1e-8, "{l} vs {expected}");
    assert!(principal_eigenvalue_monodromy(&p, l).unwrap().lambda.abs() < 1e-9);
}

#[test]
fn simulation_agrees_with_sharp_analytic_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let init = InitialData::cos_quarter(0.3, 0.1);
    let criteria = DetectionCriteria {
        l_max: 50.0,
        ..DetectionCriteria::default()
    };
    let (mut vanish, mut spread) = (0, 0);
    for _ in 0..10_000 {
        if vanish + spread == 10 {
            break;
        }
        let rho: f64 = rng.gen_range(0.01..1.0);
        let h0: f64 = rng.gen_range(1.0..8.0);
        let p = ModelParams {
            h0,
            ..example_params(rng.gen_range(1.0..15.0), ImpulseFn::Linear { rho })
        };
        let a = classify_analytic(&p).unwrap();
        let wanted = if vanish < 5 {
            Verdict::Vanishing
        } else {
            Verdict::Spreading
        };
        let clear = match a.verdict {
            Verdict::Vanishing => a.lambda_infinity >= 0.01,
            _ => a.lambda_h0 <= -0.01,
        };
        if a.verdict != wanted || !clear {
            continue;
        }
        let cfg = SolverConfig::with_resolution(64, 200);
        let (c, _) = simulate_and_classify(&p, &init, &cfg, 400.0, &criteria).unwrap();
        assert_eq!(
            c.verdict, a.verdict,
            "rho = {rho}, h0 = {h0}, evidence {:?}",
            c.simulation
        );
        match a.verdict {
            Verdict::Vanishing => vanish += 1,
            _ => spread += 1,
        }
    }
    assert_eq!(vanish + spread, 10);
}

#[test]
fn front_reach_grows_with_expansion_capacity() {
    let init = InitialData::cos_quarter(0.3, 0.1);
    let mut prev = 0.0;
    for mu2 in [1.0, 2.0, 5.0, 10.0] {
        let p = example_params(mu2, ImpulseFn::Identity);
        let h = run(&p, &init, &coarse(), 50.0, &[]).unwrap().final_h();
        assert!(h >= prev, "mu2 = {mu2}: {h} < {prev}");
        prev = h;
    }
}

#[test]
fn verdicts_are_monotone_in_expansion_capacity() {
    let init = InitialData::cos_quarter(0.3, 0.1);
    let criteria = DetectionCriteria::default();
    let rank = |v: Verdict| match v {
        Verdict::Vanishing => 0,
        Verdict::Undecided | Verdict::ThresholdDependent => 1,
        Verdict::Spreading => 2,
    };
    let mut prev = 0;
    for mu2 in [1.0, 2.0, 5.0, 10.0] {
        let mut p = example_params(mu2, ImpulseFn::Identity);
        p.mu1 = 0.0;
        let (c, _) = simulate_and_classify(&p, &init, &coarse(), 200.0, &criteria).unwrap();
        assert!(rank(c.verdict) >= prev, "mu2 = {mu2}: {}", c.verdict);
        prev = rank(c.verdict);
    }
}
