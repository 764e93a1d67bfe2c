use epifront_core::config::example_params;
use epifront_core::model::{ImpulseFn, InitialData};
use epifront_core::solver::{run, SolverConfig};
use epifront_core::Error;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetric_data_give_symmetric_monotone_fronts(
        a_u in 0.01..3.0f64,
        a_v in 0.01..1.0f64,
        mu1 in 0.0..12.0f64,
        mu2 in 0.0..12.0f64,
        rho in 0.1..1.0f64,
    ) {
        let mut p = example_params(mu2, ImpulseFn::Linear { rho });
        p.mu1 = mu1;
        let cfg = SolverConfig::with_resolution(64, 200);
        let s = run(&p, &InitialData::cos_quarter(a_u, a_v), &cfg, 2.0 * p.tau, &[p.tau]).unwrap();
        for i in 0..s.len() {
            prop_assert!((s.g[i] + s.h[i]).abs() <= 1e-10 * s.h[i]);
            prop_assert!(s.sup_u[i] >= 0.0 && s.sup_v[i] >= 0.0);
        }
        prop_assert!(s.h.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(s.g.windows(2).all(|w| w[1] <= w[0]));
        let snap = &s.snapshots[0];
        prop_assert!(snap.u.iter().chain(&snap.v).all(|&x| x >= 0.0));
        prop_assert_eq!(snap.u[0], 0.0);
        prop_assert_eq!(*snap.v.last().unwrap(), 0.0);
    }
}

#[test]
fn frozen_fronts_without_expansion_capacity() {
    let mut p = example_params(0.0, ImpulseFn::Identity);
    p.mu1 = 0.0;
    let s = run(
        &p,
        &InitialData::cos_quarter(0.3, 0.1),
        &SolverConfig::with_resolution(64, 100),
        20.0,
        &[],
    )
    .unwrap();
    assert!(s.h.iter().all(|&h| h == p.h0));
    assert!(s.g.iter().all(|&g| g == -p.h0));
}

#[test]
fn zero_data_stay_zero() {
    let p = example_params(15.0, ImpulseFn::Identity);
    let init = InitialData::cos_quarter(1e-300, 1e-300).scaled(0.0);
    let s = run(&p, &init, &SolverConfig::with_resolution(32, 50), 10.0, &[]).unwrap();
    assert!(s.sup_u.iter().chain(&s.sup_v).all(|&x| x == 0.0));
    assert_eq!(s.final_h(), p.h0);
}

#[test]
fn coarse_time_steps_trip_the_courant_guard() {
    let p = example_params(15.0, ImpulseFn::Identity);
    let cfg = SolverConfig {
        max_courant: 1e-3,
        ..SolverConfig::with_resolution(64, 10)
    };
    let e = run(&p, &InitialData::cos_quarter(0.3, 0.1), &cfg, 5.0, &[]).unwrap_err();
    assert!(matches!(e, Error::Stability(_)), "{e}");
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn shorter_runs_are_prefixes_of_longer_runs() {
    let p = example_params(15.0, ImpulseFn::Identity);
    let cfg = SolverConfig::with_resolution(64, 100);
    let init = InitialData::cos_quarter(0.3, 0.1);
    let long = run(&p, &init, &cfg, 20.0, &[]).unwrap();
    let short = run(&p, &init, &cfg, 10.0, &[]).unwrap();
    let prefix = long.prefix(short.len());
    assert_eq!(prefix.t, short.t);
    assert_eq!(prefix.h, short.h);
    assert_eq!(prefix.sup_u, short.sup_u);
}

#[test]
fn stronger_reset_slows_the_front() {
    let init = InitialData::cos_quarter(0.3, 0.1);
    let cfg = SolverConfig::with_resolution(64, 200);
    let h = |rho: f64| {
        let p = example_params(15.0, ImpulseFn::Linear { rho });
        run(&p, &init, &cfg, 30.0, &[]).unwrap().final_h()
    };
    let (weak, strong) = (h(1.0), h(0.2));
    assert!(strong < weak, "{strong} vs {weak}");
}
