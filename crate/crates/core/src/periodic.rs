//! Periodic attractors of the frozen-domain problems.
//!
//! Both routines iterate the period map (one impulse followed by one period
//! of evolution) from the constant supersolution `(C2, C3)` until successive
//! period-start states agree. Orbits that decay below the tolerance are
//! reported as the zero orbit.

use serde::Serialize;

use crate::eigen::principal_eigenvalue_monodromy;
use crate::error::{Error, Result};
use crate::model::{density_bounds, ModelParams};
use crate::solver::{impulse_in_place, FrontUpdate, SimState, SolverConfig, Stepper};

/// RK4 substeps per period for the homogeneous system.
pub const ODE_SUBSTEPS: usize = 10_000;
/// Number of time samples stored per orbit.
pub const ORBIT_SAMPLES: usize = 101;
/// Time samples stored for a fixed-domain orbit.
pub const FIELD_SAMPLES: usize = 11;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_ODE_MAX_PERIODS: usize = 100_000;
pub const DEFAULT_PDE_MAX_PERIODS: usize = 10_000;
/// Steps per period used by [`fixed_domain_periodic`].
pub const DEFAULT_PDE_STEPS_PER_PERIOD: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    Zero,
    Positive,
}

/// One period of a converged orbit.
///
/// `t[0] = 0` holds the state just after the reset and `t[last] = tau` the
/// state just before the next one, which is also the fixed point of the
/// period map. For the homogeneous system `x` is empty and each sample holds
/// a single value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicOrbit {
    pub kind: OrbitKind,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    /// Sup-norm defect of the last period-map application.
    pub residual: f64,
    pub periods: usize,
    /// `max(sup u, sup v)` at each period start, starting value included.
    pub sup_history: Vec<f64>,
    /// Empirical contraction factor of the last iterations.
    pub rate: Option<f64>,
}

impl PeriodicOrbit {
    pub fn is_positive(&self) -> bool {
        self.kind == OrbitKind::Positive
    }

    /// The period-map fixed point `(u, v)` at `t = tau`.
    pub fn fixed_point(&self) -> (&[f64], &[f64]) {
        let last = self.t.len() - 1;
        (&self.u[last], &self.v[last])
    }

    pub fn is_homogeneous(&self) -> bool {
        self.x.is_empty()
    }
}

/// Outcome of the fixed-point loop shared by both problems.
struct Iteration {
    kind: OrbitKind,
    residual: f64,
    periods: usize,
    sup_history: Vec<f64>,
    rate: Option<f64>,
}

/// Runs `advance` (one period map application) until the period-start state
/// settles or decays below `tol`.
fn iterate<S, F>(
    state: &mut S,
    norm: impl Fn(&S) -> f64,
    diff: impl Fn(&S, &S) -> f64,
    mut advance: F,
    tol: f64,
    max_periods: usize,
    context: &str,
) -> Result<Iteration>
where
    S: Clone,
    F: FnMut(&mut S) -> Result<()>,
{
    let mut sup_history = vec![norm(state)];
    let mut prev_defect: Option<f64> = None;
    let mut defect = f64::INFINITY;
    for period in 1..=max_periods {
        let old = state.clone();
        advance(state)?;
        defect = diff(state, &old);
        let size = norm(state);
        sup_history.push(size);
        let rate = prev_defect.filter(|&d| d > 0.0).map(|d| defect / d);
        prev_defect = Some(defect);
        if size < tol {
            return Ok(Iteration {
                kind: OrbitKind::Zero,
                residual: defect,
                periods: period,
                sup_history,
                rate,
            });
        }
        if defect < tol {
            // A slow geometric decay also has small successive differences;
            // keep going while the remaining tail could still reach zero.
            let still_decaying = match rate {
                Some(r) if r < 1.0 => defect * r / (1.0 - r) >= 0.5 * size,
                _ => false,
            };
            if !still_decaying {
                return Ok(Iteration {
                    kind: OrbitKind::Positive,
                    residual: defect,
                    periods: period,
                    sup_history,
                    rate,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        context: context.to_string(),
        iterations: max_periods,
        defect,
    })
}

fn validate_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

fn supersolution_start(params: &ModelParams) -> Result<(f64, f64)> {
    let b = density_bounds(params, 0.0, 0.0).ok_or_else(|| {
        Error::Precondition("growth slope violates the sublinearity bound".into())
    })?;
    Ok((b.c2, b.c3))
}

/// Right-hand side of the homogeneous system.
fn ode_rhs(p: &ModelParams, u: f64, v: f64) -> (f64, f64) {
    (p.a12 * v - p.a11 * u, p.growth.value(u) - p.a22 * v)
}

/// Integrates the homogeneous system over `duration` with `steps` RK4 steps.
fn rk4(p: &ModelParams, mut u: f64, mut v: f64, duration: f64, steps: usize) -> (f64, f64) {
    let h = duration / steps as f64;
    for _ in 0..steps {
        let (k1u, k1v) = ode_rhs(p, u, v);
        let (k2u, k2v) = ode_rhs(p, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        let (k3u, k3v) = ode_rhs(p, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        let (k4u, k4v) = ode_rhs(p, u + h * k3u, v + h * k3v);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    (u, v)
}

/// Periodic orbit of the spatially homogeneous impulsive system, started from
/// the supersolution `(C2, C3)`.
pub fn ode_periodic_orbit(
    params: &ModelParams,
    tol: f64,
    max_periods: usize,
) -> Result<PeriodicOrbit> {
    params.validate()?;
    let start = supersolution_start(params)?;
    ode_periodic_orbit_from(params, start, tol, max_periods)
}

/// As [`ode_periodic_orbit`] from an arbitrary non-negative period-start state.
pub fn ode_periodic_orbit_from(
    params: &ModelParams,
    start: (f64, f64),
    tol: f64,
    max_periods: usize,
) -> Result<PeriodicOrbit> {
    validate_tol(tol)?;
    if !(start.0 >= 0.0 && start.1 >= 0.0) {
        return Err(Error::Domain("start state must be non-negative".into()));
    }
    let p = *params;
    let mut state = [start.0, start.1];
    let it = iterate(
        &mut state,
        |s| s[0].abs().max(s[1].abs()),
        |a, b| (a[0] - b[0]).abs().max((a[1] - b[1]).abs()),
        |s| {
            let (u, v) = rk4(&p, p.impulse.value(s[0]), s[1], p.tau, ODE_SUBSTEPS);
            *s = [u, v];
            Ok(())
        },
        tol,
        max_periods,
        "homogeneous period map",
    )?;

    let per_sample = ODE_SUBSTEPS / (ORBIT_SAMPLES - 1);
    let dt_sample = p.tau / (ORBIT_SAMPLES - 1) as f64;
    let (mut u, mut v) = match it.kind {
        OrbitKind::Zero => (0.0, 0.0),
        OrbitKind::Positive => (p.impulse.value(state[0]), state[1]),
    };
    let mut t = Vec::with_capacity(ORBIT_SAMPLES);
    let mut us = Vec::with_capacity(ORBIT_SAMPLES);
    let mut vs = Vec::with_capacity(ORBIT_SAMPLES);
    for j in 0..ORBIT_SAMPLES {
        if j > 0 {
            (u, v) = rk4(&p, u, v, dt_sample, per_sample);
        }
        t.push(j as f64 * dt_sample);
        us.push(vec![u]);
        vs.push(vec![v]);
    }
    if it.kind == OrbitKind::Positive {
        // the last sample is the fixed point itself
        us[ORBIT_SAMPLES - 1] = vec![state[0]];
        vs[ORBIT_SAMPLES - 1] = vec![state[1]];
    }
    Ok(PeriodicOrbit {
        kind: it.kind,
        t,
        x: Vec::new(),
        u: us,
        v: vs,
        residual: it.residual,
        periods: it.periods,
        sup_history: it.sup_history,
        rate: it.rate,
    })
}

/// Periodic solution of the impulsive problem on a frozen interval of the
/// given length with homogeneous Dirichlet conditions.
///
/// The classification is checked against the sign of the principal
/// eigenvalue for the same interval; a mismatch is an internal error.
pub fn fixed_domain_periodic(
    params: &ModelParams,
    interval_length: f64,
    n: usize,
    tol: f64,
    max_periods: usize,
) -> Result<PeriodicOrbit> {
    let cfg = SolverConfig {
        n,
        steps_per_period: DEFAULT_PDE_STEPS_PER_PERIOD,
        front_update: FrontUpdate::Euler,
        ..SolverConfig::default()
    };
    fixed_domain_periodic_with(params, interval_length, &cfg, tol, max_periods)
}

/// As [`fixed_domain_periodic`] with explicit discretisation settings.
pub fn fixed_domain_periodic_with(
    params: &ModelParams,
    interval_length: f64,
    cfg: &SolverConfig,
    tol: f64,
    max_periods: usize,
) -> Result<PeriodicOrbit> {
    params.validate()?;
    validate_tol(tol)?;
    cfg.validate()?;
    if !(interval_length > 0.0 && interval_length.is_finite()) {
        return Err(Error::Domain(format!(
            "interval length must be positive and finite, got {interval_length}"
        )));
    }
    let (c2, c3) = supersolution_start(params)?;
    let n = cfg.n;
    let m = cfg.steps_per_period;
    let mut state = SimState {
        t: 0.0,
        g: -0.5 * interval_length,
        h: 0.5 * interval_length,
        u: vec![c2; n + 1],
        v: vec![c3; n + 1],
    };
    state.u[0] = 0.0;
    state.u[n] = 0.0;
    state.v[0] = 0.0;
    state.v[n] = 0.0;

    let mut stepper = Stepper::new(params, cfg, cfg.dt(params.tau))?;
    let p = *params;
    let sup = |s: &SimState| s.sup_u().max(s.sup_v());
    let it = iterate(
        &mut state,
        sup,
        |a, b| {
            a.u.iter()
                .zip(&b.u)
                .chain(a.v.iter().zip(&b.v))
                .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
        },
        |s| {
            impulse_in_place(&mut s.u, &p);
            for _ in 0..m {
                stepper.step_fixed(s)?;
            }
            Ok(())
        },
        tol,
        max_periods,
        "fixed-domain period map",
    )?;

    let lambda = principal_eigenvalue_monodromy(params, interval_length)?.lambda;
    let expected = if lambda < 0.0 {
        OrbitKind::Positive
    } else {
        OrbitKind::Zero
    };
    if it.kind != expected {
        return Err(Error::Internal(format!(
            "orbit classified {:?} but the principal eigenvalue on width {interval_length} is {lambda:e}",
            it.kind
        )));
    }

    let x: Vec<f64> = (0..=n).map(|i| state.x(i)).collect();
    let mut sample = state.clone();
    if it.kind == OrbitKind::Zero {
        sample.u.iter_mut().for_each(|x| *x = 0.0);
        sample.v.iter_mut().for_each(|x| *x = 0.0);
    }
    let fixed = sample.clone();
    impulse_in_place(&mut sample.u, &p);
    let per_sample = m / (FIELD_SAMPLES - 1);
    let mut t = Vec::with_capacity(FIELD_SAMPLES);
    let mut us = Vec::with_capacity(FIELD_SAMPLES);
    let mut vs = Vec::with_capacity(FIELD_SAMPLES);
    for j in 0..FIELD_SAMPLES {
        if j + 1 == FIELD_SAMPLES {
            us.push(fixed.u.clone());
            vs.push(fixed.v.clone());
        } else {
            if j > 0 {
                for _ in 0..per_sample {
                    stepper.step_fixed(&mut sample)?;
                }
            }
            us.push(sample.u.clone());
            vs.push(sample.v.clone());
        }
        t.push(p.tau * j as f64 / (FIELD_SAMPLES - 1) as f64);
    }
    Ok(PeriodicOrbit {
        kind: it.kind,
        t,
        x,
        u: us,
        v: vs,
        residual: it.residual,
        periods: it.periods,
        sup_history: it.sup_history,
        rate: it.rate,
    })
}

/// Fixed point `(u*, v*)` of the homogeneous system without reset, when it exists.
pub fn homogeneous_plateau(params: &ModelParams) -> Option<(f64, f64)> {
    match params.growth {
        crate::model::GrowthFn::BevertonHolt { m, a } => {
            // v = (a11/a12) u and m u/(a+u) = a22 v  =>  u = m a12/(a11 a22) - a
            let u = m * params.a12 / (params.a11 * params.a22) - a;
            (u > 0.0).then(|| (u, params.a11 / params.a12 * u))
        }
        crate::model::GrowthFn::Linear { .. } => None,
    }
}
