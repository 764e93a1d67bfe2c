//! Model coefficients, the admitted growth and impulse families, initial
//! profiles, and sample-based checks of the standing assumptions.
//!
//! Growth and impulse functions are closed enumerations so that `f'(0)`,
//! `G'(0)` and the lower-bound constants `(H, kappa)` of the linearisation
//! estimate `rho(u) >= rho'(0) u - H u^kappa` are available in closed form.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Infection rate `f(u)` of infected individuals caused by bacteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GrowthFn {
    /// `f(u) = p u`
    Linear { p: f64 },
    /// `f(u) = m u / (a + u)`
    BevertonHolt { m: f64, a: f64 },
}

impl GrowthFn {
    /// Evaluates `f(u)` without a domain check.
    #[inline]
    pub fn value(&self, u: f64) -> f64 {
        match *self {
            GrowthFn::Linear { p } => p * u,
            GrowthFn::BevertonHolt { m, a } => m * u / (a + u),
        }
    }

    pub fn derivative_at_zero(&self) -> f64 {
        match *self {
            GrowthFn::Linear { p } => p,
            GrowthFn::BevertonHolt { m, a } => m / a,
        }
    }

    /// `lim_{u -> inf} f(u) / u`.
    pub fn asymptotic_slope(&self) -> f64 {
        match *self {
            GrowthFn::Linear { p } => p,
            GrowthFn::BevertonHolt { .. } => 0.0,
        }
    }

    /// Constants `(H, kappa)` with `f(u) >= f'(0) u - H u^kappa` for all `u >= 0`.
    pub fn lower_bound_constants(&self) -> (f64, f64) {
        match *self {
            GrowthFn::Linear { p } => (p, 2.0),
            GrowthFn::BevertonHolt { m, a } => (m / (a * a), 2.0),
        }
    }

    fn check_params(&self) -> Result<()> {
        match *self {
            GrowthFn::Linear { p } => positive("growth.p", p),
            GrowthFn::BevertonHolt { m, a } => {
                positive("growth.m", m)?;
                positive("growth.a", a)
            }
        }
    }
}

/// Impulsive reset `u(k tau^+) = G(u(k tau))` applied to the bacteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ImpulseFn {
    /// `G(u) = u`, the no-intervention mode.
    Identity,
    /// `G(u) = rho u` with `0 < rho <= 1`.
    Linear { rho: f64 },
    /// `G(u) = c u / (b + u)` with `0 < c < b`.
    Saturating { c: f64, b: f64 },
}

impl ImpulseFn {
    #[inline]
    pub fn value(&self, u: f64) -> f64 {
        match *self {
            ImpulseFn::Identity => u,
            ImpulseFn::Linear { rho } => rho * u,
            ImpulseFn::Saturating { c, b } => c * u / (b + u),
        }
    }

    pub fn derivative_at_zero(&self) -> f64 {
        match *self {
            ImpulseFn::Identity => 1.0,
            ImpulseFn::Linear { rho } => rho,
            ImpulseFn::Saturating { c, b } => c / b,
        }
    }

    /// Impulse intensity `1 - G'(0)`.
    pub fn intensity(&self) -> f64 {
        1.0 - self.derivative_at_zero()
    }

    /// Constants `(H, kappa)` with `G(u) >= G'(0) u - H u^kappa` for all `u >= 0`.
    pub fn lower_bound_constants(&self) -> (f64, f64) {
        match *self {
            ImpulseFn::Identity => (1.0, 2.0),
            ImpulseFn::Linear { rho } => (rho, 2.0),
            ImpulseFn::Saturating { c, b } => (c / (b * b), 2.0),
        }
    }

    /// True for the impulse families that act linearly on `u`.
    pub fn is_linear(&self) -> bool {
        matches!(self, ImpulseFn::Identity | ImpulseFn::Linear { .. })
    }

    fn check_params(&self) -> Result<()> {
        match *self {
            ImpulseFn::Identity => Ok(()),
            ImpulseFn::Linear { rho } => {
                if rho > 0.0 && rho <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!(
                        "impulse.rho must lie in (0, 1], got {rho}"
                    )))
                }
            }
            ImpulseFn::Saturating { c, b } => {
                positive("impulse.c", c)?;
                positive("impulse.b", b)?;
                if c < b {
                    Ok(())
                } else {
                    Err(Error::Config(format!(
                        "impulse.c must be below impulse.b, got c={c}, b={b}"
                    )))
                }
            }
        }
    }
}

/// Evaluates the growth function, rejecting negative densities.
pub fn eval_growth(g: &GrowthFn, u: f64) -> Result<f64> {
    nonnegative_density(u)?;
    Ok(g.value(u))
}

/// Evaluates the impulse function, rejecting negative densities.
pub fn eval_impulse(g: &ImpulseFn, u: f64) -> Result<f64> {
    nonnegative_density(u)?;
    Ok(g.value(u))
}

fn nonnegative_density(u: f64) -> Result<()> {
    if u >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "density must be non-negative, got {u}"
        )))
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

/// All model coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Diffusion coefficient of bacteria.
    pub d1: f64,
    /// Diffusion coefficient of infected individuals.
    pub d2: f64,
    /// Bacteria decay rate.
    pub a11: f64,
    /// Bacteria growth rate from infected individuals.
    pub a12: f64,
    /// Infected decay rate.
    pub a22: f64,
    /// Expansion capacity of bacteria.
    pub mu1: f64,
    /// Expansion capacity of infected individuals.
    pub mu2: f64,
    /// Initial half-width of the infected interval.
    pub h0: f64,
    /// Impulse period.
    pub tau: f64,
    pub growth: GrowthFn,
    pub impulse: ImpulseFn,
}

impl ModelParams {
    /// Structural validation: signs and ranges of every coefficient.
    pub fn validate(&self) -> Result<()> {
        positive("d1", self.d1)?;
        positive("d2", self.d2)?;
        positive("a11", self.a11)?;
        positive("a12", self.a12)?;
        positive("a22", self.a22)?;
        positive("h0", self.h0)?;
        positive("tau", self.tau)?;
        for (name, mu) in [("mu1", self.mu1), ("mu2", self.mu2)] {
            if !(mu >= 0.0 && mu.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} must be non-negative and finite, got {mu}"
                )));
            }
        }
        self.growth.check_params()?;
        self.impulse.check_params()
    }

    /// `f'(0)`
    pub fn f_prime0(&self) -> f64 {
        self.growth.derivative_at_zero()
    }

    /// `G'(0)`
    pub fn g_prime0(&self) -> f64 {
        self.impulse.derivative_at_zero()
    }

    /// The slope bound `a11 a22 / a12` that `f(u)/u` must stay below at infinity.
    pub fn slope_limit(&self) -> f64 {
        self.a11 * self.a22 / self.a12
    }

    /// Returns the named numeric field, as accepted by parameter sweeps.
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "d1" => self.d1,
            "d2" => self.d2,
            "a11" => self.a11,
            "a12" => self.a12,
            "a22" => self.a22,
            "mu1" => self.mu1,
            "mu2" => self.mu2,
            "h0" => self.h0,
            "tau" => self.tau,
            _ => return None,
        })
    }

    /// Returns a copy with the named numeric field replaced.
    ///
    /// `rho` replaces the impulse by `Linear { rho }`.
    pub fn with(&self, name: &str, value: f64) -> Result<ModelParams> {
        let mut p = *self;
        match name {
            "d1" => p.d1 = value,
            "d2" => p.d2 = value,
            "a11" => p.a11 = value,
            "a12" => p.a12 = value,
            "a22" => p.a22 = value,
            "mu1" => p.mu1 = value,
            "mu2" => p.mu2 = value,
            "h0" => p.h0 = value,
            "tau" => p.tau = value,
            "rho" => p.impulse = ImpulseFn::Linear { rho: value },
            _ => {
                return Err(Error::Config(format!(
                    "unknown axis `{name}`; valid axes: {}",
                    SWEEP_AXES.join(", ")
                )))
            }
        }
        Ok(p)
    }
}

/// Parameter names accepted by [`ModelParams::with`].
pub const SWEEP_AXES: [&str; 10] = [
    "d1", "d2", "a11", "a12", "a22", "mu1", "mu2", "h0", "tau", "rho",
];

/// One initial density profile on `[-h0, h0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Profile {
    /// `amplitude * cos(pi x / (2 h0))`
    CosQuarter { amplitude: f64 },
    /// Piecewise-linear interpolation of samples; zero outside the table.
    Tabulated { x: Vec<f64>, values: Vec<f64> },
}

impl Profile {
    pub fn eval(&self, x: f64, h0: f64) -> f64 {
        match self {
            Profile::CosQuarter { amplitude } => {
                if x.abs() >= h0 {
                    0.0
                } else {
                    amplitude * (PI * x / (2.0 * h0)).cos()
                }
            }
            Profile::Tabulated { x: xs, values } => interpolate(xs, values, x),
        }
    }

    /// The same profile multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Profile {
        match self {
            Profile::CosQuarter { amplitude } => Profile::CosQuarter {
                amplitude: amplitude * k,
            },
            Profile::Tabulated { x, values } => Profile::Tabulated {
                x: x.clone(),
                values: values.iter().map(|v| v * k).collect(),
            },
        }
    }

    pub(crate) fn check(&self, name: &str) -> Result<()> {
        match self {
            Profile::CosQuarter { amplitude } => positive(&format!("{name}.amplitude"), *amplitude),
            Profile::Tabulated { x, values } => {
                if x.len() != values.len() || x.len() < 2 {
                    return Err(Error::Config(format!(
                        "{name}: tabulated profile needs at least two (x, value) pairs of equal length"
                    )));
                }
                if x.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config(format!(
                        "{name}: tabulated x must be strictly increasing"
                    )));
                }
                if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::Config(format!(
                        "{name}: tabulated values must be finite and non-negative"
                    )));
                }
                Ok(())
            }
        }
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let i = xs.partition_point(|&xi| xi <= x);
    if i == 0 {
        return ys[0];
    }
    if i >= xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    ys[i - 1] * (1.0 - w) + ys[i] * w
}

/// Initial bacteria and infected densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    pub u0: Profile,
    pub v0: Profile,
}

impl InitialData {
    /// `u0 = a_u cos(pi x / (2 h0))`, `v0 = a_v cos(pi x / (2 h0))`.
    pub fn cos_quarter(a_u: f64, a_v: f64) -> Self {
        InitialData {
            u0: Profile::CosQuarter { amplitude: a_u },
            v0: Profile::CosQuarter { amplitude: a_v },
        }
    }

    pub fn scaled_u(&self, kappa: f64) -> Self {
        InitialData {
            u0: self.u0.scaled(kappa),
            v0: self.v0.clone(),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        InitialData {
            u0: self.u0.scaled(k),
            v0: self.v0.scaled(k),
        }
    }

    /// Maxima of `(u0, v0)` over a dense sample of `[-h0, h0]`.
    pub fn maxima(&self, h0: f64) -> (f64, f64) {
        let n = 2048;
        let mut mu: f64 = 0.0;
        let mut mv: f64 = 0.0;
        for i in 0..=n {
            let x = -h0 + 2.0 * h0 * i as f64 / n as f64;
            mu = mu.max(self.u0.eval(x, h0));
            mv = mv.max(self.v0.eval(x, h0));
        }
        if let Profile::Tabulated { values, .. } = &self.u0 {
            mu = values.iter().fold(mu, |a, &b| a.max(b));
        }
        if let Profile::Tabulated { values, .. } = &self.v0 {
            mv = values.iter().fold(mv, |a, &b| a.max(b));
        }
        (mu, mv)
    }

    pub fn check(&self) -> Result<()> {
        self.u0.check("init.u0")?;
        self.v0.check("init.v0")
    }
}

/// Upper bounds `(C2, C3)` on `(u, v)` valid for all time, built from the
/// initial maxima and the sublinear growth at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityBounds {
    pub c2: f64,
    pub c3: f64,
    pub eps0: f64,
}

/// Computes `(C2, C3)`; `None` when `f(u)/u` never drops below the slope limit.
///
/// With `s = a11 a22 / (a12 + eps0)` the constant state `(M, a11 M / (a12 + eps0))`
/// is a supersolution as soon as `f(M) < s M`, which for the admitted families
/// is `M > m/s - a` (Beverton-Holt) or automatic once `p < s` (linear).
pub fn density_bounds(params: &ModelParams, max_u0: f64, max_v0: f64) -> Option<DensityBounds> {
    let limit = params.slope_limit();
    let eps0 = match params.growth {
        GrowthFn::Linear { p } => {
            if p >= limit {
                return None;
            }
            // p < a11 a22 / (a12 + eps0)  <=>  eps0 < a11 a22 / p - a12
            (0.01 * params.a12).min(0.5 * (params.a11 * params.a22 / p - params.a12))
        }
        GrowthFn::BevertonHolt { .. } => 0.01 * params.a12,
    };
    let s = params.a11 * params.a22 / (params.a12 + eps0);
    let growth_floor = match params.growth {
        GrowthFn::Linear { .. } => 0.0,
        GrowthFn::BevertonHolt { m, a } => m / s - a,
    };
    let m0 = max_u0
        .max((params.a12 + eps0) / params.a11 * max_v0)
        .max(growth_floor);
    let m0 = if m0 > 0.0 { m0 } else { 1.0 };
    let c2 = m0 * (1.0 + 1e-3);
    let c3 = params.a11 / (params.a12 + eps0) * c2;
    Some(DensityBounds { c2, c3, eps0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Informational flag; does not invalidate the configuration.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionCheck {
    pub label: &'static str,
    pub check: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AssumptionCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AssumptionCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    /// Status of the first check with the given label and name fragment.
    pub fn status_of(&self, label: &str, check: &str) -> Option<CheckStatus> {
        self.checks
            .iter()
            .find(|c| c.label == label && c.check.contains(check))
            .map(|c| c.status)
    }

    fn push(&mut self, label: &'static str, check: &str, ok: bool, detail: String) {
        self.checks.push(AssumptionCheck {
            label,
            check: check.to_string(),
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail,
        });
    }
}

/// Default sampling range and count for the non-closed-form checks.
pub const DEFAULT_U_MAX: f64 = 100.0;
pub const DEFAULT_SAMPLES: usize = 1000;

/// Checks the standing assumptions on initial data, growth and impulse.
///
/// Closed-form quantities (`f'(0)`, `G'(0)`, the asymptotic slope) are checked
/// exactly; monotonicity and the lower-bound inequalities are checked on
/// `n_samples` uniformly spaced points of `(0, u_max]`. Failures are reported,
/// never thrown.
pub fn validate_assumptions(
    params: &ModelParams,
    init: &InitialData,
    u_max: f64,
    n_samples: usize,
) -> ValidationReport {
    let mut report = ValidationReport { checks: Vec::new() };
    let n_samples = n_samples.max(2);
    let grid: Vec<f64> = (1..=n_samples)
        .map(|i| u_max * i as f64 / n_samples as f64)
        .collect();

    // (A1)
    let h0 = params.h0;
    for (name, profile) in [("u0", &init.u0), ("v0", &init.v0)] {
        let left = profile.eval(-h0, h0);
        let right = profile.eval(h0, h0);
        report.push(
            "A1",
            &format!("{name} vanishes at both ends"),
            left.abs() <= 1e-12 && right.abs() <= 1e-12,
            format!("{name}(-h0) = {left:e}, {name}(h0) = {right:e}"),
        );
        let interior_min = (1..n_samples)
            .map(|i| profile.eval(-h0 + 2.0 * h0 * i as f64 / n_samples as f64, h0))
            .fold(f64::INFINITY, f64::min);
        report.push(
            "A1",
            &format!("{name} positive on the open interval"),
            interior_min > 0.0,
            format!("sampled interior minimum {interior_min:e}"),
        );
    }

    // (A2)
    let f = params.growth;
    let fp0 = f.derivative_at_zero();
    report.push("A2", "f'(0) > 0", fp0 > 0.0, format!("f'(0) = {fp0}"));
    let increasing = grid.windows(2).all(|w| f.value(w[1]) > f.value(w[0]));
    report.push(
        "A2",
        "f increasing",
        increasing && fp0 > 0.0,
        format!("sampled on (0, {u_max}]"),
    );
    let ratio_ok = nonincreasing(grid.iter().map(|&u| f.value(u) / u));
    report.push(
        "A2",
        "f(u)/u non-increasing",
        ratio_ok,
        format!("sampled on (0, {u_max}] at {n_samples} points"),
    );
    let slope = f.asymptotic_slope();
    let limit = params.slope_limit();
    report.push(
        "A2",
        "lim f(u)/u < a11 a22 / a12",
        slope < limit,
        format!("lim f(u)/u = {slope}, a11 a22 / a12 = {limit}"),
    );

    // (A3)
    let g = params.impulse;
    let gp0 = g.derivative_at_zero();
    report.push("A3", "G'(0) > 0", gp0 > 0.0, format!("G'(0) = {gp0}"));
    report.push(
        "A3",
        "G non-decreasing",
        grid.windows(2).all(|w| g.value(w[1]) >= g.value(w[0])),
        format!("sampled on (0, {u_max}]"),
    );
    report.push(
        "A3",
        "0 < G(u) <= u",
        grid.iter().all(|&u| g.value(u) > 0.0 && g.value(u) <= u),
        format!("sampled on (0, {u_max}]"),
    );
    report.push(
        "A3",
        "G(u)/u non-increasing",
        nonincreasing(grid.iter().map(|&u| g.value(u) / u)),
        format!("sampled on (0, {u_max}]"),
    );
    if matches!(g, ImpulseFn::Identity) || gp0 >= 1.0 {
        report.checks.push(AssumptionCheck {
            label: "A3",
            check: "G(u)/u < 1".to_string(),
            status: CheckStatus::Info,
            detail: "no-intervention mode: G(u) = u".to_string(),
        });
    } else {
        report.push(
            "A3",
            "G(u)/u < 1",
            grid.iter().all(|&u| g.value(u) < u),
            format!("impulse intensity 1 - G'(0) = {}", g.intensity()),
        );
    }

    // (A4)
    let (hf, kf) = f.lower_bound_constants();
    let worst_f = grid
        .iter()
        .map(|&u| f.value(u) - (fp0 * u - hf * u.powf(kf)))
        .fold(f64::INFINITY, f64::min);
    report.push(
        "A4",
        "f(u) >= f'(0) u - H1 u^k1",
        worst_f >= -1e-12 * u_max,
        format!("H1 = {hf}, k1 = {kf}, min slack {worst_f:e}"),
    );
    let (hg, kg) = g.lower_bound_constants();
    let worst_g = grid
        .iter()
        .map(|&u| g.value(u) - (gp0 * u - hg * u.powf(kg)))
        .fold(f64::INFINITY, f64::min);
    report.push(
        "A4",
        "G(u) >= G'(0) u - H2 u^k2",
        worst_g >= -1e-12 * u_max,
        format!("H2 = {hg}, k2 = {kg}, min slack {worst_g:e}"),
    );

    report
}

fn nonincreasing(mut it: impl Iterator<Item = f64>) -> bool {
    let Some(mut prev) = it.next() else {
        return true;
    };
    for r in it {
        if r > prev * (1.0 + 1e-12) + f64::MIN_POSITIVE {
            return false;
        }
        prev = r;
    }
    true
}
