//! Principal eigenvalue of the impulsive time-periodic linearised problem.
//!
//! Separation of variables reduces the problem on an interval of width `L`
//! to the Dirichlet eigenvalue `lambda0 = (pi / L)^2` and the temporal system
//!
//! ```text
//! (Phi, Psi)' = (lambda I + B) (Phi, Psi),   B = [[-d1 lambda0 - a11, a12],
//!                                                 [f'(0), -d2 lambda0 - a22]]
//! ```
//!
//! with the reset `Phi(0+) = G'(0) Phi(0)` and `tau`-periodicity. Two routes
//! compute the principal eigenvalue:
//!
//! * [`principal_eigenvalue_monodromy`]: `exp(-lambda tau)` is the Perron root
//!   of `exp(B tau) diag(G'(0), 1)`.
//! * [`principal_eigenvalue_closed_form`]: the explicit eigenfunction ansatz
//!   turns periodicity into two rational equations in `(k, y)`, solved by
//!   bisection inside the positivity window.
//!
//! The monodromy route is the production path; the closed form cross-checks it.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::model::ModelParams;

/// Samples of the temporal eigenfunction over one period.
pub const PROFILE_SAMPLES: usize = 101;

/// Principal Dirichlet eigenvalue of `-d^2/dx^2` on an interval of the given
/// width. An infinite width yields exactly zero.
pub fn dirichlet_lambda0(interval_length: f64) -> Result<f64> {
    if !(interval_length > 0.0) {
        return Err(Error::Domain(format!(
            "interval length must be positive, got {interval_length}"
        )));
    }
    if interval_length.is_infinite() {
        return Ok(0.0);
    }
    let k = PI / interval_length;
    Ok(k * k)
}

/// The cooperative matrix `B(lambda0)` of the temporal system.
pub fn temporal_matrix(params: &ModelParams, lambda0: f64) -> Mat2 {
    Mat2::new(
        -params.d1 * lambda0 - params.a11,
        params.a12,
        params.f_prime0(),
        -params.d2 * lambda0 - params.a22,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EigenMethod {
    ClosedForm,
    Monodromy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TemporalSample {
    pub t: f64,
    pub phi: f64,
    pub psi: f64,
}

/// A principal eigenvalue with the intermediates of the route that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    pub lambda: f64,
    pub method: EigenMethod,
    pub lambda0: f64,
    /// Larger eigenvalue of `B`; the characteristic roots are `lambda + c1`, `lambda + c2`.
    pub c1: f64,
    pub c2: f64,
    /// Closed-form route only.
    pub k0: Option<f64>,
    pub y0: Option<f64>,
    /// Monodromy route only: `exp(B tau) D = exp(log_scale) * monodromy_scaled`.
    pub monodromy_scaled: Option<[[f64; 2]; 2]>,
    pub log_scale: Option<f64>,
    /// Monodromy route only: unit-sum Perron vector (state at `t = 0`, before the reset).
    pub perron_vector: Option<[f64; 2]>,
    /// `(Phi, Psi)` on `[0, tau]`; the `t = 0` entry is the post-reset value.
    pub profile: Vec<TemporalSample>,
}

impl EigenReport {
    /// The JSON object printed by the `eigen` subcommand.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambda": self.lambda,
            "method": self.method,
            "lambda0": self.lambda0,
            "c1": self.c1,
            "c2": self.c2,
            "k0": self.k0,
            "y0": self.y0,
        })
    }
}

/// Principal eigenvalue as `-(1/tau) ln r(exp(B tau) D)`.
///
/// `interval_length` may be `f64::INFINITY`, which sets `lambda0 = 0`.
pub fn principal_eigenvalue_monodromy(
    params: &ModelParams,
    interval_length: f64,
) -> Result<EigenReport> {
    let lambda0 = dirichlet_lambda0(interval_length)?;
    let b = temporal_matrix(params, lambda0);
    let tau = params.tau;
    let reset = Mat2::diag(params.g_prime0(), 1.0);
    let (mu1, scaled) = b.scaled_exp(tau);
    let (_, c2) = b.real_eigenvalues();
    let m = scaled.mul(&reset);
    let (r, x) = m.perron();
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Internal(format!(
            "monodromy Perron root is not positive: {r}"
        )));
    }
    let lambda = -mu1 - r.ln() / tau;

    let x_plus = reset.apply(x);
    let profile = (0..PROFILE_SAMPLES)
        .map(|j| {
            let t = tau * j as f64 / (PROFILE_SAMPLES - 1) as f64;
            let (m1, s) = b.scaled_exp(t);
            let y = s.apply(x_plus);
            let k = ((lambda + m1) * t).exp();
            TemporalSample {
                t,
                phi: k * y[0],
                psi: k * y[1],
            }
        })
        .collect();

    Ok(EigenReport {
        lambda,
        method: EigenMethod::Monodromy,
        lambda0,
        c1: mu1,
        c2,
        k0: None,
        y0: None,
        monodromy_scaled: Some(m.to_array()),
        log_scale: Some(mu1 * tau),
        perron_vector: Some(x),
        profile,
    })
}

/// Coefficients of the two rational equations `y = (n11 - n12 k)/(n13 - n23 k)`
/// and `y = (n12 + n21 k)/(n12 + n22 k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSystem {
    pub n11: f64,
    pub n12: f64,
    pub n13: f64,
    pub n21: f64,
    pub n22: f64,
    pub n23: f64,
    pub c1: f64,
    pub c2: f64,
    /// Lower end of the margin `n11 - eps0` used for the bracket.
    pub eps0: f64,
}

impl ReducedSystem {
    pub fn new(params: &ModelParams, lambda0: f64) -> Self {
        let (d1, d2) = (params.d1, params.d2);
        let (a11, a12, a22) = (params.a11, params.a12, params.a22);
        let fp = params.f_prime0();
        let gp = params.g_prime0();

        // c_{1,2} = (-(d1+d2) lambda0 - a11 - a22 +- sqrt(disc)) / 2
        let sum = -(d1 + d2) * lambda0 - a11 - a22;
        let diff = a22 + (d2 - d1) * lambda0 - a11;
        let root = (diff * diff + 4.0 * a12 * fp).sqrt();
        let c2 = 0.5 * (sum - root);
        // c1 c2 = (d1 lambda0 + a11)(d2 lambda0 + a22) - a12 f'(0)
        let c1 = ((d1 * lambda0 + a11) * (d2 * lambda0 + a22) - a12 * fp) / c2;

        let decay = (-root * params.tau).exp();
        let n12 = a11 + d1 * lambda0 + c1;
        let eps0 = (0.5 * a12).min(a12 * gp * -(-2.0 * (a12 * fp).sqrt() * params.tau).exp_m1());
        ReducedSystem {
            n11: a12,
            n12,
            n13: gp * a12,
            n21: fp,
            n22: fp * decay,
            n23: gp * n12 * decay,
            c1,
            c2,
            eps0,
        }
    }

    /// Difference of the two branches; positive at `k = 0` unless `G'(0) = 1`.
    pub fn residual(&self, k: f64) -> f64 {
        (self.n11 - self.n12 * k) / (self.n13 - self.n23 * k)
            - (self.n12 + self.n21 * k) / (self.n12 + self.n22 * k)
    }

    /// `ln y` on the second branch, accurate when `y` is close to one.
    pub fn ln_y(&self, k: f64) -> f64 {
        ((self.n21 - self.n22) * k / (self.n12 + self.n22 * k)).ln_1p()
    }
}

/// Principal eigenvalue from the explicit temporal eigenfunction.
pub fn principal_eigenvalue_closed_form(
    params: &ModelParams,
    interval_length: f64,
) -> Result<EigenReport> {
    if !interval_length.is_finite() {
        return Err(Error::Domain(
            "closed-form route needs a finite interval".into(),
        ));
    }
    let gp = params.g_prime0();
    if !(gp > 0.0 && gp <= 1.0) {
        return Err(Error::Domain(format!("G'(0) must lie in (0, 1], got {gp}")));
    }
    let lambda0 = dirichlet_lambda0(interval_length)?;
    let sys = ReducedSystem::new(params, lambda0);

    let upper = (sys.n11 - sys.eps0) / sys.n12;
    let f_lo = sys.residual(0.0);
    let f_hi = sys.residual(upper);
    if !(f_lo >= 0.0 && f_hi < 0.0) {
        return Err(Error::Internal(format!(
            "no intersection of the reduced system in the positivity window \
             (F(0) = {f_lo:e}, F(k1) = {f_hi:e})"
        )));
    }
    let k0 = if f_lo == 0.0 {
        0.0
    } else {
        let (mut lo, mut hi) = (0.0f64, upper);
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sys.residual(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let ln_y = sys.ln_y(k0);
    let y0 = ln_y.exp();
    if !(k0 >= 0.0 && k0 < sys.n11 / sys.n12 && ln_y >= 0.0 && y0 * sys.n22 < sys.n21) {
        return Err(Error::Internal(format!(
            "reduced-system root (k0 = {k0}, y0 = {y0}) left the positivity window"
        )));
    }
    let tau = params.tau;
    let lambda = ln_y / tau - sys.c1;

    let fp = params.f_prime0();
    let det_b = params.a12 * fp + sys.n12 * sys.n12;
    let kappa1 = ln_y / tau;
    let kappa2 = kappa1 + (sys.c2 - sys.c1);
    let profile = (0..PROFILE_SAMPLES)
        .map(|j| {
            let t = tau * j as f64 / (PROFILE_SAMPLES - 1) as f64;
            let e1 = (kappa1 * t).exp();
            let e2 = (kappa2 * t).exp();
            TemporalSample {
                t,
                phi: (params.a12 * e1 - sys.n12 * k0 * e2) / det_b,
                psi: (fp * k0 * e2 + sys.n12 * e1) / det_b,
            }
        })
        .collect();

    Ok(EigenReport {
        lambda,
        method: EigenMethod::ClosedForm,
        lambda0,
        c1: sys.c1,
        c2: sys.c2,
        k0: Some(k0),
        y0: Some(y0),
        monodromy_scaled: None,
        log_scale: None,
        perron_vector: None,
        profile,
    })
}

/// `lambda(G'(0), (-h0, h0))`
pub fn lambda_at_h0(params: &ModelParams) -> Result<EigenReport> {
    principal_eigenvalue_monodromy(params, 2.0 * params.h0)
}

/// `lambda(G'(0), (-inf, inf))`, evaluated with `lambda0 = 0`.
pub fn lambda_infinity(params: &ModelParams) -> Result<EigenReport> {
    principal_eigenvalue_monodromy(params, f64::INFINITY)
}

/// Eigenvalue on the current infected interval `(g, h)`.
pub fn lambda_front(params: &ModelParams, g: f64, h: f64) -> Result<EigenReport> {
    if !(g < h) {
        return Err(Error::Domain(format!(
            "front positions must satisfy g < h, got g = {g}, h = {h}"
        )));
    }
    principal_eigenvalue_monodromy(params, h - g)
}

/// Bounds on the closed-form temporal eigenfunction that hold uniformly for
/// every half-width `h >= h0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TemporalBounds {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

pub fn temporal_bounds(params: &ModelParams) -> TemporalBounds {
    let lambda0_h0 = (PI / (2.0 * params.h0)).powi(2);
    let (a11, a12, a22) = (params.a11, params.a12, params.a22);
    let fp = params.f_prime0();
    let gp = params.g_prime0();
    let spread = (params.d1 + params.d2) * lambda0_h0;
    let sq = (a12 * fp).sqrt();

    let alpha2 = ((2.0 * sq + a22 + a11 + spread) * params.tau).exp() / fp;
    let beta2 = fp * alpha2 / a11;
    let eps0 = (0.5 * a12).min(a12 * gp * -(-2.0 * sq * params.tau).exp_m1());
    let denom = a12 * fp + (a11 + a22 + spread + sq).powi(2);
    TemporalBounds {
        alpha1: eps0 / denom,
        alpha2,
        beta1: a11 / denom,
        beta2,
    }
}

/// Principal eigenpair of `d phi'' + phi'/2 + mu phi = 0`, `phi'(0) = phi(1) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobinEigenReport {
    pub mu0: f64,
    pub beta0: f64,
    pub alpha: f64,
    /// Eigenfunction on `ROBIN_NODES` uniform nodes of `[0, 1]`, with `phi0(0) = 1`.
    pub phi0: Vec<f64>,
    /// Divisor making `sup phi0 = 1`.
    pub norm: f64,
}

pub const ROBIN_NODES: usize = 1001;

impl RobinEigenReport {
    /// `phi0(x)`; defined for every real `x` by analytic continuation.
    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta0);
        -(a * x).exp() * (a * a + b * b).sqrt() * (b * (x - 1.0)).sin() / self.norm
    }

    /// `phi0'(x)` from the general form, without using the root condition.
    pub fn derivative(&self, x: f64) -> f64 {
        let (a, b) = (self.alpha, self.beta0);
        let s = (b * (x - 1.0)).sin();
        let c = (b * (x - 1.0)).cos();
        -(a * x).exp() * (a * a + b * b).sqrt() * (a * s + b * c) / self.norm
    }
}

pub fn robin_eigen(d: f64) -> Result<RobinEigenReport> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!(
            "diffusion must be positive, got {d}"
        )));
    }
    let alpha = -1.0 / (4.0 * d);
    // tan(beta) = beta / alpha  <=>  alpha sin(beta) - beta cos(beta) = 0,
    // negative at pi/2 and positive at pi.
    let root_fn = |beta: f64| alpha * beta.sin() - beta * beta.cos();
    let (mut lo, mut hi) = (0.5 * PI, PI);
    let mut converged = false;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        if root_fn(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            context: "Robin eigenvalue root".into(),
            iterations: 200,
            defect: hi - lo,
        });
    }
    let beta0 = 0.5 * (lo + hi);
    let mu0 = d * (alpha * alpha + beta0 * beta0);
    // phi is decreasing, so the supremum sits at x = 0.
    let norm = (alpha * alpha + beta0 * beta0).sqrt() * beta0.sin();
    let mut report = RobinEigenReport {
        mu0,
        beta0,
        alpha,
        phi0: Vec::new(),
        norm,
    };
    report.phi0 = (0..ROBIN_NODES)
        .map(|i| report.eval(i as f64 / (ROBIN_NODES - 1) as f64))
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GrowthFn, ImpulseFn};

    fn example41(impulse: ImpulseFn) -> ModelParams {
        ModelParams {
            d1: 0.1,
            d2: 0.4,
            a11: 0.3,
            a12: 0.5,
            a22: 0.1,
            mu1: 10.0,
            mu2: 15.0,
            h0: 2.0,
            tau: 5.0,
            growth: GrowthFn::BevertonHolt { m: 1.0, a: 10.0 },
            impulse,
        }
    }

    /// Larger eigenvalue of a 2x2 matrix by the quadratic formula.
    fn mu_max(a: f64, b: f64, c: f64, d: f64) -> f64 {
        let t = a + d;
        let det = a * d - b * c;
        0.5 * (t + (t * t - 4.0 * det).sqrt())
    }

    #[test]
    fn lambda0_closed_forms() {
        assert!((dirichlet_lambda0(4.0).unwrap() - 0.616_850_275_068_084_9).abs() < 1e-15);
        assert!((dirichlet_lambda0(300.0).unwrap() - 1.096_622_711_232_151e-4).abs() < 1e-18);
        assert!((dirichlet_lambda0(PI).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(dirichlet_lambda0(f64::INFINITY).unwrap(), 0.0);
        assert!(dirichlet_lambda0(0.0).is_err());
        assert!(dirichlet_lambda0(-1.0).is_err());
    }

    #[test]
    fn identity_reduces_to_matrix_eigenvalue() {
        let p = example41(ImpulseFn::Identity);
        for width in [4.0, 18.0, 300.0] {
            let l0 = (PI / width).powi(2);
            let expected = -mu_max(-0.1 * l0 - 0.3, 0.5, 0.1, -0.4 * l0 - 0.1);
            let m = principal_eigenvalue_monodromy(&p, width).unwrap();
            let c = principal_eigenvalue_closed_form(&p, width).unwrap();
            assert!(
                (m.lambda - expected).abs() < 1e-14,
                "{} vs {expected}",
                m.lambda
            );
            assert!((c.lambda - expected).abs() < 1e-14);
            assert_eq!(c.k0, Some(0.0));
        }
    }

    #[test]
    fn example41_signs() {
        let p = example41(ImpulseFn::Identity);
        assert!(lambda_at_h0(&p).unwrap().lambda > 0.0);
        assert!(principal_eigenvalue_monodromy(&p, 300.0).unwrap().lambda < 0.0);
        let inf = lambda_infinity(&p).unwrap().lambda;
        let expected = -(-0.4 + 0.24f64.sqrt()) / 2.0;
        assert!((inf - expected).abs() < 1e-15);
        assert!((inf + 0.044949).abs() < 1e-6);

        let sat = example41(ImpulseFn::Saturating { c: 0.5, b: 10.0 });
        assert!(lambda_infinity(&sat).unwrap().lambda > 0.0);
    }

    #[test]
    fn saturating_infinity_matches_direct_perron_root() {
        let sat = example41(ImpulseFn::Saturating { c: 0.5, b: 10.0 });
        let b0 = Mat2::new(-0.3, 0.5, 0.1, -0.1);
        let m = b0.exp(5.0).mul(&Mat2::diag(0.05, 1.0));
        let r = 0.5 * (m.a + m.d) + (0.25 * (m.a - m.d).powi(2) + m.b * m.c).sqrt();
        let expected = -r.ln() / 5.0;
        let got = lambda_infinity(&sat).unwrap().lambda;
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
    }

    #[test]
    fn closed_form_matches_monodromy_with_impulse() {
        for gp in [0.05, 0.3, 0.9] {
            let p = example41(ImpulseFn::Linear { rho: gp });
            for width in [1.0, 4.0, 40.0, 1e4] {
                let m = principal_eigenvalue_monodromy(&p, width).unwrap().lambda;
                let c = principal_eigenvalue_closed_form(&p, width).unwrap();
                assert!((m - c.lambda).abs() < 1e-10 * m.abs().max(1.0));
                let k0 = c.k0.unwrap();
                let sys = ReducedSystem::new(&p, c.lambda0);
                assert!(k0 > 0.0 && k0 < sys.n11 / sys.n12);
                assert!(c.y0.unwrap() > 1.0);
            }
        }
    }

    #[test]
    fn eigenfunctions_are_positive_and_periodic() {
        let p = example41(ImpulseFn::Linear { rho: 0.4 });
        let m = principal_eigenvalue_monodromy(&p, 10.0).unwrap();
        assert!(m.profile.iter().all(|s| s.phi > 0.0 && s.psi > 0.0));
        let x = m.perron_vector.unwrap();
        let last = m.profile.last().unwrap();
        assert!((last.phi - x[0]).abs() < 1e-12);
        assert!((last.psi - x[1]).abs() < 1e-12);
        // post-reset value at t = 0
        assert!((m.profile[0].phi - 0.4 * x[0]).abs() < 1e-15);

        let c = principal_eigenvalue_closed_form(&p, 10.0).unwrap();
        assert!(c.profile.iter().all(|s| s.phi > 0.0 && s.psi > 0.0));
        let first = c.profile[0];
        let last = c.profile.last().unwrap();
        assert!((first.phi - 0.4 * last.phi).abs() < 1e-12 * last.phi);
        assert!((first.psi - last.psi).abs() < 1e-12 * last.psi);
    }

    #[test]
    fn front_eigenvalue_is_translation_invariant() {
        let p = example41(ImpulseFn::Identity);
        let a = lambda_front(&p, -2.0, 2.0).unwrap().lambda;
        let b = lambda_front(&p, -1.0, 3.0).unwrap().lambda;
        assert_eq!(a, lambda_at_h0(&p).unwrap().lambda);
        assert_eq!(a, b);
        assert!(lambda_front(&p, -2.5, 2.5).unwrap().lambda < a);
        assert!(matches!(lambda_front(&p, 1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn widths_approach_the_infinite_limit() {
        let p = example41(ImpulseFn::Identity);
        let inf = lambda_infinity(&p).unwrap().lambda;
        let mut prev = f64::INFINITY;
        for w in [10.0, 1e2, 1e3, 1e4] {
            let l = principal_eigenvalue_monodromy(&p, w).unwrap().lambda;
            assert!(l < prev && l > inf);
            prev = l;
        }
        assert!((prev - inf).abs() < 1e-4);
        let huge = principal_eigenvalue_monodromy(&p, 1e12).unwrap().lambda;
        assert!((huge - inf).abs() < 1e-15);
    }

    #[test]
    fn bounds_hold_for_example41() {
        for gp in [0.05, 0.5, 1.0] {
            let p = example41(ImpulseFn::Linear { rho: gp });
            let b = temporal_bounds(&p);
            for h in [2.0, 4.0, 20.0, 200.0] {
                let c = principal_eigenvalue_closed_form(&p, 2.0 * h).unwrap();
                let max_phi = c.profile.iter().map(|s| s.phi).fold(0.0, f64::max);
                let max_psi = c.profile.iter().map(|s| s.psi).fold(0.0, f64::max);
                assert!(b.alpha1 <= c.profile[0].phi);
                assert!(max_phi <= b.alpha2);
                assert!(b.beta1 <= c.profile[0].psi);
                assert!(max_psi <= b.beta2);
            }
        }
    }

    #[test]
    fn robin_eigenpair() {
        for d in [0.1, 0.4, 1.0] {
            let r = robin_eigen(d).unwrap();
            assert!(r.beta0 > 0.5 * PI && r.beta0 < PI);
            assert!((r.eval(0.0) - 1.0).abs() < 1e-14);
            assert!(r.derivative(0.0).abs() < 1e-8);
            assert!(r.eval(1.0).abs() < 1e-8);
            let h = 1e-3;
            for i in 1..1000 {
                let x = i as f64 * h;
                let (m2, m1, z, p1, p2) = (
                    r.eval(x - 2.0 * h),
                    r.eval(x - h),
                    r.eval(x),
                    r.eval(x + h),
                    r.eval(x + 2.0 * h),
                );
                let d2 = (-p2 + 16.0 * p1 - 30.0 * z + 16.0 * m1 - m2) / (12.0 * h * h);
                let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
                let res = d * d2 + 0.5 * d1 + r.mu0 * z;
                assert!(res.abs() < 1e-6, "d = {d}, x = {x}, residual {res}");
            }
        }
        assert!(robin_eigen(0.0).is_err());
    }
}
