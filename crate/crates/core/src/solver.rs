//! Time integration of the free-boundary model.
//!
//! The moving interval `(g(t), h(t))` is mapped onto `xi in [0, 1]` by
//! `x = g + xi (h - g)`. In the mapped variables
//!
//! ```text
//! U_t = d1 U_xixi / L^2 + a(xi) U_xi - a11 U + a12 V
//! V_t = d2 V_xixi / L^2 + a(xi) V_xi - a22 V + f(U)
//! a(xi) = (g' + xi (h' - g')) / L,   L = h - g
//! ```
//!
//! and the Stefan conditions read `h' = -(mu1 U_xi + mu2 V_xi) / L` at `xi = 1`
//! (same expression at `xi = 0` for `g'`). Each step first evaluates the front
//! velocities with one-sided three-point stencils, advances the fronts (Euler
//! or Heun), then advances the densities with diffusion, mesh advection and
//! linear decay treated implicitly and the cross-coupling sources explicitly.
//! Each species costs one tridiagonal solve per stage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;
use crate::model::{density_bounds, DensityBounds, InitialData, ModelParams};

/// Uniform grid on the reference interval `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub xi: Vec<f64>,
}

impl Grid {
    pub const MIN_N: usize = 16;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_N {
            return Err(Error::Config(format!(
                "grid resolution n must be at least {}, got {n}",
                Self::MIN_N
            )));
        }
        let xi = (0..=n).map(|i| i as f64 / n as f64).collect();
        Ok(Grid { n, xi })
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }
}

/// Solution at one instant: fronts and densities at the reference nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub g: f64,
    pub h: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl SimState {
    /// Samples the initial data on `[-h0, h0]` at `n + 1` mapped nodes.
    pub fn initial(params: &ModelParams, init: &InitialData, grid: &Grid) -> Self {
        let h0 = params.h0;
        let n = grid.n;
        let mut u: Vec<f64> = grid
            .xi
            .iter()
            .map(|&s| init.u0.eval(-h0 + 2.0 * h0 * s, h0).max(0.0))
            .collect();
        let mut v: Vec<f64> = grid
            .xi
            .iter()
            .map(|&s| init.v0.eval(-h0 + 2.0 * h0 * s, h0).max(0.0))
            .collect();
        u[0] = 0.0;
        u[n] = 0.0;
        v[0] = 0.0;
        v[n] = 0.0;
        SimState {
            t: 0.0,
            g: -h0,
            h: h0,
            u,
            v,
        }
    }

    pub fn n(&self) -> usize {
        self.u.len() - 1
    }

    pub fn width(&self) -> f64 {
        self.h - self.g
    }

    /// Physical coordinate of node `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.g + (i as f64 / self.n() as f64) * self.width()
    }

    pub fn sup_u(&self) -> f64 {
        sup(&self.u)
    }

    pub fn sup_v(&self) -> f64 {
        sup(&self.v)
    }
}

fn sup(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrontUpdate {
    Euler,
    Heun,
}

/// Discretisation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Number of grid intervals on the reference interval.
    pub n: usize,
    /// Steps per impulse period; `dt = tau / steps_per_period`.
    pub steps_per_period: usize,
    pub front_update: FrontUpdate,
    /// Undershoot tolerated before clipping, relative to the current sup-norm.
    pub negative_clip_tol: f64,
    /// Largest admitted mesh Courant number `dt max(|g'|, |h'|) n / (h - g)`.
    pub max_courant: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 512,
            steps_per_period: 2000,
            front_update: FrontUpdate::Heun,
            negative_clip_tol: 1e-12,
            max_courant: 5.0,
        }
    }
}

impl SolverConfig {
    pub fn with_resolution(n: usize, steps_per_period: usize) -> Self {
        SolverConfig {
            n,
            steps_per_period,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.n)?;
        if self.steps_per_period < 10 {
            return Err(Error::Config(format!(
                "steps_per_period must be at least 10, got {}",
                self.steps_per_period
            )));
        }
        if !(self.negative_clip_tol >= 0.0) {
            return Err(Error::Config(
                "negative_clip_tol must be non-negative".into(),
            ));
        }
        if !(self.max_courant > 0.0) {
            return Err(Error::Config("max_courant must be positive".into()));
        }
        Ok(())
    }

    pub fn dt(&self, tau: f64) -> f64 {
        tau / self.steps_per_period as f64
    }
}

/// One recorded density profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub g: f64,
    pub h: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Snapshot {
    fn of(state: &SimState) -> Self {
        Snapshot {
            t: state.t,
            g: state.g,
            h: state.h,
            u: state.u.clone(),
            v: state.v.clone(),
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        let n = self.u.len() - 1;
        self.g + (i as f64 / n as f64) * (self.h - self.g)
    }

    /// Linear interpolation of `u` at physical position `x`; zero outside `(g, h)`.
    pub fn u_at(&self, x: f64) -> f64 {
        interpolate_mapped(&self.u, self.g, self.h, x)
    }

    pub fn v_at(&self, x: f64) -> f64 {
        interpolate_mapped(&self.v, self.g, self.h, x)
    }
}

fn interpolate_mapped(vals: &[f64], g: f64, h: f64, x: f64) -> f64 {
    if x <= g || x >= h {
        return 0.0;
    }
    let n = vals.len() - 1;
    let s = (x - g) / (h - g) * n as f64;
    let i = (s.floor() as usize).min(n - 1);
    let w = s - i as f64;
    vals[i] * (1.0 - w) + vals[i + 1] * w
}

/// Observables recorded at every step boundary.
///
/// At multiples of `tau` the recorded value is the one just before the reset.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub sup_u: Vec<f64>,
    pub sup_v: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: SimState,
}

impl TimeSeries {
    fn record(&mut self, s: &SimState) {
        self.t.push(s.t);
        self.g.push(s.g);
        self.h.push(s.h);
        self.sup_u.push(s.sup_u());
        self.sup_v.push(s.sup_v());
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().unwrap_or(&0.0)
    }

    pub fn final_h(&self) -> f64 {
        *self.h.last().unwrap_or(&0.0)
    }

    pub fn final_g(&self) -> f64 {
        *self.g.last().unwrap_or(&0.0)
    }

    /// The first `len` records as a series of their own.
    pub fn prefix(&self, len: usize) -> TimeSeries {
        let len = len.min(self.len());
        TimeSeries {
            t: self.t[..len].to_vec(),
            g: self.g[..len].to_vec(),
            h: self.h[..len].to_vec(),
            sup_u: self.sup_u[..len].to_vec(),
            sup_v: self.sup_v[..len].to_vec(),
            snapshots: self
                .snapshots
                .iter()
                .filter(|s| len > 0 && s.t <= self.t[len - 1])
                .cloned()
                .collect(),
            final_state: self.final_state.clone(),
        }
    }
}

/// Front velocities `(g', h')` from one-sided second-order stencils.
///
/// The continuous problem has `g' < 0 < h'` whenever the densities are
/// positive inside; stencil noise on a vanishing tail is clipped to zero.
pub fn front_velocities(params: &ModelParams, u: &[f64], v: &[f64], width: f64) -> (f64, f64) {
    let n = u.len() - 1;
    let inv = n as f64 / 2.0;
    let left = |w: &[f64]| (-3.0 * w[0] + 4.0 * w[1] - w[2]) * inv;
    let right = |w: &[f64]| (3.0 * w[n] - 4.0 * w[n - 1] + w[n - 2]) * inv;
    let gdot = -(params.mu1 * left(u) + params.mu2 * left(v)) / width;
    let hdot = -(params.mu1 * right(u) + params.mu2 * right(v)) / width;
    (gdot.min(0.0), hdot.max(0.0))
}

/// Reusable buffers and cached constants for repeated steps.
#[derive(Debug, Clone)]
pub struct Stepper {
    params: ModelParams,
    cfg: SolverConfig,
    dt: f64,
    bounds: Option<DensityBounds>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    scratch: Vec<f64>,
    rhs: Vec<f64>,
    u_pred: Vec<f64>,
    v_pred: Vec<f64>,
}

impl Stepper {
    pub fn new(params: &ModelParams, cfg: &SolverConfig, dt: f64) -> Result<Self> {
        cfg.validate()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let m = cfg.n - 1;
        Ok(Stepper {
            params: *params,
            cfg: *cfg,
            dt,
            bounds: None,
            lower: vec![0.0; m],
            diag: vec![0.0; m],
            upper: vec![0.0; m],
            scratch: vec![0.0; m],
            rhs: vec![0.0; m],
            u_pred: vec![0.0; cfg.n + 1],
            v_pred: vec![0.0; cfg.n + 1],
        })
    }

    /// Enables the per-step check against `(C2, C3)`.
    pub fn with_bounds(mut self, bounds: Option<DensityBounds>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances the free-boundary problem by one step (`t` is left to the caller).
    pub fn step(&mut self, state: &mut SimState) -> Result<()> {
        let n = self.cfg.n;
        if state.u.len() != n + 1 || state.v.len() != n + 1 {
            return Err(Error::Config(format!(
                "state has {} nodes but the solver expects {}",
                state.u.len(),
                n + 1
            )));
        }
        let dt = self.dt;
        let (gd0, hd0) = front_velocities(&self.params, &state.u, &state.v, state.width());
        let (gdot, hdot) = match self.cfg.front_update {
            FrontUpdate::Euler => (gd0, hd0),
            FrontUpdate::Heun => {
                let (gp, hp) = (state.g + dt * gd0, state.h + dt * hd0);
                let mut up = std::mem::take(&mut self.u_pred);
                let mut vp = std::mem::take(&mut self.v_pred);
                self.densities(&state.u, &state.v, hp - gp, gd0, hd0, &mut up, &mut vp)?;
                let (gd1, hd1) = front_velocities(&self.params, &up, &vp, hp - gp);
                self.u_pred = up;
                self.v_pred = vp;
                (0.5 * (gd0 + gd1), 0.5 * (hd0 + hd1))
            }
        };
        let g = state.g + dt * gdot;
        let h = state.h + dt * hdot;
        let width = h - g;
        let courant = dt * gdot.abs().max(hdot.abs()) * n as f64 / width;
        if courant > self.cfg.max_courant {
            return Err(Error::Stability(format!(
                "mesh Courant number {courant:.3} exceeds {} with dt = {dt}, n = {n}",
                self.cfg.max_courant
            )));
        }
        let mut u_new = std::mem::take(&mut self.u_pred);
        let mut v_new = std::mem::take(&mut self.v_pred);
        self.densities(
            &state.u, &state.v, width, gdot, hdot, &mut u_new, &mut v_new,
        )?;
        self.finish(&mut u_new, &mut v_new)?;
        std::mem::swap(&mut state.u, &mut u_new);
        std::mem::swap(&mut state.v, &mut v_new);
        self.u_pred = u_new;
        self.v_pred = v_new;
        state.g = g;
        state.h = h;
        Ok(())
    }

    /// Advances the densities on a frozen interval of the given width.
    pub fn step_fixed(&mut self, state: &mut SimState) -> Result<()> {
        let width = state.width();
        let mut u_new = std::mem::take(&mut self.u_pred);
        let mut v_new = std::mem::take(&mut self.v_pred);
        self.densities(&state.u, &state.v, width, 0.0, 0.0, &mut u_new, &mut v_new)?;
        self.finish(&mut u_new, &mut v_new)?;
        std::mem::swap(&mut state.u, &mut u_new);
        std::mem::swap(&mut state.v, &mut v_new);
        self.u_pred = u_new;
        self.v_pred = v_new;
        Ok(())
    }

    /// Clips round-off undershoot and enforces the density bounds.
    fn finish(&self, u: &mut [f64], v: &mut [f64]) -> Result<()> {
        for (name, w) in [("u", &mut *u), ("v", &mut *v)] {
            let s = sup(w);
            let tol = self.cfg.negative_clip_tol * s;
            for x in w.iter_mut() {
                if *x < 0.0 {
                    if *x < -tol {
                        return Err(Error::Scheme(format!(
                            "{name} undershoot {x:e} exceeds tolerance {tol:e}"
                        )));
                    }
                    *x = 0.0;
                }
                if !x.is_finite() {
                    return Err(Error::Scheme(format!("{name} became non-finite")));
                }
            }
        }
        if let Some(b) = self.bounds {
            let (su, sv) = (sup(u), sup(v));
            if su >= b.c2 || sv >= b.c3 {
                return Err(Error::Scheme(format!(
                    "density bound violated: sup u = {su}, C2 = {}, sup v = {sv}, C3 = {}",
                    b.c2, b.c3
                )));
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn densities(
        &mut self,
        u: &[f64],
        v: &[f64],
        width: f64,
        gdot: f64,
        hdot: f64,
        u_out: &mut [f64],
        v_out: &mut [f64],
    ) -> Result<()> {
        let p = self.params;
        let dt = self.dt;
        let n = self.cfg.n;

        self.assemble(p.d1 / (width * width), p.a11, width, gdot, hdot);
        for i in 1..n {
            self.rhs[i - 1] = u[i] + dt * p.a12 * v[i];
        }
        solve_tridiagonal(
            &self.lower,
            &self.diag,
            &self.upper,
            &mut self.rhs,
            &mut self.scratch,
        )?;
        u_out[0] = 0.0;
        u_out[n] = 0.0;
        u_out[1..n].copy_from_slice(&self.rhs);

        self.assemble(p.d2 / (width * width), p.a22, width, gdot, hdot);
        for i in 1..n {
            self.rhs[i - 1] = v[i] + dt * p.growth.value(u[i]);
        }
        solve_tridiagonal(
            &self.lower,
            &self.diag,
            &self.upper,
            &mut self.rhs,
            &mut self.scratch,
        )?;
        v_out[0] = 0.0;
        v_out[n] = 0.0;
        v_out[1..n].copy_from_slice(&self.rhs);
        Ok(())
    }

    /// Rows of `I - dt (D d_xixi + a(xi) d_xi - decay)` on the interior nodes.
    ///
    /// The advection term is centred while the cell Peclet number stays at or
    /// below one and upwinded otherwise, so the matrix is always an M-matrix.
    fn assemble(&mut self, diff: f64, decay: f64, width: f64, gdot: f64, hdot: f64) {
        let n = self.cfg.n;
        let dt = self.dt;
        let dxi = 1.0 / n as f64;
        let k = diff / (dxi * dxi);
        for i in 1..n {
            let xi = i as f64 / n as f64;
            let a = (gdot + xi * (hdot - gdot)) / width;
            let (lo, di, up) = if a.abs() * dxi <= 2.0 * diff {
                let c = a / (2.0 * dxi);
                (-(k - c), 2.0 * k, -(k + c))
            } else if a > 0.0 {
                let c = a / dxi;
                (-k, 2.0 * k + c, -(k + c))
            } else {
                let c = -a / dxi;
                (-(k + c), 2.0 * k + c, -k)
            };
            self.lower[i - 1] = dt * lo;
            self.diag[i - 1] = 1.0 + dt * (di + decay);
            self.upper[i - 1] = dt * up;
        }
    }
}

/// Advances `state` by one step of length `dt` and returns the new state.
pub fn transform_step(
    state: &SimState,
    params: &ModelParams,
    cfg: &SolverConfig,
    dt: f64,
) -> Result<SimState> {
    let mut stepper = Stepper::new(params, cfg, dt)?;
    let mut next = state.clone();
    stepper.step(&mut next)?;
    next.t = state.t + dt;
    Ok(next)
}

/// Applies the reset `u <- G(u)` pointwise.
pub fn apply_impulse(state: &SimState, params: &ModelParams) -> SimState {
    let mut next = state.clone();
    impulse_in_place(&mut next.u, params);
    next
}

pub(crate) fn impulse_in_place(u: &mut [f64], params: &ModelParams) {
    for x in u.iter_mut() {
        *x = params.impulse.value(*x);
    }
}

/// Integrates from `t = 0` to (the step boundary nearest) `t_end`.
///
/// The reset is applied at `t = 0+` and after every multiple of `tau` that
/// precedes `t_end`. Snapshots are taken at the first step boundary at or
/// after each requested time.
pub fn run(
    params: &ModelParams,
    init: &InitialData,
    cfg: &SolverConfig,
    t_end: f64,
    snapshot_times: &[f64],
) -> Result<TimeSeries> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    params.validate()?;
    cfg.validate()?;
    let grid = Grid::new(cfg.n)?;
    let dt = cfg.dt(params.tau);
    let m = cfg.steps_per_period;
    let total = ((t_end / dt).round() as usize).max(1);

    let mut state = SimState::initial(params, init, &grid);
    let (max_u0, max_v0) = init.maxima(params.h0);
    let mut stepper =
        Stepper::new(params, cfg, dt)?.with_bounds(density_bounds(params, max_u0, max_v0));

    let mut wanted: Vec<f64> = snapshot_times.to_vec();
    wanted.sort_by(|a, b| a.total_cmp(b));
    let mut next_snap = 0;

    let mut series = TimeSeries {
        t: Vec::with_capacity(total + 1),
        g: Vec::with_capacity(total + 1),
        h: Vec::with_capacity(total + 1),
        sup_u: Vec::with_capacity(total + 1),
        sup_v: Vec::with_capacity(total + 1),
        snapshots: Vec::new(),
        final_state: state.clone(),
    };
    let mut take_snapshots = |state: &SimState, series: &mut TimeSeries| {
        while next_snap < wanted.len() && wanted[next_snap] <= state.t + 0.5 * dt {
            series.snapshots.push(Snapshot::of(state));
            next_snap += 1;
        }
    };

    series.record(&state);
    take_snapshots(&state, &mut series);
    impulse_in_place(&mut state.u, params);

    for step in 1..=total {
        stepper.step(&mut state)?;
        state.t = step as f64 * dt;
        series.record(&state);
        take_snapshots(&state, &mut series);
        if step % m == 0 && step < total {
            impulse_in_place(&mut state.u, params);
        }
    }
    series.final_state = state;
    Ok(series)
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

    #[test]
    fn zero_data_is_an_equilibrium() {
        let p = example41(ImpulseFn::Identity);
        let cfg = SolverConfig::with_resolution(32, 100);
        let grid = Grid::new(32).unwrap();
        let s = SimState::initial(&p, &InitialData::cos_quarter(0.0, 0.0), &grid);
        let next = transform_step(&s, &p, &cfg, 0.05).unwrap();
        assert_eq!(next.g, -2.0);
        assert_eq!(next.h, 2.0);
        assert!(next.u.iter().chain(&next.v).all(|&x| x == 0.0));
        assert_eq!(next.t, 0.05);
    }

    #[test]
    fn symmetric_data_keeps_symmetric_fronts() {
        let p = example41(ImpulseFn::Identity);
        let cfg = SolverConfig::with_resolution(64, 100);
        let grid = Grid::new(64).unwrap();
        let s = SimState::initial(&p, &InitialData::cos_quarter(0.3, 0.1), &grid);
        let (gd, hd) = front_velocities(&p, &s.u, &s.v, s.width());
        assert_eq!(gd, -hd);
        let next = transform_step(&s, &p, &cfg, 0.05).unwrap();
        assert!((next.g + next.h).abs() < 1e-15);
        assert!(next.h > 2.0);
    }

    #[test]
    fn impulse_examples() {
        let grid = Grid::new(16).unwrap();
        let mut p = example41(ImpulseFn::Identity);
        let s = SimState::initial(&p, &InitialData::cos_quarter(0.3, 0.1), &grid);
        assert_eq!(apply_impulse(&s, &p), s);

        p.impulse = ImpulseFn::Linear { rho: 0.5 };
        let mut s5 = s.clone();
        s5.u = vec![0.0, 2.0, 4.0, 2.0, 0.0];
        assert_eq!(apply_impulse(&s5, &p).u, vec![0.0, 1.0, 2.0, 1.0, 0.0]);

        p.impulse = ImpulseFn::Saturating { c: 0.5, b: 10.0 };
        s5.u = vec![0.0, 10.0, 0.0];
        let out = apply_impulse(&s5, &p);
        assert_eq!(out.u, vec![0.0, 0.25, 0.0]);
        assert_eq!(out.v, s5.v);
        assert_eq!((out.g, out.h), (s5.g, s5.h));
    }

    #[test]
    fn frozen_fronts_match_fixed_domain_stepper() {
        let mut p = example41(ImpulseFn::Identity);
        p.mu1 = 0.0;
        p.mu2 = 0.0;
        let cfg = SolverConfig::with_resolution(256, 200);
        let grid = Grid::new(256).unwrap();
        let init = InitialData::cos_quarter(0.3, 0.1);
        let dt = cfg.dt(p.tau);
        let mut a = SimState::initial(&p, &init, &grid);
        let mut b = a.clone();
        let mut s1 = Stepper::new(&p, &cfg, dt).unwrap();
        let mut s2 = Stepper::new(&p, &cfg, dt).unwrap();
        for _ in 0..200 {
            s1.step(&mut a).unwrap();
            s2.step_fixed(&mut b).unwrap();
        }
        assert_eq!((a.g, a.h), (-2.0, 2.0));
        for (x, y) in a.u.iter().zip(&b.u) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn courant_guard_names_dt_and_n() {
        let p = example41(ImpulseFn::Identity);
        let mut cfg = SolverConfig::with_resolution(512, 10);
        cfg.max_courant = 0.1;
        let grid = Grid::new(512).unwrap();
        let s = SimState::initial(&p, &InitialData::cos_quarter(0.3, 0.1), &grid);
        match transform_step(&s, &p, &cfg, 0.5) {
            Err(Error::Stability(msg)) => {
                assert!(msg.contains("dt = 0.5") && msg.contains("n = 512"), "{msg}");
            }
            other => panic!("expected stability error, got {other:?}"),
        }
    }

    #[test]
    fn run_is_deterministic_and_monotone() {
        let p = example41(ImpulseFn::Saturating { c: 0.5, b: 10.0 });
        let cfg = SolverConfig::with_resolution(64, 100);
        let init = InitialData::cos_quarter(0.3, 0.1);
        let a = run(&p, &init, &cfg, 10.0, &[0.0, 5.0, 10.0]).unwrap();
        let b = run(&p, &init, &cfg, 10.0, &[0.0, 5.0, 10.0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 201);
        assert_eq!(a.snapshots.len(), 3);
        assert!(a.t.windows(2).all(|w| w[1] > w[0]));
        assert!(a.h.windows(2).all(|w| w[1] >= w[0]));
        assert!(a.g.windows(2).all(|w| w[1] <= w[0]));
        assert!(a.h.windows(2).any(|w| w[1] > w[0]));
        // reset at t = 0+ then at t = 5
        assert_eq!(a.t_end(), 10.0);
    }

    #[test]
    fn grid_rejects_coarse_resolution() {
        assert!(Grid::new(8).is_err());
        assert!(SolverConfig::with_resolution(64, 5).validate().is_err());
    }
}
