//! Spreading/vanishing decisions: analytic criteria from the principal
//! eigenvalues, the critical length, outcome detection on simulated series,
//! and threshold searches in `mu2` and in the initial amplitude.

use serde::Serialize;

use crate::eigen::{lambda_at_h0, lambda_infinity, principal_eigenvalue_monodromy};
use crate::error::{Error, Result};
use crate::model::{InitialData, ModelParams, Profile};
use crate::solver::{run, SolverConfig, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Vanishing,
    Spreading,
    ThresholdDependent,
    Undecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Vanishing => "Vanishing",
            Verdict::Spreading => "Spreading",
            Verdict::ThresholdDependent => "ThresholdDependent",
            Verdict::Undecided => "Undecided",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Summary of the simulated series that produced a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimEvidence {
    pub t_end: f64,
    pub final_g: f64,
    pub final_h: f64,
    pub final_sup_u: f64,
    pub final_sup_v: f64,
    /// Growth of `h - g` over the trailing window.
    pub trailing_width_growth: f64,
    /// Width that certifies spreading.
    pub trigger_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub lambda_infinity: f64,
    pub lambda_h0: f64,
    pub critical_length: Option<f64>,
    pub simulation: Option<SimEvidence>,
}

/// Verdict from the signs of the principal eigenvalues alone.
pub fn classify_analytic(params: &ModelParams) -> Result<Classification> {
    params.validate()?;
    let l_inf = lambda_infinity(params)?.lambda;
    let l_h0 = lambda_at_h0(params)?.lambda;
    let verdict = if l_inf >= 0.0 {
        Verdict::Vanishing
    } else if l_h0 <= 0.0 {
        Verdict::Spreading
    } else {
        Verdict::ThresholdDependent
    };
    let critical_length = if verdict == Verdict::ThresholdDependent {
        Some(critical_length(params, 1e-10)?)
    } else {
        None
    };
    Ok(Classification {
        verdict,
        lambda_infinity: l_inf,
        lambda_h0: l_h0,
        critical_length,
        simulation: None,
    })
}

/// Width `l*` at which the frozen-domain principal eigenvalue changes sign,
/// located by bisection to absolute tolerance `tol`.
pub fn critical_length(params: &ModelParams, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let l_inf = lambda_infinity(params)?.lambda;
    if l_inf >= 0.0 {
        return Err(Error::Domain(format!(
            "no critical length: lambda(inf) = {l_inf:e} is not negative"
        )));
    }
    let lambda = |w: f64| principal_eigenvalue_monodromy(params, w).map(|r| r.lambda);
    let mut lo = 2.0 * params.h0;
    let l_h0 = lambda(lo)?;
    if l_h0 <= 0.0 {
        return Err(Error::Domain(format!(
            "no critical length beyond 2 h0: lambda(h0) = {l_h0:e} is not positive"
        )));
    }
    let mut hi = 2.0 * lo;
    let mut expansions = 0;
    while lambda(hi)? >= 0.0 {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::NonConvergence {
                context: "bracketing the critical length".into(),
                iterations: expansions,
                defect: hi,
            });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lambda(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Thresholds used by [`detect_outcome`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionCriteria {
    /// `sup u + sup v` below this counts as extinct.
    pub eps_vanish: f64,
    /// `sup u + sup v` above this counts as persistent.
    pub eps_spread: f64,
    /// Stall tolerance on the width, as a fraction of `h0`.
    pub stall_fraction_of_h0: f64,
    /// Fraction of the run examined for the stall test.
    pub trailing_fraction: f64,
    /// Spreading trigger width when no critical length exists.
    pub l_max: f64,
}

impl Default for DetectionCriteria {
    fn default() -> Self {
        DetectionCriteria {
            eps_vanish: 1e-3,
            eps_spread: 1e-2,
            stall_fraction_of_h0: 0.01,
            trailing_fraction: 0.2,
            l_max: 1000.0,
        }
    }
}

/// Reads a verdict off a completed run.
///
/// Vanishing needs small mass at the end and a stalled width over the trailing
/// window; spreading needs the width to exceed the critical length (or `l_max`)
/// with non-trivial mass at the end. Anything else is `Undecided`.
pub fn detect_outcome(
    series: &TimeSeries,
    params: &ModelParams,
    criteria: &DetectionCriteria,
) -> Result<Classification> {
    if series.is_empty() {
        return Err(Error::Domain("empty time series".into()));
    }
    let l_inf = lambda_infinity(params)?.lambda;
    let l_h0 = lambda_at_h0(params)?.lambda;
    let l_star = if l_inf < 0.0 && l_h0 > 0.0 {
        Some(critical_length(params, 1e-8)?)
    } else {
        None
    };
    let trigger_width = l_star.unwrap_or(criteria.l_max);

    let last = series.len() - 1;
    let t_end = series.t[last];
    let t_start = series.t[0];
    let window_start = t_end - criteria.trailing_fraction * (t_end - t_start);
    let first = series.t.partition_point(|&t| t < window_start).min(last);
    let width = |i: usize| series.h[i] - series.g[i];
    let growth = width(last) - width(first);
    let mass = series.sup_u[last] + series.sup_v[last];

    let verdict =
        if mass < criteria.eps_vanish && growth < criteria.stall_fraction_of_h0 * params.h0 {
            Verdict::Vanishing
        } else if width(last) > trigger_width && mass > criteria.eps_spread {
            Verdict::Spreading
        } else {
            Verdict::Undecided
        };
    Ok(Classification {
        verdict,
        lambda_infinity: l_inf,
        lambda_h0: l_h0,
        critical_length: l_star,
        simulation: Some(SimEvidence {
            t_end,
            final_g: series.g[last],
            final_h: series.h[last],
            final_sup_u: series.sup_u[last],
            final_sup_v: series.sup_v[last],
            trailing_width_growth: growth,
            trigger_width,
        }),
    })
}

/// Simulates and classifies, doubling `t_end` once when the first run is
/// inconclusive.
pub fn simulate_and_classify(
    params: &ModelParams,
    init: &InitialData,
    cfg: &SolverConfig,
    t_end: f64,
    criteria: &DetectionCriteria,
) -> Result<(Classification, TimeSeries)> {
    let series = run(params, init, cfg, t_end, &[])?;
    let c = detect_outcome(&series, params, criteria)?;
    if c.verdict != Verdict::Undecided {
        return Ok((c, series));
    }
    let series = run(params, init, cfg, 2.0 * t_end, &[])?;
    let c = detect_outcome(&series, params, criteria)?;
    Ok((c, series))
}

/// One evaluation of the threshold predicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub value: f64,
    pub verdict: Verdict,
    pub lo: f64,
    pub hi: f64,
    pub t_end: f64,
    pub final_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub parameter: String,
    /// Midpoint of the final bracket.
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub history: Vec<Probe>,
}

/// Bisection on a monotone verdict predicate over `[lo, hi]`.
fn bisect_threshold<F>(
    name: &str,
    bracket: (f64, f64),
    tol: f64,
    probe: F,
) -> Result<ThresholdResult>
where
    F: Fn(f64) -> Result<(Classification, f64)> + Sync,
{
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Domain(format!(
            "degenerate bracket for {name}: ({lo}, {hi})"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let undecided = |value: f64, c: &Classification| Error::NonConvergence {
        context: format!("outcome at {name} = {value} stayed Undecided after extending the run"),
        iterations: 2,
        defect: c
            .simulation
            .as_ref()
            .map_or(f64::NAN, |s| s.final_sup_u + s.final_sup_v),
    };
    let final_h = |c: &Classification| c.simulation.as_ref().map_or(f64::NAN, |s| s.final_h);

    let (at_lo, at_hi) = rayon::join(|| probe(lo), || probe(hi));
    let (c_lo, t_lo) = at_lo?;
    let (c_hi, t_hi) = at_hi?;
    let mut history = vec![
        Probe {
            value: lo,
            verdict: c_lo.verdict,
            lo,
            hi,
            t_end: t_lo,
            final_h: final_h(&c_lo),
        },
        Probe {
            value: hi,
            verdict: c_hi.verdict,
            lo,
            hi,
            t_end: t_hi,
            final_h: final_h(&c_hi),
        },
    ];
    for (value, c) in [(lo, &c_lo), (hi, &c_hi)] {
        if c.verdict == Verdict::Undecided {
            return Err(undecided(value, c));
        }
    }
    if c_lo.verdict != Verdict::Vanishing || c_hi.verdict != Verdict::Spreading {
        return Err(Error::Domain(format!(
            "bracket does not straddle the threshold: {name} = {lo} gives {}, {name} = {hi} gives {}",
            c_lo.verdict, c_hi.verdict
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let (c, t_end) = probe(mid)?;
        history.push(Probe {
            value: mid,
            verdict: c.verdict,
            lo,
            hi,
            t_end,
            final_h: final_h(&c),
        });
        match c.verdict {
            Verdict::Vanishing => lo = mid,
            Verdict::Spreading => hi = mid,
            _ => return Err(undecided(mid, &c)),
        }
    }
    Ok(ThresholdResult {
        parameter: name.to_string(),
        value: 0.5 * (lo + hi),
        lo,
        hi,
        history,
    })
}

fn require_threshold_regime(params: &ModelParams) -> Result<()> {
    let c = classify_analytic(params)?;
    if c.verdict == Verdict::ThresholdDependent {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "threshold search needs lambda(inf) < 0 < lambda(h0), got lambda(inf) = {:e}, lambda(h0) = {:e}",
            c.lambda_infinity, c.lambda_h0
        )))
    }
}

fn probe_run(
    params: &ModelParams,
    init: &InitialData,
    cfg: &SolverConfig,
    t_end: f64,
    criteria: &DetectionCriteria,
) -> Result<(Classification, f64)> {
    let (c, series) = simulate_and_classify(params, init, cfg, t_end, criteria)?;
    Ok((c, series.t_end()))
}

/// Locates the sharp threshold in `mu2` separating vanishing from spreading.
pub fn find_mu_threshold(
    params: &ModelParams,
    init: &InitialData,
    cfg: &SolverConfig,
    mu2_bracket: (f64, f64),
    tol: f64,
    t_end: f64,
    criteria: &DetectionCriteria,
) -> Result<ThresholdResult> {
    require_threshold_regime(params)?;
    bisect_threshold("mu2", mu2_bracket, tol, |mu2| {
        let p = params.with("mu2", mu2)?;
        probe_run(&p, init, cfg, t_end, criteria)
    })
}

/// Locates the sharp threshold in the amplitude `kappa` of `u0 = kappa * upsilon`.
///
/// Only linear impulses (including the identity) are admitted.
#[allow(clippy::too_many_arguments)]
pub fn find_kappa_threshold(
    params: &ModelParams,
    upsilon: &Profile,
    v0: &Profile,
    cfg: &SolverConfig,
    kappa_bracket: (f64, f64),
    tol: f64,
    t_end: f64,
    criteria: &DetectionCriteria,
) -> Result<ThresholdResult> {
    if !params.impulse.is_linear() {
        return Err(Error::Precondition(
            "the amplitude threshold requires a linear impulse G(u) = rho u".into(),
        ));
    }
    require_threshold_regime(params)?;
    if kappa_bracket.0 <= 0.0 {
        return Err(Error::Domain("kappa bracket must be positive".into()));
    }
    bisect_threshold("kappa", kappa_bracket, tol, |kappa| {
        let init = InitialData {
            u0: upsilon.scaled(kappa),
            v0: v0.clone(),
        };
        probe_run(params, &init, cfg, t_end, criteria)
    })
}
