//! Parameter sweeps evaluated in parallel.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{simulate_and_classify, DetectionCriteria, Verdict};
use crate::config::RunConfig;
use crate::eigen::{lambda_at_h0, lambda_infinity};
use crate::error::{Error, Result};
use crate::model::SWEEP_AXES;
use crate::output::{fmt_f64, CsvTable};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub lambda_infinity: f64,
    pub lambda_h0: f64,
    /// Verdict of the simulated run.
    pub verdict: Verdict,
    pub final_h: f64,
    pub final_sup_u: f64,
}

fn evaluate(cfg: &RunConfig, axis: &str, value: f64) -> Result<SweepRow> {
    let params = cfg.model.with(axis, value)?;
    params.validate()?;
    let init = cfg.initial_data()?;
    let (c, series) = simulate_and_classify(
        &params,
        &init,
        &cfg.solver,
        cfg.run.t_end,
        &DetectionCriteria::default(),
    )?;
    Ok(SweepRow {
        value,
        lambda_infinity: lambda_infinity(&params)?.lambda,
        lambda_h0: lambda_at_h0(&params)?.lambda,
        verdict: c.verdict,
        final_h: series.final_h(),
        final_sup_u: *series.sup_u.last().unwrap_or(&0.0),
    })
}

/// One row per value, in input order, computed on at most `jobs` threads.
pub fn sweep(cfg: &RunConfig, axis: &str, values: &[f64], jobs: usize) -> Result<Vec<SweepRow>> {
    if !SWEEP_AXES.contains(&axis) {
        return Err(Error::Config(format!(
            "unknown axis `{axis}`; valid axes: {}",
            SWEEP_AXES.join(", ")
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| values.par_iter().map(|&v| evaluate(cfg, axis, v)).collect())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut t = CsvTable::new(&[
        "value",
        "lambda_infinity",
        "lambda_h0",
        "verdict",
        "final_h",
        "final_sup_u",
    ]);
    for r in rows {
        t.push_row(&[
            fmt_f64(r.value),
            fmt_f64(r.lambda_infinity),
            fmt_f64(r.lambda_h0),
            r.verdict.to_string(),
            fmt_f64(r.final_h),
            fmt_f64(r.final_sup_u),
        ]);
    }
    t.finish()
}
