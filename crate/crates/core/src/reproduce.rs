//! Reproduction runs for the built-in example cases.

use std::path::Path;

use serde::Serialize;

use crate::classify::{detect_outcome, Classification, DetectionCriteria};
use crate::config::{preset, Figure, RunConfig};
use crate::eigen::{lambda_infinity, principal_eigenvalue_monodromy, EigenMethod};
use crate::error::Result;
use crate::model::ModelParams;
use crate::output::{
    snapshots_csv, svg_fronts, svg_heatmap, timeseries_csv, to_json, write_atomic,
};
use crate::solver::{run, TimeSeries};

/// A principal eigenvalue on one interval, next to the value quoted with the
/// example when there is one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenEntry {
    pub interval: String,
    pub width: Option<f64>,
    pub lambda: f64,
    pub method: EigenMethod,
    pub reference_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproductionReport {
    pub figure: Figure,
    pub classification: Classification,
    pub t_end: f64,
    pub final_h: f64,
    pub max_h: f64,
    pub final_sup_u: f64,
    pub eigen: Vec<EigenEntry>,
    #[serde(skip)]
    pub series: TimeSeries,
}

/// Intervals reported for each case, with the quoted eigenvalue if any.
fn eigen_intervals(figure: Figure, params: &ModelParams) -> Vec<(f64, Option<f64>)> {
    let own = 2.0 * params.h0;
    match figure {
        Figure::A => vec![(own, None), (300.0, Some(-0.012))],
        Figure::B => vec![(own, None), (300.0, None)],
        Figure::C | Figure::D => vec![(own, None), (18.0, Some(-0.002))],
    }
}

fn eigen_entries(figure: Figure, params: &ModelParams) -> Result<Vec<EigenEntry>> {
    let mut out = Vec::new();
    for (width, reference_value) in eigen_intervals(figure, params) {
        let r = principal_eigenvalue_monodromy(params, width)?;
        out.push(EigenEntry {
            interval: format!("({}, {})", -0.5 * width, 0.5 * width),
            width: Some(width),
            lambda: r.lambda,
            method: r.method,
            reference_value,
        });
    }
    let r = lambda_infinity(params)?;
    out.push(EigenEntry {
        interval: "(-inf, inf)".into(),
        width: None,
        lambda: r.lambda,
        method: r.method,
        reference_value: None,
    });
    Ok(out)
}

/// Runs a preset and, when `out_dir` is given, writes its report files.
pub fn reproduce(figure: Figure, out_dir: Option<&Path>) -> Result<ReproductionReport> {
    reproduce_with(figure, &preset(figure), out_dir)
}

/// As [`reproduce`] with an explicit (for example coarser) configuration.
///
/// Files written: `timeseries.csv`, `snapshots.csv`, `heatmap.svg`,
/// `fronts.svg`, `verdict.json` and `eigen.json`.
pub fn reproduce_with(
    figure: Figure,
    cfg: &RunConfig,
    out_dir: Option<&Path>,
) -> Result<ReproductionReport> {
    cfg.validate()?;
    let params = cfg.model;
    let init = cfg.initial_data()?;
    let series = run(
        &params,
        &init,
        &cfg.solver,
        cfg.run.t_end,
        &cfg.run.snapshot_times,
    )?;
    let classification = detect_outcome(&series, &params, &DetectionCriteria::default())?;
    let eigen = eigen_entries(figure, &params)?;
    let report = ReproductionReport {
        figure,
        classification,
        t_end: series.t_end(),
        final_h: series.final_h(),
        max_h: series.h.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
        final_sup_u: *series.sup_u.last().unwrap_or(&0.0),
        eigen,
        series,
    };
    if let Some(dir) = out_dir {
        write_report(&report, dir)?;
    }
    Ok(report)
}

fn write_report(report: &ReproductionReport, dir: &Path) -> Result<()> {
    let id = report.figure.id();
    let s = &report.series;
    write_atomic(&dir.join("timeseries.csv"), timeseries_csv(s).as_bytes())?;
    write_atomic(
        &dir.join("snapshots.csv"),
        snapshots_csv(&s.snapshots).as_bytes(),
    )?;
    write_atomic(
        &dir.join("heatmap.svg"),
        svg_heatmap(&s.snapshots, &format!("{id}: u(t, x)")).as_bytes(),
    )?;
    write_atomic(
        &dir.join("fronts.svg"),
        svg_fronts(s, &format!("{id}: fronts g(t), h(t)")).as_bytes(),
    )?;
    write_atomic(&dir.join("verdict.json"), to_json(report).as_bytes())?;
    write_atomic(&dir.join("eigen.json"), to_json(&report.eigen).as_bytes())?;
    Ok(())
}
