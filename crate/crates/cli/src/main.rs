//! `epifront`: command-line front end for the free-boundary epidemic engine.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use epifront_core::classify::{
    classify_analytic, detect_outcome, find_kappa_threshold, find_mu_threshold, DetectionCriteria,
    ThresholdResult,
};
use epifront_core::config::{parse_config, Figure, RunConfig};
use epifront_core::eigen::{principal_eigenvalue_closed_form, principal_eigenvalue_monodromy};
use epifront_core::model::{validate_assumptions, DEFAULT_SAMPLES, DEFAULT_U_MAX};
use epifront_core::output::{
    fmt_f64, snapshots_csv, svg_fronts, svg_heatmap, timeseries_csv, to_json, write_atomic,
    CsvTable,
};
use epifront_core::reproduce::reproduce;
use epifront_core::solver::run;
use epifront_core::sweep::{sweep, sweep_csv};
use epifront_core::{Error, Result};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "epifront",
    version,
    about = "Impulsive free-boundary epidemic model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the free-boundary problem and write series, snapshots and plots.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Principal eigenvalue on an interval of length L, or `inf`.
    Eigen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        interval: String,
    },
    /// Spreading/vanishing verdict from the eigenvalues, optionally by simulation.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        simulate: bool,
    },
    /// Bisection for the sharp threshold in mu2 or in the initial amplitude.
    Threshold {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        param: ThresholdParam,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
    },
    /// Evaluate a list of values of one parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run one of the built-in example cases.
    Reproduce {
        #[arg(value_parser = ["fig-a", "fig-b", "fig-c", "fig-d"])]
        figure: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a configuration file and print the assumption report.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdParam {
    Mu2,
    Kappa,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(path: &Path) -> Result<RunConfig> {
    let cfg = parse_config(path)?;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Simulate { config, t_end, out } => simulate(&config, t_end, out),
        Command::Eigen { config, interval } => eigen(&config, &interval),
        Command::Classify { config, simulate } => classify(&config, simulate),
        Command::Threshold {
            config,
            param,
            lo,
            hi,
            tol,
        } => threshold(&config, param, lo, hi, tol),
        Command::Sweep {
            config,
            axis,
            values,
            jobs,
        } => run_sweep(&config, &axis, &values, jobs),
        Command::Reproduce { figure, out } => {
            let figure: Figure = figure.parse()?;
            let dir = out.unwrap_or_else(|| PathBuf::from("reproduce").join(figure.id()));
            let report = reproduce(figure, Some(&dir))?;
            print!("{}", to_json(&report));
            Ok(())
        }
        Command::Validate { config } => validate(&config),
    }
}

fn simulate(path: &Path, t_end: Option<f64>, out: Option<PathBuf>) -> Result<()> {
    let cfg = load(path)?;
    let t_end = t_end.unwrap_or(cfg.run.t_end);
    let dir = out
        .or_else(|| cfg.run.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let init = cfg.initial_data()?;
    let series = run(
        &cfg.model,
        &init,
        &cfg.solver,
        t_end,
        &cfg.run.snapshot_times,
    )?;
    write_atomic(
        &dir.join("timeseries.csv"),
        timeseries_csv(&series).as_bytes(),
    )?;
    write_atomic(
        &dir.join("snapshots.csv"),
        snapshots_csv(&series.snapshots).as_bytes(),
    )?;
    write_atomic(
        &dir.join("fronts.svg"),
        svg_fronts(&series, "fronts g(t), h(t)").as_bytes(),
    )?;
    write_atomic(
        &dir.join("heatmap.svg"),
        svg_heatmap(&series.snapshots, "u(t, x)").as_bytes(),
    )?;
    let last = series.len() - 1;
    let summary = json!({
        "t_end": series.t[last],
        "final_g": series.g[last],
        "final_h": series.h[last],
        "final_sup_u": series.sup_u[last],
        "final_sup_v": series.sup_v[last],
        "steps": last,
        "out_dir": dir.display().to_string(),
    });
    print!("{}", to_json(&summary));
    Ok(())
}

fn eigen(path: &Path, interval: &str) -> Result<()> {
    let cfg = load(path)?;
    let width = if interval.eq_ignore_ascii_case("inf") {
        f64::INFINITY
    } else {
        interval.parse::<f64>().map_err(|_| {
            Error::Config(format!(
                "--interval must be a length or `inf`, got {interval:?}"
            ))
        })?
    };
    let mono = principal_eigenvalue_monodromy(&cfg.model, width)?;
    let closed = if width.is_finite() {
        Some(principal_eigenvalue_closed_form(&cfg.model, width)?.summary_json())
    } else {
        None
    };
    let out = json!({
        "interval_length": if width.is_finite() { json!(width) } else { json!("inf") },
        "monodromy": mono.summary_json(),
        "closed_form": closed,
    });
    print!("{}", to_json(&out));
    Ok(())
}

fn classify(path: &Path, simulate: bool) -> Result<()> {
    let cfg = load(path)?;
    let c = if simulate {
        let init = cfg.initial_data()?;
        let series = run(&cfg.model, &init, &cfg.solver, cfg.run.t_end, &[])?;
        detect_outcome(&series, &cfg.model, &DetectionCriteria::default())?
    } else {
        classify_analytic(&cfg.model)?
    };
    let out = json!({
        "verdict": c.verdict.as_str(),
        "lambda_infinity": c.lambda_infinity,
        "lambda_h0": c.lambda_h0,
        "critical_length": c.critical_length,
        "evidence": c.simulation,
    });
    print!("{}", to_json(&out));
    Ok(())
}

fn threshold(path: &Path, param: ThresholdParam, lo: f64, hi: f64, tol: f64) -> Result<()> {
    let cfg = load(path)?;
    let init = cfg.initial_data()?;
    let criteria = DetectionCriteria::default();
    let result = match param {
        ThresholdParam::Mu2 => find_mu_threshold(
            &cfg.model,
            &init,
            &cfg.solver,
            (lo, hi),
            tol,
            cfg.run.t_end,
            &criteria,
        )?,
        ThresholdParam::Kappa => find_kappa_threshold(
            &cfg.model,
            &init.u0,
            &init.v0,
            &cfg.solver,
            (lo, hi),
            tol,
            cfg.run.t_end,
            &criteria,
        )?,
    };
    print!("{}", threshold_csv(&result));
    Ok(())
}

fn threshold_csv(r: &ThresholdResult) -> String {
    let mut t = CsvTable::new(&["step", "value", "verdict", "lo", "hi", "t_end", "final_h"]);
    for (i, p) in r.history.iter().enumerate() {
        t.push_row(&[
            i.to_string(),
            fmt_f64(p.value),
            p.verdict.to_string(),
            fmt_f64(p.lo),
            fmt_f64(p.hi),
            fmt_f64(p.t_end),
            fmt_f64(p.final_h),
        ]);
    }
    t.push_row(&[
        "result".to_string(),
        fmt_f64(r.value),
        "Threshold".to_string(),
        fmt_f64(r.lo),
        fmt_f64(r.hi),
        String::new(),
        String::new(),
    ]);
    t.finish()
}

fn run_sweep(path: &Path, axis: &str, values: &[String], jobs: usize) -> Result<()> {
    let cfg = load(path)?;
    let values = values
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Config(format!("--values: not a number: {s:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let rows = sweep(&cfg, axis, &values, jobs)?;
    print!("{}", sweep_csv(&rows));
    Ok(())
}

fn validate(path: &Path) -> Result<()> {
    let cfg = load(path)?;
    let init = cfg.initial_data()?;
    let report = validate_assumptions(&cfg.model, &init, DEFAULT_U_MAX, DEFAULT_SAMPLES);
    print!("{}", to_json(&report));
    Ok(())
}
