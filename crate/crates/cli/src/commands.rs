//! Sweep commands. Each grid point becomes one row, computed on a pool of
//! `threads` workers and collected in input order.

use antikz_core::ising::{defect_closed, defect_density, DefectClosed, DefectMethod, IsingParams};
use antikz_core::lz::{p_closed, prob_first_order, prob_numeric, ClosedForm, LZParams};
use antikz_core::optimize::{deviation_metrics, v_opt_closed, v_opt_numeric, Objective, VOptKind};
use rayon::prelude::*;

use crate::cache::Cache;
use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::table::{col, Column, Provenance::*, SweepTable};

pub fn lz_columns() -> Vec<Column> {
    vec![
        col("kappa", "J^2/v", Input),
        col("lambda", "1", Input),
        col("p_numeric", "probability", Numeric),
        col("p_first_order", "probability", Numeric),
        col("p_non_ad", "probability", ClosedForm),
        col("p_ad", "probability", ClosedForm),
        col("p_combined", "probability", ClosedForm),
        col("p_kayanuma", "probability", ClosedForm),
    ]
}

pub fn ising_columns() -> Vec<Column> {
    vec![
        col("kappa", "J^2/v", Input),
        col("lambda", "1", Input),
        col("n_numeric", "defects/site", Numeric),
        col("n_inf_order", "defects/site", ClosedForm),
        col("n_1st", "defects/site", ClosedForm),
        col("n_2nd", "defects/site", ClosedForm),
        col("n_kzm", "defects/site", ClosedForm),
        col("n_kayanuma", "defects/site", ClosedForm),
        col("n_reciprocal", "defects/site", ClosedForm),
    ]
}

pub fn vopt_columns() -> Vec<Column> {
    vec![
        col("lambda", "1", Input),
        col("v_num", "J^2", Numeric),
        col("v_inf_order", "J^2", Numeric),
        col("v_1st", "J^2", ClosedForm),
        col("v_2nd", "J^2", ClosedForm),
        col("zeta", "1", ClosedForm),
        col("xi", "1", ClosedForm),
    ]
}

/// Approximations outside their domain of validity are written as NaN.
fn or_nan(what: &str, r: antikz_core::Result<f64>) -> f64 {
    r.unwrap_or_else(|e| {
        log::warn!("{what}: {e}; writing NaN");
        f64::NAN
    })
}

fn canonical_key(cfg: &RunConfig, point: &[f64]) -> String {
    let pt: Vec<String> = point.iter().map(|x| format!("{x:.16e}")).collect();
    format!(
        "{} {}|point={}|n={}|window={:.16e},{:.16e}|rtol={:.16e}|atol={:.16e}|seed={}",
        crate::CODE_VERSION,
        cfg.command.name(),
        pt.join(","),
        cfg.n_spins,
        cfg.window.0,
        cfg.window.1,
        cfg.rtol,
        cfg.atol,
        cfg.seed
    )
}

fn sweep<F>(cfg: &RunConfig, points: &[Vec<f64>], width: usize, row: F) -> Result<Vec<Vec<f64>>, CliError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, CliError> + Sync,
{
    let cache = match &cfg.cache {
        Some(dir) => Some(Cache::new(dir).map_err(|e| CliError::Io { path: dir.display().to_string(), source: e })?),
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        points
            .par_iter()
            .map(|p| {
                let key = canonical_key(cfg, p);
                if let Some(hit) = cache.as_ref().and_then(|c| c.load(&key, width)) {
                    return Ok(hit);
                }
                log::info!("computing {key}");
                let values = row(p)?;
                debug_assert_eq!(values.len(), width);
                if let Some(c) = &cache {
                    if let Err(e) = c.store(&key, &values) {
                        log::warn!("cannot write cache in {}: {e}", c.dir().display());
                    }
                }
                Ok(values)
            })
            .collect()
    })
}

/// κ varies fastest.
fn kappa_lambda_points(cfg: &RunConfig) -> Vec<Vec<f64>> {
    cfg.lambda.iter().flat_map(|&l| cfg.kappa.iter().map(move |&k| vec![k, l])).collect()
}

pub fn lz_prob(cfg: &RunConfig) -> Result<SweepTable, CliError> {
    let columns = lz_columns();
    let rows = sweep(cfg, &kappa_lambda_points(cfg), columns.len(), |p| {
        let (k, l) = (p[0], p[1]);
        let params = LZParams::new(k, l).with_window(cfg.window.0, cfg.window.1).with_tolerances(cfg.rtol, cfg.atol);
        let closed = |kind| p_closed(kind, &params);
        Ok(vec![
            k,
            l,
            prob_numeric(&params)?,
            or_nan("first-order probability", prob_first_order(&params)),
            closed(ClosedForm::NonAdiabatic),
            closed(ClosedForm::Adiabatic),
            closed(ClosedForm::Combined),
            closed(ClosedForm::Kayanuma),
        ])
    })?;
    Ok(SweepTable { metadata: cfg.metadata(), columns, rows })
}

fn ising_params(cfg: &RunConfig, k: f64, l: f64) -> IsingParams {
    IsingParams::new(k, l)
        .with_spins(cfg.n_spins)
        .with_window(cfg.window.0, cfg.window.1)
        .with_tolerances(cfg.rtol, cfg.atol)
}

pub fn ising_defect(cfg: &RunConfig) -> Result<SweepTable, CliError> {
    let columns = ising_columns();
    let rows = sweep(cfg, &kappa_lambda_points(cfg), columns.len(), |p| {
        let (k, l) = (p[0], p[1]);
        let numeric = defect_density(&ising_params(cfg, k, l), DefectMethod::NumericSum)?.defect_density;
        let closed = |kind: DefectClosed| or_nan(kind.name(), defect_closed(kind, k, l));
        Ok(vec![
            k,
            l,
            numeric,
            closed(DefectClosed::InfOrder),
            closed(DefectClosed::FirstOrder),
            closed(DefectClosed::SecondOrder),
            closed(DefectClosed::Kzm),
            closed(DefectClosed::Kayanuma),
            closed(DefectClosed::Reciprocal),
        ])
    })?;
    Ok(SweepTable { metadata: cfg.metadata(), columns, rows })
}

/// Log-log slope between the first and last rows of a column.
pub fn endpoint_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let (n, m) = (x.len(), y.len());
    if n < 2 || n != m || x[0] == x[n - 1] {
        return None;
    }
    Some((y[n - 1] / y[0]).ln() / (x[n - 1] / x[0]).ln())
}

pub fn vopt(cfg: &RunConfig) -> Result<SweepTable, CliError> {
    let columns = vopt_columns();
    let points: Vec<Vec<f64>> = cfg.lambda.iter().map(|&l| vec![l]).collect();
    let base = ising_params(cfg, 1.0, 0.0);
    let rows = sweep(cfg, &points, columns.len(), |p| {
        let l = p[0];
        let (zeta, xi) = deviation_metrics(l);
        Ok(vec![
            l,
            v_opt_numeric(l, Objective::MasterNumeric, &base)?.v_opt_over_j2,
            v_opt_numeric(l, Objective::InfOrder, &base)?.v_opt_over_j2,
            v_opt_closed(VOptKind::First, l)?,
            or_nan("second-order v_opt", v_opt_closed(VOptKind::Second, l)),
            zeta,
            xi,
        ])
    })?;
    let mut table = SweepTable { metadata: cfg.metadata(), columns, rows };
    let lambda = table.column("lambda").unwrap_or_default();
    for name in ["v_num", "v_inf_order", "v_1st"] {
        if let Some(s) = endpoint_slope(&lambda, &table.column(name).unwrap_or_default()) {
            table.metadata.push((format!("loglog-slope-{name}"), crate::table::format_float(s)));
        }
    }
    Ok(table)
}

pub fn run_sweep(cfg: &RunConfig) -> Result<SweepTable, CliError> {
    match cfg.command {
        Command::LzProb => lz_prob(cfg),
        Command::IsingDefect => ising_defect(cfg),
        Command::Vopt => vopt(cfg),
        Command::Selftest => Err(CliError::Config("selftest does not produce a sweep table".into())),
    }
}
