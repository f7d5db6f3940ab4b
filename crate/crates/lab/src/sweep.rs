//! Parameter sweeps over one config key, run concurrently.

use std::path::Path;

use nsk_core::fit::{loglog_fit, LineFit};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::pipeline;
use crate::{io, LabError};

pub const DELTA_KEY: &str = "end_states.delta_s";

/// Per-run summary; one CSV row.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub param: String,
    pub value: String,
    pub status: String,
    pub error: String,
    pub delta_s: Option<f64>,
    pub v_minus: Option<f64>,
    pub sigma: Option<f64>,
    pub c_star: Option<f64>,
    pub monotone: Option<bool>,
    pub profile_residual: Option<f64>,
    pub tail_rate_left: Option<f64>,
    pub tail_rate_right: Option<f64>,
    pub diffusion_residual_left: Option<f64>,
    pub diffusion_residual_right: Option<f64>,
    pub sup_ratio: Option<f64>,
    pub entropy_decrease_fraction: Option<f64>,
    pub xdot_final_over_max: Option<f64>,
    pub sublinear: Option<bool>,
    pub t_reached: Option<f64>,
}

/// Log-log fit of one summary column against the swept value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFit {
    pub quantity: String,
    pub against: String,
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub fits: Vec<SweepFit>,
}

fn run_one(base_path: Option<&Path>, overrides: &[String], param: &str, value: &str, index: usize, simulate: bool, out: &Path) -> SweepRow {
    let mut row = SweepRow { index, param: param.into(), value: value.into(), ..SweepRow::default() };
    let mut ov = overrides.to_vec();
    ov.push(format!("{param}={value}"));
    let result = (|| -> Result<(), LabError> {
        let cfg = RunConfig::load(base_path, &ov)?;
        let dir = out.join(format!("run_{index:03}"));
        let (profile, rep) = pipeline::run_profile(&cfg, &dir)?;
        let es = profile.end_states;
        let wc = nsk_core::WaveConstants::unchecked(&profile.law, &es);
        row.delta_s = Some(es.delta_s);
        row.v_minus = Some(es.v_minus);
        row.sigma = Some(es.sigma);
        row.c_star = Some(wc.c_star);
        row.monotone = Some(rep.report.monotone);
        row.profile_residual = Some(rep.report.residual);
        row.tail_rate_left = Some(rep.report.tail_rate_left);
        row.tail_rate_right = Some(rep.report.tail_rate_right);
        if !rep.diffusion.skipped {
            row.diffusion_residual_left = Some(rep.diffusion.max_residual_left);
            row.diffusion_residual_right = Some(rep.diffusion.max_residual_right);
        }
        if simulate {
            let sim = pipeline::simulate_with(&cfg, profile)?;
            pipeline::write_simulation(&cfg, &sim, &dir)?;
            row.t_reached = Some(sim.result.final_state.t);
            if let Some(d) = sim.decay {
                row.sup_ratio = d.sup_ratio;
                row.entropy_decrease_fraction = Some(d.entropy_decrease_fraction);
                row.xdot_final_over_max = d.xdot_final_over_max;
                row.sublinear = Some(d.sublinear);
            }
            if let Some(e) = sim.result.abort {
                return Err(LabError::BlowUp(e));
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => row.status = "ok".into(),
        Err(e) => {
            row.status = e.kind().into();
            row.error = e.to_string();
        }
    }
    row
}

fn fit_column(rows: &[SweepRow], quantity: &str, get: impl Fn(&SweepRow) -> Option<f64>) -> Option<SweepFit> {
    let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter_map(|r| Some((r.delta_s?, get(r)?))).unzip();
    if x.len() < 2 {
        return None;
    }
    let LineFit { slope, intercept, r2 } = loglog_fit(&x, &y).ok()?;
    Some(SweepFit { quantity: quantity.into(), against: "delta_s".into(), n: x.len(), slope, intercept, r2 })
}

/// Fits declared for a `delta_s` sweep: tail rates (expected slope 1) and
/// diffusion residuals (expected slope 2).
pub fn delta_fits(rows: &[SweepRow]) -> Vec<SweepFit> {
    let ok: Vec<SweepRow> = rows.iter().filter(|r| r.status == "ok").cloned().collect();
    [
        fit_column(&ok, "tail_rate_left", |r| r.tail_rate_left),
        fit_column(&ok, "tail_rate_right", |r| r.tail_rate_right),
        fit_column(&ok, "diffusion_residual_left", |r| r.diffusion_residual_left),
        fit_column(&ok, "diffusion_residual_right", |r| r.diffusion_residual_right),
    ]
    .into_iter()
    .flatten()
    .collect()
}

/// Runs one configuration per value, in parallel, and writes `sweep.csv` and
/// `sweep_fits.csv` into `out`. Failed runs are recorded, not fatal.
pub fn run_sweep(
    base_path: Option<&Path>,
    overrides: &[String],
    param: &str,
    values: &[String],
    simulate: bool,
    out: &Path,
) -> Result<SweepOutcome, LabError> {
    if values.is_empty() {
        return Err(LabError::Usage("sweep needs at least one value".into()));
    }
    // Fail early on a key the config does not have.
    let mut probe = overrides.to_vec();
    probe.push(format!("{param}={}", values[0]));
    RunConfig::load(base_path, &probe)?;
    std::fs::create_dir_all(out)?;

    let rows: Vec<SweepRow> = values
        .par_iter()
        .enumerate()
        .map(|(i, v)| run_one(base_path, overrides, param, v, i, simulate, out))
        .collect();
    let fits = if param == DELTA_KEY { delta_fits(&rows) } else { Vec::new() };

    write_rows(&out.join("sweep.csv"), &rows, SWEEP_COLUMNS)?;
    write_rows(&out.join("sweep_fits.csv"), &fits, FIT_COLUMNS)?;
    Ok(SweepOutcome { rows, fits })
}

const SWEEP_COLUMNS: &[&str] = &[
    "index",
    "param",
    "value",
    "status",
    "error",
    "delta_s",
    "v_minus",
    "sigma",
    "c_star",
    "monotone",
    "profile_residual",
    "tail_rate_left",
    "tail_rate_right",
    "diffusion_residual_left",
    "diffusion_residual_right",
    "sup_ratio",
    "entropy_decrease_fraction",
    "xdot_final_over_max",
    "sublinear",
    "t_reached",
];
const FIT_COLUMNS: &[&str] = &["quantity", "against", "n", "slope", "intercept", "r2"];

/// Serde writes the header with the first row; an empty table still gets one.
fn write_rows<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<(), io::IoError> {
    let mut w = csv::Writer::from_path(path)?;
    if rows.is_empty() {
        w.write_record(header)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep(path: &Path) -> Result<Vec<SweepRow>, io::IoError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn read_fits(path: &Path) -> Result<Vec<SweepFit>, io::IoError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
