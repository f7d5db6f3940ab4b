//! CSV and JSON artifacts.
//!
//! Floats in CSV files are written with 17 significant digits. JSON uses the
//! shortest representation that reads back to the same `f64`.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use nsk_core::diagnostics::{DecayReport, DiagnosticsRecord};
use nsk_core::dynamics::{Grid1D, SimState};
use nsk_core::profile::{DiffusionCheck, ProfileMethod};
use nsk_core::{EndStates, GasLaw, ProfileReport, ShockProfile, WaveConstants};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const PROFILE_COLUMNS: [&str; 6] = ["xi", "v", "u", "w", "dv", "ddv"];
pub const SNAPSHOT_COLUMNS: [&str; 4] = ["x", "v", "u", "w"];

#[derive(Debug)]
pub enum IoError {
    Io(io::Error),
    Csv(csv::Error),
    Json(serde_json::Error),
    Format(String),
    Core(nsk_core::Error),
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IoError::Io(e) => write!(f, "{e}"),
            IoError::Csv(e) => write!(f, "csv: {e}"),
            IoError::Json(e) => write!(f, "json: {e}"),
            IoError::Format(m) => write!(f, "malformed file: {m}"),
            IoError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IoError {}

impl From<io::Error> for IoError {
    fn from(e: io::Error) -> Self {
        IoError::Io(e)
    }
}

impl From<csv::Error> for IoError {
    fn from(e: csv::Error) -> Self {
        IoError::Csv(e)
    }
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e)
    }
}

impl From<nsk_core::Error> for IoError {
    fn from(e: nsk_core::Error) -> Self {
        IoError::Core(e)
    }
}

pub type Result<T> = std::result::Result<T, IoError>;

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes equally long columns under `header`.
pub fn write_columns(path: &Path, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    let n = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != n) || columns.len() != header.len() {
        return Err(IoError::Format(format!("ragged columns for {}", path.display())));
    }
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(header)?;
    for i in 0..n {
        w.write_record(columns.iter().map(|c| fmt17(c[i])))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a numeric CSV, checking the header against `expect`.
pub fn read_columns(path: &Path, expect: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().ne(expect.iter().copied()) {
        return Err(IoError::Format(format!("{}: header {:?}, expected {:?}", path.display(), header, expect)));
    }
    let mut cols = vec![Vec::new(); expect.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        for (k, field) in rec.iter().enumerate() {
            let x = field
                .trim()
                .parse::<f64>()
                .map_err(|e| IoError::Format(format!("{} row {}: `{field}`: {e}", path.display(), line + 2)))?;
            cols[k].push(x);
        }
    }
    Ok(cols)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

/// JSON sidecar of a profile CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub law: GasLaw,
    pub end_states: EndStates,
    pub wave_constants: WaveConstants,
    /// `C_* > 0`.
    pub admissible: bool,
    pub method: ProfileMethod,
    pub residual: f64,
    pub iterations: usize,
}

impl ProfileMeta {
    pub fn of(profile: &ShockProfile) -> Self {
        let wc = WaveConstants::unchecked(&profile.law, &profile.end_states);
        Self {
            law: profile.law,
            end_states: profile.end_states,
            wave_constants: wc,
            admissible: wc.c_star > 0.0,
            method: profile.method,
            residual: profile.residual,
            iterations: profile.iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReportFile {
    pub report: ProfileReport,
    pub diffusion: DiffusionCheck,
    /// Set when the profile is not monotone.
    pub oscillatory: bool,
}

/// Writes `profile.csv` and `profile.json` into `dir`.
pub fn write_profile(dir: &Path, profile: &ShockProfile) -> Result<()> {
    let p = profile;
    write_columns(
        &dir.join("profile.csv"),
        &PROFILE_COLUMNS,
        &[&p.xi, &p.v, &p.u, &p.w, &p.dv, &p.ddv],
    )?;
    write_json(&dir.join("profile.json"), &ProfileMeta::of(profile))
}

/// Rebuilds a profile from `profile.csv` and its sidecar; `u`, `w` and higher
/// derivatives are regenerated from `(xi, v, dv)`.
pub fn read_profile(dir: &Path) -> Result<ShockProfile> {
    let meta: ProfileMeta = read_json(&dir.join("profile.json"))?;
    let mut cols = read_columns(&dir.join("profile.csv"), &PROFILE_COLUMNS)?;
    let dv = std::mem::take(&mut cols[4]);
    let v = std::mem::take(&mut cols[1]);
    let xi = std::mem::take(&mut cols[0]);
    let mut p = ShockProfile::from_samples(meta.law, meta.end_states, xi, v, dv, meta.method)?;
    p.iterations = meta.iterations;
    Ok(p)
}

pub fn write_diagnostics(path: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(DiagnosticsRecord::COLUMNS)?;
    for r in records {
        w.write_record(r.values().iter().map(|&x| fmt17(x)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().ne(DiagnosticsRecord::COLUMNS.iter().copied()) {
        return Err(IoError::Format(format!("{}: unexpected diagnostics header {:?}", path.display(), header)));
    }
    Ok(r.deserialize().collect::<std::result::Result<Vec<DiagnosticsRecord>, _>>()?)
}

pub fn snapshot_name(index: usize) -> String {
    format!("snapshot_{index:04}.csv")
}

pub fn write_snapshot(path: &Path, grid: &Grid1D, state: &SimState) -> Result<()> {
    let xs = grid.coordinates();
    write_columns(path, &SNAPSHOT_COLUMNS, &[&xs, &state.v, &state.u, &state.w])
}

/// `(x, v, u, w)` columns of a snapshot.
pub fn read_snapshot(path: &Path) -> Result<[Vec<f64>; 4]> {
    let cols = read_columns(path, &SNAPSHOT_COLUMNS)?;
    let [x, v, u, w]: [Vec<f64>; 4] = cols.try_into().expect("four columns");
    Ok([x, v, u, w])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub file: String,
    pub t: f64,
    #[serde(rename = "X")]
    pub shift: f64,
}

/// Run manifest; contains nothing time- or host-dependent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config: crate::config::RunConfig,
    pub end_states: EndStates,
    pub wave_constants: WaveConstants,
    pub grid: Grid1D,
    pub evolve: nsk_core::dynamics::EvolveConfig,
    pub perturbation: nsk_core::dynamics::Perturbation,
    pub seed: u64,
    pub steps: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    pub completed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub abort: Option<String>,
    pub snapshots: Vec<SnapshotEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decay: Option<DecayReport>,
}

/// `git describe`-style version of this build.
pub fn version_string() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}
