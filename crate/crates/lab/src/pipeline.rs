//! The `profile` and `simulate` pipelines, shared by the CLI and sweeps.

use std::fs;
use std::path::Path;

use nsk_core::diagnostics::{decay_report, DecayReport};
use nsk_core::dynamics::{evolve, init_state, EvolveConfig, Grid1D, RunResult};
use nsk_core::profile::{diffusion_coefficient_check, solve_profile};
use nsk_core::{EndStates, ShockProfile, WaveConstants};

use crate::config::RunConfig;
use crate::io::{self, Manifest, ProfileReportFile, SnapshotEntry};
use crate::LabError;

/// End states and profile of a configuration.
pub fn build_profile(cfg: &RunConfig) -> Result<ShockProfile, LabError> {
    let law = cfg.law().map_err(LabError::Profile)?;
    let es = cfg.end_states(&law).map_err(LabError::Profile)?;
    solve_profile(&law, &es, &cfg.profile_options()).map_err(LabError::Profile)
}

pub fn profile_report(profile: &ShockProfile) -> ProfileReportFile {
    let wc = WaveConstants::unchecked(&profile.law, &profile.end_states);
    let report = profile.report();
    ProfileReportFile { oscillatory: !report.monotone, report, diffusion: diffusion_coefficient_check(profile, &wc) }
}

/// Solves the profile and writes `profile.csv`, `profile.json` and `profile_report.json`.
pub fn run_profile(cfg: &RunConfig, out: &Path) -> Result<(ShockProfile, ProfileReportFile), LabError> {
    let profile = build_profile(cfg)?;
    fs::create_dir_all(out)?;
    io::write_profile(out, &profile)?;
    let report = profile_report(&profile);
    io::write_json(&out.join("profile_report.json"), &report)?;
    Ok((profile, report))
}

/// Everything a simulation produced, before or after writing.
#[derive(Debug)]
pub struct SimOutcome {
    pub profile: ShockProfile,
    pub grid: Grid1D,
    pub evolve: EvolveConfig,
    pub result: RunResult,
    pub decay: Option<DecayReport>,
}

/// Builds the grid and initial state and integrates; writes nothing.
pub fn simulate(cfg: &RunConfig) -> Result<SimOutcome, LabError> {
    let profile = build_profile(cfg)?;
    simulate_with(cfg, profile)
}

pub fn simulate_with(cfg: &RunConfig, profile: ShockProfile) -> Result<SimOutcome, LabError> {
    let es: EndStates = profile.end_states;
    let pert = cfg.perturbation(&es);
    let grid = cfg.grid(&es, pert.width).map_err(LabError::Config)?;
    let evolve_cfg = cfg.evolve_config(&es, grid);
    let v_floor = cfg.v_floor.unwrap_or(es.v_minus / 3.0);
    let initial = init_state(&profile, &grid, evolve_cfg.frame, &pert, v_floor).map_err(LabError::Config)?;
    let result = evolve(&profile, initial, &evolve_cfg);
    let decay = decay_report(&result.records).ok();
    Ok(SimOutcome { profile, grid, evolve: evolve_cfg, result, decay })
}

/// Writes `diagnostics.csv`, snapshots, `decay_report.json` and `manifest.json`.
pub fn write_simulation(cfg: &RunConfig, sim: &SimOutcome, out: &Path) -> Result<(), LabError> {
    fs::create_dir_all(out)?;
    io::write_diagnostics(&out.join("diagnostics.csv"), &sim.result.records)?;
    let mut entries = Vec::new();
    for (k, s) in sim.result.snapshots.iter().enumerate() {
        let name = io::snapshot_name(k);
        io::write_snapshot(&out.join(&name), &sim.grid, s)?;
        entries.push(SnapshotEntry { file: name, t: s.t, shift: s.shift });
    }
    if let Some(d) = &sim.decay {
        io::write_json(&out.join("decay_report.json"), d)?;
    }
    let es = sim.profile.end_states;
    let manifest = Manifest {
        version: io::version_string(),
        config: cfg.clone(),
        end_states: es,
        wave_constants: WaveConstants::unchecked(&sim.profile.law, &es),
        grid: sim.grid,
        evolve: sim.evolve,
        perturbation: cfg.perturbation(&es),
        seed: cfg.seed,
        steps: sim.result.steps,
        dt_min: sim.result.dt_min,
        dt_max: sim.result.dt_max,
        completed: sim.result.completed(),
        abort: sim.result.abort.as_ref().map(|e| e.to_string()),
        snapshots: entries,
        decay: sim.decay,
    };
    io::write_json(&out.join("manifest.json"), &manifest)?;
    Ok(())
}

/// Runs and writes; a blow-up is reported after the files are on disk.
pub fn run_simulate(cfg: &RunConfig, out: &Path) -> Result<SimOutcome, LabError> {
    let sim = simulate(cfg)?;
    write_simulation(cfg, &sim, out)?;
    match &sim.result.abort {
        Some(e) => Err(LabError::BlowUp(e.clone())),
        None => Ok(sim),
    }
}
