use alloc::vec::Vec;

use super::{stable_dt, Frame, Grid1D, Integrator, Scheme, SimState, Sponge};
use crate::diagnostics::{good_terms_with, DiagnosticsRecord};
use crate::dynamics::{reference_fields, Reference};
use crate::gas::WaveConstants;
use crate::profile::ShockProfile;
use crate::quadrature::trapezoid_uniform;
use crate::Error;

/// Settings of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvolveConfig {
    pub grid: Grid1D,
    pub frame: Frame,
    pub scheme: Scheme,
    pub cfl: f64,
    /// Fixed step; clamped to the stability bound at `cfl = 0.5`.
    pub dt_override: Option<f64>,
    pub t_final: f64,
    /// Time between diagnostics records.
    pub diag_cadence: f64,
    /// Time between stored snapshots; `None` keeps only the first and last state.
    pub snapshot_cadence: Option<f64>,
    pub sponge: Sponge,
    /// Default `v_- / 3`.
    pub v_floor: Option<f64>,
    /// Abort when the step-to-step change rate grows by more than this factor.
    pub growth_limit: f64,
    /// Couple the shift ODE.
    pub shift: bool,
}

impl EvolveConfig {
    pub fn new(grid: Grid1D, t_final: f64, diag_cadence: f64) -> Self {
        Self {
            grid,
            frame: Frame::Moving,
            scheme: Scheme::Rk4,
            cfl: 0.2,
            dt_override: None,
            t_final,
            diag_cadence,
            snapshot_cadence: None,
            sponge: Sponge::none(),
            v_floor: None,
            growth_limit: 10.0,
            shift: true,
        }
    }
}

/// Output of [`evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<SimState>,
    pub final_state: SimState,
    pub steps: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Set when the run stopped before `t_final`; records cover the run up to the abort.
    pub abort: Option<Error>,
}

impl RunResult {
    pub fn completed(&self) -> bool {
        self.abort.is_none()
    }
}

const RATE_FLOOR: f64 = 1e-6;

/// Integrates `initial` to `config.t_final`.
pub fn evolve(profile: &ShockProfile, initial: SimState, config: &EvolveConfig) -> RunResult {
    let es = profile.end_states;
    let wc = WaveConstants::unchecked(&profile.law, &es);
    let grid = config.grid;
    let v_floor = config.v_floor.unwrap_or(es.v_minus / 3.0);
    let mut integ = Integrator::new(profile, grid, config.frame, config.sponge.profile(&grid), wc.m_shift);
    integ.shift_enabled = config.shift;

    let mut state = initial;
    let mut reference = Reference::default();
    let mass0 = [trapezoid_uniform(&state.v, grid.dx), trapezoid_uniform(&state.u, grid.dx)];
    let mut accumulated = [0.0f64; 2];

    let mut record = |state: &mut SimState, integ: &mut Integrator, acc: &[f64; 2]| {
        state.shift_rate = integ.shift_rate_of(state);
        reference_fields(profile, &grid, config.frame, state.t, state.shift, &mut reference);
        let mut r = good_terms_with(state, &grid, profile, &reference, wc.c_star);
        r.mass_residual_v = (trapezoid_uniform(&state.v, grid.dx) - mass0[0] - acc[0]).abs();
        r.mass_residual_u = (trapezoid_uniform(&state.u, grid.dx) - mass0[1] - acc[1]).abs();
        r
    };

    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    records.push(record(&mut state, &mut integ, &accumulated));
    snapshots.push(state.clone());

    let t0 = state.t;
    let t_end = t0 + config.t_final;
    let mut next_diag = 1usize;
    let mut next_snap = 1usize;
    let cadence = config.diag_cadence.max(0.0);
    let time_of = |k: usize, c: f64| if c > 0.0 { (t0 + k as f64 * c).min(t_end) } else { t_end };
    // Targets closer than this count as reached; cadences that should coincide
    // can differ by a few ulps.
    let eps = 1e-10 * t_end.abs().max(1.0);
    let mut steps = 0usize;
    let mut dt_min = f64::INFINITY;
    let mut dt_max: f64 = 0.0;
    let mut prev_rate = f64::NAN;
    let mut abort = None;
    let mut before = state.clone();

    while state.t < t_end - eps {
        let v_min = state.v_min();
        let bound = stable_dt(config.scheme, &integ.params, v_min, config.cfl);
        let mut dt = match config.dt_override {
            Some(d) => d.min(stable_dt(config.scheme, &integ.params, v_min, 0.5)),
            None => bound,
        };
        let mut target = time_of(next_diag, cadence);
        if let Some(sc) = config.snapshot_cadence {
            target = target.min(time_of(next_snap, sc));
        }
        let remaining = target - state.t;
        if remaining <= dt * (1.0 + 1e-9) {
            dt = remaining;
        } else if remaining < 2.0 * dt {
            dt = 0.5 * remaining;
        }
        before.clone_from(&state);
        let info = match integ.step(&mut state, dt, config.scheme) {
            Ok(info) => info,
            Err(e) => {
                abort = Some(e);
                break;
            }
        };
        if (target - state.t).abs() <= eps {
            state.t = target;
        }
        steps += 1;
        dt_min = dt_min.min(dt);
        dt_max = dt_max.max(dt);
        // Positivity and growth checks.
        let mut worst = (f64::INFINITY, 0usize);
        let mut rate: f64 = 0.0;
        for i in 0..state.v.len() {
            let v = state.v[i];
            if !worst.0.is_nan() && (v.is_nan() || v < worst.0) {
                worst = (v, i);
            }
            let d = (v - before.v[i]).abs().max((state.u[i] - before.u[i]).abs()).max((state.w[i] - before.w[i]).abs());
            rate = rate.max(if d.is_finite() { d } else { f64::INFINITY });
        }
        rate /= dt;
        if worst.0.is_nan() || worst.0 <= v_floor {
            abort = Some(Error::BlowUp { t: state.t, x: grid.x(worst.1), v: worst.0, v_floor });
            break;
        }
        if prev_rate.is_finite() && rate > RATE_FLOOR && rate > config.growth_limit * prev_rate.max(RATE_FLOOR) {
            abort = Some(Error::Unstable { t: state.t, growth: rate / prev_rate.max(RATE_FLOOR) });
            break;
        }
        accumulated[0] += info.flux[0] + info.sponge[0];
        accumulated[1] += info.flux[1] + info.sponge[1];
        prev_rate = rate;

        let at_diag = cadence > 0.0 && state.t + eps >= time_of(next_diag, cadence);
        if at_diag {
            next_diag += 1;
        }
        if let Some(sc) = config.snapshot_cadence {
            if sc > 0.0 && state.t + eps >= time_of(next_snap, sc) {
                next_snap += 1;
                if state.t < t_end - eps {
                    snapshots.push(state.clone());
                }
            }
        }
        if at_diag && state.t < t_end - eps {
            records.push(record(&mut state, &mut integ, &accumulated));
        }
    }
    // Final (or last good) state always gets a record.
    if abort.is_some() {
        state = before;
    }
    if records.last().map(|r| r.t) != Some(state.t) {
        records.push(record(&mut state, &mut integ, &accumulated));
    }
    if snapshots.last().map(|s| s.t) != Some(state.t) {
        snapshots.push(state.clone());
    }
    RunResult {
        records,
        snapshots,
        final_state: state,
        steps,
        dt_min: if dt_min.is_finite() { dt_min } else { 0.0 },
        dt_max,
        abort,
    }
}
