use alloc::vec;
use alloc::vec::Vec;

use super::operator::{apply_sponge, max_speed, shift_rate};
use super::{boundary_flux, reference_fields, spatial_operator, Frame, Grid1D, OperatorParams, Reference, Scheme, SimState};
use crate::banded::BandedMatrix;
use crate::math::powf;
use crate::profile::ShockProfile;
use crate::Result;

/// Stability-limited step: `cfl * min(dx^2 min(v, v^{5/2}), dx / speed)` for RK4,
/// `cfl * dx / speed` for IMEX.
pub fn stable_dt(scheme: Scheme, params: &OperatorParams, v_min: f64, cfl: f64) -> f64 {
    let h = params.dx;
    let adv = h / max_speed(&params.law, params.frame_speed, v_min);
    match scheme {
        Scheme::Rk4 => cfl * (h * h * v_min.min(powf(v_min, 2.5))).min(adv),
        Scheme::Imex => cfl * adv,
    }
}

/// Bookkeeping of one step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepInfo {
    /// Time integral over the step of the telescoped boundary flux, per field.
    pub flux: [f64; 3],
    /// Time integral over the step of the sponge source, per field.
    pub sponge: [f64; 3],
}

struct Stage {
    v: Vec<f64>,
    u: Vec<f64>,
    w: Vec<f64>,
    x: f64,
}

impl Stage {
    fn zeros(n: usize) -> Self {
        Self { v: vec![0.0; n], u: vec![0.0; n], w: vec![0.0; n], x: 0.0 }
    }
}

/// Time stepper for one configuration. Holds scratch buffers.
pub struct Integrator<'a> {
    pub profile: &'a ShockProfile,
    pub grid: Grid1D,
    pub frame: Frame,
    pub params: OperatorParams,
    pub m_shift: f64,
    /// Couple the shift ODE; with `false`, `X` stays at its initial value.
    pub shift_enabled: bool,
    kappa: Vec<f64>,
    reference: Reference,
    k: [Stage; 4],
    tmp: Stage,
}

impl<'a> Integrator<'a> {
    pub fn new(profile: &'a ShockProfile, grid: Grid1D, frame: Frame, kappa: Vec<f64>, m_shift: f64) -> Self {
        let n = grid.nodes();
        let params = OperatorParams { law: profile.law, dx: grid.dx, frame_speed: frame.speed(profile.end_states.sigma) };
        Self {
            profile,
            grid,
            frame,
            params,
            m_shift,
            shift_enabled: true,
            kappa,
            reference: Reference::default(),
            k: [Stage::zeros(n), Stage::zeros(n), Stage::zeros(n), Stage::zeros(n)],
            tmp: Stage::zeros(n),
        }
    }

    /// Full right-hand side including sponge and shift rate, written to `out`.
    /// Returns `(boundary flux, sponge integral)`.
    fn rhs(&mut self, t: f64, v: &[f64], u: &[f64], w: &[f64], shift: f64, out: &mut Stage) -> ([f64; 3], [f64; 3]) {
        let es = &self.profile.end_states;
        spatial_operator(&self.params, v, u, w, &mut out.v, &mut out.u, &mut out.w);
        let flux = boundary_flux(&self.params, v, u, w);
        let need_ref = self.shift_enabled || self.kappa.iter().any(|&k| k != 0.0);
        let mut sponge = [0.0; 3];
        out.x = 0.0;
        if need_ref {
            reference_fields(self.profile, &self.grid, self.frame, t, shift, &mut self.reference);
            sponge = apply_sponge(&self.kappa, &self.reference, v, u, w, self.grid.dx, [&mut out.v, &mut out.u, &mut out.w]);
            if self.shift_enabled {
                out.x = shift_rate(&self.profile.law, &self.reference, v, u, self.grid.dx, self.m_shift, es.delta_s, es.sigma);
            }
        }
        (flux, sponge)
    }

    /// Current `dX/dt` for `state`.
    pub fn shift_rate_of(&mut self, state: &SimState) -> f64 {
        if !self.shift_enabled {
            return 0.0;
        }
        let es = self.profile.end_states;
        reference_fields(self.profile, &self.grid, self.frame, state.t, state.shift, &mut self.reference);
        shift_rate(&self.profile.law, &self.reference, &state.v, &state.u, self.grid.dx, self.m_shift, es.delta_s, es.sigma)
    }

    pub fn step(&mut self, state: &mut SimState, dt: f64, scheme: Scheme) -> Result<StepInfo> {
        match scheme {
            Scheme::Rk4 => Ok(self.rk4(state, dt)),
            Scheme::Imex => self.imex(state, dt),
        }
    }

    fn rk4(&mut self, state: &mut SimState, dt: f64) -> StepInfo {
        let n = state.v.len();
        let mut info = StepInfo::default();
        let weights = [1.0, 2.0, 2.0, 1.0];
        let offsets = [0.0, 0.5, 0.5, 1.0];
        let mut k = core::mem::replace(&mut self.k, [Stage::zeros(0), Stage::zeros(0), Stage::zeros(0), Stage::zeros(0)]);
        let mut tmp = core::mem::replace(&mut self.tmp, Stage::zeros(0));
        for s in 0..4 {
            let (flux, sponge) = if s == 0 {
                self.rhs(state.t, &state.v, &state.u, &state.w, state.shift, &mut k[0])
            } else {
                let c = offsets[s] * dt;
                let prev = &k[s - 1];
                for i in 0..n {
                    tmp.v[i] = state.v[i] + c * prev.v[i];
                    tmp.u[i] = state.u[i] + c * prev.u[i];
                    tmp.w[i] = state.w[i] + c * prev.w[i];
                }
                tmp.x = state.shift + c * prev.x;
                let (head, tail) = k.split_at_mut(s);
                let _ = head;
                self.rhs(state.t + c, &tmp.v, &tmp.u, &tmp.w, tmp.x, &mut tail[0])
            };
            for f in 0..3 {
                info.flux[f] += weights[s] * dt / 6.0 * flux[f];
                info.sponge[f] += weights[s] * dt / 6.0 * sponge[f];
            }
        }
        for i in 0..n {
            state.v[i] += dt / 6.0 * (k[0].v[i] + 2.0 * k[1].v[i] + 2.0 * k[2].v[i] + k[3].v[i]);
            state.u[i] += dt / 6.0 * (k[0].u[i] + 2.0 * k[1].u[i] + 2.0 * k[2].u[i] + k[3].u[i]);
            state.w[i] += dt / 6.0 * (k[0].w[i] + 2.0 * k[1].w[i] + 2.0 * k[2].w[i] + k[3].w[i]);
        }
        state.shift += dt / 6.0 * (k[0].x + 2.0 * k[1].x + 2.0 * k[2].x + k[3].x);
        state.shift_rate = k[0].x;
        state.t += dt;
        self.k = k;
        self.tmp = tmp;
        info
    }

    /// Heun predictor-corrector with the viscous/capillary operator, frozen at
    /// the start of the step, treated by Crank–Nicolson.
    fn imex(&mut self, state: &mut SimState, dt: f64) -> Result<StepInfo> {
        let n = state.v.len();
        let h = self.grid.dx;
        let m = n - 2;
        let mut info = StepInfo::default();
        // Frozen half-node coefficients.
        let alpha: Vec<f64> = (0..n - 1).map(|i| 1.0 / (0.5 * (state.v[i] + state.v[i + 1]))).collect();
        let beta: Vec<f64> = (0..n - 1).map(|i| powf(0.5 * (state.v[i] + state.v[i + 1]), -2.5)).collect();
        // Unknowns (u_i, w_i) for interior i, interleaved: row 2(i-1) is u_i, 2(i-1)+1 is w_i.
        let mut mat = BandedMatrix::zeros(2 * m, 3, 3);
        let r = 0.5 * dt / (h * h);
        for i in 1..n - 1 {
            let (al, ar, bl, br) = (alpha[i - 1], alpha[i], beta[i - 1], beta[i]);
            let ru = 2 * (i - 1);
            let rw = ru + 1;
            mat.add(ru, ru, 1.0 + r * (al + ar));
            mat.add(ru, rw, r * (bl + br));
            mat.add(rw, rw, 1.0);
            mat.add(rw, ru, -r * (bl + br));
            if i > 1 {
                mat.add(ru, ru - 2, -r * al);
                mat.add(ru, rw - 2, -r * bl);
                mat.add(rw, ru - 2, r * bl);
            }
            if i < n - 2 {
                mat.add(ru, ru + 2, -r * ar);
                mat.add(ru, rw + 2, -r * br);
                mat.add(rw, ru + 2, r * br);
            }
        }
        let lu = mat.factor()?;
        // L applied to an increment that vanishes at the boundary.
        let apply_l = |du: &[f64], dw: &[f64], ou: &mut [f64], ow: &mut [f64]| {
            for i in 1..n - 1 {
                let (ur, ul) = (du[i + 1] - du[i], du[i] - du[i - 1]);
                let (wr, wl) = (dw[i + 1] - dw[i], dw[i] - dw[i - 1]);
                ou[i] = (alpha[i] * ur - alpha[i - 1] * ul + beta[i] * wr - beta[i - 1] * wl) / (h * h);
                ow[i] = -(beta[i] * ur - beta[i - 1] * ul) / (h * h);
            }
        };
        // Flux of L on an increment: only the end half-nodes contribute.
        let l_flux = |du: &[f64], dw: &[f64]| {
            [
                0.0,
                (-alpha[n - 2] * du[n - 2] - beta[n - 2] * dw[n - 2] - alpha[0] * du[1] - beta[0] * dw[1]) / h,
                (beta[n - 2] * du[n - 2] + beta[0] * du[1]) / h,
            ]
        };
        let solve = |rhs_u: &[f64], rhs_w: &[f64], out_u: &mut [f64], out_w: &mut [f64]| {
            let mut b = vec![0.0; 2 * m];
            for i in 1..n - 1 {
                b[2 * (i - 1)] = rhs_u[i];
                b[2 * (i - 1) + 1] = rhs_w[i];
            }
            lu.solve(&mut b);
            out_u[0] = 0.0;
            out_w[0] = 0.0;
            out_u[n - 1] = 0.0;
            out_w[n - 1] = 0.0;
            for i in 1..n - 1 {
                out_u[i] = b[2 * (i - 1)];
                out_w[i] = b[2 * (i - 1) + 1];
            }
        };

        let mut f0 = Stage::zeros(n);
        let mut f1 = Stage::zeros(n);
        let (flux0, sp0) = self.rhs(state.t, &state.v, &state.u, &state.w, state.shift, &mut f0);
        // Predictor: (I - dt/2 L) d* = dt F(U^n).
        let mut d1 = Stage::zeros(n);
        let ru: Vec<f64> = f0.u.iter().map(|x| dt * x).collect();
        let rw: Vec<f64> = f0.w.iter().map(|x| dt * x).collect();
        solve(&ru, &rw, &mut d1.u, &mut d1.w);
        let mut star = Stage::zeros(n);
        for i in 0..n {
            star.v[i] = state.v[i] + dt * f0.v[i];
            star.u[i] = state.u[i] + d1.u[i];
            star.w[i] = state.w[i] + d1.w[i];
        }
        star.x = state.shift + dt * f0.x;
        let (flux1, sp1) = self.rhs(state.t + dt, &star.v, &star.u, &star.w, star.x, &mut f1);
        // Corrector: (I - dt/2 L) d = dt/2 (F(U^n) + F(U*)) - dt/2 L d*.
        let mut ld_u = vec![0.0; n];
        let mut ld_w = vec![0.0; n];
        apply_l(&d1.u, &d1.w, &mut ld_u, &mut ld_w);
        let ru: Vec<f64> = (0..n).map(|i| 0.5 * dt * (f0.u[i] + f1.u[i] - ld_u[i])).collect();
        let rw: Vec<f64> = (0..n).map(|i| 0.5 * dt * (f0.w[i] + f1.w[i] - ld_w[i])).collect();
        let mut d = Stage::zeros(n);
        solve(&ru, &rw, &mut d.u, &mut d.w);
        let lf_star = l_flux(&d1.u, &d1.w);
        let lf_new = l_flux(&d.u, &d.w);
        for f in 0..3 {
            info.flux[f] = 0.5 * dt * (flux0[f] + flux1[f]) + 0.5 * dt * (lf_new[f] - lf_star[f]);
            info.sponge[f] = 0.5 * dt * (sp0[f] + sp1[f]);
        }
        for i in 0..n {
            state.v[i] += 0.5 * dt * (f0.v[i] + f1.v[i]);
            state.u[i] += d.u[i];
            state.w[i] += d.w[i];
        }
        state.shift += 0.5 * dt * (f0.x + f1.x);
        state.shift_rate = f0.x;
        state.t += dt;
        Ok(info)
    }
}
