//! Method-of-lines discretization of the augmented system
//!
//! ```text
//! v_t - u_x = 0
//! u_t + p(v)_x = (u_x / v)_x + (w_x / v^{5/2})_x
//! w_t = -(u_x / v^{5/2})_x
//! ```
//!
//! on a truncated line, with the shift `X(t)` integrated as one more ODE
//! component. Fields live on the nodes of a uniform grid; the first and last
//! node carry Dirichlet far-field values.

mod evolve;
mod manufactured;
mod operator;
mod perturbation;
mod step;

use alloc::format;
use alloc::vec::Vec;

use crate::math::powf;
use crate::profile::ShockProfile;
use crate::{Error, Result};

pub use evolve::{evolve, EvolveConfig, RunResult};
pub use manufactured::manufactured_solution_error;
pub use operator::{boundary_flux, reference_fields, spatial_operator, OperatorParams, Reference};
pub use perturbation::{init_state, Perturbation, PerturbationKind, WInit};
pub use step::{stable_dt, Integrator, StepInfo};

/// Uniform grid with `n` cells (`n + 1` nodes) on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub dx: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 64 {
            return Err(Error::InvalidParameter { name: "grid.n", reason: format!("need at least 64 cells, got {n}") });
        }
        if !(x_min < 0.0 && x_max > 0.0 && x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need x_min < 0 < x_max, got [{x_min}, {x_max}]"),
            });
        }
        Ok(Self { x_min, x_max, n, dx: (x_max - x_min) / n as f64 })
    }

    /// Symmetric grid `[-half, half]` with spacing close to `dx`.
    pub fn symmetric(half: f64, dx: f64) -> Result<Self> {
        let n = crate::math::ceil(2.0 * half / dx) as usize;
        Self::new(-half, half, n.max(64))
    }

    pub fn nodes(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.nodes()).map(|i| self.x(i)).collect()
    }
}

/// Coordinate in which the fields are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Frame {
    /// `x' = x - sigma t`; the wave stays centred.
    #[default]
    Moving,
    /// Laboratory coordinate; the wave travels at speed `sigma`.
    Lab,
}

impl Frame {
    /// Advection speed added to every equation.
    pub fn speed(self, sigma: f64) -> f64 {
        match self {
            Frame::Moving => sigma,
            Frame::Lab => 0.0,
        }
    }

    /// Wave coordinate `xi` of grid position `x` at time `t` with shift `shift`.
    #[inline]
    pub fn xi(self, x: f64, t: f64, shift: f64, sigma: f64) -> f64 {
        match self {
            Frame::Moving => x - shift,
            Frame::Lab => x - sigma * t - shift,
        }
    }
}

/// Time integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Scheme {
    /// Classical explicit RK4.
    #[default]
    Rk4,
    /// Crank–Nicolson on the frozen viscous/capillary operator, Heun on the rest.
    Imex,
}

/// Relaxation layer next to both boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sponge {
    /// Fraction of the domain covered on each side.
    pub fraction: f64,
    /// Peak relaxation rate at the boundary.
    pub rate: f64,
}

impl Sponge {
    pub fn none() -> Self {
        Self { fraction: 0.0, rate: 0.0 }
    }

    /// Quadratic ramp from zero at the inner edge to `rate` at the boundary.
    pub fn profile(&self, grid: &Grid1D) -> Vec<f64> {
        let width = self.fraction * (grid.x_max - grid.x_min);
        (0..grid.nodes())
            .map(|i| {
                if width <= 0.0 || self.rate <= 0.0 {
                    return 0.0;
                }
                let x = grid.x(i);
                let d = (x - grid.x_min).min(grid.x_max - x);
                if d >= width {
                    0.0
                } else {
                    let r = 1.0 - d / width;
                    self.rate * r * r
                }
            })
            .collect()
    }
}

/// Grid fields and shift at one instant.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimState {
    pub t: f64,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
    /// Shift `X(t)`.
    pub shift: f64,
    /// Last evaluated `dX/dt`.
    pub shift_rate: f64,
}

impl SimState {
    pub fn v_min(&self) -> f64 {
        self.v.iter().fold(f64::INFINITY, |m, &x| m.min(x))
    }

    pub fn v_max(&self) -> f64 {
        self.v.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
    }
}

/// Max over interior nodes of `|w + D v / v^{5/2}|`, `D` the central difference.
pub fn w_consistency(state: &SimState, grid: &Grid1D) -> f64 {
    let n = state.v.len();
    (1..n - 1)
        .map(|i| {
            let dv = (state.v[i + 1] - state.v[i - 1]) / (2.0 * grid.dx);
            (state.w[i] + dv / powf(state.v[i], 2.5)).abs()
        })
        .fold(0.0, f64::max)
}

/// Samples the shifted wave onto the grid as a state with `X = shift`.
pub fn profile_state(profile: &ShockProfile, grid: &Grid1D, frame: Frame, t: f64, shift: f64) -> SimState {
    let sigma = profile.end_states.sigma;
    let mut s = SimState {
        t,
        v: Vec::with_capacity(grid.nodes()),
        u: Vec::with_capacity(grid.nodes()),
        w: Vec::with_capacity(grid.nodes()),
        shift,
        shift_rate: 0.0,
    };
    for i in 0..grid.nodes() {
        let p = profile.sample(frame.xi(grid.x(i), t, shift, sigma));
        s.v.push(p.v);
        s.u.push(p.u);
        s.w.push(p.w);
    }
    s
}

#[cfg(test)]
mod tests;
