use alloc::format;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Frame, Grid1D, SimState};
use crate::math::{cos, exp, powf, sin};
use crate::profile::ShockProfile;
use crate::{Error, Result};

/// Shape of the initial perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PerturbationKind {
    /// `exp(-4 ln 2 ((x - c)/width)^2)`
    #[default]
    GaussianBump,
    /// `cos^2(pi (x - c) / (2 width))` on `|x - c| < width`.
    CompactBump,
    /// Random Fourier modes under a Gaussian envelope, normalised to peak 1.
    RandomSmooth,
}

/// How `w` is initialised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum WInit {
    /// `w = -D v / v^{5/2}` from the perturbed `v` with the grid's central difference.
    #[default]
    Consistent,
    /// `w = w~ + amplitude_w * shape`, off the constraint manifold.
    Inconsistent,
}

/// Initial perturbation `(phi, psi, zeta)` of `(v, u, w)`.
///
/// `width` is the full width at half maximum of the base shape.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct Perturbation {
    pub kind: PerturbationKind,
    pub amplitude_v: f64,
    pub amplitude_u: f64,
    /// Only used with [`WInit::Inconsistent`].
    pub amplitude_w: f64,
    pub center: f64,
    pub width: f64,
    /// Replace the shape by its normalised derivative, which has zero integral.
    pub zero_mass: bool,
    pub w_init: WInit,
    pub seed: u64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Self {
            kind: PerturbationKind::GaussianBump,
            amplitude_v: 0.0,
            amplitude_u: 0.0,
            amplitude_w: 0.0,
            center: 0.0,
            width: 1.0,
            zero_mass: false,
            w_init: WInit::Consistent,
            seed: 0,
        }
    }
}

const MODES: usize = 6;

impl Perturbation {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude_v == 0.0 && self.amplitude_u == 0.0 && (self.w_init == WInit::Consistent || self.amplitude_w == 0.0)
    }

    fn modes(&self) -> [(f64, f64, f64); MODES] {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let mut m = [(0.0, 0.0, 0.0); MODES];
        for slot in m.iter_mut() {
            // wavenumber in units of 1/width, amplitude, phase
            *slot = (0.5 + 2.5 * unit(), 2.0 * unit() - 1.0, core::f64::consts::TAU * unit());
        }
        m
    }

    fn raw(&self, modes: &[(f64, f64, f64)], x: f64) -> f64 {
        let s = (x - self.center) / self.width;
        let g = exp(-4.0 * core::f64::consts::LN_2 * s * s);
        let base = match self.kind {
            PerturbationKind::GaussianBump => g,
            PerturbationKind::CompactBump => {
                if s.abs() < 1.0 {
                    let c = cos(0.5 * core::f64::consts::PI * s);
                    c * c
                } else {
                    0.0
                }
            }
            PerturbationKind::RandomSmooth => {
                g * modes.iter().map(|&(k, a, ph)| a * sin(k * s + ph)).sum::<f64>()
            }
        };
        if !self.zero_mass {
            return base;
        }
        // Centred difference of the base shape, as a smooth odd companion.
        let e = 1e-4;
        let mut shifted = *self;
        shifted.zero_mass = false;
        (shifted.raw(modes, x + e * self.width) - shifted.raw(modes, x - e * self.width)) / (2.0 * e)
    }

    /// Unit-peak shape sampled on `xs`.
    pub fn shape(&self, xs: &[f64]) -> Vec<f64> {
        let modes = self.modes();
        let mut f: Vec<f64> = xs.iter().map(|&x| self.raw(&modes, x)).collect();
        // Normalise on a fine auxiliary grid so the peak does not depend on the simulation grid.
        let lo = self.center - 4.0 * self.width;
        let peak = (0..=4000)
            .map(|k| self.raw(&modes, lo + 8.0 * self.width * k as f64 / 4000.0).abs())
            .fold(0.0, f64::max);
        if peak > 0.0 {
            for y in &mut f {
                *y /= peak;
            }
        }
        f
    }
}

/// Builds the initial state `U~ + perturbation` with `X = 0`.
///
/// Rejects perturbations that drive `v` to `v_floor` or below, and grids with
/// fewer than 20 cells across the 10%–90% width of the profile.
pub fn init_state(profile: &ShockProfile, grid: &Grid1D, frame: Frame, pert: &Perturbation, v_floor: f64) -> Result<SimState> {
    let width = profile.width();
    if width.is_finite() && width / grid.dx < 20.0 {
        return Err(Error::InvalidParameter {
            name: "grid.n",
            reason: format!("only {:.1} cells across the profile width {width:.3}", width / grid.dx),
        });
    }
    let mut state = super::profile_state(profile, grid, frame, 0.0, 0.0);
    let xs = grid.coordinates();
    let shape = pert.shape(&xs);
    let n = grid.nodes();
    // Far-field nodes keep their Dirichlet values.
    for i in 1..n - 1 {
        state.v[i] += pert.amplitude_v * shape[i];
        state.u[i] += pert.amplitude_u * shape[i];
    }
    for (i, &v) in state.v.iter().enumerate() {
        if !(v > v_floor) {
            return Err(Error::InvalidParameter {
                name: "perturbation",
                reason: format!("initial v = {v} at x = {} is below the floor {v_floor}", grid.x(i)),
            });
        }
    }
    match pert.w_init {
        WInit::Consistent => {
            for i in 1..n - 1 {
                let dv = (state.v[i + 1] - state.v[i - 1]) / (2.0 * grid.dx);
                state.w[i] = -dv / powf(state.v[i], 2.5);
            }
        }
        WInit::Inconsistent => {
            for i in 1..n - 1 {
                state.w[i] += pert.amplitude_w * shape[i];
            }
        }
    }
    Ok(state)
}
