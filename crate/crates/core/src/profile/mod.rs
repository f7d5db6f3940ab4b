//! Viscous-dispersive shock profiles.
//!
//! A profile `(v, u)(xi)`, `xi = x - sigma t`, solves
//!
//! ```text
//! -sigma v' - u' = 0
//! -sigma u' + p(v)' = (u'/v)' + (-v''/v^5 + 5 v'^2 / (2 v^6))'
//! ```
//!
//! with `(v, u) -> (v_-, u_-)` as `xi -> -inf` and `(v_+, u_+)` as `xi -> +inf`.
//! Integrating once and eliminating `u` leaves the second-order equation
//! `v'' = f(v) - sigma v^4 v' + 5 v'^2 / (2 v)` handled here.

mod checks;
mod solver;

use alloc::vec::Vec;

use crate::gas::{EndStates, GasLaw};
use crate::hermite;
use crate::math::{powf, sqrt};
use crate::{Error, Result};

pub use checks::{
    diffusion_coefficient_check, taylor_identity_check, DiffusionCheck, DiffusionConvention, ProfileReport,
    TaylorCheck,
};
pub use solver::slow_manifold_guess;

/// Algorithm used to produce the stored samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ProfileMethod {
    /// Fourth-order collocation on the phase-pinned boundary value problem.
    #[default]
    Collocation,
    /// Unstable-manifold shooting with a Dormand–Prince integrator.
    Shooting,
}

/// Solver settings. `None` fields are derived from the end states.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileOptions {
    /// Half-length `L` of the window `[-L, L]`.
    pub half_length: Option<f64>,
    /// Number of grid points (odd; rounded up otherwise).
    pub n_points: Option<usize>,
    pub method: ProfileMethod,
    /// Required `|v(-L) - v_-|`, `|v(L) - v_+|`; default `1e-8 * delta_s`.
    pub tail_tol: Option<f64>,
    pub newton_tol: f64,
    pub max_newton: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            half_length: None,
            n_points: None,
            method: ProfileMethod::Collocation,
            tail_tol: None,
            newton_tol: 1e-13,
            max_newton: 60,
        }
    }
}

/// Right-hand side of the profile equation, `v'' = F(v, v')`.
pub fn profile_ode_rhs(law: &GasLaw, es: &EndStates, v: f64, dv: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Domain { what: "v", value: v });
    }
    Ok(ProfileOde::new(law, es).rhs(v, dv))
}

/// The profile equation with its first derivatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ProfileOde {
    law: GasLaw,
    sigma: f64,
    v_minus: f64,
    p_minus: f64,
}

impl ProfileOde {
    pub(crate) fn new(law: &GasLaw, es: &EndStates) -> Self {
        Self { law: *law, sigma: es.sigma, v_minus: es.v_minus, p_minus: law.p(es.v_minus) }
    }

    /// `f(v) = -v^5 (sigma^2 (v - v_-) + p(v) - p(v_-))`
    #[inline]
    pub(crate) fn f(&self, v: f64) -> f64 {
        let v5 = v * v * v * v * v;
        -v5 * (self.sigma * self.sigma * (v - self.v_minus) + self.law.p(v) - self.p_minus)
    }

    #[inline]
    pub(crate) fn df(&self, v: f64) -> f64 {
        let v4 = v * v * v * v;
        let j = self.sigma * self.sigma * (v - self.v_minus) + self.law.p(v) - self.p_minus;
        -5.0 * v4 * j - v4 * v * (self.sigma * self.sigma + self.law.dp(v))
    }

    #[inline]
    pub(crate) fn rhs(&self, v: f64, s: f64) -> f64 {
        let v4 = v * v * v * v;
        self.f(v) - self.sigma * v4 * s + 2.5 * s * s / v
    }

    /// `(dF/dv, dF/ds)`
    #[inline]
    pub(crate) fn jac(&self, v: f64, s: f64) -> (f64, f64) {
        let v3 = v * v * v;
        (
            self.df(v) - 4.0 * self.sigma * v3 * s - 2.5 * s * s / (v * v),
            -self.sigma * v3 * v + 5.0 * s / v,
        )
    }

    /// Third derivative along a solution.
    #[inline]
    pub(crate) fn third(&self, v: f64, s: f64) -> f64 {
        let (fv, fs) = self.jac(v, s);
        fv * s + fs * self.rhs(v, s)
    }

    /// Linearization eigenvalues at a rest point `(v, 0)`: `(re, im)` pairs.
    pub(crate) fn eigen(&self, v: f64) -> [(f64, f64); 2] {
        let b = self.sigma * v * v * v * v;
        let disc = b * b + 4.0 * self.df(v);
        if disc >= 0.0 {
            let r = sqrt(disc);
            [(0.5 * (-b + r), 0.0), (0.5 * (-b - r), 0.0)]
        } else {
            let r = sqrt(-disc);
            [(-0.5 * b, 0.5 * r), (-0.5 * b, -0.5 * r)]
        }
    }

    /// Residual of the once-integrated momentum balance, scaled by `v^5`-free form.
    #[inline]
    pub(crate) fn integrated_residual(&self, v: f64, dv: f64, ddv: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let v5 = powf(v, 5.0);
        s2 * (v - self.v_minus) + self.law.p(v) - self.p_minus + self.sigma * dv / v + ddv / v5
            - 2.5 * dv * dv / (v5 * v)
    }
}

/// Values of the shifted wave and its derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub v: f64,
    pub u: f64,
    pub w: f64,
    pub dv: f64,
    pub du: f64,
    pub dw: f64,
    pub ddv: f64,
}

/// A computed shock profile sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShockProfile {
    pub law: GasLaw,
    pub end_states: EndStates,
    pub xi: Vec<f64>,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
    pub dv: Vec<f64>,
    pub ddv: Vec<f64>,
    /// Third derivative of `v`; used by the interpolant of `v''`.
    pub dddv: Vec<f64>,
    pub method: ProfileMethod,
    /// Max-norm residual of the integrated equation on interval quarter points.
    pub residual: f64,
    /// Newton iterations of the collocation solve (0 for shooting).
    pub iterations: usize,
}

impl ShockProfile {
    /// Builds a profile from samples of `(xi, v, v')`, deriving every other field.
    pub fn from_samples(law: GasLaw, es: EndStates, xi: Vec<f64>, v: Vec<f64>, dv: Vec<f64>, method: ProfileMethod) -> Result<Self> {
        let n = xi.len();
        if n < 4 || v.len() != n || dv.len() != n {
            return Err(Error::TooShort { needed: 4, got: n.min(v.len()).min(dv.len()) });
        }
        if xi.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter { name: "xi", reason: "abscissae must increase strictly".into() });
        }
        if let Some(&bad) = v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
            return Err(Error::Domain { what: "v", value: bad });
        }
        let ode = ProfileOde::new(&law, &es);
        let ddv: Vec<f64> = v.iter().zip(&dv).map(|(&a, &b)| ode.rhs(a, b)).collect();
        let dddv: Vec<f64> = v.iter().zip(&dv).map(|(&a, &b)| ode.third(a, b)).collect();
        let u = v.iter().map(|&a| es.u_minus - es.sigma * (a - es.v_minus)).collect();
        let w = v.iter().zip(&dv).map(|(&a, &b)| -b / powf(a, 2.5)).collect();
        let mut p = Self { law, end_states: es, xi, v, u, w, dv, ddv, dddv, method, residual: 0.0, iterations: 0 };
        p.residual = p.integrated_residual();
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn half_length(&self) -> f64 {
        0.5 * (self.xi[self.len() - 1] - self.xi[0])
    }

    pub fn spacing(&self) -> f64 {
        (self.xi[self.len() - 1] - self.xi[0]) / (self.len() - 1) as f64
    }

    /// Profile quantities at `xi`; constant end states outside the window.
    pub fn sample(&self, xi: f64) -> ProfileSample {
        let es = &self.end_states;
        let n = self.len();
        if xi <= self.xi[0] {
            return ProfileSample { v: es.v_minus, u: es.u_minus, w: 0.0, dv: 0.0, du: 0.0, dw: 0.0, ddv: 0.0 };
        }
        if xi >= self.xi[n - 1] {
            return ProfileSample { v: es.v_plus, u: es.u_plus, w: 0.0, dv: 0.0, du: 0.0, dw: 0.0, ddv: 0.0 };
        }
        // Nearly uniform grids: guess the interval, then correct.
        let h = (self.xi[n - 1] - self.xi[0]) / (n - 1) as f64;
        let mut i = (((xi - self.xi[0]) / h) as usize).min(n - 2);
        while i > 0 && xi < self.xi[i] {
            i -= 1;
        }
        while i < n - 2 && xi > self.xi[i + 1] {
            i += 1;
        }
        let (x0, x1) = (self.xi[i], self.xi[i + 1]);
        let (v, _) = hermite::cubic(x0, x1, self.v[i], self.v[i + 1], self.dv[i], self.dv[i + 1], xi);
        let (dv, _) = hermite::cubic(x0, x1, self.dv[i], self.dv[i + 1], self.ddv[i], self.ddv[i + 1], xi);
        let (ddv, _) = hermite::cubic(x0, x1, self.ddv[i], self.ddv[i + 1], self.dddv[i], self.dddv[i + 1], xi);
        let v25 = v * v * sqrt(v);
        ProfileSample {
            v,
            u: es.u_minus - es.sigma * (v - es.v_minus),
            w: -dv / v25,
            dv,
            du: -es.sigma * dv,
            dw: -ddv / v25 + 2.5 * dv * dv / (v25 * v),
            ddv,
        }
    }

    /// Samples the wave `U(x - sigma t - shift)`.
    pub fn sample_shifted(&self, x: f64, shift: f64, t: f64, sigma: f64) -> ProfileSample {
        self.sample(x - sigma * t - shift)
    }

    /// Max-norm residual of the integrated equation at interval quarter points.
    pub fn integrated_residual(&self) -> f64 {
        let ode = ProfileOde::new(&self.law, &self.end_states);
        let mut worst: f64 = 0.0;
        for i in 0..self.len() - 1 {
            for q in [0.0, 0.25, 0.5, 0.75] {
                let xi = self.xi[i] + q * (self.xi[i + 1] - self.xi[i]);
                let s = self.sample(xi);
                worst = worst.max(ode.integrated_residual(s.v, s.dv, s.ddv).abs());
            }
        }
        worst
    }

    /// `max |u' + sigma v'|` and `max |w + v'/v^{5/2}|` over the stored samples.
    pub fn identity_residuals(&self) -> (f64, f64) {
        let sigma = self.end_states.sigma;
        let mut a: f64 = 0.0;
        let mut b: f64 = 0.0;
        for i in 0..self.len() {
            let s = self.sample(self.xi[i]);
            a = a.max((s.du + sigma * self.dv[i]).abs());
            b = b.max((self.w[i] + self.dv[i] / powf(self.v[i], 2.5)).abs());
        }
        (a, b)
    }

    /// `(|v(-L) - v_-|, |v(L) - v_+|)`
    pub fn end_gaps(&self) -> (f64, f64) {
        let n = self.len();
        ((self.v[0] - self.end_states.v_minus).abs(), (self.v[n - 1] - self.end_states.v_plus).abs())
    }

    /// `xi` at which `v` first crosses `level` (linear-in-cell, refined with the Hermite cubic).
    pub fn crossing(&self, level: f64) -> Option<f64> {
        let i = (0..self.len() - 1).find(|&i| (self.v[i] - level) * (self.v[i + 1] - level) <= 0.0)?;
        let (x0, x1) = (self.xi[i], self.xi[i + 1]);
        let (mut a, mut b) = (x0, x1);
        let g = |x: f64| hermite::cubic(x0, x1, self.v[i], self.v[i + 1], self.dv[i], self.dv[i + 1], x).0 - level;
        if g(a) == 0.0 {
            return Some(a);
        }
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if (g(a) < 0.0) == (g(m) < 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        Some(0.5 * (a + b))
    }

    /// 10%–90% transition width of `v`.
    pub fn width(&self) -> f64 {
        let es = &self.end_states;
        let d = es.v_plus - es.v_minus;
        match (self.crossing(es.v_minus + 0.1 * d), self.crossing(es.v_minus + 0.9 * d)) {
            (Some(a), Some(b)) => b - a,
            _ => f64::NAN,
        }
    }

    /// Whether `v' >= -1e-12 max v'` everywhere.
    pub fn is_monotone(&self) -> bool {
        let max = self.dv.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        self.dv.iter().all(|&d| d >= -1e-12 * max)
    }

    /// Whether `v' > 0` at every interior sample.
    pub fn is_strictly_monotone(&self) -> bool {
        self.dv[1..self.len() - 1].iter().all(|&d| d > 0.0)
    }

    pub fn report(&self) -> ProfileReport {
        checks::profile_checks(self)
    }
}

/// Solves for the profile with the default pipeline (or the method in `opts`).
pub fn solve_profile(law: &GasLaw, es: &EndStates, opts: &ProfileOptions) -> Result<ShockProfile> {
    solver::solve(law, es, opts)
}

/// Shooting-only solve on the same grid the collocation solver would use.
pub fn shoot_profile(law: &GasLaw, es: &EndStates, opts: &ProfileOptions) -> Result<ShockProfile> {
    solver::solve(law, es, &ProfileOptions { method: ProfileMethod::Shooting, ..*opts })
}
