//! Weight, weighted relative entropy, dissipation functionals and decay summaries.
//!
//! All spatial integrals use the trapezoid rule on the simulation grid and all
//! derivatives of perturbations use the same central differences as the
//! dynamics.

use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::{reference_fields, Frame, Grid1D, Reference, SimState};
use crate::fit::linear_fit;
use crate::gas::{EndStates, GasLaw};
use crate::math::sqrt;
use crate::profile::{ProfileSample, ShockProfile};
use crate::quadrature::simpson_uniform;
use crate::{Error, Result};

/// `(a, a_x)` for a profile sample: `a = 1 + (u_- - u~)/sqrt(delta_s)`, `a_x = sigma v~'/sqrt(delta_s)`.
#[inline]
pub fn weight_from_sample(es: &EndStates, s: &ProfileSample) -> (f64, f64) {
    let sd = sqrt(es.delta_s);
    (1.0 + (es.u_minus - s.u) / sd, es.sigma * s.dv / sd)
}

/// Weight and its derivative at `x` for a wave shifted by `shift` at time `t`
/// (laboratory coordinate, `xi = x - sigma t - shift`).
pub fn weight_eval(profile: &ShockProfile, x: f64, shift: f64, t: f64) -> (f64, f64) {
    let es = &profile.end_states;
    weight_from_sample(es, &profile.sample_shifted(x, shift, t, es.sigma))
}

/// The weight sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightField {
    pub a: Vec<f64>,
    pub a_x: Vec<f64>,
    pub delta_s: f64,
}

impl WeightField {
    pub fn new(profile: &ShockProfile, grid: &Grid1D, frame: Frame, t: f64, shift: f64) -> Self {
        let mut r = Reference::default();
        reference_fields(profile, grid, frame, t, shift, &mut r);
        Self { a: r.a, a_x: r.a_x, delta_s: profile.end_states.delta_s }
    }

    /// `1 <= a <= 1 + sqrt(delta_s)` up to `tol`.
    pub fn within_bounds(&self, tol: f64) -> bool {
        let top = 1.0 + sqrt(self.delta_s);
        self.a.iter().all(|&a| a >= 1.0 - tol && a <= top + tol)
    }
}

/// One row of the diagnostics series.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagnosticsRecord {
    pub t: f64,
    #[cfg_attr(feature = "serde", serde(rename = "X"))]
    pub x_shift: f64,
    #[cfg_attr(feature = "serde", serde(rename = "Xdot"))]
    pub x_dot: f64,
    /// `int a eta(U | U~) dx`
    pub rel_entropy_weighted: f64,
    /// `int |a_x| |p(v) - p(v~) - (u - u~)/(2 C_*)|^2`
    #[cfg_attr(feature = "serde", serde(rename = "G1"))]
    pub g1: f64,
    /// `int |a_x| |w - w~|^2`
    #[cfg_attr(feature = "serde", serde(rename = "G3"))]
    pub g3: f64,
    /// `int |v~_x| |u - u~|^2`
    #[cfg_attr(feature = "serde", serde(rename = "GS"))]
    pub gs: f64,
    /// `int |(u - u~)_x|^2`
    #[cfg_attr(feature = "serde", serde(rename = "Du1"))]
    pub du1: f64,
    /// `int |(u - u~)_xx|^2`
    #[cfg_attr(feature = "serde", serde(rename = "Du2"))]
    pub du2: f64,
    /// `int |w - w~|^2`
    #[cfg_attr(feature = "serde", serde(rename = "Gw"))]
    pub gw: f64,
    /// `int |(w - w~)_x|^2`
    #[cfg_attr(feature = "serde", serde(rename = "Gw1"))]
    pub gw1: f64,
    /// `int |(w - w~)_xx|^2`
    #[cfg_attr(feature = "serde", serde(rename = "Gw2"))]
    pub gw2: f64,
    /// `||(v - v~)_x||^2 + ||(u - u~)_x||^2`
    pub g: f64,
    /// `max |(v, u) - (v~, u~)|` over the grid (max of the two components).
    pub sup_perturbation: f64,
    /// Accumulated `|Delta int v - int flux dt - int sponge dt|`.
    pub mass_residual_v: f64,
    /// Same for `u`.
    pub mass_residual_u: f64,
    /// `max |w + D v / v^{5/2}|`
    pub w_consistency: f64,
    /// `||U - U~||^2_{L^2}` over `(v, u, w)`.
    pub perturbation_l2_sq: f64,
}

impl DiagnosticsRecord {
    /// Column names in CSV order.
    pub const COLUMNS: [&'static str; 18] = [
        "t",
        "X",
        "Xdot",
        "rel_entropy_weighted",
        "G1",
        "G3",
        "GS",
        "Du1",
        "Du2",
        "Gw",
        "Gw1",
        "Gw2",
        "g",
        "sup_perturbation",
        "mass_residual_v",
        "mass_residual_u",
        "w_consistency",
        "perturbation_l2_sq",
    ];

    pub fn values(&self) -> [f64; 18] {
        [
            self.t,
            self.x_shift,
            self.x_dot,
            self.rel_entropy_weighted,
            self.g1,
            self.g3,
            self.gs,
            self.du1,
            self.du2,
            self.gw,
            self.gw1,
            self.gw2,
            self.g,
            self.sup_perturbation,
            self.mass_residual_v,
            self.mass_residual_u,
            self.w_consistency,
            self.perturbation_l2_sq,
        ]
    }

    /// The nonnegative functionals, for invariant checks.
    pub fn functionals(&self) -> [f64; 11] {
        [
            self.rel_entropy_weighted,
            self.g1,
            self.g3,
            self.gs,
            self.du1,
            self.du2,
            self.gw,
            self.gw1,
            self.gw2,
            self.g,
            self.sup_perturbation,
        ]
    }
}

fn trapezoid(f: impl Fn(usize) -> f64, n: usize, dx: f64) -> f64 {
    let mut s = 0.5 * (f(0) + f(n - 1));
    for i in 1..n - 1 {
        s += f(i);
    }
    s * dx
}

/// Central first and second differences at interior nodes, zero at the ends.
fn differences(f: &[f64], dx: f64) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 1..n - 1 {
        d1[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
        d2[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (dx * dx);
    }
    (d1, d2)
}

/// Pointwise `eta(U | U~) = |u - u~|^2/2 + Q(v | v~) + |w - w~|^2/2` and its weighted integral.
pub fn relative_entropy_field(law: &GasLaw, state: &SimState, reference: &Reference, dx: f64) -> (Vec<f64>, f64) {
    let eta: Vec<f64> = (0..state.v.len())
        .map(|i| {
            let du = state.u[i] - reference.u[i];
            let dw = state.w[i] - reference.w[i];
            0.5 * du * du + law.q_rel(state.v[i], reference.v[i]) + 0.5 * dw * dw
        })
        .collect();
    let total = trapezoid(|i| reference.a[i] * eta[i], eta.len(), dx);
    (eta, total)
}

/// Evaluates every functional of the record for `state` against the wave
/// shifted by `state.shift`. Bookkeeping fields (`mass_residual_*`) are zero.
pub fn good_terms(state: &SimState, grid: &Grid1D, profile: &ShockProfile, frame: Frame, c_star: f64) -> DiagnosticsRecord {
    let mut r = Reference::default();
    reference_fields(profile, grid, frame, state.t, state.shift, &mut r);
    good_terms_with(state, grid, profile, &r, c_star)
}

pub(crate) fn good_terms_with(
    state: &SimState,
    grid: &Grid1D,
    profile: &ShockProfile,
    r: &Reference,
    c_star: f64,
) -> DiagnosticsRecord {
    let law = &profile.law;
    let n = state.v.len();
    let dx = grid.dx;
    let pv: Vec<f64> = (0..n).map(|i| state.v[i] - r.v[i]).collect();
    let pu: Vec<f64> = (0..n).map(|i| state.u[i] - r.u[i]).collect();
    let pw: Vec<f64> = (0..n).map(|i| state.w[i] - r.w[i]).collect();
    let (pv1, _) = differences(&pv, dx);
    let (pu1, pu2) = differences(&pu, dx);
    let (pw1, pw2) = differences(&pw, dx);
    let (_, rel) = relative_entropy_field(law, state, r, dx);
    let sq = |f: &[f64]| trapezoid(|i| f[i] * f[i], n, dx);
    let g1 = trapezoid(
        |i| {
            let k = law.p(state.v[i]) - law.p(r.v[i]) - pu[i] / (2.0 * c_star);
            r.a_x[i].abs() * k * k
        },
        n,
        dx,
    );
    let g = sq(&pv1) + sq(&pu1);
    DiagnosticsRecord {
        t: state.t,
        x_shift: state.shift,
        x_dot: state.shift_rate,
        rel_entropy_weighted: rel,
        g1,
        g3: trapezoid(|i| r.a_x[i].abs() * pw[i] * pw[i], n, dx),
        gs: trapezoid(|i| r.dv[i].abs() * pu[i] * pu[i], n, dx),
        du1: sq(&pu1),
        du2: sq(&pu2),
        gw: sq(&pw),
        gw1: sq(&pw1),
        gw2: sq(&pw2),
        g,
        sup_perturbation: (0..n).map(|i| pv[i].abs().max(pu[i].abs())).fold(0.0, f64::max),
        mass_residual_v: 0.0,
        mass_residual_u: 0.0,
        w_consistency: crate::dynamics::w_consistency(state, grid),
        perturbation_l2_sq: sq(&pv) + sq(&pu) + sq(&pw),
    }
}

/// Both sides of the weighted Poincaré inequality on `[0, 1]`:
/// `lhs = int |f - mean f|^2`, `rhs = (1/2) int y (1 - y) |f'|^2`.
///
/// `f` is sampled at equally spaced points including both ends; `f'` by
/// second-order differences. Integrals use Simpson's rule.
pub fn poincare_check(f: &[f64]) -> (f64, f64) {
    let n = f.len();
    let h = 1.0 / (n - 1) as f64;
    let mut df = vec![0.0; n];
    for i in 1..n - 1 {
        df[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    if n >= 3 {
        df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        df[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    }
    poincare_check_with_derivative(f, &df)
}

/// [`poincare_check`] with the derivative supplied.
pub fn poincare_check_with_derivative(f: &[f64], df: &[f64]) -> (f64, f64) {
    let n = f.len();
    let h = 1.0 / (n - 1) as f64;
    let mean = simpson_uniform(f, h);
    let dev: Vec<f64> = f.iter().map(|x| (x - mean) * (x - mean)).collect();
    let weighted: Vec<f64> = (0..n)
        .map(|i| {
            let y = i as f64 * h;
            0.5 * y * (1.0 - y) * df[i] * df[i]
        })
        .collect();
    (simpson_uniform(&dev, h), simpson_uniform(&weighted, h))
}

/// Time-series summary of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayReport {
    pub records: usize,
    /// Records skipped as initial transient.
    pub transient: usize,
    /// Fraction of consecutive pairs after the transient with non-increasing weighted entropy.
    pub entropy_decrease_fraction: f64,
    /// `None` when the initial value is identically small.
    pub sup_ratio: Option<f64>,
    pub g_ratio: Option<f64>,
    pub entropy_ratio: Option<f64>,
    /// `|Xdot(t_final)| / max |Xdot|`.
    pub xdot_final_over_max: Option<f64>,
    pub xdot_max: f64,
    /// Least-squares slope of `|X|` against `t` over the first and final thirds.
    pub x_slope_first: f64,
    pub x_slope_last: f64,
    /// Mean of `|X(t)| / t` over the first and final thirds (`t > 0`).
    pub x_over_t_first: f64,
    pub x_over_t_last: f64,
    /// `x_over_t_last < x_over_t_first`.
    pub sublinear: bool,
    /// Every tracked quantity starts below `1e-14`.
    pub identically_small: bool,
}

const SMALL: f64 = 1e-14;

fn ratio(end: f64, start: f64) -> Option<f64> {
    if start.abs() <= SMALL {
        None
    } else {
        Some(end / start)
    }
}

/// Summarises a diagnostics series; needs at least 10 records.
pub fn decay_report(series: &[DiagnosticsRecord]) -> Result<DecayReport> {
    let n = series.len();
    if n < 10 {
        return Err(Error::TooShort { needed: 10, got: n });
    }
    let transient = crate::math::ceil(0.05 * n as f64) as usize;
    let pairs = n - 1 - transient;
    let dec = (transient..n - 1)
        .filter(|&k| series[k + 1].rel_entropy_weighted <= series[k].rel_entropy_weighted)
        .count();
    let first = &series[0];
    let last = &series[n - 1];
    let xdot_max = series.iter().map(|r| r.x_dot.abs()).fold(0.0, f64::max);
    let third = n / 3;
    let slope = |part: &[DiagnosticsRecord]| {
        let t: Vec<f64> = part.iter().map(|r| r.t).collect();
        let x: Vec<f64> = part.iter().map(|r| r.x_shift.abs()).collect();
        linear_fit(&t, &x).map(|f| f.slope).unwrap_or(0.0)
    };
    let over_t = |part: &[DiagnosticsRecord]| {
        let vals: Vec<f64> = part.iter().filter(|r| r.t > 0.0).map(|r| r.x_shift.abs() / r.t).collect();
        if vals.is_empty() {
            0.0
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        }
    };
    let head = &series[..third];
    let tail = &series[n - third..];
    let x_over_t_first = over_t(head);
    let x_over_t_last = over_t(tail);
    let identically_small = first.sup_perturbation <= SMALL && first.rel_entropy_weighted <= SMALL && xdot_max <= SMALL;
    Ok(DecayReport {
        records: n,
        transient,
        entropy_decrease_fraction: if pairs == 0 { 1.0 } else { dec as f64 / pairs as f64 },
        sup_ratio: ratio(last.sup_perturbation, first.sup_perturbation),
        g_ratio: ratio(last.g, first.g),
        entropy_ratio: ratio(last.rel_entropy_weighted, first.rel_entropy_weighted),
        xdot_final_over_max: ratio(last.x_dot.abs(), xdot_max),
        xdot_max,
        x_slope_first: slope(head),
        x_slope_last: slope(tail),
        x_over_t_first,
        x_over_t_last,
        sublinear: x_over_t_last < x_over_t_first,
        identically_small,
    })
}

#[cfg(test)]
mod tests;
