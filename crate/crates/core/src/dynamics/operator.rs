use alloc::vec::Vec;

use super::{Frame, Grid1D};
use crate::diagnostics::weight_from_sample;
use crate::gas::GasLaw;
use crate::math::sqrt;
use crate::profile::ShockProfile;

/// Constants of the semi-discrete operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    pub law: GasLaw,
    pub dx: f64,
    /// Advection speed of the storage frame (`sigma` in the moving frame).
    pub frame_speed: f64,
}

/// Shifted wave sampled on the grid, with the weight.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Reference {
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
    pub dv: Vec<f64>,
    pub du: Vec<f64>,
    pub a: Vec<f64>,
    pub a_x: Vec<f64>,
}

/// Fills `out` with the wave `U~(x - sigma t - X)` (or `x - X` in the moving frame).
pub fn reference_fields(profile: &ShockProfile, grid: &Grid1D, frame: Frame, t: f64, shift: f64, out: &mut Reference) {
    let n = grid.nodes();
    let sigma = profile.end_states.sigma;
    for f in [&mut out.v, &mut out.u, &mut out.w, &mut out.dv, &mut out.du, &mut out.a, &mut out.a_x] {
        f.clear();
        f.reserve(n);
    }
    for i in 0..n {
        let s = profile.sample(frame.xi(grid.x(i), t, shift, sigma));
        let (a, a_x) = weight_from_sample(&profile.end_states, &s);
        out.v.push(s.v);
        out.u.push(s.u);
        out.w.push(s.w);
        out.dv.push(s.dv);
        out.du.push(s.du);
        out.a.push(a);
        out.a_x.push(a_x);
    }
}

/// Central-difference, flux-form right-hand side at the interior nodes.
///
/// ```text
/// v_t = c v_x + u_x
/// u_t = c u_x - p(v)_x + (u_x / v)_x + (w_x / v^{5/2})_x
/// w_t = c w_x - (u_x / v^{5/2})_x
/// ```
///
/// Half-node coefficients use the mean of the neighbouring `v`. The capillary
/// pair shares one coefficient, so it is skew-adjoint and conserves
/// `sum (u^2 + w^2)` exactly. Boundary entries of the outputs are zero.
pub fn spatial_operator(
    params: &OperatorParams,
    v: &[f64],
    u: &[f64],
    w: &[f64],
    out_v: &mut [f64],
    out_u: &mut [f64],
    out_w: &mut [f64],
) {
    let n = v.len();
    let c = params.frame_speed;
    let h = params.dx;
    let inv2h = 0.5 / h;
    let invh2 = 1.0 / (h * h);
    let law = params.law;
    out_v[0] = 0.0;
    out_u[0] = 0.0;
    out_w[0] = 0.0;
    out_v[n - 1] = 0.0;
    out_u[n - 1] = 0.0;
    out_w[n - 1] = 0.0;

    // Half-node coefficients at i + 1/2 for i = 0..n-2, carried along the sweep.
    let half = |i: usize| {
        let vm = 0.5 * (v[i] + v[i + 1]);
        (1.0 / vm, 1.0 / (vm * vm * sqrt(vm)))
    };
    let (mut al, mut bl) = half(0);
    let mut p_prev = law.p(v[0]);
    let mut p_here = law.p(v[1]);
    for i in 1..n - 1 {
        let (ar, br) = half(i);
        let p_next = law.p(v[i + 1]);
        let du_r = u[i + 1] - u[i];
        let du_l = u[i] - u[i - 1];
        let dw_r = w[i + 1] - w[i];
        let dw_l = w[i] - w[i - 1];
        out_v[i] = (c * (v[i + 1] - v[i - 1]) + (u[i + 1] - u[i - 1])) * inv2h;
        out_u[i] = (c * (u[i + 1] - u[i - 1]) - (p_next - p_prev)) * inv2h
            + (ar * du_r - al * du_l + br * dw_r - bl * dw_l) * invh2;
        out_w[i] = c * (w[i + 1] - w[i - 1]) * inv2h - (br * du_r - bl * du_l) * invh2;
        al = ar;
        bl = br;
        p_prev = p_here;
        p_here = p_next;
    }
}

/// Telescoped boundary flux of [`spatial_operator`]: for each field, the value
/// of `sum_interior rhs_i dx` computed from the four end nodes only.
pub fn boundary_flux(params: &OperatorParams, v: &[f64], u: &[f64], w: &[f64]) -> [f64; 3] {
    let n = v.len();
    let c = params.frame_speed;
    let h = params.dx;
    let law = params.law;
    let ends = |g: &dyn Fn(usize) -> f64| 0.5 * (g(n - 1) + g(n - 2) - g(1) - g(0));
    let fv = ends(&|i| c * v[i] + u[i]);
    let fu_adv = ends(&|i| c * u[i] - law.p(v[i]));
    let fw_adv = ends(&|i| c * w[i]);
    let coef = |i: usize| {
        let vm = 0.5 * (v[i] + v[i + 1]);
        (1.0 / vm, 1.0 / (vm * vm * sqrt(vm)))
    };
    let (al, bl) = coef(0);
    let (ar, br) = coef(n - 2);
    let ux_l = (u[1] - u[0]) / h;
    let ux_r = (u[n - 1] - u[n - 2]) / h;
    let wx_l = (w[1] - w[0]) / h;
    let wx_r = (w[n - 1] - w[n - 2]) / h;
    [
        fv,
        fu_adv + (ar * ux_r + br * wx_r) - (al * ux_l + bl * wx_l),
        fw_adv - (br * ux_r - bl * ux_l),
    ]
}

/// `dX/dt = -(M/delta_s) [ int a u~_x (u - u~) + (1/sigma) int a p(v~)_x (v - v~) ]`
/// by the trapezoid rule.
pub(crate) fn shift_rate(
    law: &GasLaw,
    reference: &Reference,
    v: &[f64],
    u: &[f64],
    dx: f64,
    m_shift: f64,
    delta_s: f64,
    sigma: f64,
) -> f64 {
    let n = v.len();
    let mut s_u = 0.0;
    let mut s_v = 0.0;
    for i in 0..n {
        let wt = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let r = reference;
        if r.dv[i] == 0.0 {
            continue;
        }
        s_u += wt * r.a[i] * r.du[i] * (u[i] - r.u[i]);
        s_v += wt * r.a[i] * law.dp(r.v[i]) * r.dv[i] * (v[i] - r.v[i]);
    }
    -(m_shift / delta_s) * (s_u + s_v / sigma) * dx
}

/// Relaxation `-kappa (U - U~)` applied on top of `out` at interior nodes.
/// Returns the trapezoid integral of the source for each field.
pub(crate) fn apply_sponge(
    kappa: &[f64],
    reference: &Reference,
    v: &[f64],
    u: &[f64],
    w: &[f64],
    dx: f64,
    out: [&mut [f64]; 3],
) -> [f64; 3] {
    let n = v.len();
    let [ov, ou, ow] = out;
    let mut total = [0.0; 3];
    for i in 1..n - 1 {
        let k = kappa[i];
        if k == 0.0 {
            continue;
        }
        let sv = -k * (v[i] - reference.v[i]);
        let su = -k * (u[i] - reference.u[i]);
        let sw = -k * (w[i] - reference.w[i]);
        ov[i] += sv;
        ou[i] += su;
        ow[i] += sw;
        total[0] += sv * dx;
        total[1] += su * dx;
        total[2] += sw * dx;
    }
    total
}

/// Largest characteristic speed, for the advective time-step limit.
pub(crate) fn max_speed(law: &GasLaw, frame_speed: f64, v_min: f64) -> f64 {
    frame_speed.abs() + sqrt(-law.dp(v_min))
}
