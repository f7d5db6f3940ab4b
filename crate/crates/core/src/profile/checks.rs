//! Estimates that can be checked directly on a computed profile.

use alloc::vec::Vec;

use super::ShockProfile;
use crate::fit::linear_fit;
use crate::gas::{GasLaw, WaveConstants};
use crate::math::ln;

/// Summary of the qualitative and quantitative profile properties.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileReport {
    pub delta_s: f64,
    /// `v' >= -1e-12 max|v'|` everywhere.
    pub monotone: bool,
    /// `v' > 0` at every interior sample.
    pub strictly_monotone: bool,
    /// Number of sign changes of `v'` among samples above roundoff.
    pub dv_sign_changes: usize,
    pub tail_rate_left: f64,
    pub tail_rate_right: f64,
    pub tail_rate_left_over_delta: f64,
    pub tail_rate_right_over_delta: f64,
    /// `max |v''| / (delta_s |v'|)` over samples with `|v'|` above roundoff.
    pub deriv_bound_ratio: f64,
    /// `max / min` of `|u'| / |v'|`.
    pub equivalence_ratio: f64,
    /// `|xi_infl - xi_mid| / width`
    pub inflection_asymmetry: f64,
    pub xi_inflection: f64,
    pub xi_mid: f64,
    /// 10%–90% width.
    pub width: f64,
    /// Integrated-equation residual (max norm).
    pub residual: f64,
    /// `max |u' + sigma v'|`
    pub du_identity: f64,
    /// `max |w + v'/v^{5/2}|`
    pub w_identity: f64,
    pub gap_left: f64,
    pub gap_right: f64,
    /// `max (v - v_+)` over the window; positive values mean overshoot.
    pub overshoot: f64,
}

fn tail_rate(profile: &ShockProfile, left: bool) -> f64 {
    let es = &profile.end_states;
    let d = es.v_plus - es.v_minus;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (lo, hi) in [(1e-7, 1e-3), (1e-9, 1e-2)] {
        xs.clear();
        ys.clear();
        for i in 0..profile.len() {
            let xi = profile.xi[i];
            if (left && xi >= 0.0) || (!left && xi <= 0.0) {
                continue;
            }
            let gap = if left { profile.v[i] - es.v_minus } else { profile.v[i] - es.v_plus }.abs();
            if gap >= lo * d && gap <= hi * d {
                xs.push(xi.abs());
                ys.push(ln(gap));
            }
        }
        if xs.len() >= 3 {
            break;
        }
    }
    linear_fit(&xs, &ys).map(|f| -f.slope).unwrap_or(0.0)
}

pub(crate) fn profile_checks(profile: &ShockProfile) -> ProfileReport {
    let es = &profile.end_states;
    let n = profile.len();
    let max_dv = profile.dv.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = 1e-10 * max_dv;

    let mut sign_changes = 0;
    let mut last_sign = 0i8;
    for &d in &profile.dv {
        if d.abs() <= floor {
            continue;
        }
        let s = if d > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            sign_changes += 1;
        }
        last_sign = s;
    }

    let mut deriv_ratio: f64 = 0.0;
    let mut eq_max: f64 = 0.0;
    let mut eq_min = f64::INFINITY;
    for i in 1..n - 1 {
        let d = profile.dv[i];
        if d.abs() <= floor {
            continue;
        }
        deriv_ratio = deriv_ratio.max(profile.ddv[i].abs() / (es.delta_s * d.abs()));
        let r = profile.sample(profile.xi[i]).du.abs() / d.abs();
        eq_max = eq_max.max(r);
        eq_min = eq_min.min(r);
    }
    let equivalence_ratio = if eq_min.is_finite() && eq_min > 0.0 { eq_max / eq_min } else { 1.0 };

    let xi_mid = profile.crossing(es.v_mid()).unwrap_or(0.0);
    // Inflection: zero of v'' closest to the point of steepest ascent.
    let peak = (0..n).max_by(|&a, &b| profile.dv[a].total_cmp(&profile.dv[b])).unwrap_or(n / 2);
    let mut xi_infl = profile.xi[peak];
    let mut best = f64::INFINITY;
    for i in 0..n - 1 {
        let (a, b) = (profile.ddv[i], profile.ddv[i + 1]);
        if a > 0.0 && b <= 0.0 {
            let x = profile.xi[i] + (profile.xi[i + 1] - profile.xi[i]) * a / (a - b);
            if (x - profile.xi[peak]).abs() < best {
                best = (x - profile.xi[peak]).abs();
                xi_infl = x;
            }
        }
    }
    let width = profile.width();
    let width_ok = if width.is_finite() && width > 0.0 { width } else { 1.0 };
    let (du_identity, w_identity) = profile.identity_residuals();
    let (gap_left, gap_right) = profile.end_gaps();
    let tl = tail_rate(profile, true);
    let tr = tail_rate(profile, false);
    let overshoot = profile.v.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v - es.v_plus));
    ProfileReport {
        delta_s: es.delta_s,
        monotone: profile.is_monotone(),
        strictly_monotone: profile.is_strictly_monotone(),
        dv_sign_changes: sign_changes,
        tail_rate_left: tl,
        tail_rate_right: tr,
        tail_rate_left_over_delta: tl / es.delta_s,
        tail_rate_right_over_delta: tr / es.delta_s,
        deriv_bound_ratio: deriv_ratio,
        equivalence_ratio,
        inflection_asymmetry: (xi_infl - xi_mid).abs() / width_ok,
        xi_inflection: xi_infl,
        xi_mid,
        width: if width.is_finite() { width } else { 0.0 },
        residual: profile.residual,
        du_identity,
        w_identity,
        gap_left,
        gap_right,
        overshoot,
    }
}

/// Which state plays `p_-` in the constant of the diffusion estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DiffusionConvention {
    /// `p_- = p(v_-)`
    LeftState,
    /// `p_- = p(v_+)`
    RightState,
}

/// Result of [`diffusion_coefficient_check`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiffusionCheck {
    /// Set when the profile is not monotone and `y` is not a coordinate.
    pub skipped: bool,
    /// `(sigma / (2 sigma_ell)) delta_s v''(p_-) / v'(p_-)^2` with `p_- = p(v_-)`.
    pub constant_left: f64,
    /// Same with `p_- = p(v_+)`.
    pub constant_right: f64,
    pub max_residual_left: f64,
    pub max_residual_right: f64,
    /// `min A` over the sampled interior; positive for monotone profiles.
    pub min_coefficient: f64,
    /// `(y, A)` at 181 equally spaced levels `0.05 <= y <= 0.95`.
    pub curve: Vec<(f64, f64)>,
}

impl DiffusionCheck {
    pub fn max_residual(&self, conv: DiffusionConvention) -> f64 {
        match conv {
            DiffusionConvention::LeftState => self.max_residual_left,
            DiffusionConvention::RightState => self.max_residual_right,
        }
    }
}

/// Compares `A = (1/(y(1-y))) (1/v) dy/dx`, `y = (u_- - u)/delta_s`, with its
/// leading-order constant.
pub fn diffusion_coefficient_check(profile: &ShockProfile, wc: &WaveConstants) -> DiffusionCheck {
    let es = &profile.end_states;
    let law = &profile.law;
    let constant = |v_ref: f64| {
        let p = law.p(v_ref);
        let dv = law.dvolume(p);
        es.sigma / (2.0 * wc.sigma_ell) * es.delta_s * law.ddvolume(p) / (dv * dv)
    };
    let constant_left = constant(es.v_minus);
    let constant_right = constant(es.v_plus);
    let mut out = DiffusionCheck {
        skipped: !profile.is_monotone(),
        constant_left,
        constant_right,
        max_residual_left: 0.0,
        max_residual_right: 0.0,
        min_coefficient: f64::INFINITY,
        curve: Vec::new(),
    };
    if out.skipped {
        out.min_coefficient = 0.0;
        return out;
    }
    // Evaluate at fixed y-levels so the result does not depend on the profile grid.
    const LEVELS: usize = 181;
    let d = es.v_plus - es.v_minus;
    for k in 0..LEVELS {
        let y = 0.05 + 0.9 * k as f64 / (LEVELS - 1) as f64;
        let Some(xi) = profile.crossing(es.v_minus + y * d) else { continue };
        let s = profile.sample(xi);
        let y = (es.u_minus - s.u) / es.delta_s;
        let dy = es.sigma * s.dv / es.delta_s;
        let a = dy / (y * (1.0 - y) * s.v);
        out.max_residual_left = out.max_residual_left.max((a - constant_left).abs());
        out.max_residual_right = out.max_residual_right.max((a - constant_right).abs());
        out.min_coefficient = out.min_coefficient.min(a);
        out.curve.push((y, a));
    }
    out
}

/// Result of [`taylor_identity_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaylorCheck {
    pub eps: f64,
    pub max_residual: f64,
    pub n_used: usize,
}

/// Maximum over `v` in `[v_-, v_- + eps]` of
/// `|(p - p_-)/(v - v_-) + (p - p_+)/(v_+ - v) + (1/2) (v''(p_-)/v'(p_-)^2)(p_- - p_+)|`,
/// skipping a relative `1e-6` neighbourhood of both endpoints.
pub fn taylor_identity_check(law: &GasLaw, v_minus: f64, eps: f64, n_samples: usize) -> TaylorCheck {
    let v_plus = v_minus + eps;
    let (pm, pp) = (law.p(v_minus), law.p(v_plus));
    let dv = law.dvolume(pm);
    let c = 0.5 * law.ddvolume(pm) / (dv * dv) * (pm - pp);
    let n = n_samples.max(2);
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for k in 0..n {
        let t = 1e-6 + (1.0 - 2e-6) * k as f64 / (n - 1) as f64;
        let v = v_minus + t * eps;
        if !(v > v_minus && v < v_plus) {
            continue;
        }
        let p = law.p(v);
        let r = (p - pm) / (v - v_minus) + (p - pp) / (v_plus - v) + c;
        worst = worst.max(r.abs());
        used += 1;
    }
    TaylorCheck { eps, max_residual: worst, n_used: used }
}
