//! Gamma-law pressure, relative quantities, Rankine–Hugoniot end states and
//! the O(1) wave constants.

use alloc::format;
use alloc::vec::Vec;

use crate::math::{powf, sqrt};
use crate::{Error, Result};

/// Pressure law `p(v) = b v^{-gamma}` with `b = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GasLaw {
    gamma: f64,
}

/// Value and first two derivatives of the pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureEval {
    pub p: f64,
    pub dp: f64,
    pub ddp: f64,
}

/// Convex functions of `v` whose relative quantity `F(v|w)` is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    /// `p(v) = v^{-gamma}`
    Pressure,
    /// `Q(v) = v^{1-gamma} / (gamma - 1)`
    InternalEnergy,
}

impl Default for GasLaw {
    fn default() -> Self {
        Self { gamma: 5.0 / 3.0 }
    }
}

impl GasLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("need gamma > 1, got {gamma}"),
            });
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Pressure scale `b`; fixed to one.
    pub fn b(&self) -> f64 {
        1.0
    }

    #[inline]
    pub fn p(&self, v: f64) -> f64 {
        powf(v, -self.gamma)
    }

    #[inline]
    pub fn dp(&self, v: f64) -> f64 {
        -self.gamma * powf(v, -self.gamma - 1.0)
    }

    #[inline]
    pub fn ddp(&self, v: f64) -> f64 {
        self.gamma * (self.gamma + 1.0) * powf(v, -self.gamma - 2.0)
    }

    pub fn pressure_eval(&self, v: f64) -> Result<PressureEval> {
        check_volume("v", v)?;
        Ok(PressureEval { p: self.p(v), dp: self.dp(v), ddp: self.ddp(v) })
    }

    /// Internal energy `Q(v) = v^{1-gamma}/(gamma-1)`, so that `Q' = -p`.
    #[inline]
    pub fn internal_energy(&self, v: f64) -> f64 {
        powf(v, 1.0 - self.gamma) / (self.gamma - 1.0)
    }

    /// Inverse of the pressure law, `v(p) = p^{-1/gamma}`.
    #[inline]
    pub fn volume_of(&self, p: f64) -> f64 {
        powf(p, -1.0 / self.gamma)
    }

    /// `dv/dp` at pressure `p`.
    #[inline]
    pub fn dvolume(&self, p: f64) -> f64 {
        -powf(p, -1.0 / self.gamma - 1.0) / self.gamma
    }

    /// `d^2 v/dp^2` at pressure `p`.
    #[inline]
    pub fn ddvolume(&self, p: f64) -> f64 {
        let g = self.gamma;
        (1.0 / g) * (1.0 / g + 1.0) * powf(p, -1.0 / g - 2.0)
    }

    /// Sound speed `sqrt(-p'(v))` of the 2-family in Lagrangian coordinates.
    #[inline]
    pub fn lagrangian_sound_speed(&self, v: f64) -> f64 {
        sqrt(-self.dp(v))
    }

    /// `F(v|w) = F(v) - F(w) - F'(w)(v - w)`.
    pub fn relative_quantity(&self, which: Potential, v: f64, w: f64) -> Result<f64> {
        check_volume("v", v)?;
        check_volume("w_ref", w)?;
        Ok(self.relative_unchecked(which, v, w))
    }

    #[inline]
    pub(crate) fn relative_unchecked(&self, which: Potential, v: f64, w: f64) -> f64 {
        match which {
            Potential::Pressure => self.p(v) - self.p(w) - self.dp(w) * (v - w),
            Potential::InternalEnergy => {
                self.internal_energy(v) - self.internal_energy(w) + self.p(w) * (v - w)
            }
        }
    }

    #[inline]
    pub fn q_rel(&self, v: f64, w: f64) -> f64 {
        self.relative_unchecked(Potential::InternalEnergy, v, w)
    }

    #[inline]
    pub fn p_rel(&self, v: f64, w: f64) -> f64 {
        self.relative_unchecked(Potential::Pressure, v, w)
    }
}

fn check_volume(what: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v })
    }
}

/// End states of a 2-shock together with its speed and strength.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EndStates {
    pub v_minus: f64,
    pub v_plus: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub sigma: f64,
    /// `u_minus - u_plus`
    pub delta_s: f64,
}

impl EndStates {
    /// Builds the left state on the 2-shock curve through `(v_plus, u_plus)`.
    pub fn solve(law: &GasLaw, v_minus: f64, v_plus: f64, u_plus: f64) -> Result<Self> {
        check_volume("v_minus", v_minus)?;
        check_volume("v_plus", v_plus)?;
        if !u_plus.is_finite() {
            return Err(Error::Domain { what: "u_plus", value: u_plus });
        }
        if v_minus >= v_plus {
            return Err(Error::EntropyCondition { v_minus, v_plus });
        }
        let jump = v_plus - v_minus;
        let sigma = sqrt(-(law.p(v_plus) - law.p(v_minus)) / jump);
        let u_minus = u_plus + sigma * jump;
        Ok(Self { v_minus, v_plus, u_minus, u_plus, sigma, delta_s: u_minus - u_plus })
    }

    /// Finds `v_minus` such that `u_minus - u_plus = delta_s`.
    ///
    /// On the 2-shock curve `delta_s^2 = (p(v_-) - p(v_+))(v_+ - v_-)`, which is
    /// strictly decreasing in `v_-` on `(0, v_+)`, so bisection is enough.
    pub fn from_strength(law: &GasLaw, v_plus: f64, u_plus: f64, delta_s: f64) -> Result<Self> {
        check_volume("v_plus", v_plus)?;
        if !(delta_s.is_finite() && delta_s > 0.0) {
            return Err(Error::InvalidParameter {
                name: "delta_s",
                reason: format!("shock strength must be positive, got {delta_s}"),
            });
        }
        let target = delta_s * delta_s;
        let strength_sq = |vm: f64| (law.p(vm) - law.p(v_plus)) * (v_plus - vm);
        let mut hi = v_plus;
        let mut lo = 0.5 * v_plus;
        while strength_sq(lo) < target {
            lo *= 0.5;
            if lo < 1e-12 * v_plus {
                return Err(Error::InvalidParameter {
                    name: "delta_s",
                    reason: format!("no left state found for delta_s={delta_s}"),
                });
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if strength_sq(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Self::solve(law, 0.5 * (lo + hi), v_plus, u_plus)
    }

    /// Relative residuals of the two Rankine–Hugoniot relations.
    pub fn rh_residuals(&self, law: &GasLaw) -> (f64, f64) {
        let dv = self.v_plus - self.v_minus;
        let du = self.u_plus - self.u_minus;
        let dp = law.p(self.v_plus) - law.p(self.v_minus);
        let mass = (du + self.sigma * dv).abs() / du.abs().max(f64::MIN_POSITIVE);
        let momentum = (self.sigma * self.sigma * dv + dp).abs() / dp.abs().max(f64::MIN_POSITIVE);
        (mass, momentum)
    }

    pub fn satisfies_entropy_condition(&self) -> bool {
        self.v_minus < self.v_plus && self.u_minus > self.u_plus
    }

    pub fn v_mid(&self) -> f64 {
        0.5 * (self.v_minus + self.v_plus)
    }
}

/// O(1) constants of the weighted relative-entropy method.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WaveConstants {
    /// `sqrt(-p'(v_-))`
    pub sigma_ell: f64,
    /// `(gamma+1) / (2 gamma sigma_ell p(v_-))`
    pub alpha_ell: f64,
    /// Completed-square constant `C_*`.
    pub c_star: f64,
    /// Shift gain `M = 5 sigma_ell^3 alpha_ell / 4`.
    pub m_shift: f64,
    /// Observed `|sigma - sigma_ell| / delta_s`.
    pub speed_gap_ratio: f64,
}

impl WaveConstants {
    pub fn new(law: &GasLaw, es: &EndStates) -> Result<Self> {
        let wc = Self::unchecked(law, es);
        if !(wc.c_star > 0.0) {
            return Err(Error::Inadmissible {
                reason: format!("C_* = {} <= 0 for delta_s = {}", wc.c_star, es.delta_s),
            });
        }
        Ok(wc)
    }

    /// Same formulas without the admissibility test; used for reporting on strong shocks.
    pub fn unchecked(law: &GasLaw, es: &EndStates) -> Self {
        let g = law.gamma();
        let pm = law.p(es.v_minus);
        let sigma_ell = sqrt(-law.dp(es.v_minus));
        let alpha_ell = (g + 1.0) / (2.0 * g * sigma_ell * pm);
        let d = es.delta_s;
        let c_star = 0.5 * (1.0 / sigma_ell - (sqrt(d) + d) * (g + 1.0) / (g * pm));
        let m_shift = 1.25 * sigma_ell * sigma_ell * sigma_ell * alpha_ell;
        Self { sigma_ell, alpha_ell, c_star, m_shift, speed_gap_ratio: (es.sigma - sigma_ell).abs() / d }
    }

    /// `alpha_ell` through the derivative form `p''(v_-) / (2 |p'(v_-)|^2 sigma_ell)`.
    pub fn alpha_ell_from_derivatives(law: &GasLaw, es: &EndStates) -> f64 {
        let dp = law.dp(es.v_minus);
        let sigma_ell = sqrt(-dp);
        law.ddp(es.v_minus) / (2.0 * dp * dp * sigma_ell)
    }
}

/// The two sides of every inequality in the relative-quantity lemma at one `(v, vbar)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeBoundPoint {
    pub v: f64,
    pub vbar: f64,
    /// `0 < vbar < 2 v_+` and `0 < v < 3 v_+`.
    pub in_range_quadratic: bool,
    /// `v, vbar > v_+ / 2`.
    pub in_range_lipschitz: bool,
    /// `|p(v) - p(vbar)| < delta` and `|p(vbar) - p(v_+)| < delta`.
    pub in_range_pressure: bool,
    pub dv_sq: f64,
    pub q_rel: f64,
    pub p_rel: f64,
    pub dp: f64,
    /// `(gamma+1)/(2 gamma p(vbar)) |dp|^2`
    pub p_rel_upper_leading: f64,
    /// `p(vbar)^{-1/gamma-1} / (2 gamma) |dp|^2`
    pub q_rel_quadratic: f64,
    /// `q_rel_quadratic - (1+gamma)/(3 gamma^2) p(vbar)^{-1/gamma-2} dp^3`
    pub q_rel_lower: f64,
}

/// Evaluates both sides of each bound; out-of-range inputs are flagged, not rejected.
pub fn check_relative_bounds(law: &GasLaw, v: f64, vbar: f64, v_plus: f64, delta: f64) -> Result<RelativeBoundPoint> {
    check_volume("v", v)?;
    check_volume("vbar", vbar)?;
    check_volume("v_plus", v_plus)?;
    let g = law.gamma();
    let pbar = law.p(vbar);
    let dp = law.p(v) - pbar;
    let q_quad = powf(pbar, -1.0 / g - 1.0) / (2.0 * g) * dp * dp;
    Ok(RelativeBoundPoint {
        v,
        vbar,
        in_range_quadratic: vbar < 2.0 * v_plus && v < 3.0 * v_plus,
        in_range_lipschitz: v > 0.5 * v_plus && vbar > 0.5 * v_plus,
        in_range_pressure: dp.abs() < delta && (pbar - law.p(v_plus)).abs() < delta,
        dv_sq: (v - vbar) * (v - vbar),
        q_rel: law.q_rel(v, vbar),
        p_rel: law.p_rel(v, vbar),
        dp,
        p_rel_upper_leading: (g + 1.0) / (2.0 * g * pbar) * dp * dp,
        q_rel_quadratic: q_quad,
        q_rel_lower: q_quad - (1.0 + g) / (3.0 * g * g) * powf(pbar, -1.0 / g - 2.0) * dp * dp * dp,
    })
}

/// Smallest constants making each bound hold on a sample set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub delta: f64,
    /// `|v - vbar|^2 <= C Q(v|vbar)`
    pub c_quadratic_q: f64,
    /// `|v - vbar|^2 <= C p(v|vbar)`
    pub c_quadratic_p: f64,
    /// `|p(v) - p(vbar)| <= C |v - vbar|`
    pub c_lipschitz: f64,
    /// Excess coefficient `C` in the upper bound for `p(v|vbar)`.
    pub c_pressure_upper: f64,
    /// Excess coefficient `C` in the upper bound for `Q(v|vbar)`.
    pub c_energy_upper: f64,
    /// `min (Q(v|vbar) - lower bound)`; non-negative when the lower bound holds.
    pub energy_lower_min_slack: f64,
    pub n_quadratic: usize,
    pub n_lipschitz: usize,
    pub n_pressure: usize,
    pub n_out_of_range: usize,
}

impl BoundReport {
    pub fn from_points<I: IntoIterator<Item = RelativeBoundPoint>>(delta: f64, points: I) -> Self {
        let mut r = BoundReport { delta, energy_lower_min_slack: f64::INFINITY, ..Default::default() };
        for pt in points {
            let mut used = false;
            if pt.dv_sq == 0.0 {
                continue;
            }
            if pt.in_range_quadratic {
                used = true;
                r.n_quadratic += 1;
                r.c_quadratic_q = r.c_quadratic_q.max(pt.dv_sq / pt.q_rel);
                r.c_quadratic_p = r.c_quadratic_p.max(pt.dv_sq / pt.p_rel);
            }
            if pt.in_range_lipschitz {
                used = true;
                r.n_lipschitz += 1;
                r.c_lipschitz = r.c_lipschitz.max(pt.dp.abs() / sqrt(pt.dv_sq));
            }
            if pt.in_range_pressure {
                used = true;
                r.n_pressure += 1;
                let dp2 = pt.dp * pt.dp;
                r.c_pressure_upper = r.c_pressure_upper.max((pt.p_rel - pt.p_rel_upper_leading) / (delta * dp2));
                r.c_energy_upper = r.c_energy_upper.max((pt.q_rel - pt.q_rel_quadratic) / (delta * dp2));
                r.energy_lower_min_slack = r.energy_lower_min_slack.min(pt.q_rel - pt.q_rel_lower);
            }
            if !used {
                r.n_out_of_range += 1;
            }
        }
        if r.n_pressure == 0 {
            r.energy_lower_min_slack = 0.0;
        }
        r
    }

    /// Every reported constant is finite and the lower bound holds up to `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        [self.c_quadratic_q, self.c_quadratic_p, self.c_lipschitz, self.c_pressure_upper, self.c_energy_upper]
            .iter()
            .all(|c| c.is_finite())
            && self.energy_lower_min_slack >= -tol
    }
}

/// Brute-force scan of the lemma's ranges on a tensor grid of `n` points per axis.
///
/// Items (1) and (2) are sampled in `v`, item (3) in pressure around `p(v_+)`.
pub fn scan_relative_bounds(law: &GasLaw, v_plus: f64, delta: f64, n: usize) -> BoundReport {
    let mut pts = Vec::with_capacity(3 * n * n);
    let n = n.max(2);
    for i in 0..n {
        let vbar = 2.0 * v_plus * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let v = 3.0 * v_plus * (j as f64 + 0.5) / n as f64;
            if let Ok(pt) = check_relative_bounds(law, v, vbar, v_plus, delta) {
                pts.push(pt);
            }
        }
    }
    for i in 0..n {
        let vbar = 0.5 * v_plus * (1.0 + 4.0 * (i as f64 + 0.5) / n as f64);
        for j in 0..n {
            let v = 0.5 * v_plus * (1.0 + 4.0 * (j as f64 + 0.25) / n as f64);
            if let Ok(pt) = check_relative_bounds(law, v, vbar, v_plus, delta) {
                pts.push(pt);
            }
        }
    }
    let p_plus = law.p(v_plus);
    for i in 0..n {
        let pbar = p_plus + delta * (2.0 * (i as f64 + 0.5) / n as f64 - 1.0);
        for j in 0..n {
            let p = pbar + delta * (2.0 * (j as f64 + 0.5) / n as f64 - 1.0);
            if p <= 0.0 {
                continue;
            }
            if let Ok(pt) = check_relative_bounds(law, law.volume_of(p), law.volume_of(pbar), v_plus, delta) {
                pts.push(pt);
            }
        }
    }
    BoundReport::from_points(delta, pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_must_exceed_one() {
        assert!(GasLaw::new(1.0).is_err());
        assert!(GasLaw::new(0.5).is_err());
        assert!(GasLaw::new(f64::NAN).is_err());
        assert!(GasLaw::new(1.4).is_ok());
    }

    #[test]
    fn pressure_normalized_at_unit_volume() {
        for g in [1.1, 1.4, 5.0 / 3.0, 3.0] {
            let law = GasLaw::new(g).unwrap();
            assert_eq!(law.pressure_eval(1.0).unwrap().p, 1.0);
        }
    }

    #[test]
    fn pressure_rejects_nonpositive_volume() {
        let law = GasLaw::default();
        assert!(matches!(law.pressure_eval(0.0), Err(Error::Domain { .. })));
        assert!(law.pressure_eval(-1.0).is_err());
        assert!(law.relative_quantity(Potential::Pressure, 0.5, 0.0).is_err());
    }

    #[test]
    fn pressure_at_07_matches_closed_form() {
        // 0.7^(-5/3) evaluated to 30 digits with mpmath.
        let law = GasLaw::default();
        let e = law.pressure_eval(0.7).unwrap();
        assert_relative_eq!(e.p, 1.8120489831481647, max_relative = 1e-15);
        assert_relative_eq!(e.dp, -4.3144023408289636, max_relative = 1e-14);
        assert_relative_eq!(e.ddp, 16.435818441253195, max_relative = 1e-14);
    }

    #[test]
    fn derivatives_match_central_differences_at_second_order() {
        let law = GasLaw::default();
        let v = 0.68;
        let err = |h: f64| {
            let fd1 = (law.p(v + h) - law.p(v - h)) / (2.0 * h);
            let fd2 = (law.dp(v + h) - law.dp(v - h)) / (2.0 * h);
            ((fd1 - law.dp(v)).abs(), (fd2 - law.ddp(v)).abs())
        };
        let (a1, a2) = err(1e-2);
        let (b1, b2) = err(5e-3);
        assert!((a1 / b1).log2() > 1.9);
        assert!((a2 / b2).log2() > 1.9);
    }

    #[test]
    fn relative_pressure_known_value() {
        // p(0.68|0.7) for gamma = 5/3, 30-digit mpmath evaluation of the expanded formula.
        let law = GasLaw::default();
        let val = law.relative_quantity(Potential::Pressure, 0.68, 0.7).unwrap();
        assert_relative_eq!(val, 0.0034059078199356345, max_relative = 1e-9);
    }

    #[test]
    fn relative_quantity_vanishes_on_diagonal() {
        let law = GasLaw::default();
        for v in [0.1, 0.65, 0.7, 2.0] {
            assert!(law.q_rel(v, v).abs() <= 1e-14);
            assert!(law.p_rel(v, v).abs() <= 1e-14);
        }
    }

    #[test]
    fn end_states_from_volumes() {
        // mpmath: sigma = sqrt(-(p(0.7) - p(0.65)) / 0.05)
        let law = GasLaw::default();
        let es = EndStates::solve(&law, 0.65, 0.7, 0.0).unwrap();
        assert_relative_eq!(es.sigma, 2.1827555459309817, max_relative = 1e-13);
        assert_relative_eq!(es.u_minus, 0.10913777729654909, max_relative = 1e-13);
        let (a, b) = es.rh_residuals(&law);
        assert!(a <= 1e-12 && b <= 1e-12);
        assert!(es.satisfies_entropy_condition());
    }

    #[test]
    fn degenerate_and_reversed_shocks_rejected() {
        let law = GasLaw::default();
        assert!(matches!(EndStates::solve(&law, 0.7, 0.7, 0.0), Err(Error::EntropyCondition { .. })));
        assert!(EndStates::solve(&law, 0.8, 0.7, 0.0).is_err());
    }

    #[test]
    fn strength_inversion_round_trips() {
        let law = GasLaw::default();
        for d in [1e-3, 0.02, 0.05, 0.5] {
            let es = EndStates::from_strength(&law, 0.7, 0.0, d).unwrap();
            assert_relative_eq!(es.delta_s, d, max_relative = 1e-12);
        }
    }

    #[test]
    fn wave_constants_reference_values() {
        // Extended-precision evaluation of the defining formulas at v_- = 0.65, v_+ = 0.7.
        let law = GasLaw::default();
        let es = EndStates::solve(&law, 0.65, 0.7, 0.0).unwrap();
        let wc = WaveConstants::new(&law, &es).unwrap();
        assert_relative_eq!(wc.sigma_ell, 2.2928372703351446, max_relative = 1e-13);
        assert_relative_eq!(wc.alpha_ell, 0.17017888823235390, max_relative = 1e-13);
        assert_relative_eq!(wc.c_star, 0.046581662308848792, max_relative = 1e-12);
        assert_relative_eq!(wc.m_shift, 2.5641025641025641, max_relative = 1e-12);
        assert_relative_eq!(
            wc.alpha_ell,
            WaveConstants::alpha_ell_from_derivatives(&law, &es),
            max_relative = 1e-12
        );
    }

    #[test]
    fn c_star_weak_limit() {
        let law = GasLaw::default();
        let es = EndStates::from_strength(&law, 0.7, 0.0, 1e-10).unwrap();
        let wc = WaveConstants::new(&law, &es).unwrap();
        assert_relative_eq!(wc.c_star, 0.5 / wc.sigma_ell, max_relative = 1e-4);
    }

    #[test]
    fn strong_shock_is_inadmissible() {
        let law = GasLaw::default();
        let es = EndStates::from_strength(&law, 0.7, 0.0, 0.5).unwrap();
        assert!(matches!(WaveConstants::new(&law, &es), Err(Error::Inadmissible { .. })));
        assert!(WaveConstants::unchecked(&law, &es).c_star < 0.0);
    }

    #[test]
    fn speed_gap_is_order_delta() {
        let law = GasLaw::default();
        let ks: Vec<f64> = [0.01, 0.02, 0.04]
            .iter()
            .map(|&d| {
                let es = EndStates::from_strength(&law, 0.7, 0.0, d).unwrap();
                WaveConstants::new(&law, &es).unwrap().speed_gap_ratio
            })
            .collect();
        for k in &ks {
            assert!(*k > 0.5 && *k < 2.0, "{ks:?}");
        }
    }

    #[test]
    fn bounds_trivial_on_diagonal() {
        let law = GasLaw::default();
        let pt = check_relative_bounds(&law, 0.7, 0.7, 0.7, 0.01).unwrap();
        assert_eq!(pt.dv_sq, 0.0);
        assert_eq!(pt.dp, 0.0);
        assert!(pt.q_rel.abs() < 1e-15 && pt.p_rel.abs() < 1e-15);
    }

    #[test]
    fn bounds_scan_stable_under_refinement() {
        let law = GasLaw::default();
        let a = scan_relative_bounds(&law, 0.7, 0.01, 60);
        let b = scan_relative_bounds(&law, 0.7, 0.01, 120);
        assert!(a.holds(1e-14) && b.holds(1e-14));
        for (x, y) in [
            (a.c_quadratic_q, b.c_quadratic_q),
            (a.c_quadratic_p, b.c_quadratic_p),
            (a.c_lipschitz, b.c_lipschitz),
        ] {
            assert!((x - y).abs() / y < 0.05, "{x} vs {y}");
        }
    }
}
