//! The property battery behind `nsk-lab verify`.

use nsk_core::diagnostics::{good_terms, poincare_check, poincare_check_with_derivative, WeightField};
use nsk_core::dynamics::{profile_state, Frame, Grid1D};
use nsk_core::fit::loglog_fit;
use nsk_core::gas::scan_relative_bounds;
use nsk_core::profile::{diffusion_coefficient_check, solve_profile, taylor_identity_check, DiffusionConvention};
use nsk_core::{EndStates, GasLaw, ProfileOptions, WaveConstants};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Shock strengths of the diffusion-scaling check.
pub const DIFFUSION_DELTAS: [f64; 3] = [0.005, 0.01, 0.02];
pub const TAYLOR_EPS: [f64; 3] = [0.02, 0.01, 0.005];
pub const TAYLOR_V_MINUS: f64 = 0.65;
pub const POINCARE_SAMPLES: usize = 1000;
pub const SLOPE_TOL: f64 = 0.2;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Negative control: evaluate the G1 kernel with `-C_*`.
    pub flip_c_star: bool,
}

/// One named check of the battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Headline measured value.
    pub value: f64,
    /// Human-readable acceptance rule.
    pub criterion: String,
    pub details: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub version: String,
    pub passed: bool,
    pub failing: Vec<String>,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// Field names every report carries, in order.
    pub const FIELDS: [&'static str; 4] = ["version", "passed", "failing", "checks"];
    pub const CHECK_FIELDS: [&'static str; 5] = ["name", "passed", "value", "criterion", "details"];

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, passed: bool, value: f64, criterion: &str, details: serde_json::Value) -> CheckResult {
    CheckResult { name: name.into(), passed, value, criterion: criterion.into(), details }
}

fn failed(name: &str, criterion: &str, err: impl std::fmt::Display) -> CheckResult {
    check(name, false, f64::NAN, criterion, serde_json::json!({ "error": err.to_string() }))
}

/// Lemma constants on an `n` grid and a `2n` grid; they must be finite and agree to 10%.
pub fn relative_bounds(law: &GasLaw, v_plus: f64) -> CheckResult {
    const NAME: &str = "relative_bounds";
    const CRIT: &str = "finite constants, lower bound slack >= -1e-12, |c(2n)/c(n) - 1| <= 0.1";
    let delta = 0.01;
    let coarse = scan_relative_bounds(law, v_plus, delta, 200);
    let fine = scan_relative_bounds(law, v_plus, delta, 400);
    let pairs = [
        (coarse.c_quadratic_q, fine.c_quadratic_q),
        (coarse.c_quadratic_p, fine.c_quadratic_p),
        (coarse.c_lipschitz, fine.c_lipschitz),
        (coarse.c_pressure_upper.abs(), fine.c_pressure_upper.abs()),
        (coarse.c_energy_upper.abs(), fine.c_energy_upper.abs()),
    ];
    let drift = pairs.iter().map(|&(a, b)| if a == b { 0.0 } else { (b / a - 1.0).abs() }).fold(0.0, f64::max);
    let passed = coarse.holds(1e-12) && fine.holds(1e-12) && drift <= 0.1;
    check(NAME, passed, drift, CRIT, serde_json::json!({ "delta": delta, "coarse": coarse, "fine": fine }))
}

/// Random polynomials of degree at most 8 plus the equality case `f(y) = y`.
pub fn poincare(seed: u64) -> CheckResult {
    const NAME: &str = "poincare";
    const CRIT: &str = "lhs <= rhs on every sample; f(y)=y gives lhs = rhs = 1/12 within 1e-10";
    let n = 2001;
    let ys: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let (el, er) = poincare_check(&ys);
    let equality_err = (el - 1.0 / 12.0).abs().max((er - 1.0 / 12.0).abs());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for _ in 0..POINCARE_SAMPLES {
        let deg = rng.gen_range(0..=8usize);
        let c: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f: Vec<f64> = ys.iter().map(|&y| c.iter().rev().fold(0.0, |acc, &k| acc * y + k)).collect();
        let df: Vec<f64> = ys
            .iter()
            .map(|&y| c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &ck)| acc * y + k as f64 * ck))
            .collect();
        let (l, r) = poincare_check_with_derivative(&f, &df);
        if r > 0.0 {
            worst = worst.max(l / r);
        }
        if l > r * (1.0 + 1e-9) + 1e-15 {
            violations += 1;
        }
    }
    let passed = violations == 0 && equality_err <= 1e-10;
    check(
        NAME,
        passed,
        worst,
        CRIT,
        serde_json::json!({
            "samples": POINCARE_SAMPLES,
            "violations": violations,
            "max_lhs_over_rhs": worst,
            "equality_lhs": el,
            "equality_rhs": er,
            "equality_error": equality_err,
        }),
    )
}

/// Slope of the Taylor-identity residual against `eps`.
pub fn taylor_scaling(law: &GasLaw) -> CheckResult {
    const NAME: &str = "taylor_scaling";
    const CRIT: &str = "log-log slope of residual vs eps within 2 +- 0.2";
    let res: Vec<f64> = TAYLOR_EPS.iter().map(|&e| taylor_identity_check(law, TAYLOR_V_MINUS, e, 4001).max_residual).collect();
    match loglog_fit(&TAYLOR_EPS, &res) {
        Ok(fit) => check(
            NAME,
            (fit.slope - 2.0).abs() <= SLOPE_TOL,
            fit.slope,
            CRIT,
            serde_json::json!({ "v_minus": TAYLOR_V_MINUS, "eps": TAYLOR_EPS, "residual": res, "fit": fit }),
        ),
        Err(e) => failed(NAME, CRIT, e),
    }
}

/// Slope of the diffusion-coefficient residual against `delta_s`.
pub fn diffusion_scaling(law: &GasLaw, v_plus: f64, u_plus: f64, deltas: &[f64]) -> CheckResult {
    const NAME: &str = "diffusion_scaling";
    const CRIT: &str = "log-log slope of max residual vs delta_s within 2 +- 0.2 (p_- = p(v_-))";
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &d in deltas {
        let prof = EndStates::from_strength(law, v_plus, u_plus, d)
            .and_then(|es| solve_profile(law, &es, &ProfileOptions::default()));
        let prof = match prof {
            Ok(p) => p,
            Err(e) => return failed(NAME, CRIT, format!("delta_s={d}: {e}")),
        };
        let wc = WaveConstants::unchecked(law, &prof.end_states);
        let dc = diffusion_coefficient_check(&prof, &wc);
        if dc.skipped {
            return failed(NAME, CRIT, format!("delta_s={d}: profile not monotone"));
        }
        left.push(dc.max_residual(DiffusionConvention::LeftState));
        right.push(dc.max_residual(DiffusionConvention::RightState));
    }
    match (loglog_fit(deltas, &left), loglog_fit(deltas, &right)) {
        (Ok(fl), Ok(fr)) => check(
            NAME,
            (fl.slope - 2.0).abs() <= SLOPE_TOL,
            fl.slope,
            CRIT,
            serde_json::json!({
                "delta_s": deltas,
                "residual_left": left,
                "residual_right": right,
                "fit_left": fl,
                "fit_right": fr,
            }),
        ),
        (Err(e), _) | (_, Err(e)) => failed(NAME, CRIT, e),
    }
}

/// Perturbations with `u - u~ = 2 C_* (p(v) - p(v~))` lie in the kernel of G1.
pub fn g1_kernel(law: &GasLaw, es: &EndStates, flip: bool) -> CheckResult {
    const NAME: &str = "g1_kernel";
    const CRIT: &str = "G1 / GS <= 1e-12 on the completed-square kernel";
    let prof = match solve_profile(law, es, &ProfileOptions::default()) {
        Ok(p) => p,
        Err(e) => return failed(NAME, CRIT, e),
    };
    let wc = match WaveConstants::new(law, es) {
        Ok(w) => w,
        Err(e) => return failed(NAME, CRIT, e),
    };
    let half = 10.0 * prof.report().width.max(10.0);
    let grid = match Grid1D::symmetric(half, half / 1000.0) {
        Ok(g) => g,
        Err(e) => return failed(NAME, CRIT, e),
    };
    let mut s = profile_state(&prof, &grid, Frame::Moving, 0.0, 0.0);
    let bump_width = 0.2 * half;
    for i in 0..grid.nodes() {
        let x = grid.x(i);
        let vt = s.v[i];
        s.v[i] += 0.1 * es.delta_s * (-(x / bump_width).powi(2)).exp();
        s.u[i] += 2.0 * wc.c_star * (law.p(s.v[i]) - law.p(vt));
    }
    let c_star = if flip { -wc.c_star } else { wc.c_star };
    let r = good_terms(&s, &grid, &prof, Frame::Moving, c_star);
    let ratio = r.g1 / r.gs;
    check(
        NAME,
        ratio <= 1e-12,
        ratio,
        CRIT,
        serde_json::json!({ "c_star": c_star, "flipped": flip, "G1": r.g1, "GS": r.gs }),
    )
}

/// `1 <= a <= 1 + sqrt(delta_s)`, `a_x >= 0` on a grid around the profile.
pub fn weight_bounds(law: &GasLaw, es: &EndStates) -> CheckResult {
    const NAME: &str = "weight_bounds";
    const CRIT: &str = "1 <= a <= 1 + sqrt(delta_s) and a_x >= -1e-10 max a_x";
    let prof = match solve_profile(law, es, &ProfileOptions::default()) {
        Ok(p) => p,
        Err(e) => return failed(NAME, CRIT, e),
    };
    let half = 1.2 * prof.half_length();
    let grid = match Grid1D::symmetric(half, half / 2000.0) {
        Ok(g) => g,
        Err(e) => return failed(NAME, CRIT, e),
    };
    let wf = WeightField::new(&prof, &grid, Frame::Moving, 0.0, 0.0);
    let top = wf.a_x.iter().cloned().fold(0.0, f64::max);
    let min_ax = wf.a_x.iter().cloned().fold(f64::INFINITY, f64::min);
    let a_min = wf.a.iter().cloned().fold(f64::INFINITY, f64::min);
    let a_max = wf.a.iter().cloned().fold(0.0, f64::max);
    let passed = wf.within_bounds(1e-12) && min_ax >= -1e-10 * top;
    check(
        NAME,
        passed,
        a_max - a_min,
        CRIT,
        serde_json::json!({ "a_min": a_min, "a_max": a_max, "a_x_min": min_ax, "a_x_max": top, "sqrt_delta_s": es.delta_s.sqrt() }),
    )
}

/// Runs every check with the law and right state of `cfg`.
pub fn run_battery(cfg: &RunConfig, opts: &VerifyOptions) -> Result<VerifyReport, nsk_core::Error> {
    let law = cfg.law()?;
    let es = cfg.end_states(&law)?;
    let checks = vec![
        relative_bounds(&law, es.v_plus),
        poincare(cfg.seed),
        taylor_scaling(&law),
        diffusion_scaling(&law, es.v_plus, es.u_plus, &DIFFUSION_DELTAS),
        g1_kernel(&law, &es, opts.flip_c_star),
        weight_bounds(&law, &es),
    ];
    let failing: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    Ok(VerifyReport { version: crate::io::version_string(), passed: failing.is_empty(), failing, checks })
}
