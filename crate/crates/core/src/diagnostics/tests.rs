use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dynamics::profile_state;
use crate::gas::WaveConstants;
use crate::profile::{solve_profile, ProfileOptions};

fn setup() -> (ShockProfile, Grid1D) {
    let law = GasLaw::new(5.0 / 3.0).unwrap();
    let es = EndStates::from_strength(&law, 0.7, 0.0, 0.1).unwrap();
    let prof = solve_profile(&law, &es, &ProfileOptions::default()).unwrap();
    (prof, Grid1D::symmetric(150.0, 0.5).unwrap())
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

#[test]
fn weight_limits() {
    let (prof, _) = setup();
    let es = prof.end_states;
    let sd = sqrt(es.delta_s);
    let (a, ax) = weight_eval(&prof, -1e4, 0.0, 0.0);
    assert!((a - 1.0).abs() < 1e-14 && ax == 0.0);
    let (a, _) = weight_eval(&prof, 1e4, 0.0, 0.0);
    assert!((a - 1.0 - sd).abs() < 1e-14);
    let mid = prof.crossing(es.v_mid()).unwrap();
    let (a, ax) = weight_eval(&prof, mid, 0.0, 0.0);
    assert!((a - 1.0 - 0.5 * sd).abs() < 1e-12);
    assert!(ax > 0.0);
    // Shift and time enter only through x - sigma t - shift.
    let (b, bx) = weight_eval(&prof, mid + 3.0 + 2.0 * es.sigma, 3.0, 2.0);
    assert!((a - b).abs() < 1e-12 && (ax - bx).abs() < 1e-12);
}

#[test]
fn weight_field_bounds() {
    let (prof, grid) = setup();
    let wf = WeightField::new(&prof, &grid, Frame::Moving, 0.0, 1.5);
    assert!(wf.within_bounds(1e-12));
    assert!(1.0 + sqrt(wf.delta_s) < 1.5);
    let top = wf.a_x.iter().cloned().fold(0.0, f64::max);
    assert!(wf.a_x.iter().all(|&x| x >= -1e-10 * top));
    assert!(wf.a.windows(2).all(|p| p[1] >= p[0] - 1e-12));
}

#[test]
fn zero_perturbation_gives_zero_terms() {
    let (prof, grid) = setup();
    let s = profile_state(&prof, &grid, Frame::Moving, 0.0, 0.7);
    let wc = WaveConstants::new(&prof.law, &prof.end_states).unwrap();
    let r = good_terms(&s, &grid, &prof, Frame::Moving, wc.c_star);
    assert!(r.functionals().iter().all(|&x| x == 0.0), "{r:?}");
    assert_eq!(r.x_shift, 0.7);
}

#[test]
fn u_only_perturbation_entropy() {
    let (prof, grid) = setup();
    let mut s = profile_state(&prof, &grid, Frame::Moving, 0.0, 0.0);
    let eps: Vec<f64> = (0..grid.nodes()).map(|i| 0.01 * libm::exp(-(grid.x(i) / 30.0).powi(2))).collect();
    for (u, e) in s.u.iter_mut().zip(&eps) {
        *u += e;
    }
    let mut r = Reference::default();
    reference_fields(&prof, &grid, Frame::Moving, 0.0, 0.0, &mut r);
    let (eta, total) = relative_entropy_field(&prof.law, &s, &r, grid.dx);
    assert!(eta.iter().all(|&x| x >= 0.0));
    let expect = 0.5 * crate::quadrature::trapezoid_uniform(&(0..eps.len()).map(|i| r.a[i] * eps[i] * eps[i]).collect::<Vec<_>>(), grid.dx);
    assert!((total - expect).abs() < 1e-15 * expect.max(1.0), "{total} {expect}");
}

#[test]
fn g1_kernel() {
    let (prof, grid) = setup();
    let law = prof.law;
    let wc = WaveConstants::new(&law, &prof.end_states).unwrap();
    let mut s = profile_state(&prof, &grid, Frame::Moving, 0.0, 0.0);
    for i in 0..grid.nodes() {
        let x = grid.x(i);
        let vt = s.v[i];
        s.v[i] += 0.004 * libm::exp(-(x / 20.0).powi(2));
        s.u[i] += 2.0 * wc.c_star * (law.p(s.v[i]) - law.p(vt));
    }
    let r = good_terms(&s, &grid, &prof, Frame::Moving, wc.c_star);
    assert!(r.g1 < 1e-25, "{}", r.g1);
    assert!(r.gs > 1e-10, "{}", r.gs);
    // A flipped C_* breaks the kernel.
    let bad = good_terms(&s, &grid, &prof, Frame::Moving, -wc.c_star);
    assert!(bad.g1 > 1e6 * r.g1.max(1e-30));
}

#[test]
fn functionals_nonnegative_and_norm_equivalent() {
    let (prof, grid) = setup();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ratios = Vec::new();
    for _ in 0..20 {
        let mut s = profile_state(&prof, &grid, Frame::Moving, 0.0, 0.0);
        let (c, w) = (100.0 * (uniform(&mut rng) - 0.5), 5.0 + 30.0 * uniform(&mut rng));
        let amps = [0.02 * (uniform(&mut rng) - 0.5), 0.02 * (uniform(&mut rng) - 0.5), 0.02 * (uniform(&mut rng) - 0.5)];
        for i in 0..grid.nodes() {
            let b = libm::exp(-((grid.x(i) - c) / w).powi(2));
            s.v[i] += amps[0] * b;
            s.u[i] += amps[1] * b;
            s.w[i] += amps[2] * b;
        }
        s.shift = 3.0 * (uniform(&mut rng) - 0.5);
        let r = good_terms(&s, &grid, &prof, Frame::Moving, 0.05);
        assert!(r.functionals().iter().all(|&x| x >= 0.0 && x.is_finite()));
        ratios.push(r.rel_entropy_weighted / r.perturbation_l2_sq);
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(lo > 0.1 && hi < 10.0, "[{lo}, {hi}]");
}

#[test]
fn poincare_cases() {
    let n = 1001;
    let ys: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let (l, r) = poincare_check(&vec![2.5; n]);
    assert!(l.abs() < 1e-28 && r.abs() < 1e-28);
    let (l, r) = poincare_check(&ys);
    assert!((l - 1.0 / 12.0).abs() < 1e-10 && (r - 1.0 / 12.0).abs() < 1e-10, "{l} {r}");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let deg = (rng.next_u64() % 9) as usize;
        let c: Vec<f64> = (0..=deg).map(|_| 2.0 * uniform(&mut rng) - 1.0).collect();
        let f: Vec<f64> = ys.iter().map(|&y| c.iter().rev().fold(0.0, |acc, &k| acc * y + k)).collect();
        let df: Vec<f64> = ys
            .iter()
            .map(|&y| c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &ck)| acc * y + k as f64 * ck))
            .collect();
        let (l, r) = poincare_check_with_derivative(&f, &df);
        assert!(l <= r * (1.0 + 1e-9) + 1e-15, "deg {deg}: {l} > {r}");
    }
}

fn series(values: &[f64]) -> Vec<DiagnosticsRecord> {
    values
        .iter()
        .enumerate()
        .map(|(k, &e)| DiagnosticsRecord {
            t: k as f64,
            x_shift: libm::sqrt(k as f64),
            x_dot: e,
            rel_entropy_weighted: e,
            sup_perturbation: e,
            g: e,
            ..DiagnosticsRecord::default()
        })
        .collect()
}

#[test]
fn decay_report_detects_direction() {
    assert!(matches!(decay_report(&series(&[1.0; 9])), Err(Error::TooShort { needed: 10, got: 9 })));
    let vals: Vec<f64> = (0..100).map(|k| libm::exp(-0.05 * k as f64)).collect();
    let d = decay_report(&series(&vals)).unwrap();
    assert_eq!(d.entropy_decrease_fraction, 1.0);
    assert!(d.sup_ratio.unwrap() < 0.01);
    assert!(d.sublinear && d.x_slope_last < d.x_slope_first);
    let rev: Vec<f64> = vals.iter().rev().cloned().collect();
    let r = decay_report(&series(&rev)).unwrap();
    assert!(r.entropy_decrease_fraction < 0.5);

    let zero = decay_report(&series(&[0.0; 20])).unwrap();
    assert!(zero.identically_small);
    assert!(zero.sup_ratio.is_none() && zero.g_ratio.is_none() && zero.xdot_final_over_max.is_none());
}
