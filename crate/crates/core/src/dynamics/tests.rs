use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::gas::{EndStates, GasLaw};
use crate::profile::{solve_profile, ProfileOptions};
use crate::quadrature::trapezoid_uniform;
use crate::Error;

fn weak() -> ShockProfile {
    let law = GasLaw::new(5.0 / 3.0).unwrap();
    let es = EndStates::from_strength(&law, 0.7, 0.0, 0.1).unwrap();
    solve_profile(&law, &es, &ProfileOptions::default()).unwrap()
}

fn params(profile: &ShockProfile, grid: &Grid1D, frame: Frame) -> OperatorParams {
    OperatorParams { law: profile.law, dx: grid.dx, frame_speed: frame.speed(profile.end_states.sigma) }
}

#[test]
fn grid_validation() {
    assert!(Grid1D::new(-1.0, 1.0, 63).is_err());
    assert!(Grid1D::new(0.0, 1.0, 64).is_err());
    assert!(Grid1D::new(-1.0, -0.5, 64).is_err());
    let g = Grid1D::new(-2.0, 2.0, 64).unwrap();
    assert_eq!(g.nodes(), 65);
    assert!((g.x(64) - 2.0).abs() < 1e-15);
    assert!((g.dx - 1.0 / 16.0).abs() < 1e-15);
}

#[test]
fn constant_state_is_steady() {
    let law = GasLaw::new(5.0 / 3.0).unwrap();
    let grid = Grid1D::new(-10.0, 10.0, 100).unwrap();
    let n = grid.nodes();
    let (v, u, w) = (vec![0.7; n], vec![-0.3; n], vec![0.0; n]);
    let p = OperatorParams { law, dx: grid.dx, frame_speed: 2.0 };
    let (mut a, mut b, mut c) = (vec![1.0; n], vec![1.0; n], vec![1.0; n]);
    spatial_operator(&p, &v, &u, &w, &mut a, &mut b, &mut c);
    assert!(a.iter().chain(&b).chain(&c).all(|x| x.abs() < 1e-13));
}

#[test]
fn operator_sum_telescopes_to_boundary_flux() {
    let law = GasLaw::new(1.4).unwrap();
    let grid = Grid1D::new(-5.0, 7.0, 150).unwrap();
    let xs = grid.coordinates();
    let v: Vec<f64> = xs.iter().map(|x| 0.8 + 0.2 * libm::sin(0.7 * x)).collect();
    let u: Vec<f64> = xs.iter().map(|x| 0.1 * libm::cos(1.3 * x) + 0.05 * x).collect();
    let w: Vec<f64> = xs.iter().map(|x| 0.3 * libm::sin(0.4 * x + 1.0)).collect();
    let p = OperatorParams { law, dx: grid.dx, frame_speed: 1.7 };
    let n = grid.nodes();
    let (mut a, mut b, mut c) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    spatial_operator(&p, &v, &u, &w, &mut a, &mut b, &mut c);
    let flux = boundary_flux(&p, &v, &u, &w);
    for (out, f) in [(&a, flux[0]), (&b, flux[1]), (&c, flux[2])] {
        let s: f64 = out.iter().sum::<f64>() * grid.dx;
        assert!((s - f).abs() < 1e-11, "{s} vs {f}");
    }
}

#[test]
fn capillary_coupling_is_skew() {
    // With p constant and no viscosity contribution tested separately, the
    // (u, w) capillary pair alone must not change sum(u^2 + w^2) when both
    // vanish at the ends.
    let law = GasLaw::new(1.4).unwrap();
    let grid = Grid1D::new(-6.0, 6.0, 200).unwrap();
    let xs = grid.coordinates();
    let bump = |x: f64, k: f64| libm::exp(-x * x) * libm::sin(k * x);
    let v: Vec<f64> = xs.iter().map(|x| 1.0 + 0.1 * libm::exp(-x * x)).collect();
    let u: Vec<f64> = xs.iter().map(|&x| bump(x, 1.0)).collect();
    let w: Vec<f64> = xs.iter().map(|&x| bump(x, 2.0)).collect();
    let zero = vec![0.0; xs.len()];
    let p = OperatorParams { law, dx: grid.dx, frame_speed: 0.0 };
    let n = grid.nodes();
    let (mut a, mut b1, mut c1) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut b0, mut c0) = (vec![0.0; n], vec![0.0; n]);
    // Capillary part = full operator minus the operator with w = 0 (u-row) / u = 0 (w-row).
    spatial_operator(&p, &v, &u, &w, &mut a, &mut b1, &mut c1);
    spatial_operator(&p, &v, &u, &zero, &mut a, &mut b0, &mut c0);
    let mut c_u0 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    spatial_operator(&p, &v, &zero, &w, &mut a, &mut tmp, &mut c_u0);
    let mut s = 0.0;
    for i in 0..n {
        let cap_u = b1[i] - b0[i];
        let cap_w = c1[i] - c_u0[i];
        s += u[i] * cap_u + w[i] * cap_w;
    }
    assert!(s.abs() < 1e-10, "{s}");
}

#[test]
fn traveling_wave_residual_is_second_order() {
    let prof = weak();
    let resid = |dx: f64| {
        let grid = Grid1D::symmetric(120.0, dx).unwrap();
        let s = profile_state(&prof, &grid, Frame::Moving, 0.0, 0.0);
        let p = params(&prof, &grid, Frame::Moving);
        let n = grid.nodes();
        let (mut a, mut b, mut c) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        spatial_operator(&p, &s.v, &s.u, &s.w, &mut a, &mut b, &mut c);
        a.iter().chain(&b).chain(&c).fold(0.0f64, |m, x| m.max(x.abs()))
    };
    let (r1, r2) = (resid(0.8), resid(0.4));
    let order = libm::log2(r1 / r2);
    assert!(order > 1.8, "order {order} ({r1:e}, {r2:e})");
}

#[test]
fn shift_rate_vanishes_on_the_wave() {
    let prof = weak();
    let grid = Grid1D::symmetric(120.0, 0.4).unwrap();
    let s = profile_state(&prof, &grid, Frame::Moving, 0.0, 0.0);
    let wc = crate::WaveConstants::unchecked(&prof.law, &prof.end_states);
    let mut integ = Integrator::new(&prof, grid, Frame::Moving, vec![0.0; grid.nodes()], wc.m_shift);
    assert!(integ.shift_rate_of(&s).abs() < 1e-14);
    // A u-perturbation localised at the shock drives a nonzero rate.
    let mut s2 = s.clone();
    for (i, u) in s2.u.iter_mut().enumerate() {
        let x = grid.x(i);
        *u += 1e-3 * libm::exp(-x * x / 100.0);
    }
    assert!(integ.shift_rate_of(&s2).abs() > 1e-6);
}

#[test]
fn init_state_contracts() {
    let prof = weak();
    let grid = Grid1D::symmetric(150.0, 0.5).unwrap();
    let floor = prof.end_states.v_minus / 3.0;
    let zero = init_state(&prof, &grid, Frame::Moving, &Perturbation::zero(), floor).unwrap();
    let exact = profile_state(&prof, &grid, Frame::Moving, 0.0, 0.0);
    assert_eq!(zero.v, exact.v);
    assert_eq!(zero.u, exact.u);
    assert_eq!(zero.shift, 0.0);
    assert!(w_consistency(&zero, &grid) <= 1e-10);

    let bump = Perturbation { amplitude_u: 0.01, amplitude_v: 0.005, width: 20.0, ..Perturbation::default() };
    let s = init_state(&prof, &grid, Frame::Moving, &bump, floor).unwrap();
    assert!(w_consistency(&s, &grid) <= 1e-10);
    let peak = s.u.iter().zip(&exact.u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!((peak - 0.01).abs() < 1e-5, "{peak}");

    let incons = Perturbation { w_init: WInit::Inconsistent, amplitude_w: 0.01, ..bump };
    let s = init_state(&prof, &grid, Frame::Moving, &incons, floor).unwrap();
    assert!(w_consistency(&s, &grid) > 1e-3);

    let deep = Perturbation { amplitude_v: -0.5, width: 20.0, ..Perturbation::default() };
    assert!(init_state(&prof, &grid, Frame::Moving, &deep, floor).is_err());

    let coarse = Grid1D::symmetric(150.0, 5.0).unwrap();
    assert!(init_state(&prof, &coarse, Frame::Moving, &Perturbation::zero(), floor).is_err());
}

#[test]
fn perturbation_shapes() {
    let grid = Grid1D::symmetric(100.0, 0.05).unwrap();
    let xs = grid.coordinates();
    for kind in [PerturbationKind::GaussianBump, PerturbationKind::CompactBump, PerturbationKind::RandomSmooth] {
        let p = Perturbation { kind, width: 10.0, center: 3.0, seed: 7, ..Perturbation::default() };
        let f = p.shape(&xs);
        let peak = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!((peak - 1.0).abs() < 1e-3, "{kind:?}: {peak}");
        let zm = Perturbation { zero_mass: true, ..p };
        let g = zm.shape(&xs);
        let mass = trapezoid_uniform(&g, grid.dx);
        let abs_mass = trapezoid_uniform(&g.iter().map(|x| x.abs()).collect::<Vec<_>>(), grid.dx);
        assert!(mass.abs() < 1e-6 * abs_mass, "{kind:?}: {mass}");
    }
    // Gaussian width is the full width at half maximum.
    let p = Perturbation { width: 10.0, ..Perturbation::default() };
    let f = p.shape(&[-5.0, 0.0, 5.0]);
    assert!((f[0] - 0.5).abs() < 1e-12 && (f[2] - 0.5).abs() < 1e-12);
    // Seeded randomness is reproducible and seed-dependent.
    let r = |seed| Perturbation { kind: PerturbationKind::RandomSmooth, width: 10.0, seed, ..Perturbation::default() }.shape(&xs);
    assert_eq!(r(1), r(1));
    assert_ne!(r(1), r(2));
}

#[test]
fn sponge_ramp() {
    let grid = Grid1D::new(-50.0, 50.0, 100).unwrap();
    let k = Sponge { fraction: 0.1, rate: 0.3 }.profile(&grid);
    assert!((k[0] - 0.3).abs() < 1e-15 && (k[100] - 0.3).abs() < 1e-15);
    assert!(k[10..=90].iter().all(|&x| x == 0.0));
    assert!(k[1] < k[0] && k[1] > k[5]);
    assert!(Sponge::none().profile(&grid).iter().all(|&x| x == 0.0));
}

fn short_run(scheme: Scheme, dx: f64, dt: Option<f64>) -> RunResult {
    let prof = weak();
    let grid = Grid1D::symmetric(150.0, dx).unwrap();
    let pert = Perturbation { amplitude_u: 0.01, width: 20.0, ..Perturbation::default() };
    let s = init_state(&prof, &grid, Frame::Moving, &pert, 0.1).unwrap();
    let mut cfg = EvolveConfig::new(grid, 5.0, 1.0);
    cfg.scheme = scheme;
    cfg.dt_override = dt;
    evolve(&prof, s, &cfg)
}

#[test]
fn imex_agrees_with_rk4() {
    let a = short_run(Scheme::Rk4, 0.5, None);
    let b = short_run(Scheme::Imex, 0.5, Some(0.02));
    let c = short_run(Scheme::Imex, 0.5, Some(0.01));
    assert!(a.completed() && b.completed() && c.completed());
    let diff = |x: &RunResult| {
        x.final_state.u.iter().zip(&a.final_state.u).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
    };
    let (e1, e2) = (diff(&b), diff(&c));
    assert!(e2 < 1e-5, "{e2:e}");
    // Halving dt reduces the gap at second order.
    assert!(e1 / e2 > 3.0, "{e1:e} {e2:e}");
}

#[test]
fn records_and_mass_bookkeeping() {
    let r = short_run(Scheme::Rk4, 0.5, None);
    assert_eq!(r.records.len(), 6);
    for (k, rec) in r.records.iter().enumerate() {
        assert!((rec.t - k as f64).abs() < 1e-12);
        assert!(rec.mass_residual_v < 1e-10 && rec.mass_residual_u < 1e-10, "{rec:?}");
        assert!(rec.functionals().iter().all(|&x| x >= 0.0 && x.is_finite()));
    }
    let i = short_run(Scheme::Imex, 0.5, Some(0.02));
    assert!(i.records.iter().all(|rec| rec.mass_residual_v < 1e-10 && rec.mass_residual_u < 1e-10));
}

#[test]
fn evolve_is_deterministic() {
    let a = short_run(Scheme::Rk4, 0.5, None);
    let b = short_run(Scheme::Rk4, 0.5, None);
    assert_eq!(a.records, b.records);
    assert_eq!(a.final_state, b.final_state);
}

#[test]
fn blow_up_is_labelled() {
    let prof = weak();
    let grid = Grid1D::symmetric(150.0, 0.5).unwrap();
    let s = init_state(&prof, &grid, Frame::Moving, &Perturbation::zero(), 0.1).unwrap();
    let mut cfg = EvolveConfig::new(grid, 5.0, 1.0);
    cfg.v_floor = Some(s.v_min() + 1e-3);
    let r = evolve(&prof, s, &cfg);
    assert!(matches!(r.abort, Some(Error::BlowUp { .. })), "{:?}", r.abort);
    assert!(!r.records.is_empty());
}

#[test]
fn oversized_steps_abort() {
    let prof = weak();
    let grid = Grid1D::symmetric(150.0, 0.25).unwrap();
    let pert = Perturbation { amplitude_u: 0.01, width: 20.0, ..Perturbation::default() };
    let s = init_state(&prof, &grid, Frame::Moving, &pert, 0.1).unwrap();
    let mut cfg = EvolveConfig::new(grid, 20.0, 1.0);
    cfg.cfl = 4.0;
    let r = evolve(&prof, s, &cfg);
    assert!(matches!(r.abort, Some(Error::Unstable { .. }) | Some(Error::BlowUp { .. })), "{:?}", r.abort);
}

#[test]
fn lab_frame_matches_moving_frame() {
    let prof = weak();
    let sigma = prof.end_states.sigma;
    let t_final = 4.0;
    let run = |frame: Frame| {
        let grid = Grid1D::symmetric(150.0, 0.5).unwrap();
        let pert = Perturbation { amplitude_u: 0.01, width: 20.0, ..Perturbation::default() };
        let s = init_state(&prof, &grid, frame, &pert, 0.1).unwrap();
        let mut cfg = EvolveConfig::new(grid, t_final, 1.0);
        cfg.frame = frame;
        evolve(&prof, s, &cfg)
    };
    let m = run(Frame::Moving);
    let l = run(Frame::Lab);
    // Same shift history up to discretization error.
    let xm = m.records.last().unwrap().x_shift;
    let xl = l.records.last().unwrap().x_shift;
    assert!((xm - xl).abs() < 1e-3 * xm.abs().max(1e-3), "{xm} {xl}");
    // Lab-frame wave has moved by sigma t.
    let lab = &l.final_state;
    let grid = Grid1D::symmetric(150.0, 0.5).unwrap();
    let mid = prof.end_states.v_mid();
    let i = (0..lab.v.len() - 1).find(|&i| lab.v[i] < mid && lab.v[i + 1] >= mid).unwrap();
    assert!((grid.x(i) - sigma * t_final).abs() < 2.0);
}
