//! Convergence and conservation checks of the semi-discrete scheme.

use nsk_core::dynamics::{
    evolve, init_state, manufactured_solution_error, w_consistency, EvolveConfig, Frame, Grid1D, Perturbation, RunResult,
    Scheme,
};
use nsk_core::gas::{EndStates, GasLaw};
use nsk_core::profile::solve_profile;
use nsk_core::{ProfileOptions, ShockProfile};

#[test]
fn manufactured_solution_spatial_order() {
    let e: Vec<f64> = [64, 128, 256].iter().map(|&n| manufactured_solution_error(n)).collect();
    let o1 = (e[0] / e[1]).log2();
    let o2 = (e[1] / e[2]).log2();
    assert!(o1 >= 1.8 && o2 >= 1.8, "errors {e:?}, orders {o1:.3} {o2:.3}");
}

fn profile(delta_s: f64) -> ShockProfile {
    let law = GasLaw::new(5.0 / 3.0).unwrap();
    let es = EndStates::from_strength(&law, 0.7, 0.0, delta_s).unwrap();
    solve_profile(&law, &es, &ProfileOptions::default()).unwrap()
}

fn bump_run(prof: &ShockProfile, dx: f64, t_final: f64, dt: Option<f64>) -> RunResult {
    let grid = Grid1D::symmetric(150.0, dx).unwrap();
    let pert = Perturbation { amplitude_u: 0.01, amplitude_v: 0.004, width: 20.0, ..Perturbation::default() };
    let s = init_state(prof, &grid, Frame::Moving, &pert, 0.1).unwrap();
    let mut cfg = EvolveConfig::new(grid, t_final, t_final);
    cfg.dt_override = dt;
    let r = evolve(prof, s, &cfg);
    assert!(r.completed(), "{:?}", r.abort);
    r
}

#[test]
fn rk4_temporal_order() {
    let prof = profile(0.1);
    let reference = bump_run(&prof, 1.0, 2.0, Some(0.0025));
    let err = |dt: f64| {
        let r = bump_run(&prof, 1.0, 2.0, Some(dt));
        let a = &r.final_state;
        let b = &reference.final_state;
        let fields = a.v.iter().zip(&b.v).chain(a.u.iter().zip(&b.u)).chain(a.w.iter().zip(&b.w));
        fields.map(|(p, q)| (p - q).abs()).fold((a.shift - b.shift).abs(), f64::max)
    };
    let e: Vec<f64> = [0.08, 0.04, 0.02].iter().map(|&dt| err(dt)).collect();
    let o1 = (e[0] / e[1]).log2();
    let o2 = (e[1] / e[2]).log2();
    assert!(o1 >= 3.8 && o2 >= 3.8, "errors {e:?}, orders {o1:.3} {o2:.3}");
}

#[test]
fn bump_run_spatial_self_convergence() {
    // Richardson comparison of the perturbation at (n, 2n, 4n) points.
    let prof = profile(0.1);
    let runs: Vec<RunResult> = [1.0, 0.5, 0.25].iter().map(|&dx| bump_run(&prof, dx, 5.0, None)).collect();
    let diff = |c: &RunResult, f: &RunResult| {
        let (a, b) = (&c.final_state, &f.final_state);
        let mut worst: f64 = 0.0;
        for i in 0..a.v.len() {
            let j = 2 * i;
            worst = worst.max((a.v[i] - b.v[j]).abs()).max((a.u[i] - b.u[j]).abs());
        }
        worst
    };
    let d1 = diff(&runs[0], &runs[1]);
    let d2 = diff(&runs[1], &runs[2]);
    let order = (d1 / d2).log2();
    assert!(order >= 1.8, "{d1:e} {d2:e} order {order:.3}");
}

#[test]
fn w_constraint_drift_converges() {
    let prof = profile(0.1);
    let drift = |dx: f64| {
        let r = bump_run(&prof, dx, 5.0, None);
        let grid = Grid1D::symmetric(150.0, dx).unwrap();
        assert!(r.records[0].w_consistency <= 1e-10);
        w_consistency(&r.final_state, &grid)
    };
    let (a, b, c) = (drift(1.0), drift(0.5), drift(0.25));
    let o1 = (a / b).log2();
    let o2 = (b / c).log2();
    assert!(o1 >= 1.8 && o2 >= 1.8, "{a:e} {b:e} {c:e}");
}

#[test]
fn discrete_conservation_both_schemes() {
    let prof = profile(0.1);
    for scheme in [Scheme::Rk4, Scheme::Imex] {
        let grid = Grid1D::symmetric(150.0, 0.5).unwrap();
        let pert = Perturbation { amplitude_u: 0.01, width: 20.0, ..Perturbation::default() };
        let s = init_state(&prof, &grid, Frame::Moving, &pert, 0.1).unwrap();
        let mut cfg = EvolveConfig::new(grid, 20.0, 2.0);
        cfg.scheme = scheme;
        cfg.sponge = nsk_core::dynamics::Sponge { fraction: 0.1, rate: 0.1 };
        let r = evolve(&prof, s, &cfg);
        assert!(r.completed());
        for rec in &r.records {
            let per_time = rec.mass_residual_v.max(rec.mass_residual_u) / rec.t.max(1.0);
            assert!(per_time <= 1e-8, "{scheme:?} t={} {per_time:e}", rec.t);
        }
    }
}

#[test]
fn zero_perturbation_tracks_the_wave() {
    let prof = profile(0.1);
    let grid = Grid1D::symmetric(150.0, 0.5).unwrap();
    let s = init_state(&prof, &grid, Frame::Moving, &Perturbation::zero(), 0.1).unwrap();
    let cfg = EvolveConfig::new(grid, 10.0 / prof.end_states.delta_s, 10.0);
    let r = evolve(&prof, s, &cfg);
    assert!(r.completed());
    for rec in &r.records {
        assert!(rec.sup_perturbation <= 1e-5, "t={} {}", rec.t, rec.sup_perturbation);
        assert!(rec.x_shift.abs() <= 1e-4);
    }
}
