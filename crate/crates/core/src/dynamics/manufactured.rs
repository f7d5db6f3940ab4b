//! Manufactured-solution test of [`spatial_operator`].

use alloc::vec;
use alloc::vec::Vec;

use super::{spatial_operator, Grid1D, OperatorParams};
use crate::gas::GasLaw;
use crate::math::{ceil, cos, powf, sin};

const SPEED: f64 = 0.5;

/// Smooth fields with their derivatives: `[value, x, xx, t]` for `v`, `u`, `w`.
fn fields(x: f64, t: f64) -> [[f64; 4]; 3] {
    let (sa, ca) = (sin(0.5 * x + t), cos(0.5 * x + t));
    let (sb, cb) = (sin(0.4 * x - 0.5 * t), cos(0.4 * x - 0.5 * t));
    let (sc, cc) = (sin(0.3 * x + 0.7 * t), cos(0.3 * x + 0.7 * t));
    [
        [1.0 + 0.2 * sa, 0.1 * ca, -0.05 * sa, 0.2 * ca],
        [0.3 * cb, -0.12 * sb, -0.048 * cb, 0.15 * sb],
        [0.2 * sc, 0.06 * cc, -0.018 * sc, 0.14 * cc],
    ]
}

/// `U_t - F(U)` for the continuous operator.
fn source(law: &GasLaw, x: f64, t: f64) -> [f64; 3] {
    let [v, u, w] = fields(x, t);
    let b = powf(v[0], -2.5);
    let bx = -2.5 * powf(v[0], -3.5) * v[1];
    let fv = SPEED * v[1] + u[1];
    let fu = SPEED * u[1] - law.dp(v[0]) * v[1] + u[2] / v[0] - u[1] * v[1] / (v[0] * v[0]) + b * w[2] + bx * w[1];
    let fw = SPEED * w[1] - (b * u[2] + bx * u[1]);
    [v[3] - fv, u[3] - fu, w[3] - fw]
}

type Fields = [Vec<f64>; 3];

/// Max-norm error at `t = 1` of RK4 on the forced semi-discrete system with
/// `n` cells on `[-8, 8]`, exact Dirichlet data and `dt = 0.05 dx^2`.
///
/// Time error is far below the spatial error, so the observed order over a
/// refinement sequence is the spatial order.
pub fn manufactured_solution_error(n: usize) -> f64 {
    let law = GasLaw::new(1.4).expect("valid gamma");
    let grid = Grid1D::new(-8.0, 8.0, n).expect("valid grid");
    let params = OperatorParams { law, dx: grid.dx, frame_speed: SPEED };
    let m = grid.nodes();
    let xs = grid.coordinates();
    let exact = |t: f64| -> Fields {
        let mut s = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
        for (i, &x) in xs.iter().enumerate() {
            let f = fields(x, t);
            for k in 0..3 {
                s[k][i] = f[k][0];
            }
        }
        s
    };
    let rhs = |t: f64, s: &Fields| -> Fields {
        let mut out = [vec![0.0; m], vec![0.0; m], vec![0.0; m]];
        let [o0, o1, o2] = &mut out;
        spatial_operator(&params, &s[0], &s[1], &s[2], o0, o1, o2);
        for i in 1..m - 1 {
            let src = source(&law, xs[i], t);
            for k in 0..3 {
                out[k][i] += src[k];
            }
        }
        out
    };
    let set_ends = |y: &mut Fields, t: f64| {
        for (k, f) in y.iter_mut().enumerate() {
            f[0] = fields(xs[0], t)[k][0];
            f[m - 1] = fields(xs[m - 1], t)[k][0];
        }
    };
    let stage = |base: &Fields, k: &Fields, c: f64, t: f64| -> Fields {
        let mut y = base.clone();
        for f in 0..3 {
            for i in 1..m - 1 {
                y[f][i] += c * k[f][i];
            }
        }
        set_ends(&mut y, t);
        y
    };

    let t_end = 1.0;
    let steps = ceil(t_end / (0.05 * grid.dx * grid.dx)) as usize;
    let dt = t_end / steps as f64;
    let mut s = exact(0.0);
    let mut t = 0.0;
    for _ in 0..steps {
        let k1 = rhs(t, &s);
        let k2 = rhs(t + 0.5 * dt, &stage(&s, &k1, 0.5 * dt, t + 0.5 * dt));
        let k3 = rhs(t + 0.5 * dt, &stage(&s, &k2, 0.5 * dt, t + 0.5 * dt));
        let k4 = rhs(t + dt, &stage(&s, &k3, dt, t + dt));
        for f in 0..3 {
            for i in 1..m - 1 {
                s[f][i] += dt / 6.0 * (k1[f][i] + 2.0 * k2[f][i] + 2.0 * k3[f][i] + k4[f][i]);
            }
        }
        t += dt;
        set_ends(&mut s, t);
    }
    let e = exact(t_end);
    let mut worst: f64 = 0.0;
    for f in 0..3 {
        for i in 0..m {
            worst = worst.max((s[f][i] - e[f][i]).abs());
        }
    }
    worst
}
