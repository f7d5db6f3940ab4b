//! Profile solvers: slow-manifold guess, collocation refinement, shooting.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{ProfileMethod, ProfileOde, ProfileOptions, ShockProfile};
use crate::banded::BandedMatrix;
use crate::gas::{EndStates, GasLaw};
use crate::math::{ceil, exp, ln, sqrt, tanh};
use crate::ode::{dopri5, DenseStep, Dopri5Options, Stop};
use crate::{Error, Result};

/// Leading-order profile from the reduced flow on the slow manifold.
///
/// Dropping the correction term leaves the logistic equation
/// `x' = k x (delta - x)`, `x = v - v_-`, `k = v_- p''(v_-) / (2 sigma)`,
/// whose solution centred at `xi = 0` is returned as `(v, v')`.
pub fn slow_manifold_guess(law: &GasLaw, es: &EndStates, xi: f64) -> (f64, f64) {
    let d = es.v_plus - es.v_minus;
    let k = es.v_minus * law.ddp(es.v_minus) / (2.0 * es.sigma);
    let th = tanh(0.5 * k * d * xi);
    let v = es.v_minus + 0.5 * d * (1.0 + th);
    let dv = 0.25 * k * d * d * (1.0 - th * th);
    (v, dv)
}

/// Slowest decay rates of `|v - v_-|` (left) and `|v - v_+|` (right).
pub(crate) fn tail_rates(ode: &ProfileOde, es: &EndStates) -> (f64, f64) {
    let left = ode.eigen(es.v_minus)[0].0;
    let [(a, im), (b, _)] = ode.eigen(es.v_plus);
    let right = if im == 0.0 { a.max(b).abs() } else { a.abs() };
    (left, right)
}

/// Half the largest automatically chosen grid.
const MAX_AUTO_HALF_POINTS: usize = 200_000;

struct Plan {
    half_length: f64,
    m: usize,
    tail_tol: f64,
}

fn plan(law: &GasLaw, es: &EndStates, opts: &ProfileOptions) -> Result<Plan> {
    let ode = ProfileOde::new(law, es);
    let (left, right) = tail_rates(&ode, es);
    if !(left > 0.0 && right > 0.0) {
        return Err(Error::Inadmissible {
            reason: format!("end states are not a saddle/sink pair (rates {left}, {right})"),
        });
    }
    let dv = es.v_plus - es.v_minus;
    let tail_tol = opts.tail_tol.unwrap_or(1e-8 * es.delta_s);
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tail_tol", reason: format!("must be positive, got {tail_tol}") });
    }
    let decades = ln((dv / tail_tol).max(1.0)) + 2.0;
    let half_length = opts.half_length.unwrap_or((decades / left).max(decades / right));
    if !(half_length > 0.0 && half_length.is_finite()) {
        return Err(Error::InvalidParameter { name: "half_length", reason: format!("got {half_length}") });
    }
    let m = match opts.n_points {
        Some(n) if n >= 5 => n / 2,
        Some(n) => return Err(Error::TooShort { needed: 5, got: n }),
        None => {
            // Coarser for very weak shocks (long, slowly varying), finer for strong ones.
            let h = 0.25 * sqrt((0.01 / es.delta_s).max(1.0)) * (0.1 / es.delta_s).min(1.0);
            let m = ceil(half_length / h);
            if !(m <= MAX_AUTO_HALF_POINTS as f64) {
                return Err(Error::ProfileSolver {
                    reason: format!(
                        "default grid would need {:.3e} points on [-{half_length:.3e}, {half_length:.3e}]; set n_points explicitly",
                        2.0 * m + 1.0
                    ),
                    iterations: 0,
                    residual: f64::NAN,
                });
            }
            m as usize
        }
    };
    Ok(Plan { half_length, m, tail_tol })
}

fn grid(half_length: f64, m: usize) -> Vec<f64> {
    let h = half_length / m as f64;
    (0..=2 * m).map(|i| (i as f64 - m as f64) * h).collect()
}

pub(crate) fn solve(law: &GasLaw, es: &EndStates, opts: &ProfileOptions) -> Result<ShockProfile> {
    if !es.satisfies_entropy_condition() {
        return Err(Error::EntropyCondition { v_minus: es.v_minus, v_plus: es.v_plus });
    }
    let mut p = plan(law, es, opts)?;
    let auto_length = opts.half_length.is_none();
    let mut last_err = None;
    for _ in 0..5 {
        let xi = grid(p.half_length, p.m);
        let attempt = match opts.method {
            ProfileMethod::Shooting => shoot(law, es, &xi),
            ProfileMethod::Collocation => collocate_with_fallback(law, es, &xi, opts),
        };
        match attempt {
            Ok(prof) => {
                let (a, b) = prof.end_gaps();
                if (a <= p.tail_tol && b <= p.tail_tol) || !auto_length {
                    return Ok(prof);
                }
                last_err = Some(Error::ProfileSolver {
                    reason: format!("end states not attained within {:.3e} (gaps {a:.3e}, {b:.3e})", p.tail_tol),
                    iterations: prof.iterations,
                    residual: prof.residual,
                });
            }
            Err(e) => last_err = Some(e),
        }
        let grown = (p.m as f64 * 1.4) as usize;
        if !auto_length || (opts.n_points.is_none() && grown > MAX_AUTO_HALF_POINTS) {
            break;
        }
        p.half_length *= 1.4;
        p.m = grown;
    }
    Err(last_err.unwrap_or(Error::ProfileSolver { reason: "no attempt made".into(), iterations: 0, residual: f64::NAN }))
}

fn collocate_with_fallback(law: &GasLaw, es: &EndStates, xi: &[f64], opts: &ProfileOptions) -> Result<ShockProfile> {
    let n = xi.len();
    let mut z = vec![0.0; 2 * n];
    for (i, &x) in xi.iter().enumerate() {
        let (v, dv) = slow_manifold_guess(law, es, x);
        z[2 * i] = v;
        z[2 * i + 1] = dv;
    }
    match collocate(law, es, xi, z, opts) {
        Ok(p) => Ok(p),
        Err(first) => {
            // The reduced flow is only accurate for weak shocks; seed from shooting instead.
            let shot = shoot(law, es, xi).map_err(|_| first)?;
            let mut z = vec![0.0; 2 * n];
            for i in 0..n {
                z[2 * i] = shot.v[i];
                z[2 * i + 1] = shot.dv[i];
            }
            collocate(law, es, xi, z, opts)
        }
    }
}

/// Hermite–Simpson (three-stage Lobatto IIIA) collocation with Newton's method.
///
/// Unknowns are `(v_i, v'_i)` at every node. Rows: the unstable-eigenvector
/// condition at `-L`, the interval equations, and `v(0) = (v_- + v_+)/2`
/// placed between the intervals meeting at `xi = 0` so the matrix stays banded.
fn collocate(law: &GasLaw, es: &EndStates, xi: &[f64], mut z: Vec<f64>, opts: &ProfileOptions) -> Result<ShockProfile> {
    let ode = ProfileOde::new(law, es);
    let n = xi.len();
    let j0 = n / 2;
    let lam = ode.eigen(es.v_minus)[0].0;
    let mid = es.v_mid();
    let scale = es.v_plus - es.v_minus;
    let dim = 2 * n;

    let interval_row = |i: usize| if i < j0 { 1 + 2 * i } else { 2 + 2 * i };

    let residual = |z: &[f64], r: &mut [f64]| -> bool {
        if z.iter().step_by(2).any(|&v| !(v > 0.0 && v.is_finite())) {
            return false;
        }
        r[0] = z[1] - lam * (z[0] - es.v_minus);
        r[1 + 2 * j0] = z[2 * j0] - mid;
        for i in 0..n - 1 {
            let h = xi[i + 1] - xi[i];
            let (v0, s0, v1, s1) = (z[2 * i], z[2 * i + 1], z[2 * i + 2], z[2 * i + 3]);
            let (f0, f1) = (ode.rhs(v0, s0), ode.rhs(v1, s1));
            let vm = 0.5 * (v0 + v1) + h / 8.0 * (s0 - s1);
            let sm = 0.5 * (s0 + s1) + h / 8.0 * (f0 - f1);
            if !(vm > 0.0) {
                return false;
            }
            let fm = ode.rhs(vm, sm);
            let row = interval_row(i);
            r[row] = v1 - v0 - h / 6.0 * (s0 + 4.0 * sm + s1);
            r[row + 1] = s1 - s0 - h / 6.0 * (f0 + 4.0 * fm + f1);
        }
        true
    };

    let jacobian = |z: &[f64]| -> BandedMatrix {
        let mut a = BandedMatrix::zeros(dim, 3, 2);
        a.add(0, 0, -lam);
        a.add(0, 1, 1.0);
        a.add(1 + 2 * j0, 2 * j0, 1.0);
        for i in 0..n - 1 {
            let h = xi[i + 1] - xi[i];
            let (v0, s0, v1, s1) = (z[2 * i], z[2 * i + 1], z[2 * i + 2], z[2 * i + 3]);
            let (f0, f1) = (ode.rhs(v0, s0), ode.rhs(v1, s1));
            let vm = 0.5 * (v0 + v1) + h / 8.0 * (s0 - s1);
            let sm = 0.5 * (s0 + s1) + h / 8.0 * (f0 - f1);
            let j_0 = jac2(&ode, v0, s0);
            let j_1 = jac2(&ode, v1, s1);
            let j_m = jac2(&ode, vm, sm);
            // d y_m / d y_0 = I/2 + h/8 J_0,  d y_m / d y_1 = I/2 - h/8 J_1
            let dm0 = add2(scale2(ident2(), 0.5), scale2(j_0, h / 8.0));
            let dm1 = add2(scale2(ident2(), 0.5), scale2(j_1, -h / 8.0));
            let d0 = add2(scale2(ident2(), -1.0), scale2(add2(j_0, scale2(mul2(j_m, dm0), 4.0)), -h / 6.0));
            let d1 = add2(ident2(), scale2(add2(j_1, scale2(mul2(j_m, dm1), 4.0)), -h / 6.0));
            let row = interval_row(i);
            for a_ in 0..2 {
                for b in 0..2 {
                    a.add(row + a_, 2 * i + b, d0[a_][b]);
                    a.add(row + a_, 2 * i + 2 + b, d1[a_][b]);
                }
            }
        }
        a
    };

    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut r = vec![0.0; dim];
    if !residual(&z, &mut r) {
        return Err(Error::ProfileSolver { reason: "initial guess leaves the domain v > 0".into(), iterations: 0, residual: f64::NAN });
    }
    let mut rn = norm(&r);
    let tol = opts.newton_tol * scale;
    let mut prev_step = f64::INFINITY;
    let mut trial = vec![0.0; dim];
    let mut rt = vec![0.0; dim];
    for it in 1..=opts.max_newton {
        let lu = jacobian(&z).factor().map_err(|_| Error::ProfileSolver {
            reason: "singular collocation Jacobian".into(),
            iterations: it,
            residual: rn,
        })?;
        let mut dz = r.clone();
        lu.solve(&mut dz);
        let step = norm(&dz);
        if !step.is_finite() {
            break;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            for k in 0..dim {
                trial[k] = z[k] - lambda * dz[k];
            }
            if residual(&trial, &mut rt) {
                let rtn = norm(&rt);
                if rtn.is_finite() && (rtn < (1.0 - 0.25 * lambda) * rn || (lambda == 1.0 && step < 1e-6 * scale)) {
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::ProfileSolver { reason: "damped Newton stalled".into(), iterations: it, residual: rn });
        }
        core::mem::swap(&mut z, &mut trial);
        core::mem::swap(&mut r, &mut rt);
        rn = norm(&r);
        let done = lambda == 1.0 && (step <= tol || (step <= 1e3 * tol && step > 0.25 * prev_step));
        prev_step = step;
        if done {
            let v: Vec<f64> = z.iter().step_by(2).copied().collect();
            let s: Vec<f64> = z.iter().skip(1).step_by(2).copied().collect();
            let mut prof = ShockProfile::from_samples(*law, *es, xi.to_vec(), v, s, ProfileMethod::Collocation)?;
            prof.iterations = it;
            return Ok(prof);
        }
    }
    Err(Error::ProfileSolver { reason: "Newton did not converge".into(), iterations: opts.max_newton, residual: rn })
}

type M2 = [[f64; 2]; 2];

fn jac2(ode: &ProfileOde, v: f64, s: f64) -> M2 {
    let (fv, fs) = ode.jac(v, s);
    [[0.0, 1.0], [fv, fs]]
}

fn ident2() -> M2 {
    [[1.0, 0.0], [0.0, 1.0]]
}

fn add2(a: M2, b: M2) -> M2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

fn scale2(a: M2, c: f64) -> M2 {
    [[c * a[0][0], c * a[0][1]], [c * a[1][0], c * a[1][1]]]
}

fn mul2(a: M2, b: M2) -> M2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// Integrates along the unstable manifold of `(v_-, 0)` and samples on `xi`.
///
/// The manifold is seeded on its linearization at distance `1e-9 (v_+ - v_-)`;
/// `xi = 0` is placed where `v` first reaches the midpoint value.
pub(crate) fn shoot(law: &GasLaw, es: &EndStates, xi: &[f64]) -> Result<ShockProfile> {
    let ode = ProfileOde::new(law, es);
    let lam = ode.eigen(es.v_minus)[0].0;
    let d = es.v_plus - es.v_minus;
    let eps = 1e-9 * d;
    let mid = es.v_mid();
    let half = xi[xi.len() - 1].max(-xi[0]);
    let mut f = |_t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = if y[0] > 0.0 { ode.rhs(y[0], y[1]) } else { f64::NAN };
    };
    let mut y = [es.v_minus + eps, lam * eps];
    let opts = Dopri5Options { rtol: 1e-12, atol: 1e-16, h_init: 1e-2, h_max: 0.5, max_steps: 5_000_000 };
    let mut steps: Vec<DenseStep> = Vec::new();
    let mut cross: Option<f64> = None;
    let mut escaped = false;
    let t_max = 50.0 * half + 1e3 / lam;
    let (_, stop) = dopri5(&mut f, 0.0, t_max, &mut y, &opts, |st, y| {
        if cross.is_none() && y[0] >= mid {
            let mut a = st.t0;
            let mut b = st.t1();
            let mut out = [0.0; 2];
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                st.eval(m, &mut out);
                if out[0] < mid {
                    a = m;
                } else {
                    b = m;
                }
            }
            cross = Some(0.5 * (a + b));
        }
        if !(y[0] > 0.2 * es.v_minus && y[0] < 5.0 * es.v_plus) {
            escaped = true;
        }
        steps.push(st.clone());
        !escaped && cross.map_or(true, |c| st.t1() < c + half + 1.0)
    });
    if escaped || cross.is_none() || matches!(stop, Stop::Failed | Stop::MaxSteps) {
        return Err(Error::ProfileSolver {
            reason: format!("shooting failed to reach the right state ({stop:?}, escaped={escaped})"),
            iterations: steps.len(),
            residual: f64::NAN,
        });
    }
    let c = cross.unwrap_or(0.0);
    let mut v = Vec::with_capacity(xi.len());
    let mut s = Vec::with_capacity(xi.len());
    let mut k = 0usize;
    let mut out = [0.0; 2];
    for &x in xi {
        let t = x + c;
        if t <= 0.0 {
            let a = eps * exp(lam * t);
            v.push(es.v_minus + a);
            s.push(lam * a);
            continue;
        }
        while k + 1 < steps.len() && steps[k].t1() < t {
            k += 1;
        }
        steps[k].eval(t.min(steps[k].t1()), &mut out);
        v.push(out[0]);
        s.push(out[1]);
    }
    ShockProfile::from_samples(*law, *es, xi.to_vec(), v, s, ProfileMethod::Shooting)
}
