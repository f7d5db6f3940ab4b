//! Small explicit ODE integrators for the profile cross-check and scheme tests.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{powf, sqrt};

/// One classical RK4 step for `y' = f(t, y)` on a state slice.
pub fn rk4_step<F>(f: &mut F, t: f64, y: &mut [f64], h: f64)
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    f(t, y, &mut k1);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    f(t + 0.5 * h, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    f(t + 0.5 * h, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    f(t + h, &tmp, &mut k4);
    for i in 0..n {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Accepted step of [`dopri5`] with the data for continuous output.
#[derive(Debug, Clone)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    rcont: [Vec<f64>; 5],
}

impl DenseStep {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Fourth-order continuous extension evaluated at `t` in `[t0, t0 + h]`.
    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let [r0, r1, r2, r3, r4] = &self.rcont;
        for i in 0..out.len() {
            out[i] = r0[i] + th * (r1[i] + th1 * (r2[i] + th * (r3[i] + th1 * r4[i])));
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_init: 1e-3, h_max: f64::INFINITY, max_steps: 1_000_000 }
    }
}

/// Why a [`dopri5`] integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    /// Reached the requested end time.
    End,
    /// The step callback asked to stop.
    Callback,
    /// Step size underflow or non-finite state.
    Failed,
    MaxSteps,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Dormand–Prince 5(4) with error control and dense output.
///
/// `on_step` sees every accepted step and returns `false` to stop. The state
/// `y` holds the solution at the returned time.
pub fn dopri5<F, C>(f: &mut F, t0: f64, t_end: f64, y: &mut [f64], opts: &Dopri5Options, mut on_step: C) -> (f64, Stop)
where
    F: FnMut(f64, &[f64], &mut [f64]),
    C: FnMut(&DenseStep, &[f64]) -> bool,
{
    let n = y.len();
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut h = dir * opts.h_init.abs().min((t_end - t0).abs()).max(1e-300);
    let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| vec![0.0; n]);
    let mut ys = vec![0.0; n];
    let mut y1 = vec![0.0; n];
    f(t, y, &mut k[0]);
    let mut fac_old: f64 = 1e-4;
    let mut steps = 0;
    loop {
        if (t_end - t) * dir <= 0.0 {
            return (t, Stop::End);
        }
        if steps >= opts.max_steps {
            return (t, Stop::MaxSteps);
        }
        steps += 1;
        if h.abs() > opts.h_max {
            h = dir * opts.h_max;
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        if h.abs() <= 1e-14 * t.abs().max(1.0) {
            return (t, Stop::Failed);
        }
        for i in 0..n {
            ys[i] = y[i] + h * A21 * k[0][i];
        }
        f(t + C2 * h, &ys, &mut k[1]);
        for i in 0..n {
            ys[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        f(t + C3 * h, &ys, &mut k[2]);
        for i in 0..n {
            ys[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        f(t + C4 * h, &ys, &mut k[3]);
        for i in 0..n {
            ys[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        f(t + C5 * h, &ys, &mut k[4]);
        for i in 0..n {
            ys[i] = y[i] + h * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] + A65 * k[4][i]);
        }
        f(t + h, &ys, &mut k[5]);
        for i in 0..n {
            y1[i] = y[i] + h * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
        }
        f(t + h, &y1, &mut k[6]);
        let mut err = 0.0;
        for i in 0..n {
            let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = sqrt(err / n as f64);
        if !err.is_finite() {
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            // PI step-size control after Hairer, Norsett and Wanner.
            let fac11 = powf(err.max(1e-16), 0.2 - 0.04 * 0.75);
            let fac = (fac11 / powf(fac_old, 0.04)) / 0.9;
            let fac = fac.clamp(0.1, 5.0);
            fac_old = err.max(1e-4);
            let mut rc: [Vec<f64>; 5] = core::array::from_fn(|_| vec![0.0; n]);
            for i in 0..n {
                let dy = y1[i] - y[i];
                let bspl = h * k[0][i] - dy;
                rc[0][i] = y[i];
                rc[1][i] = dy;
                rc[2][i] = bspl;
                rc[3][i] = dy - h * k[6][i] - bspl;
                rc[4][i] = h
                    * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
            }
            let step = DenseStep { t0: t, h, rcont: rc };
            t += h;
            y.copy_from_slice(&y1);
            let (first, rest) = k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            if !on_step(&step, y) {
                return (t, Stop::Callback);
            }
            h /= fac;
        } else {
            let fac11 = powf(err, 0.2 - 0.04 * 0.75);
            h /= (fac11 / 0.9).min(10.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    #[test]
    fn rk4_local_error_is_fifth_order() {
        let mut f = |_t: f64, y: &[f64], d: &mut [f64]| d[0] = -y[0];
        let mut err = |h: f64| {
            let mut y = [1.0];
            rk4_step(&mut f, 0.0, &mut y, h);
            (y[0] - exp(-h)).abs()
        };
        let (a, b) = (err(0.1), err(0.05));
        let order = (a / b).log2();
        assert!(order > 4.8, "order {order}");
    }

    #[test]
    fn dopri5_harmonic_oscillator() {
        let mut f = |_t: f64, y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0];
        };
        let mut y = [1.0, 0.0];
        let (t, stop) = dopri5(&mut f, 0.0, 10.0, &mut y, &Dopri5Options::default(), |_, _| true);
        assert_eq!(stop, Stop::End);
        assert!((t - 10.0).abs() < 1e-12);
        assert!((y[0] - crate::math::cos(10.0)).abs() < 1e-8);
        assert!((y[1] + crate::math::sin(10.0)).abs() < 1e-8);
    }

    #[test]
    fn dense_output_is_accurate_inside_steps() {
        let mut f = |_t: f64, y: &[f64], d: &mut [f64]| d[0] = y[0];
        let mut y = [1.0];
        let mut worst: f64 = 0.0;
        let opts = Dopri5Options { rtol: 1e-9, atol: 1e-12, ..Default::default() };
        dopri5(&mut f, 0.0, 2.0, &mut y, &opts, |s, _| {
            let mut out = [0.0];
            for j in 1..4 {
                let tt = s.t0 + s.h * j as f64 / 4.0;
                s.eval(tt, &mut out);
                worst = worst.max((out[0] - exp(tt)).abs() / exp(tt));
            }
            true
        });
        assert!(worst < 1e-7, "{worst}");
    }

    #[test]
    fn callback_stops_integration() {
        let mut f = |_t: f64, _y: &[f64], d: &mut [f64]| d[0] = 1.0;
        let mut y = [0.0];
        let (_, stop) = dopri5(&mut f, 0.0, 100.0, &mut y, &Dopri5Options::default(), |_, y| y[0] < 1.0);
        assert_eq!(stop, Stop::Callback);
    }
}
