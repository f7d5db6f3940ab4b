//! Cubic Hermite interpolation on a strictly increasing grid.

/// Cubic Hermite interpolant through `(x_i, y_i, y'_i)`.
///
/// Returns the value and the derivative at `t`, which must lie in `[x0, x1]`.
#[inline]
pub fn cubic(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, t: f64) -> (f64, f64) {
    let h = x1 - x0;
    let s = (t - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let val = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let dh00 = (6.0 * s2 - 6.0 * s) / h;
    let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
    let dh01 = (-6.0 * s2 + 6.0 * s) / h;
    let dh11 = 3.0 * s2 - 2.0 * s;
    (val, dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1)
}

/// Index `i` with `x[i] <= t <= x[i+1]`, clamped to the valid range.
pub fn locate(x: &[f64], t: f64) -> usize {
    let n = x.len();
    debug_assert!(n >= 2);
    if t <= x[0] {
        return 0;
    }
    if t >= x[n - 1] {
        return n - 2;
    }
    match x.binary_search_by(|p| p.partial_cmp(&t).unwrap_or(core::cmp::Ordering::Less)) {
        Ok(i) => i.min(n - 2),
        Err(i) => i - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin};
    use alloc::vec::Vec;

    #[test]
    fn reproduces_cubics_exactly() {
        let p = |x: f64| 2.0 * x * x * x - x * x + 0.5;
        let dp = |x: f64| 6.0 * x * x - 2.0 * x;
        let (v, d) = cubic(0.3, 1.1, p(0.3), p(1.1), dp(0.3), dp(1.1), 0.77);
        assert!((v - p(0.77)).abs() < 1e-14);
        assert!((d - dp(0.77)).abs() < 1e-13);
    }

    #[test]
    fn fourth_order_on_smooth_function() {
        let err = |n: usize| {
            let x: Vec<f64> = (0..n).map(|i| 3.0 * i as f64 / (n - 1) as f64).collect();
            let mut worst: f64 = 0.0;
            for k in 0..500 {
                let t = 3.0 * (k as f64 + 0.37) / 500.0;
                let i = locate(&x, t);
                let (v, _) = cubic(x[i], x[i + 1], sin(x[i]), sin(x[i + 1]), cos(x[i]), cos(x[i + 1]), t);
                worst = worst.max((v - sin(t)).abs());
            }
            worst
        };
        let order = (err(21) / err(41)).log2();
        assert!(order > 3.8, "order {order}");
    }

    #[test]
    fn locate_handles_ends_and_nodes() {
        let x = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(locate(&x, -1.0), 0);
        assert_eq!(locate(&x, 5.0), 2);
        assert_eq!(locate(&x, 1.0), 1);
        assert_eq!(locate(&x, 1.5), 1);
        assert_eq!(locate(&x, 3.0), 2);
    }
}
