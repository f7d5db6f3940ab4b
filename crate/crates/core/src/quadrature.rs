//! Quadrature rules on sampled data.

/// Composite trapezoid rule on a uniform grid of spacing `h`.
pub fn trapezoid_uniform(f: &[f64], h: f64) -> f64 {
    match f.len() {
        0 | 1 => 0.0,
        n => h * (0.5 * (f[0] + f[n - 1]) + f[1..n - 1].iter().sum::<f64>()),
    }
}

/// Trapezoid rule on arbitrary strictly increasing abscissae.
pub fn trapezoid(x: &[f64], f: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), f.len());
    x.windows(2).zip(f.windows(2)).map(|(xs, fs)| 0.5 * (xs[1] - xs[0]) * (fs[0] + fs[1])).sum()
}

/// Composite Simpson rule on a uniform grid with an odd number of samples.
///
/// With an even count the last interval uses the trapezoid rule.
pub fn simpson_uniform(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    if n < 3 {
        return trapezoid_uniform(f, h);
    }
    let m = if n % 2 == 1 { n } else { n - 1 };
    let mut s = f[0] + f[m - 1];
    for (i, fi) in f.iter().enumerate().take(m - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * fi } else { 2.0 * fi };
    }
    let mut total = s * h / 3.0;
    if m < n {
        total += 0.5 * h * (f[n - 2] + f[n - 1]);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn trapezoid_exact_for_linear() {
        let x: Vec<f64> = (0..11).map(|i| (i as f64 * 0.1) * (i as f64 * 0.1)).collect();
        let f: Vec<f64> = x.iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((trapezoid(&x, &f) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn simpson_exact_for_cubic() {
        let n = 21;
        let h = 1.0 / (n - 1) as f64;
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson_uniform(&f, h) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_second_order() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| crate::math::exp(i as f64 * h)).collect();
            (trapezoid_uniform(&f, h) - (crate::math::exp(1.0) - 1.0)).abs()
        };
        let order = (err(21) / err(41)).log2();
        assert!((order - 2.0).abs() < 0.05);
    }
}
