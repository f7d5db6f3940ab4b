//! Least-squares line fits used for scaling exponents and decay rates.

use crate::math::ln;
use crate::{Error, Result};

/// Slope and intercept of a least-squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: x.len().min(y.len()) });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParameter { name: "x", reason: "abscissae are all equal".into() });
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LineFit { slope, intercept: my - slope * mx, r2 })
}

/// Fit of `ln y` against `ln x`; all values must be positive.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let mut lx = alloc::vec::Vec::with_capacity(x.len());
    let mut ly = alloc::vec::Vec::with_capacity(y.len());
    for (&a, &b) in x.iter().zip(y) {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Domain { what: "log-log sample", value: if a > 0.0 { b } else { a } });
        }
        lx.push(ln(a));
        ly.push(ln(b));
    }
    linear_fit(&lx, &ly)
}
