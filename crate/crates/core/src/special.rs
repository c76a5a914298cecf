//! Complex special functions used by the closed forms.
//!
//! `log_gamma` uses the Stirling series after an upward shift of the
//! argument (so `|z| >= 12` when the series is applied) and the reflection
//! formula for `Re z < 1/2`. Relative accuracy of `gamma` is about `1e-14`
//! on the box `|Re z|, |Im z| <= 64`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{c64, Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const LN_PI: f64 = 1.144_729_885_849_400_2;
const POLE_TOL: f64 = 1e-14;
const STIRLING_RADIUS: f64 = 12.0;

/// `B_{2k} / (2k (2k - 1))` for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

fn check_pole(z: Complex64) -> Result<()> {
    let k = z.re.round();
    if k <= 0.0 && (z - c64(k, 0.0)).norm() < POLE_TOL {
        return Err(Error::Pole(z));
    }
    Ok(())
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

// log Gamma on Re z >= 1/2
fn log_gamma_right(z: Complex64) -> Complex64 {
    if z.norm() >= STIRLING_RADIUS {
        return stirling(z);
    }
    let shift = (STIRLING_RADIUS - z.re).ceil().max(1.0) as usize;
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 0..shift {
        prod *= z + k as f64;
    }
    stirling(z + shift as f64) - prod.ln()
}

/// `sin(πz)`, with the real part reduced modulo 2 before scaling.
pub fn sin_pi(z: Complex64) -> Result<Complex64> {
    let r = z.re - 2.0 * (z.re / 2.0).floor();
    csin(c64(PI * r, PI * z.im))
}

// log sin(πz) without overflow for large |Im z|; defined modulo 2πi.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let r = z.re - 2.0 * (z.re / 2.0).floor();
    let w = c64(PI * r, PI * z.im);
    if w.im.abs() < 20.0 {
        let s = c64(w.re.sin() * w.im.cosh(), w.re.cos() * w.im.sinh());
        return s.ln();
    }
    let iw = c64(-w.im, w.re);
    if w.im > 0.0 {
        // sin w = e^{-iw} (1 - e^{2iw}) i/2
        -iw + (1.0 - (iw * 2.0).exp()).ln() + c64(0.5, 0.0).ln() + c64(0.0, PI / 2.0)
    } else {
        // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
        iw + (1.0 - (-iw * 2.0).exp()).ln() - c64(2.0f64.ln(), PI / 2.0)
    }
}

/// Principal-branch-on-the-positive-axis logarithm of Gamma.
///
/// Real for real `z > 0`; elsewhere determined modulo `2πi`, which is
/// harmless because callers only exponentiate differences.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        Ok(log_gamma_right(z))
    } else {
        Ok(c64(LN_PI, 0.0) - ln_sin_pi(z) - log_gamma_right(1.0 - z))
    }
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    let g = log_gamma(z)?.exp();
    if g.re.is_finite() && g.im.is_finite() {
        Ok(g)
    } else {
        Err(Error::Overflow { what: "gamma", at: z })
    }
}

/// `Γ(a) / Γ(b)` evaluated through log-Gamma differences.
pub fn gamma_ratio(a: Complex64, b: Complex64) -> Result<Complex64> {
    let r = (log_gamma(a)? - log_gamma(b)?).exp();
    if r.re.is_finite() && r.im.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow { what: "gamma ratio", at: a })
    }
}

/// Complex sine; errors instead of returning infinities.
pub fn csin(z: Complex64) -> Result<Complex64> {
    let s = c64(z.re.sin() * z.im.cosh(), z.re.cos() * z.im.sinh());
    if s.re.is_finite() && s.im.is_finite() {
        Ok(s)
    } else {
        Err(Error::Overflow { what: "sine", at: z })
    }
}
