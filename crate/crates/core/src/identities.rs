//! Explicit unwinding series for `e^{2iπx}` and related singular inner
//! functions.
//!
//! With `q = e^{-2π}` and `G` as in [`crate::multiscale`]:
//!
//! - `e^{2iπx} = (q + G)/(1 + qG)`,
//! - `e^{2iπx} = q + (1 - q²) Σ_{n>=0} (-q)ⁿ G^{n+1}`,
//! - for `α > 0`: `e^{2iπx} = e^{-2πα} + G_α(x)(1 - e^{-2πα} e^{2iπx})`, which
//!   iterates along a sequence `(α_n)` into an alternating series.
//!
//! The same series composed with `x ↦ -1/x` expand `e^{-2iπ/x}`, and with
//! the Cayley map they expand the singular inner function of the disk.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::multiscale::{g, g_alpha};
use crate::quadrature::HalfPlaneFunction;
use crate::{c64, Error, Result, EXP_NEG_2PI, I};

const Q: f64 = EXP_NEG_2PI;

fn e2ipi(x: f64) -> Complex64 {
    // reduce first so large |x| keeps full accuracy
    Complex64::from_polar(1.0, 2.0 * PI * (x - x.round()))
}

/// `(q + G(x))/(1 + q G(x))`.
pub fn recur_rhs(x: f64) -> Result<Complex64> {
    let gx = g(c64(x, 0.0))?;
    Ok((Q + gx) / (1.0 + Q * gx))
}

/// `|e^{2iπx} - (q + G(x))/(1 + q G(x))|`.
pub fn recur_residual(x: f64) -> Result<f64> {
    Ok((e2ipi(x) - recur_rhs(x)?).norm())
}

/// `|(e^{2iπx} - q)/G(x) - (1 - q e^{2iπx})|`, the intermediate step of the
/// single-α identity at `α = 1`.
pub fn h_intermediate_residual(x: f64) -> Result<f64> {
    let s = e2ipi(x);
    Ok(((s - Q) / g(c64(x, 0.0))? - (1.0 - Q * s)).norm())
}

/// Coefficient of `G^{n+1}`: `(1 - q²)(-q)ⁿ` for `n < terms`.
pub fn pro_unwinding_coefficients(terms: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(terms);
    let mut p = 1.0 - Q * Q;
    for _ in 0..terms {
        c.push(p);
        p *= -Q;
    }
    c
}

fn geometric_series(gx: Complex64, terms: usize) -> Complex64 {
    let mut s = Complex64::new(Q, 0.0);
    let mut power = gx;
    for c in pro_unwinding_coefficients(terms) {
        s += power * c;
        power *= gx;
    }
    s
}

/// `q + (1 - q²) Σ_{n<terms} (-q)ⁿ G(x)^{n+1}`.
pub fn pro_unwinding_partial(x: f64, terms: usize) -> Result<Complex64> {
    Ok(geometric_series(g(c64(x, 0.0))?, terms))
}

/// `(1 - q²) q^N / (1 - q)`, the truncation bound on ℝ after `N` terms.
pub fn pro_unwinding_tail_bound(terms: usize) -> f64 {
    (1.0 - Q * Q) * Q.powi(terms as i32) / (1.0 - Q)
}

/// `G(x)^{n+1}/(√π(x + i))`.
pub fn complete_unwinding_term(n: usize, x: Complex64) -> Result<Complex64> {
    Ok(g(x)?.powi(n as i32 + 1) / (PI.sqrt() * (x + I)))
}

pub fn complete_unwinding_term_function(n: usize) -> HalfPlaneFunction {
    HalfPlaneFunction::new(format!("complete_unwinding_term[{n}]"), 1.0, move |x| complete_unwinding_term(n, x))
}

/// The series above divided by `√π(x + i)`.
pub fn complete_unwinding_partial(x: f64, terms: usize) -> Result<Complex64> {
    Ok(pro_unwinding_partial(x, terms)? / (PI.sqrt() * c64(x, 1.0)))
}

/// Partial sum of the weighted series as a half-plane function.
pub fn complete_unwinding_function(terms: usize) -> HalfPlaneFunction {
    HalfPlaneFunction::new(format!("complete_unwinding[{terms}]"), 1.0, move |x| {
        Ok(geometric_series(g(x)?, terms) / (PI.sqrt() * (x + I)))
    })
}

/// `e^{2iπx}/(√π(x + i))`, the limit of [`complete_unwinding_function`].
pub fn complete_unwinding_target() -> HalfPlaneFunction {
    HalfPlaneFunction::new(
        "exp(2i pi x)/(sqrt(pi)(x+i))",
        1.0,
        |x| Ok((2.0 * PI * I * x).exp() / (PI.sqrt() * (x + I))),
    )
}

/// `|e^{2iπx} - e^{-2πα} - G_α(x)(1 - e^{-2πα} e^{2iπx})|`.
pub fn alpha_identity_residual(alpha: f64, x: f64) -> Result<f64> {
    let a = (-2.0 * PI * alpha).exp();
    let s = e2ipi(x);
    Ok((s - a - g_alpha(alpha, c64(x, 0.0))? * (1.0 - a * s)).norm())
}

/// Positive `α_n` and the derived ratios `a_n = e^{-2πα_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSequence {
    alphas: Vec<f64>,
    a: Vec<f64>,
}

impl AlphaSequence {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.iter().any(|&al| !(al > 0.0 && al.is_finite())) {
            return Err(Error::InvalidParameter("alpha values must be positive"));
        }
        let a = alphas.iter().map(|al| (-2.0 * PI * al).exp()).collect();
        Ok(Self { alphas, a })
    }

    pub fn constant(alpha: f64, len: usize) -> Result<Self> {
        Self::new(vec![alpha; len])
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn ratios(&self) -> &[f64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    fn check_terms(&self, terms: usize) -> Result<()> {
        if terms + 1 > self.len() {
            return Err(Error::Index { index: terms, len: self.len() });
        }
        Ok(())
    }
}

/// `[c_0, …, c_N]`: `c_0 = a_1` and `c_n = (-1)^{n+1} a_1⋯a_{n-1}(1 - a_n a_{n+1})`,
/// the scalar in front of `∏_{k<=n} G_{α_k}` (indices 1-based as above).
pub fn alpha_series_coefficients(seq: &AlphaSequence, terms: usize) -> Result<Vec<f64>> {
    seq.check_terms(terms)?;
    let a = &seq.a;
    let mut c = vec![a[0]];
    let mut prefix = 1.0;
    for n in 1..=terms {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        c.push(sign * prefix * (1.0 - a[n - 1] * a[n]));
        prefix *= a[n - 1];
    }
    Ok(c)
}

/// Partial sum with `terms` products of `G_α` factors.
pub fn alpha_series_partial(seq: &AlphaSequence, x: f64, terms: usize) -> Result<Complex64> {
    let c = alpha_series_coefficients(seq, terms)?;
    let mut s = Complex64::new(c[0], 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        prod *= g_alpha(seq.alphas[n - 1], c64(x, 0.0))?;
        s += prod * c[n];
    }
    Ok(s)
}

/// Exact remainder `(-1)^N a_1⋯a_N ∏_{k<=N+1} G_{α_k}(x) (1 - a_{N+1} e^{2iπx})`.
pub fn alpha_series_remainder(seq: &AlphaSequence, x: f64, terms: usize) -> Result<Complex64> {
    seq.check_terms(terms)?;
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 0..=terms {
        prod *= g_alpha(seq.alphas[k], c64(x, 0.0))?;
    }
    let sign = if terms % 2 == 0 { 1.0 } else { -1.0 };
    let scale: f64 = seq.a[..terms].iter().product();
    Ok(prod * (1.0 - seq.a[terms] * e2ipi(x)) * (sign * scale))
}

/// `2 ∏_{k<=N} a_k`.
pub fn alpha_series_tail_bound(seq: &AlphaSequence, terms: usize) -> f64 {
    2.0 * seq.a.iter().take(terms).product::<f64>()
}

/// Which exponential the Dirac-point identity expands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiracVariant {
    /// `e^{-2iπ/x}` with `B(x) = G(-1/x)`, zeros `-1/(n + i)` in the upper
    /// half-plane.
    #[default]
    Singular,
    /// `e^{2iπ/x}` with `B(x) = G(1/x)`.
    Reflected,
}

pub const NEAR_SINGULAR: f64 = 1e-6;

/// `B(x)` for the chosen variant.
pub fn dirac_blaschke(x: f64, variant: DiracVariant) -> Result<Complex64> {
    if x.abs() < NEAR_SINGULAR {
        return Err(Error::NearSingular(x.abs()));
    }
    match variant {
        DiracVariant::Singular => g(c64(-1.0 / x, 0.0)),
        DiracVariant::Reflected => g(c64(1.0 / x, 0.0)),
    }
}

/// The `n`-th zero of `B` (of `G(-1/x)` resp. `G(1/x)`).
pub fn dirac_zero(n: i64, variant: DiracVariant) -> Complex64 {
    match variant {
        DiracVariant::Singular => -1.0 / c64(n as f64, 1.0),
        DiracVariant::Reflected => 1.0 / c64(n as f64, 1.0),
    }
}

fn dirac_target(x: f64, variant: DiracVariant) -> Complex64 {
    let sign = match variant {
        DiracVariant::Singular => -1.0,
        DiracVariant::Reflected => 1.0,
    };
    let t = 1.0 / x;
    Complex64::from_polar(1.0, sign * 2.0 * PI * (t - t.round()))
}

/// `|target - (q + B)/(1 + qB)|` for the chosen variant.
pub fn dirac_inner_residual(x: f64, variant: DiracVariant) -> Result<f64> {
    let b = dirac_blaschke(x, variant)?;
    Ok((dirac_target(x, variant) - (Q + b) / (1.0 + Q * b)).norm())
}

/// `|e^{-2iπ/x} - (q + G(1/x))/(1 + qG(1/x))|`: the Singular target paired
/// with the Reflected product. Of order 1; kept for reporting.
pub fn dirac_mixed_residual(x: f64) -> Result<f64> {
    let b = dirac_blaschke(x, DiracVariant::Reflected)?;
    Ok((dirac_target(x, DiracVariant::Singular) - (Q + b) / (1.0 + Q * b)).norm())
}

/// Smallest admissible distance of `θ` from `0 mod 2π`.
pub const THETA_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusSubstitution {
    /// `x = (i/2π)(1 + e^{iθ})/(1 - e^{iθ})`, real for real `θ`.
    pub x: Complex64,
    pub series: Complex64,
    /// `exp(-(1 + e^{iθ})/(1 - e^{iθ}))`.
    pub target: Complex64,
    pub residual: f64,
    pub tail_bound: f64,
}

/// The unwinding series at the Cayley-substituted point. Since `x` is real,
/// `e^{2iπx} = exp(-(1 + z)/(1 - z))` with `z = e^{iθ}`, and the geometric
/// tail bound applies unchanged.
pub fn torus_substitution(theta: f64, terms: usize) -> Result<TorusSubstitution> {
    let t = theta.rem_euclid(2.0 * PI);
    if t.min(2.0 * PI - t) < THETA_MARGIN {
        return Err(Error::Domain(c64(theta, 0.0)));
    }
    let z = Complex64::from_polar(1.0, theta);
    let w = (1.0 + z) / (1.0 - z);
    let raw = I / (2.0 * PI) * w;
    if raw.im < -1e-12 * raw.norm().max(1.0) {
        return Err(Error::Domain(raw));
    }
    let x = c64(raw.re, raw.im.max(0.0));
    let gx = g(x)?;
    let series = geometric_series(gx, terms);
    // |G(x)| <= 1 in the closed half-plane, so the real-axis bound still holds
    let tail_bound = pro_unwinding_tail_bound(terms) * gx.norm().powi(terms as i32 + 1);
    let target = (-w).exp();
    Ok(TorusSubstitution { x, series, target, residual: (series - target).norm(), tail_bound })
}

pub fn torus_substitution_residual(theta: f64, terms: usize) -> Result<f64> {
    torus_substitution(theta, terms).map(|t| t.residual)
}
