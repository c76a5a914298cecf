//! The periodic inner function `G`, its partial products `G_n`, the
//! translates of `φ`, the dyadic inner function `Δ` and the wavelets
//! `φ_{n,j}(x) = 2^{n/2} φ(2ⁿx - j) Δ(2ⁿx)`.
//!
//! `G(x) = sin π(i - x)/sin π(i + x)` is a Blaschke product with zeros at
//! `j + i`, unimodular on ℝ and 1-periodic. `Δ(x) = ∏_{j<0} G(2^j x)` is
//! truncated to `-J <= j <= -1` (optionally times `G(x)`), with tail
//! `|Δ - Δ_J| <= C_G |x| 2^{-J}` on ℝ.

use core::f64::consts::PI;
use core::ops::RangeInclusive;

use num_complex::Complex64;

use crate::quadrature::QuadratureSpec;
use crate::special::{log_gamma, sin_pi};
use crate::{c64, Error, Result, EXP_NEG_2PI, I};

pub use crate::quadrature::{hp_inner_product, HalfPlaneFunction};

/// Largest imaginary part accepted by `G` and `G_α`.
pub const MAX_IM: f64 = 40.0;
/// `sup |1 - G(x)|/min{1, |x|}` over ℝ, attained as `x → 0` where it equals
/// `|G'(0)| = 2π(1 + e^{-2π})/(1 - e^{-2π}) = 6.30669…`; rounded up.
pub const C_G: f64 = 6.3067;
/// Constant `c` in `|ψ(x) - 2πx| <= c·min{|x|, log(1 + |x|)}` for the
/// `j < 0` product (measured supremum 0.02485).
pub const LOG_BOUND: f64 = 0.0304;
pub const DEFAULT_SCALES: u32 = 40;

fn check_upper(x: Complex64) -> Result<()> {
    if x.im < 0.0 {
        return Err(Error::Domain(x));
    }
    if x.im > MAX_IM {
        return Err(Error::Overflow { what: "G", at: x });
    }
    Ok(())
}

// sin π(iα - x)/sin π(iα + x); invariant under x -> x + 1, so the real part
// is reduced first.
fn sine_ratio(alpha: f64, x: Complex64) -> Result<Complex64> {
    check_upper(x)?;
    let r = c64(x.re - x.re.round(), x.im);
    Ok(sin_pi(c64(0.0, alpha) - r)? / sin_pi(c64(0.0, alpha) + r)?)
}

/// `G(x) = sin π(i - x)/sin π(i + x)`.
pub fn g(x: Complex64) -> Result<Complex64> {
    sine_ratio(1.0, x)
}

/// `G_α(x) = sin π(iα - x)/sin π(iα + x)`, zeros at `j + iα`.
pub fn g_alpha(alpha: f64, x: Complex64) -> Result<Complex64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter("alpha must be positive"));
    }
    sine_ratio(alpha, x)
}

/// Unwrapped phase of `G` on ℝ: `2(πy + Σ_{n>=1} e^{-2πn}/n · sin 2πny)`.
pub fn g_phase(y: f64) -> f64 {
    let mut s = 0.0;
    let mut q = 1.0;
    for n in 1..=8 {
        q *= EXP_NEG_2PI;
        s += q / n as f64 * (2.0 * PI * n as f64 * y).sin();
    }
    2.0 * (PI * y + s)
}

// log Γ, mapping a pole to None
fn log_gamma_or_pole(z: Complex64) -> Result<Option<Complex64>> {
    match log_gamma(z) {
        Ok(v) => Ok(Some(v)),
        Err(Error::Pole(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `G_n(x) = (Γ(-i-n)/Γ(i-n)) · Γ(x-n+i)/Γ(x-n-i)`, the product of the
/// factors `((j-i)/(j+i))((x-j-i)/(x-j+i))` over `j <= n`.
pub fn g_partial(n: i64, x: Complex64) -> Result<Complex64> {
    if x.im < 0.0 {
        return Err(Error::Domain(x));
    }
    let nf = n as f64;
    let Some(den) = log_gamma_or_pole(x - nf - I)? else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let l = log_gamma(c64(-nf, -1.0))? - log_gamma(c64(-nf, 1.0))? + log_gamma(x - nf + I)? - den;
    Ok(l.exp())
}

/// `φ(x) = Γ(x - 1 + i)/(√π Γ(x - i))`.
pub fn phi(x: Complex64) -> Result<Complex64> {
    if x.im < 0.0 {
        return Err(Error::Domain(x));
    }
    let Some(den) = log_gamma_or_pole(x - I)? else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let v = (log_gamma(x - 1.0 + I)? - den).exp() / PI.sqrt();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { what: "phi", at: x })
    }
}

/// Truncation of `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaSpec {
    /// `J`: factors `-J <= j <= -1`.
    pub scales: u32,
    /// Multiply by the `j = 0` factor `G(x)` as well.
    pub include_j0: bool,
}

impl Default for DeltaSpec {
    fn default() -> Self {
        Self { scales: DEFAULT_SCALES, include_j0: false }
    }
}

impl DeltaSpec {
    pub fn new(scales: u32, include_j0: bool) -> Result<Self> {
        if scales == 0 {
            return Err(Error::InvalidParameter("Delta needs at least one scale"));
        }
        Ok(Self { scales, include_j0 })
    }

    /// Exact linear part of the untruncated phase: `2πx` for `j < 0`,
    /// `4πx` with the `j = 0` factor.
    pub fn linear_part(&self, x: f64) -> f64 {
        if self.include_j0 {
            4.0 * PI * x
        } else {
            2.0 * PI * x
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaValue {
    pub value: Complex64,
    /// Bound on the omitted factors, `C_G |x| 2^{-J}`.
    pub tail_bound: f64,
}

pub fn delta(x: Complex64, spec: &DeltaSpec) -> Result<DeltaValue> {
    let mut value = if spec.include_j0 { g(x)? } else { Complex64::new(1.0, 0.0) };
    let mut y = x;
    for _ in 0..spec.scales {
        y *= 0.5;
        value *= g(y)?;
    }
    let tail_bound = C_G * x.norm() * 0.5f64.powi(spec.scales as i32);
    Ok(DeltaValue { value, tail_bound })
}

/// Continuous phase of the truncated `Δ` on ℝ, as the sum of the
/// single-factor phases [`g_phase`].
pub fn psi(x: f64, spec: &DeltaSpec) -> f64 {
    let mut s = if spec.include_j0 { g_phase(x) } else { 0.0 };
    let mut y = x;
    for _ in 0..spec.scales {
        y *= 0.5;
        s += g_phase(y);
    }
    s
}

/// `Ξ(t) = Σ_{k>=1} sin(2^{-k} t)`: `k_max` terms plus the linearized tail
/// `2^{-k_max} t`.
pub fn xi(t: f64, k_max: u32) -> f64 {
    let mut s = 0.0;
    let mut u = t;
    for _ in 0..k_max {
        u *= 0.5;
        s += u.sin();
    }
    s + u
}

/// Number of terms making the linearized `Ξ` tail `2^{-k}|t|` at most
/// `1e-12`.
pub fn xi_terms(t: f64) -> u32 {
    let mut k = 1;
    while t.abs() * 0.5f64.powi(k as i32) > 1e-12 {
        k += 1;
    }
    k
}

/// Scale `n` and shift `j`; the derived order is lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WaveletIndex {
    pub n: i32,
    pub j: i64,
}

impl WaveletIndex {
    pub fn new(n: i32, j: i64) -> Self {
        Self { n, j }
    }
}

/// `φ_{n,j}(x) = 2^{n/2} φ(2ⁿx - j) Δ(2ⁿx)`.
pub fn wavelet(idx: WaveletIndex, x: Complex64, spec: &DeltaSpec) -> Result<Complex64> {
    let s = 2f64.powi(idx.n);
    let y = x * s;
    Ok(s.sqrt() * phi(y - idx.j as f64)? * delta(y, spec)?.value)
}

pub fn wavelet_function(idx: WaveletIndex, spec: DeltaSpec) -> HalfPlaneFunction {
    HalfPlaneFunction::new(format!("wavelet({},{})", idx.n, idx.j), 1.0, move |x| wavelet(idx, x, &spec))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs {
    /// Lexicographically ordered `(index, ⟨f, φ_index⟩)`.
    pub coeffs: Vec<(WaveletIndex, Complex64)>,
    /// `‖f - Σ_{m ⪯ index} c_m φ_m‖₂` for each prefix ending at `index`.
    pub residuals: Vec<(WaveletIndex, f64)>,
    /// Largest quadrature error estimate among the coefficients.
    pub estimate: f64,
}

/// Coefficients over the rectangle `scales × shifts` with lexicographic
/// prefix residuals.
pub fn wavelet_analyze(
    f: &HalfPlaneFunction,
    scales: RangeInclusive<i32>,
    shifts: RangeInclusive<i64>,
    spec: &DeltaSpec,
    quad: &QuadratureSpec,
) -> Result<WaveletCoeffs> {
    if f.decay_exponent() < 1.0 {
        return Err(Error::InvalidParameter("decay exponent must be at least 1"));
    }
    let nodes = quad.compile()?;
    let fs = nodes.sample(f)?;
    let mut residual = fs.clone();
    let mut out = WaveletCoeffs { coeffs: Vec::new(), residuals: Vec::new(), estimate: 0.0 };
    for n in scales {
        for j in shifts.clone() {
            let idx = WaveletIndex::new(n, j);
            let w = nodes.sample(&wavelet_function(idx, *spec))?;
            let c = nodes.inner(&fs, &w);
            out.estimate = out.estimate.max(c.estimate);
            for (r, v) in residual.iter_mut().zip(&w) {
                *r -= c.value * v;
            }
            out.coeffs.push((idx, c.value));
            out.residuals.push((idx, nodes.norm(&residual)));
        }
    }
    if let Some(tolerance) = quad.tolerance {
        if out.estimate > tolerance {
            return Err(Error::Quadrature { estimate: out.estimate, tolerance });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{gram, identity_deviation};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn re(x: f64) -> Complex64 {
        c64(x, 0.0)
    }

    // t·atan(1/t) + ½ ln(1 + t²), an antiderivative of atan(1/t)
    fn atan_antiderivative(t: f64) -> f64 {
        t * (1.0 / t).atan() + 0.5 * (1.0 + t * t).ln()
    }

    // ∏_{j<=n} over `factors` terms, the rest replaced by the integral of
    // the log-factor (real x only)
    fn g_partial_product(n: i64, x: f64, factors: i64) -> Complex64 {
        let mut p = c64(1.0, 0.0);
        for m in 0..factors {
            let j = (n - m) as f64;
            p *= (c64(j, -1.0) / c64(j, 1.0)) * (c64(x - j, -1.0) / c64(x - j, 1.0));
        }
        // remaining factors have k = -j >= k0 and phase 2(atan(1/k) - atan(1/(k+x)))
        let k0 = (factors - n) as f64;
        let a = k0 - 0.5;
        let tail = 2.0 * (atan_antiderivative(a + x) - atan_antiderivative(a));
        p * Complex64::from_polar(1.0, tail)
    }

    #[test]
    fn g_examples() {
        assert!((g(re(0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((g(re(0.5)).unwrap() + 1.0).norm() < 1e-15);
        assert!(g(I).unwrap().norm() < 1e-15);
        assert!(g(c64(3.0, 1.0)).unwrap().norm() < 1e-14);
        assert!(matches!(g(c64(0.0, 41.0)), Err(Error::Overflow { .. })));
        assert!(matches!(g(c64(0.0, -0.1)), Err(Error::Domain(_))));
        assert!(g(c64(0.3, 40.0)).unwrap().norm().is_finite());
    }

    #[test]
    fn g_matches_the_rational_form() {
        // G = (s - q)/(1 - q s) with s = e^{2iπx}, q = e^{-2π}
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let x = c64(rng.gen_range(-1e4..1e4), rng.gen_range(0.0..3.0));
            let s = (2.0 * PI * I * c64(x.re - x.re.round(), x.im)).exp();
            let expected = (s - EXP_NEG_2PI) / (1.0 - EXP_NEG_2PI * s);
            assert!((g(x).unwrap() - expected).norm() < 1e-13, "{x}");
        }
    }

    #[test]
    fn g_alpha_examples() {
        let x = c64(0.37, 0.2);
        assert_eq!(g_alpha(1.0, x).unwrap(), g(x).unwrap());
        assert!((g_alpha(2.5, re(0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!(g_alpha(0.5, c64(0.0, 0.5)).unwrap().norm() < 1e-15);
        assert!(g_alpha(0.0, x).is_err());
    }

    #[test]
    fn g_unimodular_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let x = rng.gen_range(-100.0..100.0);
            let v = g(re(x)).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-14);
            assert!((g(re(x + 1.0)).unwrap() - v).norm() < 1e-12);
        }
    }

    #[test]
    fn g_phase_reproduces_g() {
        for k in 0..2000 {
            let y = -10.0 + k as f64 * 0.01;
            let v = Complex64::from_polar(1.0, g_phase(y));
            assert!((v - g(re(y)).unwrap()).norm() < 1e-14, "{y}");
        }
    }

    #[test]
    fn g_as_symmetric_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = rng.gen_range(-5.0..5.0);
            let mut last = f64::INFINITY;
            for n in [10, 100, 1000] {
                let mut p = c64(-1.0, 0.0);
                for j in -n..=n {
                    p *= c64(x - j as f64, -1.0) / c64(x - j as f64, 1.0);
                }
                let err = (g(re(x)).unwrap() - p).norm();
                assert!(err <= last + 1e-15);
                last = err;
            }
            assert!(last <= 2e-2, "x = {x}: {last}");
        }
    }

    #[test]
    fn g_partial_examples() {
        assert!((g_partial(0, re(0.0)).unwrap() - 1.0).norm() < 1e-14);
        for n in [-3, 0, 2, 7] {
            assert!(g_partial(n, c64(n as f64, 1.0)).unwrap().norm() < 1e-14);
            assert!(g_partial(n, c64(n as f64 - 2.0, 1.0)).unwrap().norm() < 1e-14);
        }
        // Γ(-i)Γ(1+i)/(Γ(i)Γ(1-i)) = (Γ(1+i)/Γ(i))/(Γ(1-i)/Γ(-i)) = i/(-i)
        assert!((g_partial(0, re(1.0)).unwrap() + 1.0).norm() < 1e-14);
    }

    #[test]
    fn g_partial_matches_extrapolated_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let n = rng.gen_range(-5..=5);
            let x = rng.gen_range(-10.0..10.0);
            let err = (g_partial(n, re(x)).unwrap() - g_partial_product(n, x, 10_000)).norm();
            assert!(err < 1e-6, "n={n} x={x}: {err:e}");
        }
    }

    #[test]
    fn g_partial_limit_is_g() {
        // G_n(x) · ∏_{j>n}(...) → G(x); the j > n factors tend to 1 as n grows
        let x = 0.3;
        let lhs = g_partial(2000, re(x)).unwrap();
        assert!((lhs - g(re(x)).unwrap()).norm() < 1e-3);
    }

    #[test]
    fn phi_values() {
        let v = phi(re(1.0)).unwrap();
        assert!((v - c64(-0.320_091_301_413_890_02, -0.464_598_154_261_242_07)).norm() < 1e-13);
        assert!((v.norm() - 1.0 / PI.sqrt()).abs() < 1e-14);
        assert_eq!(phi(c64(-2.0, 1.0)).unwrap(), c64(0.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x = rng.gen_range(-1000.0..1000.0);
            let m = phi(re(x)).unwrap().norm();
            let expected = 1.0 / (PI.sqrt() * c64(x - 1.0, 1.0).norm());
            assert!((m - expected).abs() < 1e-11 * expected.max(1e-3), "{x}");
        }
    }

    #[test]
    fn phi_translate_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let n = rng.gen_range(-8i64..=8);
            let x = c64(rng.gen_range(-20.0..20.0), rng.gen_range(0.0..2.0));
            let nf = n as f64;
            let k = (log_gamma(c64(-nf, 1.0)).unwrap() - log_gamma(c64(-nf, -1.0)).unwrap()).exp();
            let rhs = k * g_partial(n, x).unwrap() / (PI.sqrt() * (x - (nf + 1.0) + I));
            assert!((phi(x - nf).unwrap() - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn phi_translates_orthonormal() {
        let quad = QuadratureSpec::cayley(8192);
        let f = |n: i64| HalfPlaneFunction::new("phi", 1.0, move |x| phi(x - n as f64));
        assert!((hp_inner_product(&f(0), &f(0), &quad).unwrap() - 1.0).norm() < 1e-10);
        assert!(hp_inner_product(&f(0), &f(1), &quad).unwrap().norm() < 1e-10);
        assert!(hp_inner_product(&f(0), &f(5), &quad).unwrap().norm() < 1e-8);
    }

    #[test]
    fn cayley_atom_orthogonal_to_g_multiples() {
        let quad = QuadratureSpec::windowed(16384, 0.25);
        let a = HalfPlaneFunction::new("a", 1.0, |x| Ok(1.0 / (PI.sqrt() * (x + I))));
        let b = HalfPlaneFunction::new("b", 1.0, |x| Ok(g(x)? / (PI.sqrt() * (x + I))));
        assert!(hp_inner_product(&a, &b, &quad).unwrap().norm() < 1e-8);
    }

    #[test]
    fn one_minus_g_bound() {
        let slope = 2.0 * PI * (1.0 + EXP_NEG_2PI) / (1.0 - EXP_NEG_2PI);
        assert!(slope <= C_G && C_G - slope < 1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let x = rng.gen_range(-10.0..10.0f64);
            let bound = C_G * x.abs().min(1.0);
            assert!((1.0 - g(re(x)).unwrap()).norm() <= bound);
        }
    }

    #[test]
    fn delta_examples() {
        let spec = DeltaSpec::default();
        assert_eq!(delta(re(0.0), &spec).unwrap().value, c64(1.0, 0.0));
        let d = delta(re(2f64.powi(-20)), &DeltaSpec::new(40, false).unwrap()).unwrap();
        assert!((d.value - 1.0).norm() < 1e-5);
        assert!(d.tail_bound < 1e-17);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let x = rng.gen_range(-1e3..1e3);
            for include_j0 in [false, true] {
                let v = delta(re(x), &DeltaSpec::new(40, include_j0).unwrap()).unwrap().value;
                assert!((v.norm() - 1.0).abs() < 1e-10);
            }
        }
        assert!(DeltaSpec::new(0, false).is_err());
    }

    #[test]
    fn delta_scaling_relation() {
        // Δ(2x) = G(x) Δ(x) for the untruncated product; truncation adds C_G|x|2^{-J}
        let spec = DeltaSpec::default();
        for x in [-7.3, -0.2, 0.45, 3.0, 19.9] {
            let lhs = delta(re(2.0 * x), &spec).unwrap();
            let rhs = g(re(x)).unwrap() * delta(re(x), &spec).unwrap().value;
            assert!((lhs.value - rhs).norm() <= 2.0 * lhs.tail_bound + 1e-13);
        }
    }

    #[test]
    fn delta_phase_is_psi() {
        for spec in [DeltaSpec::default(), DeltaSpec::new(30, true).unwrap()] {
            for k in 0..400 {
                let x = -40.0 + 0.2 * k as f64;
                let d = delta(re(x), &spec).unwrap().value;
                assert!((Complex64::from_polar(1.0, psi(x, &spec)) - d).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn psi_examples_and_monotonicity() {
        let spec = DeltaSpec::default();
        assert_eq!(psi(0.0, &spec), 0.0);
        assert!(psi(1.0, &spec) > psi(0.0, &spec));
        let mut prev = psi(-50.0, &spec);
        for k in 1..10_000 {
            let x = -50.0 + 100.0 * k as f64 / 9999.0;
            let v = psi(x, &spec);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn psi_log_bound() {
        let spec = DeltaSpec::default();
        let mut worst = 0.0f64;
        for k in 0..20_000 {
            let x = -100.0 + 200.0 * (k as f64 + 0.5) / 20_000.0;
            let dev = (psi(x, &spec) - spec.linear_part(x)).abs();
            let r = dev / x.abs().min((1.0 + x.abs()).ln());
            worst = worst.max(r);
        }
        assert!(worst <= LOG_BOUND, "{worst}");
    }

    #[test]
    fn xi_values() {
        assert_eq!(xi(0.0, 10), 0.0);
        // Σ_k sin(2^{-k}), high-precision reference
        let v = xi(1.0, xi_terms(1.0));
        assert!((v - 0.976_457_736_470_668_3).abs() < 1e-12, "{v}");
        for n in 0..12 {
            for s in [1.0, 1.3, 1.7, 1.999] {
                let t = s * 2f64.powi(n);
                assert!(xi(t, xi_terms(t)).abs() <= (n + 2) as f64);
                assert!(xi(-t, xi_terms(t)).abs() <= (n + 2) as f64);
            }
        }
        for k in 0..8 {
            let t = 2.0 * PI * 2f64.powi(k);
            assert!(xi(t, xi_terms(t)).abs() <= (k + 3) as f64);
        }
    }

    #[test]
    fn wavelet_examples() {
        let spec = DeltaSpec::default();
        let x = c64(0.7, 0.0);
        let w = wavelet(WaveletIndex::new(0, 0), x, &spec).unwrap();
        assert!((w - phi(x).unwrap() * delta(x, &spec).unwrap().value).norm() < 1e-15);
        for (n, j) in [(-2, 3), (1, -1), (3, 5)] {
            let x = 1.37;
            let s = 2f64.powi(n);
            let w = wavelet(WaveletIndex::new(n, j), re(x), &spec).unwrap();
            let expected = s.sqrt() * phi(re(s * x - j as f64)).unwrap().norm();
            assert!((w.norm() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn wavelet_index_order() {
        let mut v = vec![WaveletIndex::new(1, -3), WaveletIndex::new(0, 4), WaveletIndex::new(0, -2)];
        v.sort();
        assert_eq!(v, vec![WaveletIndex::new(0, -2), WaveletIndex::new(0, 4), WaveletIndex::new(1, -3)]);
    }

    #[test]
    fn small_wavelet_gram() {
        let spec = DeltaSpec::default();
        let idx = [(0, 0), (1, 3), (-1, 1), (0, -2)];
        let funcs: Vec<_> = idx.iter().map(|&(n, j)| wavelet_function(WaveletIndex::new(n, j), spec)).collect();
        let (g, _) = gram(&funcs, &QuadratureSpec::windowed(16384, 1.0)).unwrap();
        assert!(identity_deviation(&g) < 1e-6, "{}", identity_deviation(&g));
    }

    #[test]
    fn wavelet_analysis_of_an_atom() {
        let spec = DeltaSpec::default();
        let quad = QuadratureSpec::windowed(16384, 1.0);
        let f = wavelet_function(WaveletIndex::new(1, 2), spec);
        let r = wavelet_analyze(&f, 0..=1, 1..=2, &spec, &quad).unwrap();
        assert_eq!(r.coeffs.len(), 4);
        for (idx, c) in &r.coeffs {
            let target = if *idx == WaveletIndex::new(1, 2) { 1.0 } else { 0.0 };
            assert!((c - target).norm() < 1e-6, "{idx:?}: {c}");
        }
        let (last, res) = r.residuals.last().unwrap();
        assert_eq!(*last, WaveletIndex::new(1, 2));
        assert!(*res < 1e-5);
    }

    #[test]
    fn wavelet_bessel() {
        let spec = DeltaSpec::default();
        let quad = QuadratureSpec::windowed(8192, 1.0);
        let f = HalfPlaneFunction::new("atom", 1.0, |x| Ok(1.0 / (PI.sqrt() * (x + I))));
        let r = wavelet_analyze(&f, -1..=1, -2..=2, &spec, &quad).unwrap();
        let energy: f64 = r.coeffs.iter().map(|(_, c)| c.norm_sqr()).sum();
        assert!(energy <= 1.0 + 1e-6);
        for w in r.residuals.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-6);
        }
    }

    proptest! {
        #[test]
        fn delta_unimodular(x in -1e4..1e4f64, j in 1u32..60) {
            let v = delta(re(x), &DeltaSpec::new(j, false).unwrap()).unwrap().value;
            prop_assert!((v.norm() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn g_inside_is_contractive(x in -10.0..10.0f64, y in 0.0..5.0f64) {
            prop_assert!(g(c64(x, y)).unwrap().norm() <= 1.0 + 1e-14);
        }
    }
}
