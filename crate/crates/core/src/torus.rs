//! Functions on the unit circle sampled on a uniform grid.
//!
//! A [`TorusGridFunction`] holds `N` samples at `θ_k = 2πk/N` (`N` a power
//! of two). Its spectral view has coefficient index `k` for frequency `k`
//! when `k < N/2` and frequency `k - N` otherwise; the Nyquist bin counts as
//! negative. "Analytic" therefore means the bins `N/2..N` vanish.

use core::f64::consts::PI;
use core::ops::{Add, Mul, Sub};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_complex::Complex64;

use crate::{fft, Error, Result};

pub const DEFAULT_GRID: usize = 4096;
/// Relative size of negative-frequency coefficients tolerated by the
/// analytic flag.
pub const ANALYTIC_TOL: f64 = 1e-10;
pub const DEFAULT_FLOOR_EPS: f64 = 1e-12;
/// Largest modulus deviation of the inner factor accepted by
/// [`inner_outer_factor`].
pub const MAX_INNER_DEVIATION: f64 = 1e-3;
/// Modulus tolerance for arguments that must be inner.
pub const INNER_TOL: f64 = 1e-8;
/// Zeros within `NEAR_ZERO_WIDTH / N` of the circle are deflated before the
/// cepstral step, which leaves an aliasing tail of about `e^{-NEAR_ZERO_WIDTH/2}`.
pub const NEAR_ZERO_WIDTH: f64 = 80.0;
/// Upper limit on that distance for coarse grids.
pub const MAX_NEAR_ZERO_DISTANCE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct TorusGridFunction {
    samples: Vec<Complex64>,
    analytic: bool,
}

fn check_size(n: usize) -> Result<()> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::GridSize(n))
    }
}

/// Grid point `e^{iθ_k}`.
pub fn grid_point(n: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

thread_local! {
    static ROOTS: RefCell<HashMap<usize, Rc<[Complex64]>>> = RefCell::new(HashMap::new());
}

/// All `n` grid points, cached per thread.
pub(crate) fn grid_points(n: usize) -> Rc<[Complex64]> {
    ROOTS.with(|r| r.borrow_mut().entry(n).or_insert_with(|| (0..n).map(|k| grid_point(n, k)).collect()).clone())
}

impl TorusGridFunction {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        check_size(samples.len())?;
        Ok(Self { samples, analytic: false })
    }

    /// Samples `f(e^{iθ_k})`. The analytic flag is left unset; see
    /// [`TorusGridFunction::check_analytic`].
    pub fn from_fn(n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        check_size(n)?;
        let samples = grid_points(n).iter().map(|&z| f(z)).collect();
        Ok(Self { samples, analytic: false })
    }

    /// Synthesizes `Σ_m coeffs[m] z^{first_index + m}` on the grid.
    ///
    /// Frequencies must fit in `[-N/2, N/2)`; the result is flagged analytic
    /// when `first_index >= 0`.
    pub fn from_coefficients(n: usize, coeffs: &[Complex64], first_index: i64) -> Result<Self> {
        check_size(n)?;
        let half = (n / 2) as i64;
        let last = first_index + coeffs.len() as i64 - 1;
        if !coeffs.is_empty() && (first_index < -half || last >= half) {
            return Err(Error::InvalidParameter("coefficient range does not fit the grid"));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (m, &c) in coeffs.iter().enumerate() {
            let freq = first_index + m as i64;
            buf[freq.rem_euclid(n as i64) as usize] = c;
        }
        fft::samples(&mut buf);
        Ok(Self { samples: buf, analytic: first_index >= 0 })
    }

    pub fn constant(n: usize, c: Complex64) -> Result<Self> {
        check_size(n)?;
        Ok(Self { samples: vec![c; n], analytic: true })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::constant(n, Complex64::new(0.0, 0.0))
    }

    /// `z^k` for `0 <= k < N/2`.
    pub fn monomial(n: usize, k: usize) -> Result<Self> {
        check_size(n)?;
        if k >= n / 2 {
            return Err(Error::InvalidParameter("monomial degree must be below N/2"));
        }
        Ok(Self { samples: (0..n).map(|j| grid_point(n, (j * k) % n)).collect(), analytic: true })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn is_analytic(&self) -> bool {
        self.analytic
    }

    /// Fourier coefficients in FFT order (see the module docs).
    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut buf = self.samples.clone();
        fft::coefficients(&mut buf);
        buf
    }

    /// Largest negative-frequency coefficient relative to the `L²` norm.
    pub fn negative_frequency_ratio(&self) -> f64 {
        let c = self.coefficients();
        let n = c.len();
        let norm = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        c[n / 2..].iter().map(|x| x.norm()).fold(0.0, f64::max) / norm
    }

    /// Sets the analytic flag after checking the negative spectrum against
    /// `tol`.
    pub fn check_analytic(mut self, tol: f64) -> Result<Self> {
        if self.negative_frequency_ratio() <= tol {
            self.analytic = true;
            Ok(self)
        } else {
            Err(Error::NotAnalytic)
        }
    }

    /// Marks the function analytic without checking.
    pub fn assume_analytic(mut self) -> Self {
        self.analytic = true;
        self
    }

    /// The same trigonometric polynomial on an `n`-point grid: the spectrum
    /// is zero-padded or cut at `±n/2`.
    pub fn resample(&self, n: usize) -> Result<Self> {
        check_size(n)?;
        let c = self.coefficients();
        let m = self.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let half = m.min(n) / 2;
        buf[..half].copy_from_slice(&c[..half]);
        for k in 1..=half {
            buf[n - k] = c[m - k];
        }
        fft::samples(&mut buf);
        Ok(Self { samples: buf, analytic: self.analytic })
    }

    /// Interior value `Σ_{k >= 0} c_k z^k` from the nonnegative spectrum.
    pub fn eval_interior(&self, z: Complex64) -> Complex64 {
        eval_power_series(&self.coefficients()[..self.len() / 2], z)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// `L²` norm with respect to `dθ/2π`.
    pub fn norm(&self) -> f64 {
        lp_norm(self, 2.0)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { samples: self.samples.iter().map(|&s| f(s)).collect(), analytic: false }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { samples: self.samples.iter().map(|&s| s * c).collect(), analytic: self.analytic }
    }

    pub fn conj(&self) -> Self {
        Self { samples: self.samples.iter().map(|s| s.conj()).collect(), analytic: false }
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64, analytic: bool) -> Self {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        Self { samples, analytic }
    }

    /// Largest pointwise deviation `max_k ||u(θ_k)| - 1|`.
    pub fn modulus_deviation(&self) -> f64 {
        self.samples.iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest pointwise distance to `other`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn eval_power_series(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Pointwise operations; both operands must share the grid (panics
/// otherwise).
impl Add for &TorusGridFunction {
    type Output = TorusGridFunction;
    fn add(self, rhs: Self) -> TorusGridFunction {
        self.zip(rhs, |a, b| a + b, self.analytic && rhs.analytic)
    }
}

impl Sub for &TorusGridFunction {
    type Output = TorusGridFunction;
    fn sub(self, rhs: Self) -> TorusGridFunction {
        self.zip(rhs, |a, b| a - b, self.analytic && rhs.analytic)
    }
}

impl Mul for &TorusGridFunction {
    type Output = TorusGridFunction;
    fn mul(self, rhs: Self) -> TorusGridFunction {
        self.zip(rhs, |a, b| a * b, self.analytic && rhs.analytic)
    }
}

#[derive(Debug, Clone)]
pub struct InnerOuterPair {
    pub inner: TorusGridFunction,
    pub outer: TorusGridFunction,
    /// `max_k ||inner(θ_k)| - 1|`; nonzero only where `|f|` was floored.
    pub delta: f64,
    /// Larger negative-frequency ratio of the two factors. Both are analytic,
    /// so this is spectrum folded over from beyond `N/2`: the grid does not
    /// resolve a factor (typically a zero very close to the circle) when it
    /// is not small.
    pub aliasing: f64,
    /// Zeros of `f` near the circle that were divided out before taking
    /// the logarithm.
    pub deflated_zeros: Vec<Complex64>,
}

/// Orthogonal projection of `L²(𝕋)` onto `H²`: drops negative frequencies.
pub fn riesz_project(f: &TorusGridFunction) -> TorusGridFunction {
    let n = f.len();
    let mut buf = f.samples.clone();
    fft::coefficients(&mut buf);
    for c in &mut buf[n / 2..] {
        *c = Complex64::new(0.0, 0.0);
    }
    fft::samples(&mut buf);
    TorusGridFunction { samples: buf, analytic: true }
}

/// Orthogonal projection onto `uH²`, i.e. `u · H(ū f)`.
pub fn project_invariant(f: &TorusGridFunction, u: &TorusGridFunction) -> Result<TorusGridFunction> {
    if f.len() != u.len() {
        return Err(Error::GridMismatch(f.len(), u.len()));
    }
    let deviation = u.modulus_deviation();
    if deviation > INNER_TOL {
        return Err(Error::NotInner { deviation });
    }
    let inner = riesz_project(&f.zip(u, |a, b| a * b.conj(), false));
    Ok(u.zip(&inner, |a, b| a * b, u.analytic))
}

/// Cepstral inner–outer factorization `f = inner · outer`.
///
/// The logarithm of `|f|` is only resolved by the grid when the zeros of `f`
/// keep a distance of a few `1/N` from the circle. Zeros closer than
/// [`NEAR_ZERO_WIDTH`]`/N` (at most [`MAX_NEAR_ZERO_DISTANCE`]) are therefore located by Newton's method on the
/// power series and divided out first: a zero `a` inside the disk
/// contributes the Möbius factor `(z - a)/(1 - āz)` to the inner part and
/// `1 - āz` to the outer part, a zero `b` on or outside the circle
/// contributes `1 - z/b` to the outer part. What remains is factored as
/// `exp` of the analytic completion of `log|f|` (floored at
/// `floor_eps · max`), the inner factor being the quotient. Fails when
/// flooring pushes `|inner|` more than [`MAX_INNER_DEVIATION`] away from 1.
pub fn inner_outer_factor(f: &TorusGridFunction, floor_eps: f64) -> Result<InnerOuterPair> {
    if !f.analytic {
        return Err(Error::NotAnalytic);
    }
    let max = f.max_abs();
    if max < 1e-300 {
        return Err(Error::ZeroFunction(max));
    }
    let n = f.len();
    let (work, deflated_zeros) = deflate_near_zeros(f, floor_eps * max);

    let work_floor = floor_eps * work.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let mut buf: Vec<Complex64> = work.iter().map(|s| Complex64::new(s.norm().max(work_floor).ln(), 0.0)).collect();
    fft::coefficients(&mut buf);
    for c in &mut buf[1..n / 2] {
        *c *= 2.0;
    }
    for c in &mut buf[n / 2 + 1..] {
        *c = Complex64::new(0.0, 0.0);
    }
    fft::samples(&mut buf);
    let mut outer: Vec<Complex64> = buf.into_iter().map(|l| l.exp()).collect();
    let mut inner: Vec<Complex64> = work.iter().zip(&outer).map(|(a, b)| a / b).collect();
    for (k, &z) in grid_points(n).iter().enumerate() {
        for &a in &deflated_zeros {
            if is_inside(a) {
                let o = 1.0 - a.conj() * z;
                inner[k] *= (z - a) / o;
                outer[k] *= o;
            } else {
                outer[k] *= 1.0 - z / a;
            }
        }
    }
    let inner = TorusGridFunction { samples: inner, analytic: true };
    let outer = TorusGridFunction { samples: outer, analytic: true };
    let delta = inner.modulus_deviation();
    if delta > MAX_INNER_DEVIATION {
        return Err(Error::IllConditioned { delta, limit: MAX_INNER_DEVIATION });
    }
    let aliasing = outer.negative_frequency_ratio().max(inner.negative_frequency_ratio());
    Ok(InnerOuterPair { inner, outer, delta, aliasing, deflated_zeros })
}

// Returns the samples of f with its near-circle zeros divided out, and those
// zeros. Root iterations start from grid points whose first-order distance
// estimate |f|/|f'| is within twice the width, or which sit below `floor`.
fn deflate_near_zeros(f: &TorusGridFunction, floor: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = f.len();
    let width = (NEAR_ZERO_WIDTH / n as f64).min(MAX_NEAR_ZERO_DISTANCE);
    let step = 2.0 * PI / n as f64;
    let mut work = f.samples.clone();
    let mut coeffs: Option<Vec<Complex64>> = None;
    let mut zeros = Vec::new();
    while zeros.len() < n / 4 {
        let mut candidates: Vec<(f64, usize)> = Vec::new();
        for k in 0..n {
            let m = work[k].norm();
            let slope = ((work[(k + 1) % n] - work[(k + n - 1) % n]) / (2.0 * step)).norm();
            let estimate = if m < floor { 0.0 } else { m / slope };
            if estimate <= 2.0 * width {
                candidates.push((estimate, k));
            }
        }
        if candidates.is_empty() {
            break;
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
        let c = coeffs.get_or_insert_with(|| {
            let mut c = f.coefficients();
            c.truncate(n / 2);
            c
        });
        let before = zeros.len();
        // starts within one width of an earlier start lead to the same zero;
        // a second zero there is found on the next pass
        let span = (width / step).ceil() as usize;
        let mut tried = vec![false; n];
        let mut len = significant_len(c);
        for &(_, k) in &candidates {
            if tried[k] {
                continue;
            }
            for j in k + n - span.min(n / 2)..=k + n + span.min(n / 2) {
                tried[j % n] = true;
            }
            let Some(a) = newton_zero(&c[..len], grid_point(n, k), 4.0 * width) else { continue };
            if (a.norm() - 1.0).abs() > width {
                continue;
            }
            if is_inside(a) {
                divide_inside(c, a);
            } else {
                deflate(c, 1.0 / a);
            }
            len = significant_len(c);
            zeros.push(a);
        }
        if zeros.len() == before {
            break;
        }
        work.iter_mut().for_each(|w| *w = Complex64::new(0.0, 0.0));
        work[..n / 2].copy_from_slice(c);
        fft::samples(&mut work);
    }
    (work, zeros)
}

// Zeros this close to the circle count as boundary zeros (outer factors).
fn is_inside(a: Complex64) -> bool {
    a.norm() < 1.0 - 1e-12
}

// Number of leading coefficients above the rounding level.
fn significant_len(c: &[Complex64]) -> usize {
    let max = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    c.iter().rposition(|x| x.norm() > 1e-13 * max).map_or(0, |k| k + 1)
}

// Root iteration on the (trimmed) power series from `start`; None when it does not
// settle, strays more than `reach` from the circle, or the evaluation near
// |z| = 1 would amplify rounding too much.
fn newton_zero(c: &[Complex64], start: Complex64, reach: f64) -> Option<Complex64> {
    if c.len() < 2 {
        return None;
    }
    let mut a = start;
    let mut converged = 0;
    for _ in 0..60 {
        if (a.norm() - 1.0).abs() > reach || a.norm().powi(c.len() as i32) > 1e6 {
            return None;
        }
        let zero = Complex64::new(0.0, 0.0);
        let (v, d, dd) = c.iter().rev().fold((zero, zero, zero), |(v, d, dd), &ck| (v * a + ck, d * a + v, dd * a + d));
        // Newton on f/f', quadratic at multiple zeros as well (dd is f''/2)
        let den = d * d - v * dd * 2.0;
        if v.norm() == 0.0 {
            return Some(a);
        }
        if den.norm() == 0.0 {
            return None;
        }
        let dz = v * d / den;
        a -= dz;
        if dz.norm() <= 1e-13 {
            converged += 1;
            if converged == 2 {
                return Some(a);
            }
        }
    }
    None
}

// Divides the power series by (z - a), |a| < 1, running down from the top.
fn divide_inside(c: &mut [Complex64], a: Complex64) {
    for k in (1..c.len()).rev() {
        let q = c[k];
        c[k - 1] += a * q;
    }
    c.rotate_left(1);
    if let Some(last) = c.last_mut() {
        *last = Complex64::new(0.0, 0.0);
    }
}

// Divides the power series by (1 - w z) in place: q_k = f_k + w q_{k-1}.
fn deflate(coeffs: &mut [Complex64], w: Complex64) {
    let mut prev = Complex64::new(0.0, 0.0);
    for c in coeffs.iter_mut() {
        *c += w * prev;
        prev = *c;
    }
}

/// `((1/N) Σ |f(θ_k)|^p)^{1/p}`; a norm for `p >= 1`.
pub fn lp_norm(f: &TorusGridFunction, p: f64) -> f64 {
    let n = f.len() as f64;
    if p == 2.0 {
        return (f.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / n).sqrt();
    }
    (f.samples.iter().map(|s| s.norm().powf(p)).sum::<f64>() / n).powf(1.0 / p)
}

/// `(1/N) Σ f(θ_k) conj g(θ_k)`.
pub fn inner_product(f: &TorusGridFunction, g: &TorusGridFunction) -> Result<Complex64> {
    if f.len() != g.len() {
        return Err(Error::GridMismatch(f.len(), g.len()));
    }
    let s: Complex64 = f.samples.iter().zip(&g.samples).map(|(a, b)| a * b.conj()).sum();
    Ok(s / f.len() as f64)
}
