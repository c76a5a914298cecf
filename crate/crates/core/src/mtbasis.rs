//! Malmquist–Takenaka systems on the disk and the upper half-plane.
//!
//! Disk: `φ_n(z) = B_n(z) √(1-|a_n|²)/(1 - ā_n z)` with `B_n` the Blaschke
//! product over `a_0..a_{n-1}`. Half-plane: `φ_n(x) = (1/√π) ∏_{j<n} (x -
//! a_j)/(x - ā_j) · 1/(x - ā_n)`, without convergence factors. The
//! half-plane inner product is `∫_ℝ f ḡ dx` (no `1/2π`).

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::blaschke::{moebius, BOUNDARY_MARGIN};
use crate::quadrature::{HalfPlaneFunction, QuadratureSpec};
use crate::torus::{grid_points, inner_product, lp_norm, TorusGridFunction};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Disk,
    HalfPlane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MtSystem {
    domain: Domain,
    points: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MtCoefficients {
    pub values: Vec<Complex64>,
    /// `residual_norms[n] = ‖f - Σ_{k<=n} c_k φ_k‖₂`.
    pub residual_norms: Vec<f64>,
}

impl MtSystem {
    pub fn new(domain: Domain, points: Vec<Complex64>) -> Result<Self> {
        let ok = match domain {
            Domain::Disk => points.iter().all(|a| a.norm() <= 1.0 - BOUNDARY_MARGIN),
            Domain::HalfPlane => points.iter().all(|a| a.im >= BOUNDARY_MARGIN),
        };
        if !ok {
            return Err(Error::InvalidParameter("system point outside the open domain"));
        }
        Ok(Self { domain, points })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Partial sum of `Σ (1 - |a_n|²)` (disk) or `Σ Im a_n/(1 + |a_n|²)`
    /// (half-plane) over the supplied points. Completeness of an infinite
    /// system hinges on this series diverging.
    pub fn divergence_partial_sum(&self) -> f64 {
        match self.domain {
            Domain::Disk => self.points.iter().map(|a| 1.0 - a.norm_sqr()).sum(),
            Domain::HalfPlane => self.points.iter().map(|a| a.im / (1.0 + a.norm_sqr())).sum(),
        }
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n < self.points.len() {
            Ok(())
        } else {
            Err(Error::Index { index: n, len: self.points.len() })
        }
    }

    /// `φ_n(x)`.
    pub fn mt_function(&self, n: usize, x: Complex64) -> Result<Complex64> {
        self.check_index(n)?;
        Ok(match self.domain {
            Domain::Disk => disk_atom(&self.points[..=n], x),
            Domain::HalfPlane => halfplane_atom(&self.points[..=n], x),
        })
    }

    /// `φ_n` as a half-plane function (decay exponent 1).
    pub fn halfplane_function(&self, n: usize) -> Result<HalfPlaneFunction> {
        self.check_index(n)?;
        if self.domain != Domain::HalfPlane {
            return Err(Error::InvalidParameter("system is not on the half-plane"));
        }
        let pts = self.points[..=n].to_vec();
        Ok(HalfPlaneFunction::new(format!("mt[{n}]"), 1.0, move |x| Ok(halfplane_atom(&pts, x))))
    }

    /// `φ_0..φ_{count-1}` sampled on an `n`-point circle grid.
    pub fn sample_disk(&self, count: usize, n: usize) -> Result<Vec<TorusGridFunction>> {
        if self.domain != Domain::Disk {
            return Err(Error::InvalidParameter("system is not on the disk"));
        }
        if count > self.points.len() {
            return Err(Error::Index { index: count, len: self.points.len() });
        }
        let z = grid_points(n);
        let mut b = vec![Complex64::new(1.0, 0.0); n];
        let mut out = Vec::with_capacity(count);
        for &a in &self.points[..count] {
            let s = (1.0 - a.norm_sqr()).sqrt();
            let samples = z.iter().zip(&b).map(|(&z, &bz)| bz * s / (1.0 - a.conj() * z)).collect();
            out.push(TorusGridFunction::from_samples(samples)?.assume_analytic());
            for (bz, &z) in b.iter_mut().zip(z.iter()) {
                *bz *= moebius(a, z);
            }
        }
        Ok(out)
    }
}

fn disk_atom(pts: &[Complex64], z: Complex64) -> Complex64 {
    let (&a, prev) = pts.split_last().expect("nonempty prefix");
    let b: Complex64 = prev.iter().map(|&p| moebius(p, z)).product();
    b * (1.0 - a.norm_sqr()).sqrt() / (1.0 - a.conj() * z)
}

fn halfplane_atom(pts: &[Complex64], x: Complex64) -> Complex64 {
    let (&a, prev) = pts.split_last().expect("nonempty prefix");
    let b: Complex64 = prev.iter().map(|&p| (x - p) / (x - p.conj())).product();
    b * (a.im / PI).sqrt() / (x - a.conj())
}

/// Coefficients `⟨f, φ_n⟩` for `n < count` and residuals after each.
pub fn analyze_disk(f: &TorusGridFunction, sys: &MtSystem, count: usize) -> Result<MtCoefficients> {
    if !f.is_analytic() {
        return Err(Error::NotAnalytic);
    }
    let basis = sys.sample_disk(count, f.len())?;
    let mut residual = f.clone();
    let mut out = MtCoefficients::default();
    for phi in &basis {
        let c = inner_product(f, phi)?;
        residual = &residual - &phi.scale(c);
        out.values.push(c);
        out.residual_norms.push(lp_norm(&residual, 2.0));
    }
    Ok(out)
}

/// `Σ_{n<count} c_n φ_n` on an `n`-point grid.
pub fn synthesize(sys: &MtSystem, coeffs: &[Complex64], count: usize, n: usize) -> Result<TorusGridFunction> {
    if count > coeffs.len() {
        return Err(Error::Index { index: count, len: coeffs.len() });
    }
    let basis = sys.sample_disk(count, n)?;
    let mut acc = TorusGridFunction::zero(n)?;
    for (phi, &c) in basis.iter().zip(coeffs) {
        acc = &acc + &phi.scale(c);
    }
    Ok(acc)
}

/// Half-plane coefficients by quadrature; residuals are quadratures of
/// `|f - partial sum|²` on the same nodes.
pub fn analyze_halfplane(
    f: &HalfPlaneFunction,
    sys: &MtSystem,
    count: usize,
    quad: &QuadratureSpec,
) -> Result<MtCoefficients> {
    if sys.domain != Domain::HalfPlane {
        return Err(Error::InvalidParameter("system is not on the half-plane"));
    }
    if count > sys.len() {
        return Err(Error::Index { index: count, len: sys.len() });
    }
    if f.decay_exponent() < 1.0 {
        return Err(Error::InvalidParameter("decay exponent must be at least 1"));
    }
    let nodes = quad.compile()?;
    let mut residual = nodes.sample(f)?;
    let fs = residual.clone();
    let mut out = MtCoefficients::default();
    let mut worst = 0.0f64;
    for n in 0..count {
        let phi = nodes.sample(&sys.halfplane_function(n)?)?;
        let c = nodes.inner(&fs, &phi);
        worst = worst.max(c.estimate);
        for (r, p) in residual.iter_mut().zip(&phi) {
            *r -= c.value * p;
        }
        out.values.push(c.value);
        out.residual_norms.push(nodes.norm(&residual));
    }
    if let Some(tolerance) = quad.tolerance {
        if worst > tolerance {
            return Err(Error::Quadrature { estimate: worst, tolerance });
        }
    }
    Ok(out)
}
