//! Finite Blaschke products on the unit disk and the upper half-plane.
//!
//! Infinite products are truncated by the caller, who also owns the tail
//! estimate. Products of more than [`LOG_SPACE_DEGREE`] factors are
//! accumulated as a sum of logarithms.

use num_complex::Complex64;

use crate::torus::{grid_points, TorusGridFunction};
use crate::{Error, Result};

pub const LOG_SPACE_DEGREE: usize = 128;
/// Minimal distance of a disk zero to the circle, and of a half-plane zero
/// to the real axis.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

fn product(factors: impl Iterator<Item = Complex64>, degree: usize) -> Complex64 {
    if degree <= LOG_SPACE_DEGREE {
        return factors.product();
    }
    let mut log = Complex64::new(0.0, 0.0);
    for f in factors {
        if f == Complex64::new(0.0, 0.0) {
            return f;
        }
        log += f.ln();
    }
    log.exp()
}

/// Möbius factor `(z - a)/(1 - ā z)`.
#[inline]
pub fn moebius(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (1.0 - a.conj() * z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskBlaschke {
    zeros: Vec<Complex64>,
}

impl DiskBlaschke {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.iter().any(|a| !(a.norm() <= 1.0 - BOUNDARY_MARGIN)) {
            return Err(Error::InvalidParameter("disk zeros must satisfy |a| <= 1 - 1e-12"));
        }
        Ok(Self { zeros })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// `∏ (z - a_j)/(1 - ā_j z)`; the empty product is 1.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        product(self.zeros.iter().map(|&a| moebius(a, z)), self.degree())
    }

    /// Boundary samples on an `n`-point grid, flagged analytic.
    pub fn sample(&self, n: usize) -> Result<TorusGridFunction> {
        let samples = grid_points(n).iter().map(|&z| self.eval(z)).collect();
        Ok(TorusGridFunction::from_samples(samples)?.assume_analytic())
    }
}

/// Normalizing factor attached to each half-plane zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `|1 + a²|/(1 + a²)`, taken as 1 for `a = i`.
    #[default]
    StandardFactor,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneBlaschke {
    zeros: Vec<Complex64>,
    convention: Convention,
}

fn standard_factor(a: Complex64) -> Complex64 {
    let d = 1.0 + a * a;
    let m = d.norm();
    if m < 1e-14 {
        Complex64::new(1.0, 0.0)
    } else {
        m / d
    }
}

impl HalfPlaneBlaschke {
    pub fn new(zeros: Vec<Complex64>, convention: Convention) -> Result<Self> {
        if zeros.iter().any(|a| !(a.im >= BOUNDARY_MARGIN)) {
            return Err(Error::InvalidParameter("half-plane zeros must satisfy Im a >= 1e-12"));
        }
        Ok(Self { zeros, convention })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Partial product over the first `truncation` zeros (all of them if
    /// `truncation` exceeds the list).
    pub fn eval(&self, x: Complex64, truncation: usize) -> Complex64 {
        let m = truncation.min(self.zeros.len());
        let conv = self.convention;
        let factors = self.zeros[..m].iter().map(move |&a| {
            let f = (x - a) / (x - a.conj());
            match conv {
                Convention::StandardFactor => standard_factor(a) * f,
                Convention::None => f,
            }
        });
        product(factors, m)
    }

    pub fn eval_all(&self, x: Complex64) -> Complex64 {
        self.eval(x, self.zeros.len())
    }
}
