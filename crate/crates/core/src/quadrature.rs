//! Inner products on `L²(ℝ)` for functions with boundary values on the
//! real line.
//!
//! Every rule compiles to a node set with two weight vectors: the primary
//! weights give the integral, the check weights give a lower-order value
//! whose distance from it is the error estimate. Both are linear, so a
//! whole Gram matrix costs one evaluation of each function per node.

use core::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{c64, Error, Result};

pub const DEFAULT_NODES: usize = 8192;
pub const MIN_NODES: usize = 64;
const PANEL_POINTS: usize = 16;

type Evaluator = dyn Fn(Complex64) -> Result<Complex64> + Send + Sync;

/// An evaluable function on the closed upper half-plane with a promised
/// decay `|f(x)| <= C/|x|^decay_exponent` on the real line.
#[derive(Clone)]
pub struct HalfPlaneFunction {
    eval: Arc<Evaluator>,
    decay_exponent: f64,
    label: String,
}

impl fmt::Debug for HalfPlaneFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfPlaneFunction")
            .field("label", &self.label)
            .field("decay_exponent", &self.decay_exponent)
            .finish()
    }
}

impl HalfPlaneFunction {
    pub fn new(
        label: impl Into<String>,
        decay_exponent: f64,
        eval: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Self { eval: Arc::new(eval), decay_exponent, label: label.into() }
    }

    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        (self.eval)(x)
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `Σ c_k f_k`; decay is the slowest among the summands.
    pub fn linear_combination(label: impl Into<String>, terms: Vec<(Complex64, HalfPlaneFunction)>) -> Self {
        let decay = terms.iter().map(|(_, f)| f.decay_exponent).fold(f64::INFINITY, f64::min);
        let decay = if decay.is_finite() { decay } else { f64::INFINITY };
        Self::new(label, decay, move |x| {
            let mut s = Complex64::new(0.0, 0.0);
            for (c, f) in &terms {
                s += c * f.eval(x)?;
            }
            Ok(s)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureRule {
    /// `x = tan(θ/2)` with the `M`-point midpoint rule in `θ`; the check
    /// value is the `M/2`-point midpoint rule. Spectrally accurate when the
    /// integrand is smooth at infinity (e.g. products of rational functions).
    Cayley,
    /// Composite 16-point Gauss–Legendre panels of width `panel_width` on
    /// `[-8L, 8L]`, `L = M · panel_width / 256`. The integral is taken with
    /// smooth cutoff windows at `L`, `2L` and `4L` and extrapolated so that
    /// the `1/L` and `1/L³` tail terms cancel; the check value cancels only
    /// `1/L`. Suited to integrands that oscillate at infinity, such as
    /// products of wavelets from different scales.
    WindowedExtrapolation { panel_width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub rule: QuadratureRule,
    /// When set, an error estimate above it is an error.
    pub tolerance: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes: DEFAULT_NODES, rule: QuadratureRule::Cayley, tolerance: None }
    }
}

impl QuadratureSpec {
    pub fn cayley(nodes: usize) -> Self {
        Self { nodes, rule: QuadratureRule::Cayley, tolerance: None }
    }

    pub fn windowed(nodes: usize, panel_width: f64) -> Self {
        Self { nodes, rule: QuadratureRule::WindowedExtrapolation { panel_width }, tolerance: None }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.nodes < MIN_NODES || !self.nodes.is_power_of_two() {
            return Err(Error::InvalidParameter("quadrature nodes must be a power of two >= 64"));
        }
        if let QuadratureRule::WindowedExtrapolation { panel_width } = self.rule {
            if !(panel_width > 0.0) {
                return Err(Error::InvalidParameter("panel width must be positive"));
            }
        }
        Ok(())
    }

    /// Compiles the rule into nodes and weights.
    pub fn compile(&self) -> Result<QuadratureNodes> {
        self.validate()?;
        Ok(match self.rule {
            QuadratureRule::Cayley => cayley_nodes(self.nodes),
            QuadratureRule::WindowedExtrapolation { panel_width } => windowed_nodes(self.nodes, panel_width),
        })
    }
}

/// Nodes on the real line with primary and check weights.
#[derive(Debug, Clone)]
pub struct QuadratureNodes {
    pub x: Vec<f64>,
    pub weights: Vec<f64>,
    pub check_weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub estimate: f64,
}

impl QuadratureNodes {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn sample(&self, f: &HalfPlaneFunction) -> Result<Vec<Complex64>> {
        self.x.iter().map(|&x| f.eval(c64(x, 0.0))).collect()
    }

    /// `∫ a conj(b)` from samples at the nodes.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Integral {
        let mut value = Complex64::new(0.0, 0.0);
        let mut check = Complex64::new(0.0, 0.0);
        for k in 0..self.x.len() {
            let p = a[k] * b[k].conj();
            value += p * self.weights[k];
            check += p * self.check_weights[k];
        }
        Integral { value, estimate: (value - check).norm() }
    }

    /// `(∫ |a|²)^{1/2}` from samples.
    pub fn norm(&self, a: &[Complex64]) -> f64 {
        self.inner(a, a).value.re.max(0.0).sqrt()
    }
}

fn cayley_nodes(m: usize) -> QuadratureNodes {
    let mut x = Vec::with_capacity(m + m / 2);
    let mut weights = Vec::with_capacity(m + m / 2);
    let mut check_weights = Vec::with_capacity(m + m / 2);
    for (count, primary) in [(m, true), (m / 2, false)] {
        let h = 2.0 * PI / count as f64;
        for k in 0..count {
            let t = (-PI + (k as f64 + 0.5) * h) / 2.0;
            let xk = t.tan();
            let w = h * (1.0 + xk * xk) / 2.0;
            x.push(xk);
            weights.push(if primary { w } else { 0.0 });
            check_weights.push(if primary { 0.0 } else { w });
        }
    }
    QuadratureNodes { x, weights, check_weights }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let step = p1 / dp;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -t;
        weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (nodes, weights)
}

// C^∞ step from 1 at t <= 0 to 0 at t >= 1.
fn smooth_step_down(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    b / (a + b)
}

fn window(x: f64, l: f64) -> f64 {
    smooth_step_down(x.abs() / l - 1.0)
}

fn windowed_nodes(m: usize, panel_width: f64) -> QuadratureNodes {
    let panels = m / PANEL_POINTS;
    let l = m as f64 * panel_width / 256.0;
    let (gx, gw) = gauss_legendre(PANEL_POINTS);
    let mut x = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    let mut check_weights = Vec::with_capacity(m);
    let half = panel_width / 2.0;
    for p in 0..panels {
        let centre = -8.0 * l + (p as f64 + 0.5) * panel_width;
        for (&t, &w) in gx.iter().zip(&gw) {
            let xk = centre + half * t;
            let wk = half * w;
            let (w1, w2, w4) = (window(xk, l), window(xk, 2.0 * l), window(xk, 4.0 * l));
            x.push(xk);
            weights.push(wk * (16.0 * w4 - 10.0 * w2 + w1) / 7.0);
            check_weights.push(wk * (2.0 * w4 - w2));
        }
    }
    QuadratureNodes { x, weights, check_weights }
}

fn check_decay(f: &HalfPlaneFunction, g: &HalfPlaneFunction) -> Result<()> {
    if f.decay_exponent + g.decay_exponent < 2.0 {
        return Err(Error::InvalidParameter("decay exponents must sum to at least 2"));
    }
    Ok(())
}

fn check_tolerance(spec: &QuadratureSpec, estimate: f64) -> Result<()> {
    match spec.tolerance {
        Some(tolerance) if estimate > tolerance => Err(Error::Quadrature { estimate, tolerance }),
        _ => Ok(()),
    }
}

/// `∫_ℝ f conj(g) dx` with its error estimate.
pub fn hp_integral(f: &HalfPlaneFunction, g: &HalfPlaneFunction, spec: &QuadratureSpec) -> Result<Integral> {
    check_decay(f, g)?;
    let nodes = spec.compile()?;
    let r = nodes.inner(&nodes.sample(f)?, &nodes.sample(g)?);
    check_tolerance(spec, r.estimate)?;
    Ok(r)
}

/// `∫_ℝ f conj(g) dx`.
pub fn hp_inner_product(f: &HalfPlaneFunction, g: &HalfPlaneFunction, spec: &QuadratureSpec) -> Result<Complex64> {
    hp_integral(f, g, spec).map(|r| r.value)
}

/// Gram matrix `⟨f_a, f_b⟩` and the largest error estimate among entries.
pub fn gram(funcs: &[HalfPlaneFunction], spec: &QuadratureSpec) -> Result<(Vec<Vec<Complex64>>, f64)> {
    for f in funcs {
        check_decay(f, f)?;
    }
    let nodes = spec.compile()?;
    let samples = funcs.iter().map(|f| nodes.sample(f)).collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    let n = funcs.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for a in 0..n {
        for b in a..n {
            let r = nodes.inner(&samples[a], &samples[b]);
            worst = worst.max(r.estimate);
            g[a][b] = r.value;
            g[b][a] = r.value.conj();
        }
    }
    check_tolerance(spec, worst)?;
    Ok((g, worst))
}

/// Largest entry of `|Gram - Identity|`.
pub fn identity_deviation(gram: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (a, row) in gram.iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    worst
}
