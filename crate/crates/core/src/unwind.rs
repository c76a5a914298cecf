//! Phase unwinding on the torus.
//!
//! Starting from `f_0 = f`, each step projects `f_n` onto `v H²` for an
//! inner `v`, `h_n = H_v f_n`, keeps `g_n = f_n - h_n` and factors
//! `h_n = u_{n+1} f_{n+1}` into inner and outer parts. Then
//! `f = g_0 + u_1 g_1 + u_1u_2 g_2 + ⋯ + u_1⋯u_N f_N` with orthogonal terms.
//!
//! The constant-subtraction variant instead takes `g_n = f_n(z_n)` and
//! factors `f_n - g_n`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::blaschke::DiskBlaschke;
use crate::torus::{
    eval_power_series, inner_outer_factor, lp_norm, project_invariant, riesz_project, TorusGridFunction,
    DEFAULT_FLOOR_EPS,
};
use crate::{fft, Error, Result};

pub const DEFAULT_STOP_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-8;
/// Largest `|z_n|` accepted by the constant-subtraction variant.
pub const MAX_EVAL_RADIUS: f64 = 0.99;

/// An inner function supplied to the fixed strategy.
#[derive(Debug, Clone, PartialEq)]
pub enum InnerSpec {
    Blaschke(DiskBlaschke),
    Grid(TorusGridFunction),
}

impl InnerSpec {
    fn sample(&self, n: usize) -> Result<TorusGridFunction> {
        match self {
            InnerSpec::Blaschke(b) => b.sample(n),
            InnerSpec::Grid(u) if u.len() == n => Ok(u.clone()),
            InnerSpec::Grid(u) => Err(Error::GridMismatch(n, u.len())),
        }
    }
}

/// Polar candidate grid for greedy selection: the origin, then radii
/// `k·r_max/R` (`k = 1..=R`) times angles `2πm/M`, radius-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateGrid {
    pub radii: usize,
    pub angles: usize,
    pub r_max: f64,
}

impl Default for CandidateGrid {
    fn default() -> Self {
        Self { radii: 16, angles: 64, r_max: 0.98 }
    }
}

impl CandidateGrid {
    pub fn new(radii: usize, angles: usize, r_max: f64) -> Result<Self> {
        if radii == 0 || angles == 0 || !(r_max > 0.0 && r_max <= 1.0 - 1e-6) {
            return Err(Error::InvalidParameter("candidate grid needs R, M >= 1 and 0 < r_max <= 1 - 1e-6"));
        }
        Ok(Self { radii, angles, r_max })
    }

    pub fn len(&self) -> usize {
        1 + self.radii * self.angles
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, index: usize) -> Complex64 {
        if index == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = (index - 1) / self.angles + 1;
        let m = (index - 1) % self.angles;
        let r = k as f64 * self.r_max / self.radii as f64;
        Complex64::from_polar(r, 2.0 * PI * m as f64 / self.angles as f64)
    }

    /// Index of the candidate maximizing `|f(a)|√(1 - |a|²)`, where `f` is
    /// given by its nonnegative Fourier coefficients; lowest index on ties.
    pub fn select(&self, coeffs: &[Complex64]) -> (usize, f64) {
        let mut best = (0, coeffs.first().map_or(0.0, |c| c.norm()));
        let m = self.angles;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for k in 1..=self.radii {
            let r = k as f64 * self.r_max / self.radii as f64;
            let weight = (1.0 - r * r).sqrt();
            buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            let mut rk = 1.0;
            for (d, &c) in coeffs.iter().enumerate() {
                buf[d % m] += c * rk;
                rk *= r;
                if rk < 1e-300 {
                    break;
                }
            }
            // values at e^{2πim/M}: Σ_d b_d e^{2πi d m/M}
            fft::samples(&mut buf);
            for (mi, v) in buf.iter().enumerate() {
                let score = v.norm() * weight;
                if score > best.1 {
                    best = (1 + (k - 1) * m + mi, score);
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnwindStrategy {
    /// Inner functions `v_1, v_2, …`; the last one is reused once the list
    /// is exhausted.
    FixedInner(Vec<InnerSpec>),
    /// `v_n(z) = (z - a_n)/(1 - ā_n z)`, last point reused.
    Moebius(Vec<Complex64>),
    /// Per step, the Möbius factor from the candidate grid that maximizes
    /// `‖g_n‖₂ = |f_n(a)|√(1 - |a|²)`.
    GreedyAfd(CandidateGrid),
    /// `g_n = f_n(z_n)` and `f_n - g_n = u_{n+1} f_{n+1}`, last point reused.
    ConstantSubtract(Vec<Complex64>),
}

impl UnwindStrategy {
    fn validate(&self) -> Result<()> {
        match self {
            UnwindStrategy::FixedInner(v) if v.is_empty() => {
                Err(Error::InvalidParameter("fixed strategy needs at least one inner function"))
            }
            UnwindStrategy::Moebius(a) if a.is_empty() || a.iter().any(|a| a.norm() >= 1.0 - 1e-12) => {
                Err(Error::InvalidParameter("Moebius points must lie in the open disk"))
            }
            UnwindStrategy::ConstantSubtract(z) if z.is_empty() || z.iter().any(|z| z.norm() > MAX_EVAL_RADIUS) => {
                Err(Error::InvalidParameter("evaluation points must satisfy |z| <= 0.99"))
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            UnwindStrategy::FixedInner(_) => "fixed_inner",
            UnwindStrategy::Moebius(_) => "moebius",
            UnwindStrategy::GreedyAfd(_) => "greedy_afd",
            UnwindStrategy::ConstantSubtract(_) => "constant_subtract",
        }
    }
}

fn nth<T>(v: &[T], n: usize) -> &T {
    &v[n.min(v.len() - 1)]
}

/// Result of one projection step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub g: TorusGridFunction,
    /// `(u_{n+1}, f_{n+1})`, absent when the step stopped.
    pub next: Option<(TorusGridFunction, TorusGridFunction)>,
    pub stopped: bool,
    /// Modulus deviation of `u_{n+1}` from 1.
    pub delta: f64,
    /// `max |H_v u_{n+1} - u_{n+1}|`, zero when `u_{n+1}/v` is inner. For a
    /// single Möbius factor at `a` (and for constant subtraction at `a`)
    /// this is `|u_{n+1}(a)|`.
    pub divisibility_defect: f64,
    /// Folded-over spectrum of the factors (see [`crate::torus::InnerOuterPair::aliasing`]).
    pub aliasing: f64,
}

/// One step against the inner function `v`; stops when `‖h‖₂ <= stop_below`.
pub fn unwind_step(f: &TorusGridFunction, v: &TorusGridFunction, stop_below: f64) -> Result<StepOutcome> {
    step_with(f, v, stop_below, |u| Ok(project_invariant(u, v)?.max_distance(u)))
}

fn step_with(
    f: &TorusGridFunction,
    v: &TorusGridFunction,
    stop_below: f64,
    defect: impl FnOnce(&TorusGridFunction) -> Result<f64>,
) -> Result<StepOutcome> {
    if !f.is_analytic() {
        return Err(Error::NotAnalytic);
    }
    let h = project_invariant(f, v)?.assume_analytic();
    if h.norm() <= stop_below {
        return Ok(StepOutcome {
            g: f.clone(),
            next: None,
            stopped: true,
            delta: 0.0,
            divisibility_defect: 0.0,
            aliasing: 0.0,
        });
    }
    let g = (f - &h).assume_analytic();
    let pair = inner_outer_factor(&h, DEFAULT_FLOOR_EPS)?;
    let divisibility_defect = defect(&pair.inner)?;
    Ok(StepOutcome {
        g,
        next: Some((pair.inner, pair.outer)),
        stopped: false,
        delta: pair.delta,
        divisibility_defect,
        aliasing: pair.aliasing,
    })
}

/// Constant-subtraction step: `g = f(z)`, `f - g = u f'`.
pub fn constant_subtract_step(f: &TorusGridFunction, z: Complex64, stop_below: f64) -> Result<StepOutcome> {
    if !f.is_analytic() {
        return Err(Error::NotAnalytic);
    }
    let n = f.len();
    let c = f.eval_interior(z);
    let gc = TorusGridFunction::constant(n, c)?;
    let h = f - &gc;
    if h.norm() <= stop_below {
        return Ok(StepOutcome {
            g: f.clone(),
            next: None,
            stopped: true,
            delta: 0.0,
            divisibility_defect: 0.0,
            aliasing: 0.0,
        });
    }
    let pair = inner_outer_factor(&h, DEFAULT_FLOOR_EPS)?;
    // u must vanish at z
    let divisibility_defect = pair.inner.eval_interior(z).norm();
    Ok(StepOutcome {
        g: gc,
        next: Some((pair.inner, pair.outer)),
        stopped: false,
        delta: pair.delta,
        divisibility_defect,
        aliasing: pair.aliasing,
    })
}

#[derive(Debug, Clone)]
pub struct UnwindTerm {
    pub g: TorusGridFunction,
    /// `U_n = u_1⋯u_n` (`U_0 = 1`).
    pub cumulative: TorusGridFunction,
    /// Möbius parameter used for this step, when the strategy has one.
    pub point: Option<Complex64>,
    pub delta: f64,
    pub divisibility_defect: f64,
    pub aliasing: f64,
}

impl UnwindTerm {
    /// `U_n g_n`.
    pub fn product(&self) -> TorusGridFunction {
        &self.cumulative * &self.g
    }
}

#[derive(Debug, Clone)]
pub struct UnwindExpansion {
    pub terms: Vec<UnwindTerm>,
    /// `f_N`; zero once the recursion stopped.
    pub residual: TorusGridFunction,
    /// `U_N`, multiplying the residual.
    pub residual_inner: TorusGridFunction,
    pub stopped: bool,
    /// `max |f - Σ U_n g_n - U_N f_N|` on the grid.
    pub reconstruction_error: f64,
}

impl UnwindExpansion {
    /// Grid size the expansion was computed on.
    pub fn grid(&self) -> usize {
        self.residual.len()
    }

    /// Largest [`UnwindTerm::aliasing`] over the steps.
    pub fn max_aliasing(&self) -> f64 {
        self.terms.iter().map(|t| t.aliasing).fold(0.0, f64::max)
    }

    /// `U_N f_N`.
    pub fn residual_term(&self) -> TorusGridFunction {
        &self.residual_inner * &self.residual
    }
}

/// Runs the recursion for at most `max_terms` steps.
pub fn unwind(
    f: &TorusGridFunction,
    strategy: &UnwindStrategy,
    max_terms: usize,
    stop_tol: f64,
) -> Result<UnwindExpansion> {
    run(f, strategy, max_terms, stop_tol, f64::INFINITY).map(|e| e.expect("no abort level"))
}

// The recursion; gives up (None) at the first step whose factors alias by
// more than `abort_above`.
fn run(
    f: &TorusGridFunction,
    strategy: &UnwindStrategy,
    max_terms: usize,
    stop_tol: f64,
    abort_above: f64,
) -> Result<Option<UnwindExpansion>> {
    if !f.is_analytic() {
        return Err(Error::NotAnalytic);
    }
    strategy.validate()?;
    let n = f.len();
    let f_norm = f.norm();
    if f_norm == 0.0 {
        return Err(Error::ZeroFunction(0.0));
    }
    let stop_below = stop_tol * f_norm;
    let mut current = f.clone();
    let mut cumulative = TorusGridFunction::constant(n, Complex64::new(1.0, 0.0))?;
    let mut terms = Vec::new();
    let mut stopped = false;
    for step in 0..max_terms {
        let attach = |e: Error| Error::Step { step, source: Box::new(e) };
        let (outcome, point) = match strategy {
            UnwindStrategy::FixedInner(vs) => {
                let v = nth(vs, step).sample(n).map_err(attach)?;
                (unwind_step(&current, &v, stop_below).map_err(attach)?, None)
            }
            UnwindStrategy::Moebius(points) => {
                let a = *nth(points, step);
                let out = moebius_step(&current, &current.coefficients(), a, stop_below).map_err(attach)?;
                (out, Some(a))
            }
            UnwindStrategy::GreedyAfd(grid) => {
                let coeffs = current.coefficients();
                let (index, _) = grid.select(&coeffs[..n / 2]);
                let a = grid.point(index);
                (moebius_step(&current, &coeffs, a, stop_below).map_err(attach)?, Some(a))
            }
            UnwindStrategy::ConstantSubtract(points) => {
                let z = *nth(points, step);
                (constant_subtract_step(&current, z, stop_below).map_err(attach)?, Some(z))
            }
        };
        if outcome.aliasing > abort_above {
            return Ok(None);
        }
        let term = UnwindTerm {
            g: outcome.g,
            cumulative: cumulative.clone(),
            point,
            delta: outcome.delta,
            divisibility_defect: outcome.divisibility_defect,
            aliasing: outcome.aliasing,
        };
        terms.push(term);
        match outcome.next {
            Some((u, f_next)) => {
                cumulative = (&cumulative * &u).assume_analytic();
                current = f_next;
            }
            None => {
                current = TorusGridFunction::zero(n)?;
                stopped = true;
                break;
            }
        }
    }
    let mut e =
        UnwindExpansion { terms, residual: current, residual_inner: cumulative, stopped, reconstruction_error: 0.0 };
    let total = &partial_sum(&e, e.terms.len())? + &e.residual_term();
    e.reconstruction_error = total.max_distance(f);
    Ok(Some(e))
}

/// [`unwind`] with grid refinement: while some step leaves more than
/// `resolution` of folded-over spectrum in its factors, the input is
/// resampled on a grid twice as fine (up to `max_grid` points) and the
/// recursion is run again. Zeros of intermediate functions close to the
/// circle give inner factors that a coarse grid cannot represent; this finds
/// the coarsest grid that does. The input must be a trigonometric polynomial
/// on its own grid.
pub fn unwind_refined(
    f: &TorusGridFunction,
    strategy: &UnwindStrategy,
    max_terms: usize,
    stop_tol: f64,
    resolution: f64,
    max_grid: usize,
) -> Result<UnwindExpansion> {
    let mut n = f.len();
    loop {
        let last = 2 * n > max_grid;
        let abort = if last { f64::INFINITY } else { resolution };
        let input = if n == f.len() { f.clone() } else { f.resample(n)? };
        if let Some(e) = run(&input, strategy, max_terms, stop_tol, abort)? {
            return Ok(e);
        }
        n *= 2;
    }
}

fn moebius_sample(n: usize, a: Complex64) -> Result<TorusGridFunction> {
    DiskBlaschke::new(vec![a])?.sample(n)
}

// Projection step for v = (z - a)/(1 - āz), checked against the closed form
// g = f(a)(1 - |a|²)/(1 - āz). `coeffs` is the spectrum of f.
fn moebius_step(f: &TorusGridFunction, coeffs: &[Complex64], a: Complex64, stop_below: f64) -> Result<StepOutcome> {
    let n = f.len();
    let v = moebius_sample(n, a)?;
    let out = step_with(f, &v, stop_below, |u| Ok(u.eval_interior(a).norm()))?;
    if !out.stopped {
        let fa = eval_power_series(&coeffs[..n / 2], a);
        let s = 1.0 - a.norm_sqr();
        let closed = TorusGridFunction::from_fn(n, |z| fa * s / (1.0 - a.conj() * z))?;
        // any negative-frequency residue of f (left by an earlier cepstral
        // factorization) passes straight into the grid g, so compare the analytic part
        let mismatch = riesz_project(&out.g).max_distance(&closed);
        if mismatch > CLOSED_FORM_TOL * f.max_abs().max(1.0) {
            return Err(Error::ClosedFormMismatch(mismatch));
        }
    }
    Ok(out)
}

/// `Σ_{n<count} U_n g_n`.
pub fn partial_sum(e: &UnwindExpansion, count: usize) -> Result<TorusGridFunction> {
    if count > e.terms.len() {
        return Err(Error::Index { index: count, len: e.terms.len() });
    }
    let mut acc = TorusGridFunction::zero(e.residual.len())?;
    for t in &e.terms[..count] {
        acc = &acc + &t.product();
    }
    Ok(acc.assume_analytic())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub p_list: Vec<f64>,
    /// `errors[n-1][k] = ‖f - partial_sum(e, n)‖_{p_k}` for `n = 1..=terms`.
    pub errors: Vec<Vec<f64>>,
    /// Whether the `p = 2` column (when present) is non-increasing.
    pub monotone_l2: Option<bool>,
}

pub fn convergence_report(e: &UnwindExpansion, f: &TorusGridFunction, p_list: &[f64]) -> Result<ConvergenceReport> {
    let mut errors = Vec::with_capacity(e.terms.len());
    let mut acc = TorusGridFunction::zero(f.len())?;
    for t in &e.terms {
        acc = &acc + &t.product();
        let diff = f - &acc;
        errors.push(p_list.iter().map(|&p| lp_norm(&diff, p)).collect::<Vec<_>>());
    }
    let monotone_l2 = p_list
        .iter()
        .position(|&p| p == 2.0)
        .map(|k| errors.windows(2).all(|w| w[1][k] <= w[0][k] * (1.0 + 1e-12) + 1e-14));
    Ok(ConvergenceReport { p_list: p_list.to_vec(), errors, monotone_l2 })
}
