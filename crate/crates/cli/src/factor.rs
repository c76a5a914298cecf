//! `hardy factor`: inner–outer factorization of a sampled `H²` function.

use std::f64::consts::PI;
use std::path::PathBuf;

use hardy_core::torus::{inner_outer_factor, InnerOuterPair, TorusGridFunction, DEFAULT_FLOOR_EPS};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::{to_pair, CoefficientFile, GridInput, Pair, SampleFile};
use crate::report::{emit, num, Table};

/// Round-trip tolerance of `--check`, relative to `max |f|`.
pub const CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct FactorConfig {
    pub input: PathBuf,
    pub n: usize,
    pub floor_eps: f64,
    pub check: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub tolerance: f64,
    /// `max |f - inner·outer| / max |f|`.
    pub residual: f64,
    /// `max ||inner| - 1|`.
    pub modulus_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub n: usize,
    pub delta: f64,
    pub aliasing: f64,
    pub deflated_zeros: Vec<Pair>,
    pub inner: SampleFile,
    pub outer: SampleFile,
    pub inner_coeffs: CoefficientFile,
    pub outer_coeffs: CoefficientFile,
    pub check: Check,
}

pub fn factor_report(f: &TorusGridFunction, pair: &InnerOuterPair) -> FactorReport {
    let product = &pair.inner * &pair.outer;
    let residual = product.max_distance(f) / f.max_abs();
    let modulus_deviation = pair.inner.modulus_deviation();
    FactorReport {
        n: f.len(),
        delta: pair.delta,
        aliasing: pair.aliasing,
        deflated_zeros: pair.deflated_zeros.iter().map(|&z| to_pair(z)).collect(),
        inner: SampleFile::from_grid(&pair.inner),
        outer: SampleFile::from_grid(&pair.outer),
        inner_coeffs: CoefficientFile::from_grid(&pair.inner, 1e-13),
        outer_coeffs: CoefficientFile::from_grid(&pair.outer, 1e-13),
        check: Check {
            tolerance: CHECK_TOL,
            residual,
            modulus_deviation,
            passed: residual <= CHECK_TOL && modulus_deviation <= CHECK_TOL,
        },
    }
}

fn table(f: &TorusGridFunction, pair: &InnerOuterPair) -> Table {
    let mut t = Table::new(["k", "theta", "f_re", "f_im", "inner_re", "inner_im", "outer_re", "outer_im"]);
    let n = f.len();
    for k in 0..n {
        let (a, b, c) = (f.samples()[k], pair.inner.samples()[k], pair.outer.samples()[k]);
        let theta = 2.0 * PI * k as f64 / n as f64;
        t.push(vec![k.to_string(), num(theta), num(a.re), num(a.im), num(b.re), num(b.im), num(c.re), num(c.im)]);
    }
    t
}

pub struct FactorArgs {
    pub input: PathBuf,
    pub n: Option<usize>,
    pub floor_eps: Option<f64>,
    pub check: bool,
    pub out: Option<PathBuf>,
}

pub fn run(args: FactorArgs) -> Result<()> {
    let context = args.input.display().to_string();
    let f = GridInput::read(&args.input)?.to_grid(args.n, &context)?;
    let floor_eps = args.floor_eps.unwrap_or(DEFAULT_FLOOR_EPS);
    if !(floor_eps > 0.0 && floor_eps < 1.0) {
        return Err(CliError::Usage(format!("--tol {floor_eps}: the log floor must lie in (0, 1)")));
    }
    let config = FactorConfig { input: args.input.clone(), n: f.len(), floor_eps, check: args.check };
    let pair = inner_outer_factor(&f, floor_eps)?;
    log::info!("factored on {} points: delta {:e}, {} deflated zeros", f.len(), pair.delta, pair.deflated_zeros.len());
    if pair.aliasing > 1e-8 {
        log::warn!("factors alias by {:e}; a finer grid would resolve them better", pair.aliasing);
    }
    let report = factor_report(&f, &pair);
    emit("factor", &config, &report, Some(&table(&f, &pair)), args.out.as_deref())?;
    if args.check && !report.check.passed {
        return Err(CliError::Check(format!(
            "round trip {:e}, modulus deviation {:e} (tolerance {:e})",
            report.check.residual, report.check.modulus_deviation, CHECK_TOL
        )));
    }
    Ok(())
}
