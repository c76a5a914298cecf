//! `hardy unwind`: the phase-unwinding expansion of an `H²` function.

use std::path::PathBuf;

use hardy_core::torus::TorusGridFunction;
use hardy_core::unwind::{convergence_report, unwind, unwind_refined, UnwindExpansion, UnwindStrategy};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::{to_pair, GridInput, Pair, StrategyFile};
use crate::report::{emit, num, Table};

pub const DEFAULT_TERMS: usize = 8;
/// Aliasing level above which coefficient input is moved to a finer grid.
pub const RESOLUTION: f64 = 1e-7;
pub const MAX_GRID: usize = 1 << 20;

#[derive(Debug, Clone, Serialize)]
pub struct UnwindConfig {
    pub input: PathBuf,
    /// Grid the expansion was computed on.
    pub n: usize,
    pub refined: bool,
    pub strategy: StrategyFile,
    pub terms: usize,
    pub stop_tol: f64,
    pub p: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TermRow {
    pub n: usize,
    /// `‖g_n‖²`.
    pub energy: f64,
    pub point: Option<Pair>,
    pub delta: f64,
    pub divisibility_defect: f64,
    pub aliasing: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Convergence {
    pub p: Vec<f64>,
    /// `errors[n-1][k] = ‖f - Σ_{m<n} U_m g_m‖_{p_k}`.
    pub errors: Vec<Vec<f64>>,
    pub monotone_l2: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnwindReport {
    pub strategy: &'static str,
    pub terms: Vec<TermRow>,
    pub energies: Vec<f64>,
    /// `‖f_N‖²` of the remainder.
    pub residual_energy: f64,
    pub stopped: bool,
    pub reconstruction_error: f64,
    /// `|‖f‖² - Σ ‖g_n‖² - ‖f_N‖²| / ‖f‖²`.
    pub energy_defect: f64,
    pub max_aliasing: f64,
    pub convergence: Convergence,
}

pub fn unwind_report(
    f: &TorusGridFunction,
    strategy: &UnwindStrategy,
    e: &UnwindExpansion,
    p: &[f64],
) -> Result<UnwindReport> {
    let energies: Vec<f64> = e.terms.iter().map(|t| t.g.norm().powi(2)).collect();
    let residual_energy = e.residual.norm().powi(2);
    let total = f.norm().powi(2);
    let energy_defect = (total - energies.iter().sum::<f64>() - residual_energy).abs() / total;
    let terms = e
        .terms
        .iter()
        .zip(&energies)
        .enumerate()
        .map(|(n, (t, &energy))| TermRow {
            n,
            energy,
            point: t.point.map(to_pair),
            delta: t.delta,
            divisibility_defect: t.divisibility_defect,
            aliasing: t.aliasing,
        })
        .collect();
    let c = convergence_report(e, f, p)?;
    Ok(UnwindReport {
        strategy: strategy.kind(),
        terms,
        energies,
        residual_energy,
        stopped: e.stopped,
        reconstruction_error: e.reconstruction_error,
        energy_defect,
        max_aliasing: e.max_aliasing(),
        convergence: Convergence { p: c.p_list, errors: c.errors, monotone_l2: c.monotone_l2 },
    })
}

fn table(r: &UnwindReport) -> Table {
    let mut header: Vec<String> =
        ["n", "energy", "point_re", "point_im", "delta", "divisibility_defect", "aliasing"].map(String::from).into();
    header.extend(r.convergence.p.iter().map(|p| format!("err_l{p}")));
    let mut t = Table::new(header);
    for (row, errs) in r.terms.iter().zip(&r.convergence.errors) {
        let (pr, pi) = row.point.map_or((String::new(), String::new()), |p| (num(p[0]), num(p[1])));
        let mut cells = vec![
            row.n.to_string(),
            num(row.energy),
            pr,
            pi,
            num(row.delta),
            num(row.divisibility_defect),
            num(row.aliasing),
        ];
        cells.extend(errs.iter().map(|&x| num(x)));
        t.push(cells);
    }
    t
}

/// Comma-separated exponents, each `>= 1`.
pub fn parse_p_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let p: f64 =
            part.trim().parse().map_err(|_| CliError::Usage(format!("--p: `{}` is not a number", part.trim())))?;
        if !(p >= 1.0 && p.is_finite()) {
            return Err(CliError::Usage(format!("--p: exponent {p} must be finite and >= 1")));
        }
        out.push(p);
    }
    Ok(out)
}

pub struct UnwindArgs {
    pub input: PathBuf,
    pub n: Option<usize>,
    pub strategy: Option<String>,
    pub terms: Option<usize>,
    pub stop_tol: Option<f64>,
    pub p: Option<String>,
    pub out: Option<PathBuf>,
}

pub fn run(args: UnwindArgs) -> Result<()> {
    let context = args.input.display().to_string();
    let input = GridInput::read(&args.input)?;
    let f = input.to_grid(args.n, &context)?;
    let strategy_file = StrategyFile::resolve(args.strategy.as_deref())?;
    let strategy = strategy_file.build()?;
    let terms = args.terms.unwrap_or(DEFAULT_TERMS);
    let stop_tol = args.stop_tol.unwrap_or(hardy_core::unwind::DEFAULT_STOP_TOL);
    if !(stop_tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol {stop_tol} must be nonnegative")));
    }
    let p = parse_p_list(args.p.as_deref().unwrap_or("2"))?;
    // coefficient input may be resampled; samples fix the grid
    let refined = matches!(input, GridInput::Coefficients(_));
    let e = if refined {
        unwind_refined(&f, &strategy, terms, stop_tol, RESOLUTION, MAX_GRID.max(f.len()))?
    } else {
        unwind(&f, &strategy, terms, stop_tol)?
    };
    let f = if e.grid() == f.len() { f } else { f.resample(e.grid())? };
    log::info!("{} terms on {} points, stopped: {}", e.terms.len(), e.grid(), e.stopped);
    if e.max_aliasing() > RESOLUTION {
        log::warn!("factors alias by {:e} on {} points", e.max_aliasing(), e.grid());
    }
    let report = unwind_report(&f, &strategy, &e, &p)?;
    let config = UnwindConfig { input: args.input, n: e.grid(), refined, strategy: strategy_file, terms, stop_tol, p };
    emit("unwind", &config, &report, Some(&table(&report)), args.out.as_deref())
}
