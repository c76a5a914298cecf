//! `hardy verify`: randomized checks of the explicit identities and of the
//! orthonormal systems.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::ValueEnum;
use hardy_core::identities::{
    alpha_identity_residual, alpha_series_coefficients, alpha_series_partial, alpha_series_remainder,
    alpha_series_tail_bound, dirac_inner_residual, dirac_mixed_residual, pro_unwinding_coefficients,
    pro_unwinding_partial, pro_unwinding_tail_bound, recur_residual, torus_substitution, AlphaSequence, DiracVariant,
};
use hardy_core::mtbasis::{Domain, MtSystem};
use hardy_core::multiscale::{psi, wavelet_function, DeltaSpec, WaveletIndex, DEFAULT_SCALES};
use hardy_core::quadrature::{gram, identity_deviation, QuadratureSpec};
use hardy_core::torus::{inner_product, DEFAULT_GRID};
use hardy_core::{Complex64, EXP_NEG_2PI};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::formats::{parse_json, read_text, DomainName, ZeroList};
use crate::report::{emit, num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Suite {
    /// `e^{2iπx} = (q + G)/(1 + qG)` on random real `x`.
    Recur,
    /// Truncations of `q + (1 - q²) Σ (-q)ⁿ G^{n+1}` against their bound.
    Prounwinding,
    /// The single-α identity, the α-series remainder and the constant-α collapse.
    Alpha,
    /// `e^{-2iπ/x}` through the Blaschke product with zeros `-1/(n + i)`.
    Dirac,
    /// The series at `x = (i/2π)(1 + e^{iθ})/(1 - e^{iθ})`.
    TorusSub,
    /// `|ψ(x) - 2πx| <= 0.004π|x|` for the truncated `Δ`.
    PsiBound,
    /// Orthonormality of `φ_{n,j}`, `n ∈ {-1, 0, 1}`, `j ∈ {-4..4}`.
    WaveletGram,
    /// Orthonormality of a Malmquist–Takenaka system.
    MtGram,
}

/// One named measurement; `passed` is absent for informational values.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub passed: Option<bool>,
}

impl CheckRow {
    fn test(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance: Some(tolerance), passed: Some(value <= tolerance) }
    }

    fn info(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value, tolerance: None, passed: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub identity: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tail_bound: Option<f64>,
    pub params: Value,
    pub tolerance: f64,
    pub passed: bool,
    pub checks: Vec<CheckRow>,
}

impl SuiteReport {
    fn new(
        identity: &str,
        samples: usize,
        max_residual: f64,
        tail_bound: Option<f64>,
        params: Value,
        tolerance: f64,
        checks: Vec<CheckRow>,
    ) -> Self {
        let passed = checks.iter().all(|c| c.passed != Some(false));
        Self { identity: identity.into(), samples, max_residual, tail_bound, params, tolerance, passed, checks }
    }

    fn table(&self) -> Table {
        let mut t = Table::new(["name", "value", "tolerance", "passed"]);
        for c in &self.checks {
            t.push(vec![
                c.name.clone(),
                num(c.value),
                c.tolerance.map(num).unwrap_or_default(),
                c.passed.map(|p| p.to_string()).unwrap_or_default(),
            ]);
        }
        t
    }
}

/// Flags as given; each suite reads the ones it uses and reports the
/// resolved values under `params`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyArgs {
    pub seed: u64,
    pub n: Option<usize>,
    pub terms: Option<usize>,
    pub tol: Option<f64>,
    pub include_j0: Option<bool>,
    pub j_scales: Option<u32>,
    pub m: Option<usize>,
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
struct VerifyConfig<'a> {
    suite: Suite,
    #[serde(flatten)]
    args: &'a VerifyArgs,
}

fn e2ipi(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (x - x.round()))
}

fn tolerance(args: &VerifyArgs, default: f64) -> Result<f64> {
    let tol = args.tol.unwrap_or(default);
    if !(tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol {tol} must be nonnegative")));
    }
    Ok(tol)
}

fn max(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

fn recur(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let samples = args.n.unwrap_or(1000);
    let tol = tolerance(args, 1e-10)?;
    let worst = max((0..samples).map(|_| Ok(recur_residual(rng.gen_range(-50.0..50.0))?)))?;
    Ok(SuiteReport::new(
        "e^(2i pi x) = (q + G(x))/(1 + q G(x))",
        samples,
        worst,
        None,
        json!({ "x_range": [-50.0, 50.0] }),
        tol,
        vec![CheckRow::test("max residual", worst, tol)],
    ))
}

fn prounwinding(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let samples = args.n.unwrap_or(100);
    let terms = args.terms.unwrap_or(8).max(1);
    // slack for rounding of a unit-size sum once the bound drops below it
    let tol = tolerance(args, 8.0 * f64::EPSILON)?;
    let xs: Vec<f64> = (0..samples).map(|_| rng.gen_range(-50.0..50.0)).collect();
    let mut checks = Vec::new();
    let mut errors = Vec::with_capacity(terms);
    for n in 1..=terms {
        let bound = pro_unwinding_tail_bound(n);
        let errs =
            xs.iter().map(|&x| Ok((pro_unwinding_partial(x, n)? - e2ipi(x)).norm())).collect::<Result<Vec<_>>>()?;
        let worst = errs.iter().copied().fold(0.0, f64::max);
        checks.push(CheckRow::info(format!("N={n} max error"), worst));
        checks.push(CheckRow::test(format!("N={n} error above bound {bound:.3e}"), (worst - bound).max(0.0), tol));
        errors.push(errs);
    }
    // consecutive errors shrink by q while they are above rounding
    let mut ratio_dev = 0.0f64;
    for n in 0..terms.saturating_sub(1) {
        if pro_unwinding_tail_bound(n + 2) < 1e-13 {
            break;
        }
        for k in 0..xs.len() {
            let r = errors[n + 1][k] / errors[n][k];
            ratio_dev = ratio_dev.max((r / EXP_NEG_2PI - 1.0).abs());
        }
    }
    checks.push(CheckRow::test("decay ratio deviation from e^(-2 pi)", ratio_dev, 0.1));
    let worst = errors[terms - 1].iter().copied().fold(0.0, f64::max);
    Ok(SuiteReport::new(
        "e^(2i pi x) = q + (1 - q^2) sum (-q)^n G^(n+1)",
        samples,
        worst,
        Some(pro_unwinding_tail_bound(terms)),
        json!({ "terms": terms, "x_range": [-50.0, 50.0] }),
        tol,
        checks,
    ))
}

fn alpha(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let samples = args.n.unwrap_or(200);
    let terms = args.terms.unwrap_or(6);
    let tol = tolerance(args, 1e-10)?;
    let mut single = 0.0f64;
    let mut excess = 0.0f64;
    let mut worst_remainder = 0.0f64;
    let mut worst_bound = 0.0f64;
    let mut series = 0.0f64;
    for _ in 0..samples {
        let a: f64 = rng.gen_range(0.1..3.0);
        let x: f64 = rng.gen_range(-50.0..50.0);
        single = single.max(alpha_identity_residual(a, x)?);
        let seq = AlphaSequence::new((0..=terms).map(|_| rng.gen_range(0.1..3.0)).collect())?;
        let rem = alpha_series_remainder(&seq, x, terms)?;
        series = series.max((e2ipi(x) - alpha_series_partial(&seq, x, terms)? - rem).norm());
        let r = rem.norm();
        let bound = alpha_series_tail_bound(&seq, terms);
        excess = excess.max(r - bound - 8.0 * f64::EPSILON);
        worst_remainder = worst_remainder.max(r);
        worst_bound = worst_bound.max(bound);
    }
    let seq = AlphaSequence::constant(1.0, 11)?;
    let c = alpha_series_coefficients(&seq, 10)?;
    let p = pro_unwinding_coefficients(10);
    let mut collapse = (c[0] - EXP_NEG_2PI).abs();
    for n in 1..=10 {
        collapse = collapse.max((c[n] - p[n - 1]).abs());
    }
    let checks = vec![
        CheckRow::test("single-alpha identity residual", single, tol),
        CheckRow::test("partial sum + remainder residual", series, tol),
        CheckRow::info("max series remainder", worst_remainder),
        CheckRow::test("series remainder above tail bound", excess.max(0.0), 0.0),
        CheckRow::test("constant alpha = 1 coefficients vs pro-unwinding", collapse, 1e-12),
    ];
    Ok(SuiteReport::new(
        "e^(2i pi x) = e^(-2 pi a) + G_a(x)(1 - e^(-2 pi a) e^(2i pi x))",
        samples,
        single,
        Some(worst_bound),
        json!({ "terms": terms, "alpha_range": [0.1, 3.0], "x_range": [-50.0, 50.0] }),
        tol,
        checks,
    ))
}

fn dirac(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let samples = args.n.unwrap_or(1000);
    let tol = tolerance(args, 1e-9)?;
    let (mut singular, mut reflected, mut mixed) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let m = 10f64.powf(rng.gen_range(-2.0..2.0));
        let x = if rng.gen::<bool>() { m } else { -m };
        singular = singular.max(dirac_inner_residual(x, DiracVariant::Singular)?);
        reflected = reflected.max(dirac_inner_residual(x, DiracVariant::Reflected)?);
        mixed = mixed.max(dirac_mixed_residual(x)?);
    }
    let checks = vec![
        CheckRow::test("e^(-2i pi/x) with B = G(-1/x)", singular, tol),
        CheckRow::test("e^(2i pi/x) with B = G(1/x)", reflected, tol),
        CheckRow::info("e^(-2i pi/x) with B = G(1/x)", mixed),
    ];
    Ok(SuiteReport::new(
        "e^(-2i pi/x) = (q + B(x))/(1 + q B(x)), B with zeros -1/(n + i)",
        samples,
        singular.max(reflected),
        None,
        json!({ "abs_x_range": [0.01, 100.0] }),
        tol,
        checks,
    ))
}

fn torus_sub(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let samples = args.n.unwrap_or(1000);
    let terms = args.terms.unwrap_or(8);
    let tol = tolerance(args, 1e-10)?;
    let (mut excess, mut worst, mut bound) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let theta = rng.gen_range(0.01..2.0 * PI - 0.01);
        let t = torus_substitution(theta, terms)?;
        excess = excess.max(t.residual - t.tail_bound);
        worst = worst.max(t.residual);
        bound = bound.max(t.tail_bound);
    }
    Ok(SuiteReport::new(
        "exp(-(1 + z)/(1 - z)) from the series at x = (i/2 pi)(1 + z)/(1 - z)",
        samples,
        worst,
        Some(bound),
        json!({ "terms": terms, "theta_range": [0.01, 2.0 * PI - 0.01] }),
        tol,
        vec![CheckRow::test("residual above tail bound", excess.max(0.0), tol)],
    ))
}

fn delta_spec(args: &VerifyArgs, include_j0: bool) -> Result<DeltaSpec> {
    Ok(DeltaSpec::new(args.j_scales.unwrap_or(DEFAULT_SCALES), args.include_j0.unwrap_or(include_j0))?)
}

fn psi_bound(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let samples = args.n.unwrap_or(10_000);
    let spec = delta_spec(args, true)?;
    let tol = tolerance(args, 0.004 * PI)?;
    let (mut worst, mut own) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = loop {
            let x: f64 = rng.gen_range(-100.0..100.0);
            if x.abs() >= 1e-3 {
                break x;
            }
        };
        let p = psi(x, &spec);
        worst = worst.max((p - 2.0 * PI * x).abs() / x.abs());
        own = own.max((p - spec.linear_part(x)).abs() / x.abs());
    }
    let checks =
        vec![CheckRow::test("sup |psi - 2 pi x|/|x|", worst, tol), CheckRow::info("sup |psi - linear part|/|x|", own)];
    Ok(SuiteReport::new(
        "|psi(x) - 2 pi x| <= 0.004 pi |x|",
        samples,
        worst,
        None,
        json!({
            "j_scales": spec.scales,
            "include_j0": spec.include_j0,
            "linear_part_slope": spec.linear_part(1.0),
            "x_range": [-100.0, 100.0],
        }),
        tol,
        checks,
    ))
}

fn wavelet_gram(args: &VerifyArgs) -> Result<SuiteReport> {
    let spec = delta_spec(args, false)?;
    let m = args.m.unwrap_or(16_384);
    let tol = tolerance(args, 1e-5)?;
    let mut funcs = Vec::new();
    for n in -1..=1 {
        for j in -4..=4 {
            funcs.push(wavelet_function(WaveletIndex::new(n, j), spec));
        }
    }
    let (g, estimate) = gram(&funcs, &QuadratureSpec::windowed(m, 1.0))?;
    let dev = identity_deviation(&g);
    Ok(SuiteReport::new(
        "<phi_(n,j), phi_(n',j')> = delta",
        funcs.len(),
        dev,
        None,
        json!({
            "scales": [-1, 1],
            "shifts": [-4, 4],
            "j_scales": spec.scales,
            "include_j0": spec.include_j0,
            "quadrature": { "rule": "windowed_extrapolation", "nodes": m, "panel_width": 1.0 },
        }),
        tol,
        vec![CheckRow::test("max |Gram - I|", dev, tol), CheckRow::info("quadrature estimate", estimate)],
    ))
}

fn mt_gram(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let (domain, points, source) = match &args.input {
        Some(path) => {
            let z: ZeroList = parse_json(&read_text(path)?, &path.display().to_string())?;
            let domain = match z.domain {
                DomainName::Disk => Domain::Disk,
                DomainName::Halfplane => Domain::HalfPlane,
            };
            (domain, z.points(), "input")
        }
        None => {
            let count = args.terms.unwrap_or(32);
            let pts = (0..count)
                .map(|_| Complex64::from_polar(rng.gen_range(0.0f64..0.9).sqrt(), rng.gen_range(0.0..2.0 * PI)))
                .collect();
            (Domain::Disk, pts, "random")
        }
    };
    if points.is_empty() {
        return Err(CliError::Usage("mt_gram needs at least one point".into()));
    }
    let sys = MtSystem::new(domain, points)?;
    let count = sys.len();
    let (dev, params, tol) = match domain {
        Domain::Disk => {
            let n = args.n.unwrap_or(DEFAULT_GRID);
            let tol = tolerance(args, 1e-9)?;
            let funcs = sys.sample_disk(count, n)?;
            let mut worst = 0.0f64;
            for a in 0..count {
                for b in 0..=a {
                    let v = inner_product(&funcs[a], &funcs[b])?;
                    worst = worst.max((v - if a == b { 1.0 } else { 0.0 }).norm());
                }
            }
            (worst, json!({ "domain": "disk", "points": source, "count": count, "grid": n }), tol)
        }
        Domain::HalfPlane => {
            let m = args.m.unwrap_or(8192);
            let tol = tolerance(args, 1e-8)?;
            let funcs = (0..count).map(|k| sys.halfplane_function(k)).collect::<hardy_core::Result<Vec<_>>>()?;
            let (g, _) = gram(&funcs, &QuadratureSpec::cayley(m))?;
            let params = json!({ "domain": "halfplane", "points": source, "count": count,
                                 "quadrature": { "rule": "cayley", "nodes": m } });
            (identity_deviation(&g), params, tol)
        }
    };
    let checks = vec![
        CheckRow::test("max |Gram - I|", dev, tol),
        CheckRow::info("divergence partial sum", sys.divergence_partial_sum()),
    ];
    Ok(SuiteReport::new("<phi_m, phi_n> = delta", count, dev, None, params, tol, checks))
}

pub fn run_suite(suite: Suite, args: &VerifyArgs) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    match suite {
        Suite::Recur => recur(args, &mut rng),
        Suite::Prounwinding => prounwinding(args, &mut rng),
        Suite::Alpha => alpha(args, &mut rng),
        Suite::Dirac => dirac(args, &mut rng),
        Suite::TorusSub => torus_sub(args, &mut rng),
        Suite::PsiBound => psi_bound(args, &mut rng),
        Suite::WaveletGram => wavelet_gram(args),
        Suite::MtGram => mt_gram(args, &mut rng),
    }
}

pub fn run(suite: Suite, args: VerifyArgs, out: Option<PathBuf>) -> Result<()> {
    let report = run_suite(suite, &args)?;
    log::info!("{:?}: max residual {:e}, passed {}", suite, report.max_residual, report.passed);
    let config = VerifyConfig { suite, args: &args };
    emit("verify", &config, &report, Some(&report.table()), out.as_deref())?;
    if !report.passed {
        let failed: Vec<&str> =
            report.checks.iter().filter(|c| c.passed == Some(false)).map(|c| c.name.as_str()).collect();
        return Err(CliError::Check(format!("{}: {}", suite_name(suite), failed.join("; "))));
    }
    Ok(())
}

pub fn suite_name(suite: Suite) -> String {
    suite.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default()
}
