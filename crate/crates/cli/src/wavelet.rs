//! `hardy wavelet`: coefficients of a half-plane function in the wavelet
//! system `φ_{n,j}` over a rectangle of scales and shifts.

use std::f64::consts::PI;
use std::path::PathBuf;

use hardy_core::identities::complete_unwinding_function;
use hardy_core::mtbasis::{Domain, MtSystem};
use hardy_core::multiscale::{
    wavelet_analyze, wavelet_function, DeltaSpec, HalfPlaneFunction, WaveletIndex, DEFAULT_SCALES,
};
use hardy_core::quadrature::QuadratureSpec;
use hardy_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::formats::{parse_json, read_text, to_complex, Pair};
use crate::report::{emit, num, Table};

pub const DEFAULT_NODES: usize = 8192;
pub const PANEL_WIDTH: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleTerm {
    pub coeff: Pair,
    /// In the lower half-plane.
    pub pole: Pair,
}

/// The functions that can be analyzed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `φ_{n,j}` itself, with the same `Δ` as the analyzing system.
    Wavelet { n: i32, j: i64 },
    /// The last atom of the half-plane Malmquist–Takenaka system on `points`.
    MtAtom { points: Vec<Pair> },
    /// Partial sum of `e^{2iπx}/(√π(x + i))` expanded in powers of `G`.
    CompleteUnwinding { terms: usize },
    /// `Σ c_k / (√π(x - p_k))`.
    Rational { terms: Vec<PoleTerm> },
}

fn default_scales() -> [i32; 2] {
    [-1, 1]
}

fn default_shifts() -> [i64; 2] {
    [-4, 4]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveletInput {
    pub function: FunctionSpec,
    #[serde(default = "default_scales")]
    pub scales: [i32; 2],
    #[serde(default = "default_shifts")]
    pub shifts: [i64; 2],
}

impl FunctionSpec {
    pub fn build(&self, spec: DeltaSpec) -> Result<HalfPlaneFunction> {
        Ok(match self {
            FunctionSpec::Wavelet { n, j } => wavelet_function(WaveletIndex::new(*n, *j), spec),
            FunctionSpec::MtAtom { points } => {
                if points.is_empty() {
                    return Err(CliError::parse("function", "points", "need at least one point"));
                }
                let sys = MtSystem::new(Domain::HalfPlane, points.iter().map(|&p| to_complex(p)).collect())?;
                sys.halfplane_function(sys.len() - 1)?
            }
            FunctionSpec::CompleteUnwinding { terms } => complete_unwinding_function(*terms),
            FunctionSpec::Rational { terms } => {
                let mut poles = Vec::with_capacity(terms.len());
                for (k, t) in terms.iter().enumerate() {
                    if !(t.pole[1] < 0.0) {
                        return Err(CliError::parse("function", format!("terms[{k}].pole"), "needs Im < 0"));
                    }
                    poles.push((to_complex(t.coeff), to_complex(t.pole)));
                }
                HalfPlaneFunction::new("rational", 1.0, move |x| {
                    Ok(poles.iter().map(|&(c, p)| c / (PI.sqrt() * (x - p))).sum::<Complex64>())
                })
            }
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WaveletConfig {
    pub input: PathBuf,
    pub j_scales: u32,
    pub include_j0: bool,
    pub nodes: usize,
    pub panel_width: f64,
    pub tolerance: Option<f64>,
    pub function: FunctionSpec,
    pub scales: [i32; 2],
    pub shifts: [i64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffRow {
    pub n: i32,
    pub j: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    /// Last index of the lexicographic prefix.
    pub prefix: [i64; 2],
    pub l2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WaveletReport {
    pub coeffs: Vec<CoeffRow>,
    pub residuals: Vec<ResidualRow>,
    /// `‖f‖₂` on the same quadrature.
    pub norm: f64,
    /// `Σ |c_{n,j}|²`, at most `‖f‖²` up to quadrature error.
    pub bessel_sum: f64,
    pub estimate: f64,
}

pub fn analyze(input: &WaveletInput, spec: DeltaSpec, quad: &QuadratureSpec) -> Result<WaveletReport> {
    let [s0, s1] = input.scales;
    let [t0, t1] = input.shifts;
    if s0 > s1 || t0 > t1 {
        return Err(CliError::Usage("scales and shifts must be [low, high] with low <= high".into()));
    }
    let f = input.function.build(spec)?;
    let c = wavelet_analyze(&f, s0..=s1, t0..=t1, &spec, quad)?;
    let nodes = quad.compile()?;
    let norm = nodes.norm(&nodes.sample(&f)?);
    Ok(WaveletReport {
        coeffs: c.coeffs.iter().map(|(i, v)| CoeffRow { n: i.n, j: i.j, re: v.re, im: v.im }).collect(),
        residuals: c.residuals.iter().map(|(i, r)| ResidualRow { prefix: [i.n as i64, i.j], l2: *r }).collect(),
        norm,
        bessel_sum: c.coeffs.iter().map(|(_, v)| v.norm_sqr()).sum(),
        estimate: c.estimate,
    })
}

fn table(r: &WaveletReport) -> Table {
    let mut t = Table::new(["n", "j", "re", "im", "residual_l2"]);
    for (c, res) in r.coeffs.iter().zip(&r.residuals) {
        t.push(vec![c.n.to_string(), c.j.to_string(), num(c.re), num(c.im), num(res.l2)]);
    }
    t
}

pub struct WaveletArgs {
    pub input: PathBuf,
    pub j_scales: Option<u32>,
    pub include_j0: Option<bool>,
    pub m: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

pub fn run(args: WaveletArgs) -> Result<()> {
    let text = read_text(&args.input)?;
    let input: WaveletInput = parse_json(&text, &args.input.display().to_string())?;
    let spec = DeltaSpec::new(args.j_scales.unwrap_or(DEFAULT_SCALES), args.include_j0.unwrap_or(false))?;
    let nodes = args.m.unwrap_or(DEFAULT_NODES);
    let mut quad = QuadratureSpec::windowed(nodes, PANEL_WIDTH);
    if let Some(tol) = args.tol {
        quad = quad.with_tolerance(tol);
    }
    let report = analyze(&input, spec, &quad)?;
    log::info!("{} coefficients, quadrature estimate {:e}", report.coeffs.len(), report.estimate);
    let config = WaveletConfig {
        input: args.input,
        j_scales: spec.scales,
        include_j0: spec.include_j0,
        nodes,
        panel_width: PANEL_WIDTH,
        tolerance: args.tol,
        function: input.function,
        scales: input.scales,
        shifts: input.shifts,
    };
    emit("wavelet", &config, &report, Some(&table(&report)), args.out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(text: &str) -> WaveletInput {
        parse_json(text, "t").unwrap()
    }

    #[test]
    fn defaults_and_validation() {
        let w = input(r#"{"function": {"kind": "wavelet", "n": 0, "j": 0}}"#);
        assert_eq!(w.scales, [-1, 1]);
        assert_eq!(w.shifts, [-4, 4]);
        let bad = input(r#"{"function": {"kind": "rational", "terms": [{"coeff": [1, 0], "pole": [0, 1]}]}}"#);
        assert!(bad.function.build(DeltaSpec::default()).unwrap_err().to_string().contains("terms[0].pole"));
        assert!(parse_json::<WaveletInput>(r#"{"function": {"kind": "spline"}}"#, "t").is_err());
    }

    #[test]
    fn an_atom_has_a_single_coefficient() {
        let w = input(r#"{"function": {"kind": "wavelet", "n": 0, "j": 0}, "scales": [0, 0], "shifts": [-1, 1]}"#);
        let r = analyze(&w, DeltaSpec::default(), &QuadratureSpec::windowed(4096, 1.0)).unwrap();
        assert_eq!(r.coeffs.len(), 3);
        assert!((r.coeffs[1].re - 1.0).abs() < 1e-4 && r.coeffs[1].im.abs() < 1e-4);
        assert!(r.coeffs[0].re.hypot(r.coeffs[0].im) < 1e-4);
        assert!((r.norm - 1.0).abs() < 1e-4);
        assert!(r.residuals.last().unwrap().l2 < 1e-2);
    }

    #[test]
    fn rational_norm() {
        // 1/(√π(x + i)) has unit norm
        let w = input(
            r#"{"function": {"kind": "rational", "terms": [{"coeff": [1, 0], "pole": [0, -1]}]}, "scales": [0, 0], "shifts": [0, 0]}"#,
        );
        let r = analyze(&w, DeltaSpec::default(), &QuadratureSpec::windowed(4096, 1.0)).unwrap();
        assert!((r.norm - 1.0).abs() < 1e-6, "{}", r.norm);
        assert!(r.bessel_sum <= r.norm * r.norm + 1e-6);
    }
}
