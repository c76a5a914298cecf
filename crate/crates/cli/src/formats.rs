//! JSON input and output records. Complex numbers are `[re, im]` pairs.

use std::fs;
use std::path::Path;

use hardy_core::blaschke::DiskBlaschke;
use hardy_core::torus::{TorusGridFunction, ANALYTIC_TOL, DEFAULT_GRID};
use hardy_core::unwind::{CandidateGrid, InnerSpec, UnwindStrategy};
use hardy_core::{c64, Complex64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub type Pair = [f64; 2];

pub fn to_complex(p: Pair) -> Complex64 {
    c64(p[0], p[1])
}

pub fn to_pair(c: Complex64) -> Pair {
    [c.re, c.im]
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })
}

/// Deserializes `text`, reporting the path of the offending field.
pub fn parse_json<T: DeserializeOwned>(text: &str, context: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." => String::from("(document)"),
            p => p,
        };
        CliError::parse(context, field, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| CliError::parse(context, "(document)", e.to_string()))?;
    Ok(value)
}

/// `{ "n": N, "samples": [[re, im], ...] }`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleFile {
    pub n: usize,
    pub samples: Vec<Pair>,
}

/// `{ "coeffs": [[re, im], ...], "first_index": k0 }`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub coeffs: Vec<Pair>,
    #[serde(default)]
    pub first_index: i64,
}

impl SampleFile {
    pub fn from_grid(f: &TorusGridFunction) -> Self {
        Self { n: f.len(), samples: f.samples().iter().map(|&s| to_pair(s)).collect() }
    }
}

impl CoefficientFile {
    /// Nonnegative spectrum of `f`, cut after the last coefficient above
    /// `rel_tol · max|c_k|`; entries below that level are written as 0.
    pub fn from_grid(f: &TorusGridFunction, rel_tol: f64) -> Self {
        let c = f.coefficients();
        let half = &c[..f.len() / 2];
        let max = half.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let cut = rel_tol * max;
        let len = half.iter().rposition(|x| x.norm() > cut).map_or(0, |k| k + 1);
        let coeffs = half[..len].iter().map(|&x| if x.norm() > cut { to_pair(x) } else { [0.0, 0.0] }).collect();
        Self { coeffs, first_index: 0 }
    }
}

/// A torus function given by samples or by coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum GridInput {
    Samples(SampleFile),
    Coefficients(CoefficientFile),
}

impl GridInput {
    pub fn parse(text: &str, context: &str) -> Result<Self> {
        let value: serde_json::Value = parse_json(text, context)?;
        let obj = value.as_object().ok_or_else(|| CliError::parse(context, "(document)", "expected an object"))?;
        if obj.contains_key("samples") {
            parse_json(text, context).map(GridInput::Samples)
        } else if obj.contains_key("coeffs") {
            parse_json(text, context).map(GridInput::Coefficients)
        } else {
            Err(CliError::parse(context, "samples", "expected `samples` (with `n`) or `coeffs`"))
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?, &path.display().to_string())
    }

    /// Sample input fixes the grid (`n`, if given, must agree); coefficient
    /// input is synthesized on `n` points, default 4096. The result must
    /// lie in `H²`.
    pub fn to_grid(&self, n: Option<usize>, context: &str) -> Result<TorusGridFunction> {
        let f = match self {
            GridInput::Samples(s) => {
                if s.samples.len() != s.n {
                    return Err(CliError::parse(
                        context,
                        "n",
                        format!("{} samples given for n = {}", s.samples.len(), s.n),
                    ));
                }
                if let Some(n) = n.filter(|&n| n != s.n) {
                    return Err(CliError::Usage(format!("--n {n} disagrees with the input grid n = {}", s.n)));
                }
                TorusGridFunction::from_samples(s.samples.iter().map(|&p| to_complex(p)).collect())?
            }
            GridInput::Coefficients(c) => {
                let coeffs: Vec<Complex64> = c.coeffs.iter().map(|&p| to_complex(p)).collect();
                TorusGridFunction::from_coefficients(n.unwrap_or(DEFAULT_GRID), &coeffs, c.first_index)?
            }
        };
        Ok(f.check_analytic(ANALYTIC_TOL)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainName {
    #[default]
    Disk,
    Halfplane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConventionName {
    #[default]
    StandardFactor,
    None,
}

/// `{ "domain": "disk"|"halfplane", "zeros": [[re, im], ...], "convention": ... }`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroList {
    #[serde(default)]
    pub domain: DomainName,
    pub zeros: Vec<Pair>,
    #[serde(default)]
    pub convention: ConventionName,
}

impl ZeroList {
    pub fn points(&self) -> Vec<Complex64> {
        self.zeros.iter().map(|&p| to_complex(p)).collect()
    }
}

fn default_radii() -> usize {
    CandidateGrid::default().radii
}

fn default_angles() -> usize {
    CandidateGrid::default().angles
}

fn default_r_max() -> f64 {
    CandidateGrid::default().r_max
}

/// `{ "kind": ..., ...kind-specific fields }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StrategyFile {
    /// Disk Blaschke products `v_1, v_2, …`, last one reused.
    FixedInner {
        inner: Vec<ZeroList>,
    },
    Moebius {
        points: Vec<Pair>,
    },
    GreedyAfd {
        #[serde(default = "default_radii")]
        radii: usize,
        #[serde(default = "default_angles")]
        angles: usize,
        #[serde(default = "default_r_max")]
        r_max: f64,
    },
    ConstantSubtract {
        points: Vec<Pair>,
    },
}

impl Default for StrategyFile {
    /// `v_n = z` for every step.
    fn default() -> Self {
        StrategyFile::FixedInner {
            inner: vec![ZeroList {
                domain: DomainName::Disk,
                zeros: vec![[0.0, 0.0]],
                convention: ConventionName::None,
            }],
        }
    }
}

impl StrategyFile {
    /// Inline JSON (starting with `{`), a path to a JSON file, or a bare
    /// kind name for the kinds that have defaults.
    pub fn resolve(arg: Option<&str>) -> Result<Self> {
        let Some(arg) = arg.map(str::trim) else { return Ok(Self::default()) };
        if arg.starts_with('{') {
            return parse_json(arg, "--strategy");
        }
        match arg {
            "fixed_inner" => return Ok(Self::default()),
            "greedy_afd" => {
                return Ok(StrategyFile::GreedyAfd {
                    radii: default_radii(),
                    angles: default_angles(),
                    r_max: default_r_max(),
                })
            }
            "constant_subtract" => return Ok(StrategyFile::ConstantSubtract { points: vec![[0.0, 0.0]] }),
            _ => {}
        }
        let path = Path::new(arg);
        if path.exists() {
            return parse_json(&read_text(path)?, arg);
        }
        Err(CliError::Usage(format!(
            "--strategy {arg}: not JSON, not a file, and not one of fixed_inner, greedy_afd, constant_subtract"
        )))
    }

    pub fn build(&self) -> Result<UnwindStrategy> {
        Ok(match self {
            StrategyFile::FixedInner { inner } => {
                let mut specs = Vec::with_capacity(inner.len());
                for (k, z) in inner.iter().enumerate() {
                    if z.domain != DomainName::Disk {
                        return Err(CliError::parse("--strategy", format!("inner[{k}].domain"), "must be \"disk\""));
                    }
                    specs.push(InnerSpec::Blaschke(DiskBlaschke::new(z.points())?));
                }
                UnwindStrategy::FixedInner(specs)
            }
            StrategyFile::Moebius { points } => {
                UnwindStrategy::Moebius(points.iter().map(|&p| to_complex(p)).collect())
            }
            StrategyFile::GreedyAfd { radii, angles, r_max } => {
                UnwindStrategy::GreedyAfd(CandidateGrid::new(*radii, *angles, *r_max)?)
            }
            StrategyFile::ConstantSubtract { points } => {
                UnwindStrategy::ConstantSubtract(points.iter().map(|&p| to_complex(p)).collect())
            }
        })
    }
}
