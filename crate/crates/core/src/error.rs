use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {0} is a pole of the Gamma function")]
    Pole(Complex64),
    #[error("{what} overflows double precision at {at}")]
    Overflow { what: &'static str, at: Complex64 },
    #[error("grid size {0} is not a power of two >= 8")]
    GridSize(usize),
    #[error("grid sizes differ: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("function is not inner: max ||u| - 1| = {deviation:e}")]
    NotInner { deviation: f64 },
    #[error("function is not flagged analytic")]
    NotAnalytic,
    #[error("zero function (max modulus {0:e})")]
    ZeroFunction(f64),
    #[error("ill-conditioned factorization: modulus deviation {delta:e} exceeds {limit:e}")]
    IllConditioned { delta: f64, limit: f64 },
    #[error("index {index} out of range (length {len})")]
    Index { index: usize, len: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("point {0} lies outside the domain")]
    Domain(Complex64),
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },
    #[error("|x| = {0:e} is too close to the essential singularity at 0")]
    NearSingular(f64),
    #[error("closed form for g_n disagrees with the grid by {0:e}")]
    ClosedFormMismatch(f64),
    #[error("unwinding step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}
