use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{context}: field `{field}`: {message}")]
    Parse { context: String, field: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hardy_core::Error),
    #[error("check failed: {0}")]
    Check(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn parse(context: impl Into<String>, field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse { context: context.into(), field: field.into(), message: message.into() }
    }

    /// 1 for I/O, parse and usage errors, 2 when the numerics refuse the
    /// input (ill-conditioned, zero function, failed internal consistency),
    /// 3 for a verification check that ran and failed.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => core_exit_code(e),
            CliError::Check(_) => 3,
            _ => 1,
        }
    }
}

fn core_exit_code(e: &hardy_core::Error) -> u8 {
    use hardy_core::Error::*;
    match e {
        IllConditioned { .. }
        | ZeroFunction(_)
        | NotInner { .. }
        | ClosedFormMismatch(_)
        | Quadrature { .. }
        | Overflow { .. } => 2,
        Step { source, .. } => core_exit_code(source),
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hardy_core::Error;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::parse("f", "samples[0]", "bad").exit_code(), 1);
        assert_eq!(CliError::Check("x".into()).exit_code(), 3);
        assert_eq!(CliError::Core(Error::ZeroFunction(0.0)).exit_code(), 2);
        assert_eq!(CliError::Core(Error::IllConditioned { delta: 1.0, limit: 1e-3 }).exit_code(), 2);
        assert_eq!(CliError::Core(Error::GridSize(7)).exit_code(), 1);
        let nested = Error::Step { step: 2, source: Box::new(Error::IllConditioned { delta: 1.0, limit: 1e-3 }) };
        assert_eq!(CliError::Core(nested).exit_code(), 2);
    }

    #[test]
    fn parse_message_names_the_field() {
        let e = CliError::parse("input.json", "samples[3]", "invalid type");
        assert_eq!(e.to_string(), "input.json: field `samples[3]`: invalid type");
    }
}
