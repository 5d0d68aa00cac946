use std::process::ExitCode;

/// CLI failure modes mapped onto sysexits-style codes (documented in
/// `--help`): 64 usage/config errors, 65 input shape errors, 70 oracle or
/// solver failures, 74 I/O errors. Exit 2 marks runs that finished without
/// certifying the requested gap.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    DataShape(String),
    Oracle(submod_core::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(64),
            CliError::DataShape(_) => ExitCode::from(65),
            CliError::Oracle(_) => ExitCode::from(70),
            CliError::Io(_) => ExitCode::from(74),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::DataShape(msg) => write!(f, "input shape error: {msg}"),
            CliError::Oracle(err) => write!(f, "oracle error: {err}"),
            CliError::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl From<submod_core::Error> for CliError {
    fn from(err: submod_core::Error) -> Self {
        match err {
            submod_core::Error::ShapeMismatch(msg) => CliError::DataShape(msg),
            submod_core::Error::UnknownExample(name) => {
                CliError::Usage(format!("unknown example `{name}`"))
            }
            submod_core::Error::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Oracle(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

pub type CliResult<T> = Result<T, CliError>;
