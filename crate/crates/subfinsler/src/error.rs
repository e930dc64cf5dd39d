use subfinsler_core::Error as CoreError;

/// Failures of a command, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("structure constants violate the Jacobi identity (residual {residual:e} > {tol:e})")]
    Jacobi { residual: f64, tol: f64 },
    #[error("integration failed: {0}")]
    Integration(CoreError),
    #[error("census mismatch: {0}")]
    CensusMismatch(String),
    #[error(transparent)]
    Core(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Jacobi { .. } => 3,
            CliError::Integration(_) => 4,
            CliError::CensusMismatch(_) => 5,
            CliError::Core(e) => match e {
                CoreError::Domain(_)
                | CoreError::NotGenerating
                | CoreError::InvalidBody(_)
                | CoreError::InvalidInput(_)
                | CoreError::UnknownFamily => 2,
                CoreError::StepTooLarge { .. } => 4,
                _ => 1,
            },
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(format!("invalid problem file: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
