use mcdep_core::Error as CoreError;

/// Failures with their process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("budget exceeded: {required} configurations required, budget is {budget}")]
    Budget { required: u128, budget: u64 },
    /// The answer depends on pairs the budget did not cover.
    #[error("{0}")]
    Indeterminate(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. } | CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Budget { .. } | CliError::Indeterminate(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }

    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse { line, message: message.into() }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BudgetExceeded { required, budget } => CliError::Budget { required, budget },
            CoreError::Classification { attempted, budget } => CliError::Budget { required: attempted, budget },
            CoreError::Infeasible { .. } | CoreError::InfeasibleJoint { .. } => CliError::Infeasible(e.to_string()),
            CoreError::Indeterminate(_) => CliError::Indeterminate(e.to_string()),
            CoreError::InvalidArgument(_) | CoreError::ModelViolation(_) => CliError::Validation(e.to_string()),
        }
    }
}
