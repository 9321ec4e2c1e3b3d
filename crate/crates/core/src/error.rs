use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A component broke one of the model's structural rules, e.g. a
    /// χ-mapping returned an instance of the wrong dimension.
    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("solution infeasible for component {component}: violates `{predicate}`")]
    Infeasible {
        component: usize,
        predicate: &'static str,
    },

    #[error("joint solution infeasible for components {components:?}")]
    InfeasibleJoint { components: Vec<usize> },

    #[error("search space of {required} configurations exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("feasible-set comparison infeasible at this budget ({attempted} configurations attempted, budget {budget})")]
    Classification { attempted: u128, budget: u64 },

    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn model(msg: impl Into<String>) -> Self {
        Error::ModelViolation(msg.into())
    }
}
