use thiserror::Error;

/// Failure modes shared by every numeric and exact route in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input lies outside the region where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input hits a pole of the function being evaluated.
    #[error("pole: {0}")]
    Pole(String),
    /// Input lies on a branch cut of a principal-branch function.
    #[error("branch cut: {0}")]
    BranchCut(String),
    /// Input coincides with a branch point of the surface.
    #[error("branch point: {0}")]
    BranchPoint(String),
    /// A continuous branch of a logarithm could not be maintained.
    #[error("branch ambiguity: {0}")]
    Branch(String),
    /// Requested accuracy could not be reached.
    #[error("precision error: {0}")]
    Precision(String),
    /// Iteration did not converge within its budget.
    #[error("iteration limit reached: {0}")]
    IterationLimit(String),
    /// Matrix close to singular.
    #[error("ill-conditioned: {0}")]
    Conditioning(String),
    /// Two routes that must agree exactly did not.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::BranchCut(_) => "branch_cut",
            Error::BranchPoint(_) => "branch_point",
            Error::Branch(_) => "branch",
            Error::Precision(_) => "precision",
            Error::IterationLimit(_) => "iteration_limit",
            Error::Conditioning(_) => "conditioning",
            Error::Consistency(_) => "consistency",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
