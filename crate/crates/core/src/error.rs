use thiserror::Error;

/// Errors raised by the computational modules.
///
/// Every variant carries a stable machine-readable code (see [`Error::code`])
/// which the command-line front end copies into its JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is not of the form r * sqrt(m) * zeta8^s: {0}")]
    NotEighthRootForm(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("quadratic form is degenerate: {0}")]
    DegenerateForm(String),
    #[error("lattice form is degenerate over Q")]
    DegenerateLattice,
    #[error("phase does not descend to the quotient: {0}")]
    WellDefinednessFailure(String),
    #[error("B + B^T does not equal the Gram matrix")]
    BadSymmetrization,
    #[error("map is not a character: {0}")]
    NotACharacter(String),
    #[error("trace form of the algebra is degenerate")]
    SingularTrace,
    #[error("enumeration too large: {size} exceeds the limit {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("group is not abelian")]
    NonAbelian,
    #[error("invariant-section dimension is not a nonnegative integer: {0}")]
    NonIntegerDimension(String),
    #[error("local systems are incompatible with the correspondence: {0}")]
    IncompatibleSystems(String),
    #[error("cocycle violation: {0}")]
    CocycleViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cross-check failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotEighthRootForm(_) => "NotEighthRootForm",
            Error::SingularMatrix => "SingularMatrix",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::DegenerateForm(_) => "DegenerateForm",
            Error::DegenerateLattice => "DegenerateLattice",
            Error::WellDefinednessFailure(_) => "WellDefinednessFailure",
            Error::BadSymmetrization => "BadSymmetrization",
            Error::NotACharacter(_) => "NotACharacter",
            Error::SingularTrace => "SingularTrace",
            Error::TooLarge { .. } => "TooLarge",
            Error::NonAbelian => "NonAbelian",
            Error::NonIntegerDimension(_) => "NonIntegerDimension",
            Error::IncompatibleSystems(_) => "IncompatibleSystems",
            Error::CocycleViolation(_) => "CocycleViolation",
            Error::InvalidInput(_) => "InvalidInput",
            Error::VerificationFailed(_) => "VerificationFailed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_size(size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::TooLarge { size, limit })
    } else {
        Ok(())
    }
}
