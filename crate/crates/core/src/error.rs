use alloc::string::String;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("value does not snap to a root of unity")]
    NoSnap,
    #[error("value is within tolerance of more than one root of unity")]
    Ambiguous,
    #[error("matrix is not of the given finite order")]
    NotFiniteOrder,
    #[error("element or character belongs to a different group")]
    GroupMismatch,
    #[error("characters do not lie in the given subgroup")]
    NotSubgroup,
    #[error("matrices do not define a representation: {0}")]
    NotARepresentation(String),
    #[error("module is not simple")]
    NotSimple,
    #[error("power of the intertwiner is not a scalar")]
    NotScalarPower,
    #[error("intertwiners do not commute up to a scalar")]
    NotScalarCommutator,
    #[error("operators violate the torus relations: {0}")]
    NotCategoryC(String),
    #[error("central character has no label in the grading group")]
    LabelNotInH,
    #[error("central character value is zero")]
    ZeroCharacter,
    #[error("vector is zero")]
    ZeroVector,
    #[error("covering is not thin")]
    NotThin,
    #[error("module is not completely reducible")]
    NotCompletelyReducible,
    #[error("grading is invalid: {0}")]
    GradingInvalid(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("iteration did not converge")]
    NoConvergence,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
