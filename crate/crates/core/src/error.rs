use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("invalid exponent bound: {0}")]
    InvalidBound(String),
    #[error("unsupported algebra: {0}")]
    Unsupported(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("morphism is not augmented: {0}")]
    NotAugmented(String),
    #[error("morphism is not invertible: {0}")]
    NotInvertible(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("structure does not fit the algebra: {0}")]
    ShapeMismatch(String),
    #[error("comultiplication axiom violated: {0}")]
    AxiomViolation(String),
    #[error("unknown structure: {0}")]
    UnknownStructure(String),
    #[error("cosets do not form a free basis: {0}")]
    NotFreeBasis(String),
    #[error("algebra has no integral: {0}")]
    NoIntegral(String),
    #[error("pi-point is not flat: {0}")]
    NotFlat(String),
    #[error("test module does not have singleton support: {0}")]
    BadTestModule(String),
    #[error("degenerate basis choice: {0}")]
    DegenerateBasis(String),
    #[error("singular Hom system: {0}")]
    SingularSystem(String),
    #[error("decomposition verification failed: {0}")]
    VerificationFailed(String),
    #[error("point is not ignoble: {0}")]
    PointNotIgnoble(String),
    #[error("explicit and induced matrices differ: {0}")]
    CrossCheckFailed(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
