use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("matrix does not define a module map: {0}")]
    IllDefinedMap(String),
    #[error("map is not a monomorphism")]
    NotMono,
    #[error("complex is not acyclic at degree {0}")]
    NotAcyclicAt(i64),
    #[error("d∘d ≠ 0 at degree {0}")]
    NotComplex(i64),
    #[error("components do not commute with the differentials at degree {0}")]
    NotChainMap(i64),
    #[error("unsupported ring for this construction: {0}")]
    UnsupportedRing(String),
    #[error("tower depth {given} is insufficient, {required} required")]
    DepthInsufficient { required: usize, given: usize },
    #[error("no homotopy left inverse exists: {0}")]
    NoInverse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate does not validate: {0}")]
    InvalidCertificate(String),
}
