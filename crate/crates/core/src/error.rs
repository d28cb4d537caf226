use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a valid weighted relative Rota-Baxter operator: {0}")]
    InvalidOperator(String),
    #[error("not a valid deformation: {0}")]
    InvalidDeformation(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("map is not invertible")]
    NotInvertible,
    #[error("operator context is not an adjoint representation")]
    NotAdjointContext,
    #[error("subspace containment violated: {0}")]
    ContainmentViolated(String),
    #[error("independent computations disagree: {0}")]
    OracleDisagreement(String),
    #[error("structure elements are not compatible: {0}")]
    StructureIncompatible(String),
    #[error("resource limit exceeded: {what} needs {requested}, cap is {cap}")]
    ResourceLimit {
        what: String,
        requested: u128,
        cap: u128,
    },
    #[error("wrong field: {0}")]
    WrongField(String),
    #[error("wrong weight: {0}")]
    WrongWeight(String),
    #[error("1/2 is undefined in characteristic 2")]
    CharacteristicTwo,
    #[error("T_0 does not match the base operator")]
    BaseMismatch,
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unresolved reference `{0}`")]
    UnresolvedReference(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }
}
