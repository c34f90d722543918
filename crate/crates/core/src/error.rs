use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{inner:?} is not a subset of {outer:?}")]
    NotNested { inner: Vec<usize>, outer: Vec<usize> },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid partition {0:?}: parts must be weakly decreasing")]
    InvalidPartition(Vec<u32>),

    #[error("invalid index set {elements:?} in [{ambient}]")]
    InvalidIndexSet { elements: Vec<usize>, ambient: usize },

    #[error("polarized parts {plus:?} and {minus:?} overlap or leave [{ambient}]")]
    InvalidPolarizedSet {
        plus: Vec<usize>,
        minus: Vec<usize>,
        ambient: usize,
    },

    #[error("relation has no nonzero coefficient")]
    ZeroRelation,

    #[error("unknown block `{0}`")]
    UnknownBlock(String),

    #[error("block layouts differ: {0}")]
    BlockMismatch(String),

    #[error("parameter out of range: {0}")]
    BadRange(String),

    #[error("matrix is not hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("jacobi iteration did not converge after {0} sweeps")]
    NotConverged(usize),

    #[error("unsupported cone: {0}")]
    UnsupportedCone(String),

    #[error("unsupported embedding: {0}")]
    UnsupportedEmbedding(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
