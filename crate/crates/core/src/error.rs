use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty cell collection")]
    Empty,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("not a polyomino (cells are not edge-connected)")]
    NotPolyomino,
    #[error("not a convex polyomino")]
    NotConvex,
    #[error("not a stack polyomino: {0}")]
    NotStack(String),
    #[error("invalid index selection: {0}")]
    BadSelection(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("multidegree is not an element of the semigroup")]
    NotInSemigroup,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("not a distributive lattice: {0}")]
    NotLattice(String),
    #[error("lattice is not simple")]
    NotSimple,
    #[error("unknown name: {0}")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap(_))
    }
}
