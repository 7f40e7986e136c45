use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("point {0} is not a point of the tetrahedron")]
    PointNotInTetrahedron(String),
    #[error("the given points do not form a basis of GF(2)^4")]
    NotABasis,
    #[error("semiedge {0} is not free")]
    SemiedgeNotFree(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("path {0:?} is not a path of the graph")]
    PathNotInGraph(Vec<usize>),
    #[error("graph is acyclic")]
    Acyclic,
    #[error("graph too large: {size} exceeds the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("not a cubic graph: {0}")]
    NotCubic(String),
    #[error("not a cover by perfect matchings: {0}")]
    NotACover(String),
    #[error("not a T1-flow: {0}")]
    NotAT1Flow(String),
    #[error("too many perfect matchings (more than {0})")]
    TooManyMatchings(usize),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
    #[error("graph has a bridge")]
    NotBridgeless,
    #[error("weight arity mismatch: {0}")]
    WeightArityMismatch(String),
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("dipole is not a decollineator")]
    NotADecollineator,
    #[error("weighted relation is not contained in B: {0}")]
    RelationOutsideB(String),
    #[error("invalid tree description: {0}")]
    InvalidTreeSpec(String),
    #[error("expected {expected} fragments, got {got}")]
    FragmentCountMismatch { expected: usize, got: usize },
    #[error("unsupported order {0}: need an even integer >= 42")]
    UnsupportedOrder(usize),
    #[error("invalid parts: {0}")]
    InvalidParts(String),
    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
