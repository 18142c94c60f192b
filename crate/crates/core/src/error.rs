use thiserror::Error;

/// A triple `(a, x, y)` of cloud indices where `a` is Φ-between `x` and `y`.
pub type Triple = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for cloud of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("empty index set")]
    EmptyDomain,

    #[error("field contains infinite values where only finite values are allowed")]
    InfiniteValues,

    #[error("function basis is rank deficient (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("harmonic solver did not converge (residual {residual:e})")]
    SolverNonConvergence { residual: f64 },

    #[error("simplex iteration cap of {cap} exceeded")]
    IterationLimit { cap: usize },

    #[error("field{} is not Φ-convex: violating triple (a={}, x={}, y={})",
        function.map(|i| format!(" {i}")).unwrap_or_default(), triple.0, triple.1, triple.2)]
    NotPhiConvex { function: Option<usize>, triple: Triple },

    #[error("argmax sets of the supplied functions have empty intersection")]
    EmptyIntersection,

    #[error("no exposed point found: the family does not separate the points of the set")]
    NoExposedPoint,

    #[error("no Φ-extremal point among the maximizers")]
    NoExtremalMaximizer,

    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),

    #[error("perturbed maximum has gap {gap:e} below the required {required:e}")]
    DegenerateGap { gap: f64, required: f64 },

    #[error("family does not separate points {0} and {1}")]
    NonSeparatingFamily(usize, usize),

    #[error("function {0} does not attain its maximum at the given point")]
    PointNotMaximizer(usize),

    #[error("certificate replay failed: {0}")]
    ReplayFailed(String),
}

impl Error {
    /// Stable identifier used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::EmptyDomain => "EmptyDomain",
            Error::InfiniteValues => "InfiniteValues",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::SolverNonConvergence { .. } => "SolverNonConvergence",
            Error::IterationLimit { .. } => "IterationLimit",
            Error::NotPhiConvex { .. } => "NotPhiConvex",
            Error::EmptyIntersection => "EmptyIntersection",
            Error::NoExposedPoint => "NoExposedPoint",
            Error::NoExtremalMaximizer => "NoExtremalMaximizer",
            Error::BadEpsilon(_) => "BadEpsilon",
            Error::DegenerateGap { .. } => "DegenerateGap",
            Error::NonSeparatingFamily(..) => "NonSeparatingFamily",
            Error::PointNotMaximizer(_) => "PointNotMaximizer",
            Error::ReplayFailed(_) => "ReplayFailed",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
