use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("level mismatch: expected {expected}, got {got}")]
    LevelMismatch { expected: i64, got: i64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// Rational instantiation requires gcd(n-1, r+1) = 1.
    #[error("rationality condition gcd(n-1, r+1) = 1 violated for (n, r) = ({n}, {r})")]
    NotRational { n: i64, r: i64 },

    #[error("Verlinde rounding residual {residual:e} exceeds {tolerance:e}")]
    VerlindeResidual { residual: f64, tolerance: f64 },

    #[error("affine reflection did not terminate within {0} steps")]
    ReflectionOverflow(usize),

    #[error("simple current action is not fixed-point free: orbit of size {orbit} for group of order {order}")]
    NonFreeAction { orbit: usize, order: usize },

    #[error("monodromy data inconsistent: {0}")]
    InconsistentMonodromy(String),

    #[error("malformed fusion ring: {0}")]
    MalformedRing(String),

    #[error("no ring isomorphism found: {0}")]
    NoIsomorphism(String),

    #[error("d^2 != 0 in block (weight {weight}, ghost {ghost})")]
    NonNilpotent { weight: u32, ghost: i32 },

    #[error("degenerate Heisenberg norm")]
    DegenerateNorm,

    #[error("character is not of branching form: {0}")]
    NotBranchingForm(String),

    #[error("truncation cannot be certified: {0}")]
    Truncation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
