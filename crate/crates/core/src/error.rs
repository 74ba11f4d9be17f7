use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid hyperplane {index}: normal vector is zero")]
    InvalidHyperplane { index: usize },

    #[error("duplicate hyperplane: {second} has the same normalized normal as {first}")]
    DuplicateHyperplane { first: usize, second: usize },

    #[error("arrangement is not essential: normals have rank {rank} in dimension {dim}")]
    NonEssential { rank: usize, dim: usize },

    #[error("{what} = {value} is out of range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),

    #[error("expected a flat of rank {expected}, found rank {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("maximal chain budget exceeded: reached {reached} chains (cap {cap})")]
    BudgetExceeded { reached: usize, cap: usize },

    #[error("ground sets differ: {left} vs {right} elements")]
    GroundSizeMismatch { left: usize, right: usize },

    #[error("no full-rank sample after {attempts} attempts")]
    SamplingFailed { attempts: usize },

    #[error("flats {first} and {second} have the same adjoint hyperplane")]
    AdjointCollision { first: usize, second: usize },

    #[error("invalid element order: {0}")]
    InvalidOrder(String),

    #[error("identity check failed: {0}")]
    Invariant(String),
}
