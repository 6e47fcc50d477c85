use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Complex arguments are reported as `f64` pairs regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p = ({p1}, {p2}) is not a coprime nonzero pair")]
    Coprimality { p1: i64, p2: i64 },
    #[error("k = 0 is the trivial class (f'' = 0), it carries no spectrum")]
    TrivialClass,
    #[error("wave number k = {k} outside 1..{p_sq}")]
    ClassRange { k: i64, p_sq: i64 },
    #[error("c = {re} + {im}i lies on the branch cut [-1, 1]")]
    BranchCut { re: f64, im: f64 },
    #[error("class k = {k}: c = {re} + {im}i lies on the branch cut [-1, 1]")]
    FactorOnCut { k: i64, re: f64, im: f64 },
    #[error("potential is singular at c = {re} + {im}i")]
    SingularPotential { re: f64, im: f64 },
    #[error("potential has a pole at eta = {eta}")]
    PotentialPole { eta: f64 },
    #[error("Lambda = {re} + {im}i is within the pole guard of n^2 = {n_sq}")]
    PoleProximity { re: f64, im: f64, n_sq: i64 },
    #[error("matrix is numerically singular")]
    SingularMatrix,
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("contour passes through a root: {0}")]
    ContourThroughRoot(String),
    #[error("d = {d} is a degenerate parameter (0, sqrt(3)/2 or 1)")]
    DegenerateParameter { d: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("eigenvalue routine failed: {0}")]
    Eigen(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
