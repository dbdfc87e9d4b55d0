use thiserror::Error;

/// Everything that can go wrong while building configurations or computing
/// their cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime greater than 2")]
    NotPrime(u64),
    #[error("prime {p} is too small for degree {d} (need p > d)")]
    FieldTooSmall { p: u64, d: usize },
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("sampling failed after {0} attempts; the field is probably too small for this configuration")]
    RetriesExhausted(usize),
    #[error("the nullspace has dimension {0}, expected exactly 1")]
    NotUnique(usize),
    #[error("point does not lie on the quadric")]
    NotOnQuadric,
    #[error("point is a singular point of the quadric")]
    SingularPoint,
    #[error("degenerate component: {0}")]
    DegenerateComponent(String),
    #[error("components {0} and {1} are not disjoint")]
    NotDisjoint(usize, usize),
    #[error("a(3d+1) = {load} exceeds C(d+3,3) = {forms} for a = {a}, d = {d}")]
    Infeasible { a: u64, d: u64, load: u64, forms: u64 },
    #[error("the critical value of ({0}, {1}) is not defined")]
    Undefined(u64, u64),
    #[error("the empty configuration (a, b) = (0, 0) is excluded")]
    EmptyConfiguration,
    #[error("unsupported incidence with the reference quadric: {0}")]
    UnsupportedIncidence(String),
    #[error("side condition failed: {0}")]
    SideConditionFailed(String),
    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
