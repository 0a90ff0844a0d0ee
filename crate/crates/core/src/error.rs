use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not a Hermitian involution (residual {0:e})")]
    NotHermitianInvolution(f64),
    #[error("not an operator of transition: {0}")]
    InvalidTransition(&'static str),
    #[error("singular matrix in {0}")]
    Singular(&'static str),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("matrix is not an involution (residual {0:e})")]
    NotInvolution(f64),
    #[error("spectral parameter {0} must be off the real axis")]
    RealParameter(String),
    #[error("spectral parameter {0} must lie in the upper half-plane")]
    NotUpperHalfPlane(String),
    #[error("r_mu has a pole at mu = -i")]
    Pole,
    #[error("geometric tail ratio |{0}| must be < 1")]
    RatioOutsideDisk(String),
    #[error("sequence has a nonzero entry at position 0")]
    NonzeroAtOrigin,
    #[error("vector is not in the range of U - I")]
    NotInRange,
    #[error("vector is not in the domain of S (x_0 = {0:e})")]
    NotInSymmetricDomain(f64),
    #[error("fiber symmetry has the wrong signature for a boundary basis")]
    WrongSignature,
    #[error("fiber dimension {0} unsupported here (need 2)")]
    FiberDimension(usize),
    #[error("Q is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("Q does not commute with diag(1,-1) (residual {0:e})")]
    QNotCommuting(f64),
    #[error("K is not J-unitary (residual {0:e})")]
    NotJUnitary(f64),
    #[error("vector is outside the extension domain (residual {0:e})")]
    NotInDomain(f64),
    #[error("subspace is not hypermaximal neutral")]
    NotHypermaximalNeutral,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("invalid C candidate: {0}")]
    InvalidC(String),
    #[error("matrix is not positive definite (min eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("unknown tolerance key '{0}'")]
    UnknownTolerance(String),
    #[error("bad tolerance override '{0}'")]
    BadOverride(String),
    #[error("malformed grid spec '{0}'")]
    GridSpec(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
}
