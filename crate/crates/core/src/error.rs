use core::fmt;

/// Errors surfaced by the numerical kernels and certificate builders.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand dimensions do not agree.
    DimensionMismatch { expected: usize, got: usize },
    /// A square matrix was required.
    NonSquare,
    /// Hermitian input was required but the symmetry residual is too large.
    NonHermitian { residual: f64 },
    /// NaN or infinite entry.
    NonFinite,
    /// The Jacobi sweep did not reduce the off-diagonal mass in time.
    NoConvergence,
    /// Linear program has no feasible point.
    Infeasible,
    /// Linear program objective is unbounded.
    Unbounded,
    /// Elements belong to different groups.
    GroupMismatch,
    /// Elements carry different bicharacters.
    BicharacterMismatch,
    /// Matrix is not antisymmetric within tolerance.
    NotAntisymmetric { residual: f64 },
    /// `S[i][j] * gcd(k_i, k_j)` is not an integer, so `σ[S]` is not defined on `Z_k^d`.
    NotABicharacter { i: usize, j: usize, residual: f64 },
    /// Torus coordinate outside `[0, 1)`.
    OutOfRange { value: f64 },
    /// A length function vanishes off the identity on the evaluation set.
    DegenerateLength,
    /// Only coordinate-block subgroups are supported.
    UnsupportedSubgroup,
    /// Cross-block bicharacter entries prevent identifying the fixed-point algebra
    /// with a twisted algebra of the quotient dual.
    NonSplitBicharacter { i: usize, j: usize },
    /// No admissible kernel order below the configured cap.
    KernelOrderCapExceeded { cap: usize },
    /// The character set of a positive-definite kernel must contain the trivial character.
    TrivialCharacterMissing,
    /// Infinite support where finite support is required.
    InfiniteSupport,
    /// The two seminorms are too far apart for a comparison bridge (`η ≥ 1`).
    NotComparable { eta: f64 },
    /// A seminorm ball is unbounded along a non-scalar direction, so its dual
    /// distance is infinite on this face.
    NotALipNorm,
    /// Empty input where at least one element is required.
    EmptyInput,
    /// Parameter outside its documented domain.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NonSquare => write!(f, "matrix must be square"),
            Error::NonHermitian { residual } => {
                write!(f, "matrix is not hermitian (residual {residual:.3e})")
            }
            Error::NonFinite => write!(f, "non-finite entry"),
            Error::NoConvergence => write!(f, "eigensolver did not converge"),
            Error::Infeasible => write!(f, "infeasible"),
            Error::Unbounded => write!(f, "unbounded"),
            Error::GroupMismatch => write!(f, "group mismatch"),
            Error::BicharacterMismatch => write!(f, "bicharacter mismatch"),
            Error::NotAntisymmetric { residual } => {
                write!(f, "matrix is not antisymmetric (residual {residual:.3e})")
            }
            Error::NotABicharacter { i, j, residual } => write!(
                f,
                "S[{i}][{j}]*gcd(k_{i},k_{j}) is not an integer (residual {residual:.3e})"
            ),
            Error::OutOfRange { value } => {
                write!(f, "coordinate {value} outside [0,1)")
            }
            Error::DegenerateLength => write!(f, "degenerate length"),
            Error::UnsupportedSubgroup => write!(f, "unsupported subgroup shape"),
            Error::NonSplitBicharacter { i, j } => {
                write!(f, "non-split bicharacter: cross-block entry S[{i}][{j}]")
            }
            Error::KernelOrderCapExceeded { cap } => {
                write!(f, "kernel order cap exceeded (cap {cap})")
            }
            Error::TrivialCharacterMissing => write!(f, "trivial character missing"),
            Error::InfiniteSupport => write!(f, "infinite support"),
            Error::NotComparable { eta } => {
                write!(f, "norms not comparable (eta = {eta})")
            }
            Error::NotALipNorm => write!(f, "seminorm not a Lip-norm on this face"),
            Error::EmptyInput => write!(f, "empty input"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
