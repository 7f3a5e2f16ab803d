use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // linear algebra
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("Jacobi SVD did not converge after {sweeps} sweeps (off-diagonal residual {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("matrix has no nonsingular {0}x{0} submatrix")]
    RankDeficient(usize),

    // selection and bounds
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid index set: {0}")]
    InvalidIndices(String),
    #[error("exhaustive search too large: {0} candidate pairs (limit {1})")]
    TooLarge(u128, u128),
    #[error("rank {rank} needs at least {needed} singular values, got {got}")]
    InvalidRank { rank: usize, needed: usize, got: usize },
    #[error("dominance deficiency nu must lie in (0, 1], got {0}")]
    InvalidNu(f64),
    #[error("selected submatrix is not dominant (max modulus {0})")]
    NotDominant(f64),

    // least squares
    #[error("reference function has zero norm on the evaluation grid")]
    ZeroNorm,
    #[error("unknown test function '{0}'")]
    UnknownFunction(String),

    // image codec
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported PGM maxval {0} (only 8-bit images are supported)")]
    UnsupportedMaxval(u32),
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("not an XCUR container")]
    BadMagic,
    #[error("unsupported XCUR version {0}")]
    BadVersion(u8),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("container length mismatch: expected {expected} bytes, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("core block of the container is singular")]
    SingularCore,
    #[error("no rank up to {max_rank} reaches {target} dB")]
    TargetUnachievable { target: f64, max_rank: usize },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
