use thiserror::Error;

/// Errors surfaced by the engine and the batch front end.
///
/// The CLI maps these onto process exit codes: parse/format problems
/// exit with 3, violated preconditions with 2 and resource caps with 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("polynomials belong to different rings")]
    RingMismatch,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("invalid linear form: {0}")]
    BadLinearForm(String),

    #[error("total degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("basis size cap exceeded ({size} elements)")]
    BasisCap { size: usize },

    #[error("quotient chain did not stabilize within {0} iterations")]
    QuotientChain(usize),

    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,

    #[error("improper intersection: {0}")]
    ImproperIntersection(String),

    #[error("cycle decomposition produced a negative multiplicity in {name}: {lhs} - {rhs}")]
    NegativeMultiplicity { name: String, lhs: i128, rhs: i128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sampling failure: {0}")]
    SamplingFailure(String),

    #[error("map shape not supported: {0}")]
    ShapeNotSupported(String),

    #[error("elimination ideal is not principal: {0}")]
    NotPrincipal(String),

    #[error("retry budget exhausted: {0}")]
    RetryExhausted(String),

    #[error("slice is not nodal: {0}")]
    NonNodalSlice(String),

    #[error("not an isolated complete intersection singularity: {0}")]
    NotIcis(String),

    #[error("invalid job: {0}")]
    Job(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code contract used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::UnknownVariable(_)
            | Error::BadLinearForm(_)
            | Error::Json(_)
            | Error::Job(_)
            | Error::Io(_) => 3,
            Error::DegreeCap { .. }
            | Error::BasisCap { .. }
            | Error::QuotientChain(_)
            | Error::RetryExhausted(_) => 4,
            _ => 2,
        }
    }
}
