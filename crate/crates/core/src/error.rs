use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("field bound exceeded: q = {q} > {bound}")]
    FieldBound { q: u64, bound: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("budget exceeded: {what} needs {required}, budget is {budget}{}", hint.as_deref().map(|h| format!(" ({h})")).unwrap_or_default())]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u64,
        hint: Option<String>,
    },
    #[error("negative exponent e_{0}")]
    NegativeExponent(usize),
    #[error("twist integrality violated: {0}")]
    TwistIntegrality(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero exponent at position {0}")]
    ZeroExponent(usize),
    #[error("assignment is missing generator x{0}")]
    MissingGenerator(u32),
    #[error("invalid group specifier {0:?}")]
    GroupSpec(String),
    #[error("operation requires a matrix backend of linear type")]
    NotMatrix,
    #[error("missing power map for exponent {0}")]
    MissingPowerMap(i64),
    #[error("eigen-separation failure with seed {seed}: retry the random linear combination with a new seed")]
    EigenSeparation { seed: u64 },
    #[error("tolerance breach: {0}")]
    Tolerance(String),
    #[error("Fourier pattern violated: {0}")]
    FourierPattern(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("character table format: {0}")]
    TableFormat(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, required: u128, budget: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            required,
            budget,
            hint: None,
        }
    }
}
