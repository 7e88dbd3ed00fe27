use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("not divisible by the linear form")]
    NotDivisible,
    #[error("mismatched variable count: {0} vs {1}")]
    MismatchedVars(usize, usize),
    #[error("mismatched ambient: cannot combine full-Weil and quotient elements")]
    MismatchedAmbient,
    #[error("de Rham differential is not defined on the quotient")]
    DeRhamOnQuotient,
    #[error("group {group} requires field {required}, got {given}")]
    WrongField {
        group: String,
        required: &'static str,
        given: &'static str,
    },
    #[error("unknown or unsupported group `{0}`")]
    UnknownGroup(String),
    #[error("group {0} is excluded from the default suite (pass --allow-long)")]
    LongRunRefused(String),
    #[error("repeated degrees unsupported ({0})")]
    RepeatedDegrees(String),
    #[error("invariants not independent")]
    InvariantsNotIndependent,
    #[error("no admissible invariant of degree {0}: seeds exhausted")]
    SeedsExhausted(u32),
    #[error("invariants not a regular sequence: {0}")]
    NotRegularSequence(String),
    #[error("degenerate multiplicity: |T|_c = 0")]
    DegenerateMultiplicity,
    #[error("not a character: {0}")]
    NotACharacter(String),
    #[error("input not isotypic-generating: {0}")]
    NotIsotypic(String),
    #[error("no length classes: {0} has a single class of reflections")]
    NoLengthClasses(String),
    #[error("Jacobi or invariance failure in the structure table: {0}")]
    LieTable(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
