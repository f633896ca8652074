use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("multiplication table has no two-sided identity")]
    NoIdentity,

    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },

    #[error("malformed group table: {0}")]
    MalformedTable(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("domain of size {size} exceeds enumeration cap {cap}")]
    DomainTooLarge { size: u128, cap: u128 },

    #[error("no coefficient supplied for irrep {0}")]
    MissingIrrep(String),

    #[error("function domains differ: arity {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("irrep catalog incomplete: sum of squared dimensions is {sum}, group order is {order}")]
    CatalogIncomplete { sum: usize, order: usize },

    #[error("irrep {label} is invalid: {reason}")]
    InvalidIrrep { label: String, reason: String },

    #[error("multiplicity of {irrep} is {value}, not within tolerance of an integer")]
    NonIntegralMultiplicity { irrep: String, value: f64 },

    #[error("folded table has no entry for canonical key {0:?}")]
    MissingEntry(Vec<u8>),

    #[error("word {word:#b} is attained by no coordinate of the pattern family")]
    PatternUnattained { word: u32 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("dictator label {label} of w-vertex {w} violates the folding word")]
    InvalidDictator { w: usize, label: u64 },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("unknown group {0}")]
    UnknownGroup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
