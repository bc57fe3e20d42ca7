use thiserror::Error;

/// Errors raised by the core library.
///
/// Parse failures carry a 1-based line number when they come from a file.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("letter {letter} out of range for alphabet of size {n}")]
    LetterOutOfRange { letter: usize, n: usize },

    #[error("alphabet size mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: usize, found: usize },

    #[error("the empty word has no nonempty factorization")]
    EmptyWord,

    #[error("invalid word syntax {0:?}")]
    WordSyntax(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(#[from] crate::symbol::Diagnostic),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("scale factors must be positive and finite, got {0}")]
    NonPositiveScale(f64),

    #[error("not a permutation of 1..={n}: {perm:?}")]
    InvalidPermutation { perm: Vec<usize>, n: usize },

    #[error("word {word} is longer than the weight table length {max_len}")]
    WordTooLong { word: String, max_len: usize },

    #[error("truncation length {len} is smaller than the symbol degree {degree}")]
    TruncationTooShort { len: usize, degree: usize },

    #[error("truncation length must be at least 1")]
    ZeroTruncation,

    #[error("support mixes degrees {0} and {1}; a homogeneous element is required")]
    MixedDegree(usize, usize),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("radius {0} outside the open interval (0, 1)")]
    RadiusOutOfRange(f64),

    #[error("radius condition violated: r*M = {product} must be below 1/2")]
    RadiusTooLarge { product: f64 },

    #[error("tuple not in domain (least eigenvalue of the defect is {margin:e})")]
    NotInDomain { margin: f64 },

    #[error("symbol must be normalized (generator coefficients equal to 1); call normalize first")]
    NotNormalized,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
