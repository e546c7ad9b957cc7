use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDim,
    #[error("truncation level must be at least 1")]
    ZeroLevel,
    #[error("operands live in different spaces: dim {0} level {1} vs dim {2} level {3}")]
    ContextMismatch(usize, usize, usize, usize),
    #[error("expected {expected} level components, found {found}")]
    BadLevelCount { expected: usize, found: usize },
    #[error("level {level} must hold {expected} entries, found {found}")]
    BadLevelShape { level: usize, expected: usize, found: usize },
    #[error("constant component must be 0")]
    ConstantNotZero,
    #[error("constant component must be 1")]
    ConstantNotOne,
    #[error("word letters must be at least 1")]
    ZeroLetter,
    #[error("word letter {letter} exceeds dimension {dim}")]
    LetterTooLarge { letter: u8, dim: usize },
    #[error("word length {len} exceeds truncation level {level}")]
    WordTooLong { len: usize, level: usize },
    #[error("graded component {component} out of range 0..={level}")]
    GradeOutOfRange { component: usize, level: usize },
    #[error("series has zero constant term, no multiplicative inverse")]
    ZeroConstantTerm,
    #[error("symbol level {level} out of range 1..={max}")]
    SymbolLevelOutOfRange { level: usize, max: usize },
    #[error("sample index {index} out of range 1..={max}")]
    SampleIndexOutOfRange { index: usize, max: usize },
    #[error("no binding for placeholder symbol at level {level}")]
    MissingBinding { level: usize },
    #[error("polynomial contains an unbound placeholder symbol at level {level}")]
    UnboundBarySymbol { level: usize },
    #[error("expected {expected} sample members, found {found}")]
    SampleCountMismatch { expected: usize, found: usize },
    #[error("sample member {index} is not group-like")]
    NotGrouplike { index: usize },
    #[error("sample must contain at least one member")]
    EmptySample,
    #[error("path must have at least one segment")]
    EmptyPath,
    #[error("composition must be nonempty with positive parts")]
    BadComposition,
    #[error("subpath index {index} out of range 1..={len}")]
    SubpathIndex { index: usize, len: usize },
    #[error("operation requires a 2-dimensional path")]
    NotPlanar,
    #[error("matrix size must be even")]
    OddSize,
    #[error("recovery requires dimension at least 2")]
    RecoveryDim,
    #[error("recovery is constructive only at truncation level 2, got level {0}")]
    RecoveryLevel(usize),
    #[error("closed form requires truncation level 2, got level {0}")]
    NotLevelTwo(usize),
    #[error("omega must be nonzero")]
    ZeroOmega,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid rational literal '{0}'")]
    BadRational(String),
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("input not found: {0}")]
    InputNotFound(String),
    #[error("{0} verification checks failed")]
    VerifyFailed(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
