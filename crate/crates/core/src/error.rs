//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unrecognised letter `{0}`")]
    BadLetter(String),
    #[error("duplicate letter `{0}` in alphabet")]
    DuplicateLetter(String),
    #[error("alphabet mixes polylogarithmic and motivic letters")]
    MixedAlphabet,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShuffleError {
    #[error("alphabet mismatch: cannot combine polylogarithmic and motivic words")]
    AlphabetMismatch,
    #[error("word weight {found} exceeds the depth bound {bound}")]
    DepthExceeded { found: u32, bound: u32 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("requested {vectors} vectors of length {len}; need at least as many coordinates as vectors")]
    TooManyVectors { vectors: usize, len: usize },
    #[error("vectors are not epsilon-linearly independent")]
    NotIndependent,
    #[error("spanning set is linearly dependent")]
    DependentSpan,
    #[error("inconsistent linear system")]
    Inconsistent,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("division by zero (to working precision)")]
    DivisionByZero,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("the residue disk of 1 is not supported")]
    DiskOfOne,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("even zeta depth {0} rejected: only odd motivic zeta values exist")]
    EvenZeta(u32),
    #[error("bad disk center: {0}")]
    BadCenter(String),
    #[error("root count indeterminate: {0}")]
    Indeterminate(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointsError {
    #[error("rational {0} is not supported on the given primes")]
    UnsupportedRational(String),
    #[error("cannot parse scheme `{0}`: expected \"Z\", \"Z[1/p,1/q,...]\" or \"Z>q\"")]
    BadScheme(String),
    #[error("tangential point carries no rational value")]
    Tangential,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("expansion table incomplete: missing depth {depth} entry for {point}")]
    TableIncomplete { depth: u32, point: String },
    #[error("insufficient precision: |zeta^eps({0})| <= eps; retry with smaller eps")]
    ZetaBelowEps(u32),
    #[error("weight mismatch: element weight {elem} vs word weight {word}")]
    WeightMismatch { elem: u32, word: u32 },
    #[error("basis search budget exhausted after {0} schedule steps")]
    BudgetExhausted(usize),
    #[error("descent produced an empty solution space; retry with smaller eps")]
    EmptyDescent,
    #[error("linear algebra failure: {0}")]
    Linalg(#[from] LinalgError),
    #[error("p-adic failure: {0}")]
    Padic(#[from] PadicError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("resource budget exceeded after {steps} Buchberger steps; partial basis has {partial} elements")]
    BudgetExceeded { steps: usize, partial: usize },
    #[error("alphabet not admissible: {0}")]
    BadAlphabet(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CkError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Points(#[from] PointsError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CkError {
    fn from(e: std::io::Error) -> Self {
        CkError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CkError {
    fn from(e: serde_json::Error) -> Self {
        CkError::Io(e.to_string())
    }
}
