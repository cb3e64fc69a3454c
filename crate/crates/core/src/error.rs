use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("double factorial undefined for n = {0} (need n >= -1)")]
    DoubleFactorialDomain(i64),

    #[error("partial Bell polynomial B_{{{n},{k}}} requires 1 <= k <= n")]
    BellIndex { n: usize, k: usize },

    #[error("partial Bell polynomial B_{{{n},{k}}} needs {needed} arguments, got {got}")]
    BellArguments {
        n: usize,
        k: usize,
        needed: usize,
        got: usize,
    },

    #[error("series must have zero constant term")]
    NonzeroConstantTerm,

    #[error("series must have constant term 1")]
    ConstantTermNotOne,

    #[error("linear coefficient must be a nonzero constant independent of y")]
    BadLinearCoefficient,

    #[error("y-degree {degree} exceeds x-degree {n}")]
    YDegreeExceeded { n: usize, degree: usize },

    #[error("coefficient index ({n}, {k}) beyond series order {order}")]
    BeyondOrder { n: usize, k: usize, order: usize },

    #[error("non-integral count at ({n}, {k}): {value}")]
    NonIntegral { n: usize, k: usize, value: String },

    #[error("{family} table requires max_n >= {min}")]
    TableTooSmall { family: char, min: usize },

    #[error("special case r = {r} requires k >= r (got k = {k})")]
    SpecialCaseDomain { r: u32, k: i64 },

    #[error("label {0} already present in graph")]
    DuplicateLabel(u32),

    #[error("label {0} outside supported range 1..=32")]
    LabelRange(u32),

    #[error("oracle size {requested} exceeds cap {cap}")]
    OracleCap { requested: usize, cap: usize },

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("no sequence_map entry for {0}")]
    UnknownSequence(String),

    #[error("b-file not found at {0}")]
    MissingBFile(PathBuf),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("fetch failed: {0}")]
    Fetch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
