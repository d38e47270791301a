use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the classifier pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty instance")]
    EmptyInstance,

    #[error("unpadded sequence: {len} bits is not a multiple of word length {n}")]
    UnpaddedSequence { len: usize, n: u32 },

    #[error("empty word sequence")]
    EmptyWords,

    #[error("value {0} lies outside the map domain [0, 1)")]
    OutOfDomain(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("word out of range: {word} does not fit in {n} bits")]
    WordOutOfRange { word: u32, n: u32 },

    #[error("word length mismatch: model order {model}, sequence order {sequence}")]
    OrderMismatch { model: u32, sequence: u32 },

    #[error("degenerate interval")]
    DegenerateInterval,

    #[error("unsmoothed zero probability for word {word}")]
    ZeroProbability { word: u32 },

    #[error("empty class {0}")]
    EmptyClass(usize),

    #[error("feature count mismatch: expected {expected}, got {got}")]
    FeatureMismatch { expected: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("cosine similarity undefined for a zero vector")]
    ZeroVector,

    #[error("at least two features required, got {0}")]
    TooFewFeatures(usize),

    #[error("at least two classes required, got {0}")]
    TooFewClasses(usize),

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("class {class} has {count} instances, need at least {required}")]
    ClassTooSmall {
        class: usize,
        count: usize,
        required: usize,
    },

    #[error("no data rows")]
    NoDataRows,

    #[error("unknown label column {0:?}")]
    UnknownLabelColumn(String),

    #[error("missing label at row {row}")]
    MissingLabel { row: usize },

    #[error("unknown class label {0:?}")]
    UnknownClass(String),

    #[error("non-numeric value {value:?} at row {row}, column {column:?}")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("unknown synthetic dataset kind {0:?}")]
    UnknownKind(String),

    #[error("unsupported model schema version {0}")]
    SchemaVersion(u64),

    #[error("malformed model document: {0}")]
    MalformedModel(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
