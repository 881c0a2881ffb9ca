use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown class code {0:?}")]
    UnknownClassCode(String),

    #[error("label index {0} is not a lesion class (expected 1..=7)")]
    UnknownLabelIndex(u8),

    #[error("invalid dimensions: {width}x{height} with {len} samples")]
    InvalidDimensions { width: u32, height: u32, len: usize },

    #[error("label {label} exceeds 7 at pixel {index}")]
    InvalidLabel { label: u8, index: usize },

    #[error("channel value {value} at pixel {index} is negative or not finite")]
    InvalidChannelValue { value: f64, index: usize },

    #[error("confidence {value} for {class} is outside [0, 1]")]
    InvalidConfidence { class: &'static str, value: f64 },

    #[error("priority ranking is not a permutation of the 7 lesion classes")]
    InvalidRanking,

    #[error("invalid norm order {0}: must be >= 1 or infinite")]
    InvalidNormOrder(f64),

    #[error("degenerate channel: {0} is identically zero, correction undefined")]
    DegenerateChannel(&'static str),

    #[error("not a PNG")]
    NotPng,

    #[error("malformed PNG: {0}")]
    Png(String),

    #[error("label out of range: index {index} at pixel ({x}, {y})")]
    LabelOutOfRange { index: u8, x: u32, y: u32 },

    #[error("unmappable color ({r}, {g}, {b}) at pixel ({x}, {y})")]
    UnmappableColor { r: u8, g: u8, b: u8, x: u32, y: u32 },

    #[error("not a multiple detection")]
    NotMultipleDetection,

    #[error("duplicate id {0:?}")]
    DuplicateId(String),

    #[error("not one-hot")]
    NotOneHot,

    #[error("empty evaluation: no ground-truth class has any image")]
    EmptyEvaluation,

    #[error("ambiguous ground truth for {0:?}")]
    AmbiguousGroundTruth(String),

    #[error("record missing label: {0:?}")]
    MissingLabel(String),

    #[error("prediction {0:?} has no ground-truth row")]
    UnknownPredictionId(String),

    #[error("no {what} found in {}", dir.display())]
    NoInputs { what: &'static str, dir: PathBuf },

    #[error("mask for {id:?} not found at {}", path.display())]
    MissingMask { id: String, path: PathBuf },

    #[error("{id}: {source}")]
    Record {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("csv: {0}")]
    Csv(String),

    #[error("image: {0}")]
    Image(#[from] image::ImageError),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attaches the offending record id to an error.
    pub fn in_record(self, id: impl Into<String>) -> Self {
        Error::Record { id: id.into(), source: Box::new(self) }
    }

    /// Attaches the offending file to an error.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File { path: path.into(), source: Box::new(self) }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
