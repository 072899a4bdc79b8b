use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // construction of domain values
    #[error("fixation onsets must be strictly increasing (index {index})")]
    NonIncreasingOnset { index: usize },
    #[error("invalid fixation: {0}")]
    InvalidFixation(String),
    #[error("invalid saliency map: {0}")]
    InvalidMap(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    // ingest
    #[error("{path}: missing column `{name}`")]
    MissingColumn { path: PathBuf, name: String },
    #[error("{path}:{line}: malformed row: {reason}")]
    MalformedRow {
        path: PathBuf,
        line: u64,
        reason: String,
    },
    #[error("{0}: log contains no valid fixations")]
    EmptyLog(PathBuf),
    #[error("{path}: malformed document: {reason}")]
    MalformedDocument { path: PathBuf, reason: String },
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("degenerate box ({x0}, {y0}, {x1}, {y1})")]
    DegenerateBox { x0: f64, y0: f64, x1: f64, y1: f64 },

    // saliency
    #[error("image is {width}x{height}, need at least {min}x{min}")]
    ImageTooSmall { width: u32, height: u32, min: u32 },

    // metrics
    #[error("scanpath has no fixations")]
    EmptyScanpath,
    #[error("scanpath of length {len} is shorter than embedding length {k}")]
    ScanpathShorterThanK { len: usize, k: usize },
    #[error("no recurrences")]
    NoRecurrences,
    #[error("map dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("no fixation points")]
    EmptyFixations,
    #[error("map has zero variance")]
    ZeroVariance,
    #[error("map sums to zero")]
    ZeroMass,

    // stats
    #[error("expected count is zero in cell {0}")]
    ZeroExpected(usize),
    #[error("group {group} has {len} observations, need at least {min}")]
    GroupTooSmall { group: usize, len: usize, min: usize },
    #[error("pooled variance is zero")]
    ZeroVariancePooled,
    #[error("need at least two groups, got {0}")]
    TooFewGroups(usize),

    // analyses
    #[error("no data for analysis")]
    NoData,
    #[error("k = {k} exceeds the {distinct} distinct colors available")]
    KTooLarge { k: usize, distinct: usize },

    // generation
    #[error("saliency map is all zero")]
    AllZeroMap,
    #[error("number of fixations must be at least 1")]
    NFixZero,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
