use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid skeleton: {0}")]
    InvalidSkeleton(String),

    #[error("pose violates joint limits at dof {index} ({name}): {value} not in [{min}, {max}]")]
    PoseOutOfLimits {
        index: usize,
        name: String,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("pose has {got} angles, expected {expected}")]
    PoseLength { expected: usize, got: usize },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("only {available} distinct particles available, {requested} requested")]
    DegenerateParticleSet { available: usize, requested: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("init grid has {size} configurations, budget is {budget}")]
    GridBudget { size: usize, budget: usize },

    #[error("initialization failed: every configuration scored zero")]
    InitializationFailed,

    #[error("trajectory: dof {dof} changes by {change:.3} deg between frames {frame} and {next}, bound is {bound}")]
    TrajectoryBound {
        frame: usize,
        next: usize,
        dof: usize,
        change: f64,
        bound: f64,
    },

    #[error("frame count mismatch: {0} vs {1}")]
    FrameCount(usize, usize),

    #[error("malformed image {path}: {reason}")]
    Image { path: PathBuf, reason: String },

    #[error("malformed csv: {0}")]
    Csv(String),

    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl Error {
    /// Attaches `path` to an I/O error.
    pub fn file(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
        move |source| Error::File { path: path.to_owned(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
