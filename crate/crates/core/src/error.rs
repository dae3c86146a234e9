use std::path::PathBuf;

use crate::time::SimTime;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("plant does not fit the frame: {height_px}x{width_px} px exceeds {frame_h}x{frame_w}")]
    PlantExceedsFrame {
        height_px: f64,
        width_px: f64,
        frame_h: usize,
        frame_w: usize,
    },

    #[error("no plant detected: {pixels} plant pixels, need at least {min}")]
    NoPlantDetected { pixels: usize, min: usize },

    #[error("scheduling error: sample at {at} is outside the {start}-{end} window")]
    OutOfWindow {
        at: SimTime,
        start: String,
        end: String,
    },

    #[error("time went backwards: {at} after {last}")]
    TimeRegression { at: SimTime, last: SimTime },

    #[error("config line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },

    #[error("config key `{key}`: {msg}")]
    ConfigValue { key: String, msg: String },

    #[error("unknown config key `{key}` (line {line})")]
    UnknownKey { key: String, line: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("bad PPM file: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
