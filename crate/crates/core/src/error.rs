use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    /// A mask pixel that is neither pure white nor pure black in strict mode.
    #[error("{path}: non-canonical mask pixel ({r},{g},{b}) at x={x}, y={y}")]
    Annotation {
        path: PathBuf,
        x: u32,
        y: u32,
        r: u8,
        g: u8,
        b: u8,
    },

    #[error("{path}: {message}")]
    Layout { path: PathBuf, message: String },

    #[error("{path}: no image/mask pairs found")]
    EmptyDataset { path: PathBuf },

    /// `context` is empty for in-memory buffers, else `"<mask path>: "`.
    #[error("{context}image is {image_width}x{image_height} but mask is {mask_width}x{mask_height}")]
    Pairing {
        context: String,
        image_width: u32,
        image_height: u32,
        mask_width: u32,
        mask_height: u32,
    },

    #[error("{path}:{line}: {message}")]
    Record {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("degenerate class: {0}")]
    DegenerateClass(&'static str),

    #[error("empty input: no records to evaluate")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("histogram has no in-range mass")]
    EmptyHistogram,

    #[error("unknown rule `{0}` (expected kovac, kovac-rewritten, saleh, swift or rgb-ratio)")]
    UnknownRule(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
