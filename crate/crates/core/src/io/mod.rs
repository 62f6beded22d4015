//! Canonical file formats and the 16-channel feature encoding.

mod dataset;
mod features;
mod world;

use thiserror::Error;

pub use dataset::{read_dataset, write_dataset, write_task};
pub use features::{decode_features, encode_world, FeatureError, FeatureGrid, CHANNELS};
pub use world::{read_world, write_world};

/// A parse failure in one of the text formats. `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line,
            message: message.into(),
        }
    }
}
