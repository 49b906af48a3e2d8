//! Readers for the capture formats: PCM/float WAV and YUV4MPEG2 video.

mod wav;
mod y4m;

use thiserror::Error;

pub use wav::{parse_wav, read_wav, StereoRecording, WavContents};
pub use y4m::{open_y4m, parse_y4m, Colorspace, Rational, VideoLuma, Y4mHeader, Y4mReader};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("unsupported format: {0}")]
    Unsupported(String),
    #[error("malformed input at byte {offset}: {message}")]
    Malformed { offset: u64, message: String },
    #[error("frame {frame_index}: {message}")]
    BadFrame { frame_index: usize, message: String },
    #[error("invalid value: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl IngestError {
    pub(crate) fn malformed(offset: usize, message: impl Into<String>) -> Self {
        IngestError::Malformed {
            offset: offset as u64,
            message: message.into(),
        }
    }
}
