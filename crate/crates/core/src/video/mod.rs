//! From video frames to one-dimensional candidate signals: superpixel
//! segmentation of a keyframe, per-region mean luma, and SNR-ranked region
//! selection.

mod regions;
mod slic;

use thiserror::Error;

pub use regions::{
    region_time_series, select_regions, RegionAccumulator, RegionPick, RegionSelection,
    RegionSeries,
};
pub use slic::{slic_segment, slic_segment_detailed, LabelMap, SlicCenter, SlicOutput, SlicParams};

use crate::signal::SignalError;
use crate::spectral::SpectralError;

/// Default number of regions averaged by [`select_regions`].
pub const DEFAULT_TOP_K: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VideoError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no region has a finite in-band SNR")]
    NoUsableRegion,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Signal(#[from] SignalError),
}
