//! From a one-dimensional signal to an ENF trace: aliasing arithmetic, FIR
//! bandpass filtering and sliding-window frequency estimation.

mod alias;
mod estimate;
mod fir;

use thiserror::Error;

pub use alias::{alias_frequency, dealias, AliasResult};
pub use estimate::{estimate_enf, segment_count, snr_confidence, EstimatorConfig, Method};
pub use fir::{
    design_bandpass, filter_signal, frequency_response, FilterDesign, FilterSpec, Filtered,
    FirFilter,
};

use crate::signal::SignalError;
use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("alias {f_alias_hz} Hz is ambiguous: {} and {} Hz are equally far from nominal", candidates.0, candidates.1)]
    AmbiguousAlias {
        f_alias_hz: f64,
        candidates: (f64, f64),
    },
    #[error("signal lasts {duration_s} s, shorter than one {window_s} s window")]
    TooShort { duration_s: f64, window_s: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Signal(#[from] SignalError),
}
