//! Spectral estimators used for ENF tracking.
//!
//! All estimators evaluate the spectrum directly on a dense frequency grid
//! spanning a narrow band instead of reading off coarse FFT bins; ENF moves
//! by millihertz and needs sub-bin resolution.
//!
//! - [`stft_frame`]: windowed DTFT power of one segment.
//! - [`autocorr_biased`] and [`bt_spectrum`]: Blackman-Tukey estimate from the
//!   lag-windowed biased autocorrelation.
//! - [`esprit_frequencies`]: subspace line-spectrum estimator.
//! - [`local_snr`]: peak-over-median ratio used for weights and confidences.
//! - [`spectrum_combine`]: SNR-weighted sum of harmonic strips mapped onto the
//!   fundamental band.
//! - [`quadratic_peak`]: sub-grid peak refinement.

mod bt;
mod combine;
mod esprit;
mod peak;
mod snr;
mod stft;
mod window;
pub(crate) mod zoom;

use thiserror::Error;

pub use bt::{autocorr_biased, bt_spectrum, BtSpectrum};
pub use combine::{spectrum_combine, CombineConfig, CombinedSpectrum, HarmonicWeight};
pub use esprit::{esprit_frequencies, EspritConfig};
pub use peak::{quadratic_peak, PeakEstimate};
pub use snr::{local_snr, Snr, SNR_CAP};
pub use stft::stft_frame;
pub use window::{LagWindow, WindowKind};

use crate::signal::{BandHz, SignalError};

/// Half-width of the noise context around a signal band, as a multiple of
/// the signal band's half-width.
pub const NOISE_CONTEXT_FACTOR: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("band [{low}, {high}] Hz is outside (0, {nyquist}) Hz")]
    BandOutsideNyquist { low: f64, high: f64, nyquist: f64 },
    #[error("grid step {step} Hz is too coarse for a {width} Hz band")]
    GridTooCoarse { step: f64, width: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("every harmonic lies above the Nyquist frequency")]
    AllHarmonicsDropped,
    #[error("band [{low}, {high}] Hz is not covered by the spectrum")]
    BandOutsideSpectrum { low: f64, high: f64 },
    #[error(transparent)]
    Signal(#[from] SignalError),
}

/// Checks a band against the Nyquist limit and the grid density, returning
/// the number of grid points covering it.
pub(crate) fn grid_for_band(
    band: BandHz,
    sample_rate_hz: f64,
    grid_step_hz: f64,
) -> Result<usize, SpectralError> {
    let nyquist = 0.5 * sample_rate_hz;
    if !band.is_below_nyquist(sample_rate_hz) {
        return Err(SpectralError::BandOutsideNyquist {
            low: band.low_hz(),
            high: band.high_hz(),
            nyquist,
        });
    }
    if !(grid_step_hz > 0.0) || grid_step_hz > band.width_hz() / 4.0 + 1e-12 {
        return Err(SpectralError::GridTooCoarse {
            step: grid_step_hz,
            width: band.width_hz(),
        });
    }
    Ok((band.width_hz() / grid_step_hz + 1e-9).floor() as usize + 1)
}
