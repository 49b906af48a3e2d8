use super::{grid_for_band, zoom::zoom_dtft, SpectralError, WindowKind};
use crate::signal::{BandHz, SampledSignal, SpectrumEstimate};

/// Power `|X(f)|²` of the tapered segment on a grid of step `grid_step_hz`
/// starting at `band.low_hz()`.
pub fn stft_frame(
    segment: &SampledSignal,
    analysis_window: WindowKind,
    band: BandHz,
    grid_step_hz: f64,
) -> Result<SpectrumEstimate, SpectralError> {
    segment.ensure_non_empty()?;
    let rate = segment.sample_rate_hz();
    let count = grid_for_band(band, rate, grid_step_hz)?;
    let taper = analysis_window.taper(segment.len());
    let tapered: Vec<f64> = segment
        .samples()
        .iter()
        .zip(&taper)
        .map(|(x, w)| x * w)
        .collect();
    let spectrum = zoom_dtft(&tapered, rate, band.low_hz(), grid_step_hz, count);
    let power = spectrum.iter().map(|c| c.norm_sqr()).collect();
    Ok(SpectrumEstimate::new(band.low_hz(), grid_step_hz, power)?)
}
