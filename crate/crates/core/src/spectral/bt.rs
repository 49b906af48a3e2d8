use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{grid_for_band, zoom::zoom_dtft, LagWindow, SpectralError};
use crate::signal::{BandHz, SampledSignal, SpectrumEstimate};

/// Biased autocorrelation `r(ζ) = (1/N) Σ_{t=ζ}^{N-1} x[t] x[t-ζ]` for
/// `ζ = 0..max_lag_m`.
///
/// Divides by `N` at every lag, not `N - ζ`.
pub fn autocorr_biased(
    segment: &SampledSignal,
    max_lag_m: usize,
) -> Result<Vec<f64>, SpectralError> {
    segment.ensure_non_empty()?;
    let x = segment.samples();
    let n = x.len();
    if max_lag_m == 0 || max_lag_m > n {
        return Err(SpectralError::InvalidParameter(format!(
            "max lag {max_lag_m} must lie in 1..={n}"
        )));
    }
    if n.saturating_mul(max_lag_m) <= 1 << 20 {
        Ok(autocorr_direct(x, max_lag_m))
    } else {
        Ok(autocorr_fft(x, max_lag_m))
    }
}

fn autocorr_direct(x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len() as f64;
    (0..m)
        .map(|lag| x[lag..].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / n)
        .collect()
}

fn autocorr_fft(x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let len = (n + m).next_power_of_two();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(len, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(len).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex64::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / (len as f64 * n as f64);
    buf[..m].iter().map(|c| c.re * scale).collect()
}

/// Blackman-Tukey spectrum and the number of grid points clipped from
/// negative values to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BtSpectrum {
    pub spectrum: SpectrumEstimate,
    pub clipped_bins: usize,
}

/// `φ(ω) = Σ_{|ζ|<M} w(ζ) r(ζ) e^{-jωζ}` on a dense grid over `band`.
pub fn bt_spectrum(
    segment: &SampledSignal,
    lag_window: LagWindow,
    band: BandHz,
    grid_step_hz: f64,
) -> Result<BtSpectrum, SpectralError> {
    let r = autocorr_biased(segment, lag_window.half_length_m())?;
    bt_from_autocorr(&r, lag_window, segment.sample_rate_hz(), band, grid_step_hz)
}

/// BT evaluation from a precomputed autocorrelation (at least `M` lags).
pub(crate) fn bt_from_autocorr(
    r: &[f64],
    lag_window: LagWindow,
    sample_rate_hz: f64,
    band: BandHz,
    grid_step_hz: f64,
) -> Result<BtSpectrum, SpectralError> {
    let count = grid_for_band(band, sample_rate_hz, grid_step_hz)?;
    bt_on_grid(
        r,
        lag_window,
        sample_rate_hz,
        band.low_hz(),
        grid_step_hz,
        count,
    )
}

/// BT evaluation on an explicit grid `f_start + k·step`, `k < count`. The
/// caller is responsible for Nyquist checks.
pub(crate) fn bt_on_grid(
    r: &[f64],
    lag_window: LagWindow,
    sample_rate_hz: f64,
    f_start_hz: f64,
    grid_step_hz: f64,
    count: usize,
) -> Result<BtSpectrum, SpectralError> {
    let m = lag_window.half_length_m();
    if r.len() < m {
        return Err(SpectralError::InvalidParameter(format!(
            "{} autocorrelation lags for a half-length of {m}",
            r.len()
        )));
    }
    // Even symmetry: φ = 2 Re Σ_{ζ≥0} g(ζ) e^{-jωζ} with g(0) = w(0) r(0) / 2.
    let mut g: Vec<f64> = lag_window
        .weights()
        .iter()
        .zip(r)
        .map(|(w, v)| w * v)
        .collect();
    g[0] *= 0.5;
    let half = zoom_dtft(&g, sample_rate_hz, f_start_hz, grid_step_hz, count);
    let mut clipped_bins = 0;
    let power = half
        .iter()
        .map(|c| {
            let v = 2.0 * c.re;
            if v < 0.0 {
                clipped_bins += 1;
                0.0
            } else {
                v
            }
        })
        .collect();
    Ok(BtSpectrum {
        spectrum: SpectrumEstimate::new(f_start_hz, grid_step_hz, power)?,
        clipped_bins,
    })
}
