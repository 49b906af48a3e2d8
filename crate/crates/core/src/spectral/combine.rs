//! SNR-weighted combination of Blackman-Tukey strips taken around the ENF
//! harmonics.
//!
//! Harmonic `z` is evaluated on the grid `z·f0 + i·z·g`, so grid index `i`
//! of every strip lands on the same base-band frequency `f0 + i·g`. No
//! resampling is needed to sum the strips.

use super::bt::{autocorr_biased, bt_on_grid};
use super::{local_snr, LagWindow, SpectralError, WindowKind, NOISE_CONTEXT_FACTOR};
use crate::signal::{BandHz, SampledSignal, SpectrumEstimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombineConfig {
    /// Number of harmonics `Z_a` summed, starting at the fundamental.
    pub harmonic_count_za: usize,
    /// Half-width `Δ` of the base band around the nominal frequency.
    pub band_halfwidth_hz: f64,
    pub nominal_hz: f64,
    /// Lag window shape; the half-length is always a quarter of the segment.
    pub lag_window_kind: WindowKind,
}

impl Default for CombineConfig {
    fn default() -> Self {
        Self {
            harmonic_count_za: 7,
            band_halfwidth_hz: 0.1,
            nominal_hz: 50.0,
            lag_window_kind: WindowKind::Bartlett,
        }
    }
}

impl CombineConfig {
    pub fn with_nominal(nominal_hz: f64) -> Self {
        Self {
            nominal_hz,
            ..Self::default()
        }
    }

    pub fn base_band(&self) -> Result<BandHz, SpectralError> {
        Ok(BandHz::around(self.nominal_hz, self.band_halfwidth_hz)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicWeight {
    pub harmonic: usize,
    pub weight: f64,
    pub snr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedSpectrum {
    /// Weighted sum over the base band `f0 ± Δ`.
    pub spectrum: SpectrumEstimate,
    /// Weighted sum over the widest noise context shared by every kept
    /// harmonic (at most `f0 ± 10Δ`).
    pub context: SpectrumEstimate,
    pub weights: Vec<HarmonicWeight>,
    /// Harmonics skipped because their band reaches the Nyquist frequency.
    pub dropped: Vec<usize>,
}

impl CombinedSpectrum {
    pub fn weight_of(&self, harmonic: usize) -> f64 {
        self.weights
            .iter()
            .find(|w| w.harmonic == harmonic)
            .map_or(0.0, |w| w.weight)
    }
}

/// `S(f) = Σ_z w_z φ_BT(z f)` over the harmonics `z = 1..=Z_a` that fit
/// below Nyquist, with `w_z` proportional to each strip's local SNR.
pub fn spectrum_combine(
    segment: &SampledSignal,
    config: CombineConfig,
    grid_step_hz: f64,
) -> Result<CombinedSpectrum, SpectralError> {
    segment.ensure_non_empty()?;
    if config.harmonic_count_za == 0 {
        return Err(SpectralError::InvalidParameter(
            "no harmonics requested".into(),
        ));
    }
    let base = config.base_band()?;
    if base.low_hz() <= 0.0 {
        return Err(SpectralError::InvalidParameter(format!(
            "base band [{}, {}] Hz must be positive",
            base.low_hz(),
            base.high_hz()
        )));
    }
    if !(grid_step_hz > 0.0) || grid_step_hz > base.width_hz() / 4.0 + 1e-12 {
        return Err(SpectralError::GridTooCoarse {
            step: grid_step_hz,
            width: base.width_hz(),
        });
    }

    let rate = segment.sample_rate_hz();
    let nyquist = 0.5 * rate;
    let f0 = config.nominal_hz;
    let half = config.band_halfwidth_hz;
    let band_idx = (half / grid_step_hz + 1e-9).floor() as i64;
    let wanted_ctx = (NOISE_CONTEXT_FACTOR * half / grid_step_hz + 1e-9).floor() as i64;
    let below_zero = ((f0 / grid_step_hz) - 1e-9).ceil() as i64 - 1;

    let n = segment.len();
    let lag_window = LagWindow::new(config.lag_window_kind, (n / 4).max(1))?;
    let r = autocorr_biased(segment, lag_window.half_length_m())?;

    let mut strips: Vec<(usize, i64, Vec<f64>, f64)> = Vec::new();
    let mut dropped = Vec::new();
    for z in 1..=config.harmonic_count_za {
        let zf = z as f64;
        let top = ((nyquist / zf - f0) / grid_step_hz - 1e-9).ceil() as i64 - 1;
        let ctx = wanted_ctx.min(top).min(below_zero);
        if ctx <= band_idx {
            dropped.push(z);
            continue;
        }
        let step = zf * grid_step_hz;
        let start = zf * (f0 - ctx as f64 * grid_step_hz);
        let count = (2 * ctx + 1) as usize;
        let bt = bt_on_grid(&r, lag_window, rate, start, step, count)?;
        let snr = local_snr(
            &bt.spectrum,
            base.scaled(zf),
            BandHz::new(start, start + (count - 1) as f64 * step)?,
        )?;
        strips.push((z, ctx, bt.spectrum.power().to_vec(), snr.ratio));
    }
    if strips.is_empty() {
        return Err(SpectralError::AllHarmonicsDropped);
    }

    let total: f64 = strips.iter().map(|s| s.3).sum();
    let weights: Vec<HarmonicWeight> = strips
        .iter()
        .map(|&(z, _, _, snr)| HarmonicWeight {
            harmonic: z,
            weight: if total > 0.0 {
                snr / total
            } else {
                1.0 / strips.len() as f64
            },
            snr,
        })
        .collect();

    let common = strips.iter().map(|s| s.1).min().expect("non-empty");
    let mut summed = vec![0.0; (2 * common + 1) as usize];
    for ((_, ctx, power, _), w) in strips.iter().zip(&weights) {
        let offset = (ctx - common) as usize;
        for (acc, p) in summed.iter_mut().zip(&power[offset..]) {
            *acc += w.weight * p;
        }
    }
    let ctx_start = f0 - common as f64 * grid_step_hz;
    let inner = (common - band_idx) as usize;
    let spectrum = SpectrumEstimate::new(
        f0 - band_idx as f64 * grid_step_hz,
        grid_step_hz,
        summed[inner..inner + (2 * band_idx + 1) as usize].to_vec(),
    )?;
    let context = SpectrumEstimate::new(ctx_start, grid_step_hz, summed)?;
    Ok(CombinedSpectrum {
        spectrum,
        context,
        weights,
        dropped,
    })
}
