use super::SpectralError;
use crate::signal::{BandHz, SpectrumEstimate};

/// Upper bound returned when the noise floor is zero.
pub const SNR_CAP: f64 = 1e12;

/// Peak-to-noise-floor ratio of a spectral strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snr {
    /// Linear ratio in `[0, SNR_CAP]`.
    pub ratio: f64,
    /// Set when the noise median was zero and the ratio was capped.
    pub capped: bool,
}

impl Snr {
    pub fn db(&self) -> f64 {
        10.0 * self.ratio.log10()
    }
}

/// Maximum power inside `signal_band` over the median power of the
/// `noise_band` grid points lying outside `signal_band`.
pub fn local_snr(
    spectrum: &SpectrumEstimate,
    signal_band: BandHz,
    noise_band: BandHz,
) -> Result<Snr, SpectralError> {
    if !noise_band.contains_band(signal_band) {
        return Err(SpectralError::InvalidParameter(
            "signal band must lie inside the noise band".into(),
        ));
    }
    let step = spectrum.freq_step_hz();
    let lo = spectrum.freq_start_hz();
    let hi = spectrum.freq_at(spectrum.len().saturating_sub(1));
    let tol = 1e-6 * step;
    if spectrum.is_empty() || noise_band.low_hz() < lo - tol || noise_band.high_hz() > hi + tol {
        return Err(SpectralError::BandOutsideSpectrum {
            low: noise_band.low_hz(),
            high: noise_band.high_hz(),
        });
    }

    let sig = spectrum.index_range(signal_band);
    if sig.is_empty() {
        return Err(SpectralError::BandOutsideSpectrum {
            low: signal_band.low_hz(),
            high: signal_band.high_hz(),
        });
    }
    let power = spectrum.power();
    let peak = power[sig.clone()].iter().cloned().fold(0.0, f64::max);

    let mut noise: Vec<f64> = spectrum
        .index_range(noise_band)
        .filter(|i| !sig.contains(i))
        .map(|i| power[i])
        .collect();
    if noise.is_empty() {
        return Err(SpectralError::InvalidParameter(
            "noise band has no grid points outside the signal band".into(),
        ));
    }
    let median = median_in_place(&mut noise);
    if median <= 0.0 {
        return Ok(Snr {
            ratio: SNR_CAP,
            capped: true,
        });
    }
    let ratio = peak / median;
    Ok(Snr {
        ratio: ratio.min(SNR_CAP),
        capped: ratio >= SNR_CAP,
    })
}

pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
