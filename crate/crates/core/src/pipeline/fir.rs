use num_complex::Complex64;
use std::f64::consts::PI;

use super::PipelineError;
use crate::signal::{BandHz, SampledSignal};
use crate::spectral::WindowKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterDesign {
    #[default]
    WindowedSincHamming,
}

/// Bandpass FIR request. `order_nu` is the number of taps and must be odd so
/// the filter is type-I linear phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub band: BandHz,
    pub order_nu: usize,
    pub design: FilterDesign,
}

impl FilterSpec {
    pub fn new(band: BandHz, order_nu: usize) -> Result<Self, PipelineError> {
        if order_nu == 0 || order_nu.is_multiple_of(2) {
            return Err(PipelineError::InvalidConfig(format!(
                "filter order must be a positive odd number, got {order_nu}"
            )));
        }
        Ok(Self {
            band,
            order_nu,
            design: FilterDesign::WindowedSincHamming,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirFilter {
    pub coeffs: Vec<f64>,
    /// The pass-band is narrower than the transition width the order can
    /// deliver (`2·rate/ν`); the response is a single bump rather than a flat
    /// pass-band.
    pub narrow_band_warning: bool,
}

impl FirFilter {
    pub fn group_delay(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }
}

/// Hamming-windowed ideal bandpass, scaled to unit gain at the band center.
pub fn design_bandpass(spec: &FilterSpec, sample_rate_hz: f64) -> Result<FirFilter, PipelineError> {
    if spec.order_nu.is_multiple_of(2) {
        return Err(PipelineError::InvalidConfig(format!(
            "filter order must be odd, got {}",
            spec.order_nu
        )));
    }
    if !spec.band.is_below_nyquist(sample_rate_hz) {
        return Err(PipelineError::InvalidConfig(format!(
            "pass-band [{}, {}] Hz is outside (0, {}) Hz",
            spec.band.low_hz(),
            spec.band.high_hz(),
            0.5 * sample_rate_hz
        )));
    }
    let nu = spec.order_nu;
    let lo = spec.band.low_hz() / sample_rate_hz;
    let hi = spec.band.high_hz() / sample_rate_hz;
    let center = (nu - 1) as f64 / 2.0;
    let window = WindowKind::Hamming.taper(nu);
    let mut coeffs: Vec<f64> = (0..nu)
        .map(|k| {
            let t = k as f64 - center;
            let ideal = 2.0 * hi * sinc(2.0 * hi * t) - 2.0 * lo * sinc(2.0 * lo * t);
            ideal * window[k]
        })
        .collect();
    // Force exact symmetry against rounding in the taper.
    for k in 0..nu / 2 {
        let avg = 0.5 * (coeffs[k] + coeffs[nu - 1 - k]);
        coeffs[k] = avg;
        coeffs[nu - 1 - k] = avg;
    }
    let gain = frequency_response(&coeffs, spec.band.center_hz(), sample_rate_hz).norm();
    if gain > 0.0 {
        coeffs.iter_mut().for_each(|c| *c /= gain);
    }
    Ok(FirFilter {
        coeffs,
        narrow_band_warning: spec.band.width_hz() < 2.0 * sample_rate_hz / nu as f64,
    })
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// `H(f) = Σ h[k] e^{-j2πfk/fs}`.
pub fn frequency_response(coeffs: &[f64], freq_hz: f64, sample_rate_hz: f64) -> Complex64 {
    let w = 2.0 * PI * freq_hz / sample_rate_hz;
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &h)| Complex64::from_polar(h, -w * k as f64))
        .sum()
}

/// Filtered signal plus the number of samples at each end that overlap the
/// zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtered {
    pub signal: SampledSignal,
    pub transient_samples: usize,
}

/// Convolves with `coeffs` and removes the `(ν-1)/2` group delay, so a
/// symmetric filter introduces no phase shift. Output length equals input
/// length; samples outside the input are taken as zero.
pub fn filter_signal(signal: &SampledSignal, coeffs: &[f64]) -> Result<Filtered, PipelineError> {
    let x = signal.samples();
    if coeffs.is_empty() || x.len() <= coeffs.len() {
        return Err(PipelineError::InvalidConfig(format!(
            "signal of {} samples must be longer than the {}-tap filter",
            x.len(),
            coeffs.len()
        )));
    }
    let delay = (coeffs.len() - 1) / 2;
    let n = x.len() as isize;
    let y = (0..x.len() as isize)
        .map(|i| {
            coeffs
                .iter()
                .enumerate()
                .filter_map(|(k, h)| {
                    let j = i + delay as isize - k as isize;
                    (0..n).contains(&j).then(|| h * x[j as usize])
                })
                .sum()
        })
        .collect();
    Ok(Filtered {
        signal: signal.with_samples(y),
        transient_samples: delay,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db(c: Complex64) -> f64 {
        20.0 * c.norm().log10()
    }

    fn spec(lo: f64, hi: f64, nu: usize) -> FilterSpec {
        FilterSpec::new(BandHz::new(lo, hi).unwrap(), nu).unwrap()
    }

    #[test]
    fn order_111_is_symmetric_with_111_taps() {
        let f = design_bandpass(&spec(9.9, 10.1, 111), 30.0).unwrap();
        assert_eq!(f.coeffs.len(), 111);
        for k in 0..111 {
            assert_eq!(f.coeffs[k], f.coeffs[110 - k]);
        }
        assert!(f.narrow_band_warning);
    }

    #[test]
    fn even_order_rejected() {
        assert!(FilterSpec::new(BandHz::new(9.9, 10.1).unwrap(), 512).is_err());
    }

    #[test]
    fn order_511_response() {
        let f = design_bandpass(&spec(10.04, 10.14, 511), 30.0).unwrap();
        let h = |fr: f64| db(frequency_response(&f.coeffs, fr, 30.0));
        assert!(h(10.09).abs() < 3.0);
        assert!(h(8.0) < -20.0);
        assert!(h(12.0) < -20.0);
        // 10.0 Hz lies 0.04 Hz outside this 0.1 Hz-wide pass-band, inside the
        // Hamming transition region; the evaluated response there is about
        // -12.8 dB.
        assert!((h(10.0) + 12.83).abs() < 0.05, "{}", h(10.0));
    }

    #[test]
    fn impulse_gives_coefficients() {
        let f = design_bandpass(&spec(9.9, 10.1, 111), 30.0).unwrap();
        let mut x = vec![0.0; 400];
        x[200] = 1.0;
        let s = SampledSignal::new(x, 30.0).unwrap();
        let y = filter_signal(&s, &f.coeffs).unwrap();
        assert_eq!(y.transient_samples, 55);
        for k in 0..111 {
            assert_eq!(y.signal.samples()[200 - 55 + k], f.coeffs[k]);
        }
        assert_eq!(y.signal.samples()[0], 0.0);
    }

    #[test]
    fn in_band_tone_passes_without_phase_shift() {
        let rate = 30.0;
        let f = design_bandpass(&spec(9.9, 10.1, 111), rate).unwrap();
        let x: Vec<f64> = (0..3000)
            .map(|i| (2.0 * PI * 10.0 * i as f64 / rate + 0.4).cos())
            .collect();
        let s = SampledSignal::new(x.clone(), rate).unwrap();
        let y = filter_signal(&s, &f.coeffs).unwrap();
        let ys = &y.signal.samples()[200..2800];
        let xs = &x[200..2800];
        // lag of the cross-correlation maximum within one 3-sample period
        let best = (-1i32..=1)
            .max_by(|&a, &b| {
                let c = |l: i32| -> f64 {
                    (10..ys.len() - 10)
                        .map(|i| ys[i] * xs[(i as i32 + l) as usize])
                        .sum()
                };
                c(a).total_cmp(&c(b))
            })
            .unwrap();
        assert_eq!(best, 0);
        let err = ys
            .iter()
            .zip(xs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn out_of_band_tone_attenuated_40db() {
        let rate = 30.0;
        let f = design_bandpass(&spec(9.9, 10.1, 111), rate).unwrap();
        let x: Vec<f64> = (0..3000)
            .map(|i| (2.0 * PI * 5.0 * i as f64 / rate).cos())
            .collect();
        let s = SampledSignal::new(x, rate).unwrap();
        let y = filter_signal(&s, &f.coeffs).unwrap();
        let peak = y.signal.samples()[200..2800]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(20.0 * peak.log10() <= -40.0);
    }

    #[test]
    fn filter_must_be_shorter_than_signal() {
        let s = SampledSignal::new(vec![0.0; 50], 30.0).unwrap();
        assert!(filter_signal(&s, &[1.0; 111]).is_err());
    }
}
