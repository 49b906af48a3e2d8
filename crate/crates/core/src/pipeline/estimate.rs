use super::{dealias, PipelineError};
use crate::signal::{BandHz, EnfTrace, SampledSignal, TracePoint};
use crate::spectral::{
    bt_spectrum, esprit_frequencies, local_snr, quadratic_peak, spectrum_combine, stft_frame,
    CombineConfig, EspritConfig, LagWindow, SpectralError, WindowKind, NOISE_CONTEXT_FACTOR,
};

/// Per-segment frequency estimator and its settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Peak of the tapered DTFT power.
    StftPeak { analysis_window: WindowKind },
    /// Peak of the Blackman-Tukey estimate; `None` uses Bartlett with
    /// `M = N/4`.
    BtPeak { lag_window: Option<LagWindow> },
    /// In-band ESPRIT root nearest the band center.
    Esprit(EspritConfig),
    /// Peak of the harmonic-combined spectrum. The combine band replaces
    /// `EstimatorConfig::band`.
    Combine(CombineConfig),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::StftPeak { .. } => "stft",
            Method::BtPeak { .. } => "bt",
            Method::Esprit(_) => "esprit",
            Method::Combine(_) => "combine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub method: Method,
    pub window_s: f64,
    pub hop_s: f64,
    /// Search band, in the frequency domain of the analysed signal (the
    /// aliased domain for video).
    pub band: BandHz,
    /// Nominal ENF reported for failed segments when no alias context is
    /// given.
    pub nominal_hz: f64,
    pub grid_step_hz: f64,
    /// Samples at each end of the signal contaminated by a filter transient.
    pub transient_samples: usize,
}

impl EstimatorConfig {
    /// Mains/photodiode defaults: 16 s windows, 1 s hop, `nominal ± 0.1` Hz,
    /// 1 mHz grid.
    pub fn audio(method: Method, nominal_hz: f64) -> Result<Self, PipelineError> {
        let band = match method {
            Method::Combine(c) => BandHz::around(c.nominal_hz, c.band_halfwidth_hz)?,
            _ => BandHz::around(nominal_hz, 0.1)?,
        };
        Ok(Self {
            method,
            window_s: 16.0,
            hop_s: 1.0,
            band,
            nominal_hz,
            grid_step_hz: 0.001,
            transient_samples: 0,
        })
    }

    /// Video defaults: 21 s windows, 1 s hop, 1 mHz grid in the aliased
    /// domain.
    pub fn video(method: Method, band: BandHz, nominal_hz: f64) -> Self {
        Self {
            method,
            window_s: 21.0,
            hop_s: 1.0,
            band,
            nominal_hz,
            grid_step_hz: 0.001,
            transient_samples: 0,
        }
    }

    fn search_band(&self) -> Result<BandHz, PipelineError> {
        match self.method {
            Method::Combine(c) => Ok(c.base_band()?),
            _ => Ok(self.band),
        }
    }
}

/// Number of full windows: `floor((duration - window) / hop) + 1`.
pub fn segment_count(signal_len: usize, rate: f64, window_s: f64, hop_s: f64) -> usize {
    let duration = signal_len as f64 / rate;
    if duration + 1e-9 < window_s {
        return 0;
    }
    ((duration - window_s) / hop_s + 1e-9).floor() as usize + 1
}

struct SegmentEstimate {
    freq_hz: f64,
    snr: f64,
}

fn estimate_segment(
    segment: &SampledSignal,
    config: &EstimatorConfig,
    band: BandHz,
) -> Result<Option<SegmentEstimate>, SpectralError> {
    let rate = segment.sample_rate_hz();
    let context = band.widened(NOISE_CONTEXT_FACTOR, rate);
    let step = config.grid_step_hz;
    let from_spectrum =
        |spec: crate::signal::SpectrumEstimate| -> Result<Option<SegmentEstimate>, SpectralError> {
            let snr = local_snr(&spec, band, context)?;
            let peak = quadratic_peak(&spec.crop(band))?;
            Ok((!peak.at_edge).then_some(SegmentEstimate {
                freq_hz: peak.freq_hz,
                snr: snr.ratio,
            }))
        };
    match config.method {
        Method::StftPeak { analysis_window } => {
            from_spectrum(stft_frame(segment, analysis_window, context, step)?)
        }
        Method::BtPeak { lag_window } => {
            let lag = lag_window.unwrap_or_else(|| LagWindow::default_for(segment.len()));
            from_spectrum(bt_spectrum(segment, lag, context, step)?.spectrum)
        }
        Method::Esprit(esprit) => {
            let roots = esprit_frequencies(segment, esprit)?;
            let center = band.center_hz();
            let best = roots
                .into_iter()
                .filter(|f| band.contains(*f))
                .min_by(|a, b| (a - center).abs().total_cmp(&(b - center).abs()));
            let Some(freq_hz) = best else {
                return Ok(None);
            };
            let spec = stft_frame(segment, WindowKind::Hann, context, step)?;
            let snr = local_snr(&spec, band, context)?;
            Ok(Some(SegmentEstimate {
                freq_hz,
                snr: snr.ratio,
            }))
        }
        Method::Combine(combine) => {
            let c = spectrum_combine(segment, combine, step)?;
            let ctx = c.context.clone();
            let ctx_band = BandHz::new(ctx.freq_start_hz(), ctx.freq_at(ctx.len() - 1))?;
            let snr = local_snr(&ctx, band, ctx_band)?;
            let peak = quadratic_peak(&c.spectrum)?;
            Ok((!peak.at_edge).then_some(SegmentEstimate {
                freq_hz: peak.freq_hz,
                snr: snr.ratio,
            }))
        }
    }
}

/// Maps a linear SNR to `[0, 1]`: `1 - 1/snr`, so 10 dB gives 0.9.
pub fn snr_confidence(snr: f64) -> f64 {
    if snr.is_finite() && snr > 0.0 {
        (1.0 - 1.0 / snr).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Slides a `window_s` window with hop `hop_s` over `signal` and estimates
/// one frequency per segment.
///
/// With `alias_context = Some(nominal_source_hz)` the signal is treated as
/// sampled light flicker: each estimate is de-aliased toward the nominal
/// source frequency and halved to ENF units. Segments whose estimator fails
/// or whose peak sits on the band edge are reported at the nominal ENF with
/// confidence 0.
pub fn estimate_enf(
    signal: &SampledSignal,
    config: &EstimatorConfig,
    alias_context: Option<f64>,
) -> Result<EnfTrace, PipelineError> {
    signal.ensure_non_empty()?;
    if !(config.window_s > 0.0 && config.hop_s > 0.0 && config.hop_s <= config.window_s) {
        return Err(PipelineError::InvalidConfig(format!(
            "window {} s and hop {} s must satisfy 0 < hop <= window",
            config.window_s, config.hop_s
        )));
    }
    let rate = signal.sample_rate_hz();
    let band = config.search_band()?;
    if !band.is_below_nyquist(rate) {
        return Err(PipelineError::InvalidConfig(format!(
            "band [{}, {}] Hz is outside (0, {}) Hz",
            band.low_hz(),
            band.high_hz(),
            0.5 * rate
        )));
    }
    let count = segment_count(signal.len(), rate, config.window_s, config.hop_s);
    if count == 0 {
        return Err(PipelineError::TooShort {
            duration_s: signal.duration_s(),
            window_s: config.window_s,
        });
    }
    let nominal_enf = match alias_context {
        Some(source) => 0.5 * source,
        None => config.nominal_hz,
    };

    let window_len = (config.window_s * rate).round() as usize;
    let n = signal.len();
    let tainted = config.transient_samples;
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let start = ((i as f64 * config.hop_s * rate).round() as usize).min(n - window_len);
        let time_s = config.window_s / 2.0 + i as f64 * config.hop_s;
        let segment = signal.window(start, window_len);
        let failed = TracePoint {
            time_s,
            freq_hz: nominal_enf,
            confidence: 0.0,
        };
        let est = match estimate_segment(&segment, config, band) {
            Ok(Some(e)) => e,
            Ok(None) | Err(SpectralError::Degenerate(_)) => {
                points.push(failed);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let freq_hz = match alias_context {
            Some(source) => match dealias(est.freq_hz, rate, source) {
                Ok(f) => 0.5 * f,
                Err(_) => {
                    points.push(failed);
                    continue;
                }
            },
            None => est.freq_hz,
        };
        if (freq_hz - nominal_enf).abs() > 1.0 {
            points.push(failed);
            continue;
        }
        let clean = untainted_fraction(start, window_len, n, tainted);
        points.push(TracePoint {
            time_s,
            freq_hz,
            confidence: snr_confidence(est.snr) * clean,
        });
    }
    Ok(EnfTrace::new(
        nominal_enf,
        config.window_s,
        config.hop_s,
        points,
    )?)
}

/// Fraction of `[start, start+len)` outside the first and last `tainted`
/// samples of a signal of length `n`.
fn untainted_fraction(start: usize, len: usize, n: usize, tainted: usize) -> f64 {
    if tainted == 0 {
        return 1.0;
    }
    let clean_lo = tainted.min(n);
    let clean_hi = n.saturating_sub(tainted);
    let lo = start.max(clean_lo);
    let hi = (start + len).min(clean_hi);
    if hi <= lo {
        0.0
    } else {
        (hi - lo) as f64 / len as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mains(f: impl Fn(f64) -> f64, secs: f64, rate: f64) -> SampledSignal {
        // phase by cumulative sum at the sample rate; f varies slowly
        let n = (secs * rate) as usize;
        let mut phase = 0.0;
        let x = (0..n)
            .map(|i| {
                let t = i as f64 / rate;
                let v: f64 = (1..=7).map(|z| (z as f64 * phase).cos() / z as f64).sum();
                phase += 2.0 * PI * f(t + 0.5 / rate) / rate;
                v
            })
            .collect();
        SampledSignal::new(x, rate).unwrap()
    }

    #[test]
    fn segment_count_formula() {
        assert_eq!(segment_count(480_000, 1000.0, 16.0, 1.0), 465);
        assert_eq!(segment_count(16_000, 1000.0, 16.0, 1.0), 1);
        assert_eq!(segment_count(15_999, 1000.0, 16.0, 1.0), 0);
        assert_eq!(segment_count(630 + 45, 30.0, 21.0, 1.0), 2);
    }

    #[test]
    fn constant_mains_combine() {
        let s = mains(|_| 50.0, 120.0, 1000.0);
        let cfg = EstimatorConfig::audio(Method::Combine(CombineConfig::default()), 50.0).unwrap();
        let trace = estimate_enf(&s, &cfg, None).unwrap();
        assert_eq!(trace.len(), 105);
        assert_eq!(trace.points()[0].time_s, 8.0);
        for p in trace.points() {
            assert!((p.freq_hz - 50.0).abs() <= 0.001, "{p:?}");
            assert!(p.confidence > 0.9);
        }
    }

    #[test]
    fn too_short_signal() {
        let s = mains(|_| 50.0, 10.0, 1000.0);
        let cfg = EstimatorConfig::audio(
            Method::StftPeak {
                analysis_window: WindowKind::Hann,
            },
            50.0,
        )
        .unwrap();
        assert!(matches!(
            estimate_enf(&s, &cfg, None),
            Err(PipelineError::TooShort { .. })
        ));
    }

    #[test]
    fn scaled_signal_gives_same_trace() {
        let s = mains(|t| 50.0 + 0.02 * (t / 10.0).sin(), 40.0, 1000.0);
        let scaled = s.with_samples(s.samples().iter().map(|v| v * 3.7).collect());
        for method in [
            Method::StftPeak {
                analysis_window: WindowKind::Hann,
            },
            Method::BtPeak { lag_window: None },
            Method::Combine(CombineConfig::default()),
        ] {
            let cfg = EstimatorConfig::audio(method, 50.0).unwrap();
            let a = estimate_enf(&s, &cfg, None).unwrap();
            let b = estimate_enf(&scaled, &cfg, None).unwrap();
            for (p, q) in a.points().iter().zip(b.points()) {
                assert!((p.freq_hz - q.freq_hz).abs() < 1e-9, "{}", method.name());
            }
        }
    }

    #[test]
    fn flicker_esprit_dealiased() {
        // 2 × 50.02 Hz flicker at 30 fps folds to 10.04 Hz
        let rate = 30.0;
        let x: Vec<f64> = (0..(60.0 * rate) as usize)
            .map(|i| (2.0 * PI * 100.04 * i as f64 / rate).cos())
            .collect();
        let s = SampledSignal::new(x, rate).unwrap();
        let cfg = EstimatorConfig::video(
            Method::Esprit(EspritConfig::default()),
            BandHz::new(9.9, 10.1).unwrap(),
            50.0,
        );
        let trace = estimate_enf(&s, &cfg, Some(100.0)).unwrap();
        assert_eq!(trace.len(), 40);
        assert_eq!(trace.nominal_hz(), 50.0);
        for p in trace.points() {
            assert!((p.freq_hz - 50.02).abs() <= 0.001, "{p:?}");
        }
    }

    #[test]
    fn transient_lowers_edge_confidence() {
        assert_eq!(untainted_fraction(0, 100, 1000, 50), 0.5);
        assert_eq!(untainted_fraction(200, 100, 1000, 50), 1.0);
        assert_eq!(untainted_fraction(900, 100, 1000, 50), 0.5);
        assert_eq!(untainted_fraction(0, 100, 1000, 0), 1.0);
    }
}
