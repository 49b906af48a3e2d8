//! Shared domain types: sampled waveforms, ENF traces, spectral strips and
//! frequency bands.

use thiserror::Error;

/// Errors raised while constructing or slicing the basic signal types.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    #[error("sample rate must be positive and finite, got {0}")]
    InvalidRate(f64),
    #[error("signal has no samples")]
    Empty,
    #[error("requested {requested} s but only {available} s are available")]
    OutOfRange { requested: f64, available: f64 },
    #[error("invalid band [{low}, {high}] Hz")]
    InvalidBand { low: f64, high: f64 },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
}

/// Slack used when comparing durations computed from sample counts.
const TIME_EPS: f64 = 1e-9;

/// A uniformly sampled real waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
    label: Option<String>,
}

impl SampledSignal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self, SignalError> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(SignalError::InvalidRate(sample_rate_hz));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    pub(crate) fn ensure_non_empty(&self) -> Result<(), SignalError> {
        if self.samples.is_empty() {
            Err(SignalError::Empty)
        } else {
            Ok(())
        }
    }

    /// Same rate and label, different samples.
    pub(crate) fn with_samples(&self, samples: Vec<f64>) -> Self {
        Self {
            samples,
            sample_rate_hz: self.sample_rate_hz,
            label: self.label.clone(),
        }
    }

    /// Sub-range `[start, start + len)` as a new signal.
    pub(crate) fn window(&self, start: usize, len: usize) -> Self {
        self.with_samples(self.samples[start..start + len].to_vec())
    }
}

/// Returns the first `floor(duration_s * rate)` samples of `signal`.
pub fn slice_prefix(signal: &SampledSignal, duration_s: f64) -> Result<SampledSignal, SignalError> {
    let available = signal.duration_s();
    if !(duration_s > 0.0) || duration_s > available + TIME_EPS {
        return Err(SignalError::OutOfRange {
            requested: duration_s,
            available,
        });
    }
    let count = ((duration_s * signal.sample_rate_hz) + TIME_EPS).floor() as usize;
    let count = count.min(signal.len());
    Ok(signal.window(0, count))
}

/// One ENF estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub time_s: f64,
    pub freq_hz: f64,
    pub confidence: f64,
}

/// A time series of per-segment ENF estimates at a fixed hop.
///
/// Points are strictly increasing in time with spacing `hop_s`. The first
/// point of an analysis trace sits at the center of the first window.
#[derive(Debug, Clone, PartialEq)]
pub struct EnfTrace {
    nominal_hz: f64,
    window_s: f64,
    hop_s: f64,
    points: Vec<TracePoint>,
}

impl EnfTrace {
    pub fn new(
        nominal_hz: f64,
        window_s: f64,
        hop_s: f64,
        points: Vec<TracePoint>,
    ) -> Result<Self, SignalError> {
        if !(window_s.is_finite() && window_s > 0.0) {
            return Err(SignalError::InvalidTrace(format!("window_s = {window_s}")));
        }
        if !(hop_s.is_finite() && hop_s > 0.0) {
            return Err(SignalError::InvalidTrace(format!("hop_s = {hop_s}")));
        }
        for (i, pair) in points.windows(2).enumerate() {
            let spacing = pair[1].time_s - pair[0].time_s;
            if (spacing - hop_s).abs() > 1e-9 * hop_s.max(pair[1].time_s.abs()) {
                return Err(SignalError::InvalidTrace(format!(
                    "spacing {spacing} between points {i} and {} differs from hop {hop_s}",
                    i + 1
                )));
            }
        }
        for (i, p) in points.iter().enumerate() {
            if !(0.0..=1.0).contains(&p.confidence) {
                return Err(SignalError::InvalidTrace(format!(
                    "point {i} has confidence {}",
                    p.confidence
                )));
            }
            if p.confidence > 0.0 && (p.freq_hz - nominal_hz).abs() > 1.0 {
                return Err(SignalError::InvalidTrace(format!(
                    "point {i} at {} Hz is more than 1 Hz from nominal {nominal_hz} Hz",
                    p.freq_hz
                )));
            }
        }
        Ok(Self {
            nominal_hz,
            window_s,
            hop_s,
            points,
        })
    }

    pub fn nominal_hz(&self) -> f64 {
        self.nominal_hz
    }

    pub fn window_s(&self) -> f64 {
        self.window_s
    }

    pub fn hop_s(&self) -> f64 {
        self.hop_s
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.freq_hz).collect()
    }

    /// Time covered by the trace, counting one hop per point.
    pub fn duration_s(&self) -> f64 {
        self.points.len() as f64 * self.hop_s
    }
}

/// Keeps the points of `trace` with `time_s <= duration_s`.
pub fn trace_prefix(trace: &EnfTrace, duration_s: f64) -> Result<EnfTrace, SignalError> {
    if !(duration_s > trace.window_s) {
        return Err(SignalError::OutOfRange {
            requested: duration_s,
            available: trace.window_s,
        });
    }
    let points: Vec<TracePoint> = trace
        .points
        .iter()
        .copied()
        .take_while(|p| p.time_s <= duration_s + TIME_EPS)
        .collect();
    if points.is_empty() {
        return Err(SignalError::InvalidTrace(format!(
            "no points at or before {duration_s} s"
        )));
    }
    Ok(EnfTrace {
        points,
        ..trace.clone()
    })
}

/// A power spectrum sampled on a uniform frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    freq_start_hz: f64,
    freq_step_hz: f64,
    power: Vec<f64>,
}

impl SpectrumEstimate {
    pub fn new(
        freq_start_hz: f64,
        freq_step_hz: f64,
        power: Vec<f64>,
    ) -> Result<Self, SignalError> {
        if !(freq_step_hz.is_finite() && freq_step_hz > 0.0) {
            return Err(SignalError::InvalidSpectrum(format!("step {freq_step_hz}")));
        }
        if let Some(bad) = power.iter().find(|p| !(**p >= 0.0)) {
            return Err(SignalError::InvalidSpectrum(format!("power value {bad}")));
        }
        Ok(Self {
            freq_start_hz,
            freq_step_hz,
            power,
        })
    }

    pub fn freq_start_hz(&self) -> f64 {
        self.freq_start_hz
    }

    pub fn freq_step_hz(&self) -> f64 {
        self.freq_step_hz
    }

    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    pub fn freq_at(&self, index: usize) -> f64 {
        self.freq_start_hz + index as f64 * self.freq_step_hz
    }

    /// Index of the largest value; first one wins on ties.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &p) in self.power.iter().enumerate() {
            match best {
                Some(b) if self.power[b] >= p => {}
                _ => best = Some(i),
            }
        }
        best
    }

    /// Grid indices whose frequency lies inside `band` (inclusive, with a
    /// small tolerance for grid rounding).
    pub fn index_range(&self, band: BandHz) -> std::ops::Range<usize> {
        let tol = 1e-6;
        let lo = ((band.low_hz() - self.freq_start_hz) / self.freq_step_hz - tol).ceil();
        let hi = ((band.high_hz() - self.freq_start_hz) / self.freq_step_hz + tol).floor();
        let lo = lo.max(0.0) as usize;
        let hi = (hi + 1.0).max(0.0) as usize;
        let hi = hi.min(self.power.len());
        lo.min(hi)..hi
    }

    /// The part of the spectrum inside `band`.
    pub fn crop(&self, band: BandHz) -> SpectrumEstimate {
        let range = self.index_range(band);
        SpectrumEstimate {
            freq_start_hz: self.freq_at(range.start),
            freq_step_hz: self.freq_step_hz,
            power: self.power[range].to_vec(),
        }
    }
}

/// A closed frequency interval with `low_hz < high_hz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandHz {
    low_hz: f64,
    high_hz: f64,
}

impl BandHz {
    pub fn new(low_hz: f64, high_hz: f64) -> Result<Self, SignalError> {
        if !(low_hz.is_finite() && high_hz.is_finite() && low_hz < high_hz) {
            return Err(SignalError::InvalidBand {
                low: low_hz,
                high: high_hz,
            });
        }
        Ok(Self { low_hz, high_hz })
    }

    /// Band `center ± half_width`.
    pub fn around(center_hz: f64, half_width_hz: f64) -> Result<Self, SignalError> {
        Self::new(center_hz - half_width_hz, center_hz + half_width_hz)
    }

    pub fn low_hz(&self) -> f64 {
        self.low_hz
    }

    pub fn high_hz(&self) -> f64 {
        self.high_hz
    }

    pub fn center_hz(&self) -> f64 {
        0.5 * (self.low_hz + self.high_hz)
    }

    pub fn width_hz(&self) -> f64 {
        self.high_hz - self.low_hz
    }

    pub fn half_width_hz(&self) -> f64 {
        0.5 * self.width_hz()
    }

    pub fn contains(&self, freq_hz: f64) -> bool {
        freq_hz >= self.low_hz && freq_hz <= self.high_hz
    }

    pub fn contains_band(&self, other: BandHz) -> bool {
        other.low_hz >= self.low_hz && other.high_hz <= self.high_hz
    }

    /// True when the band lies strictly inside `(0, nyquist)`.
    pub fn is_below_nyquist(&self, sample_rate_hz: f64) -> bool {
        self.low_hz > 0.0 && self.high_hz < 0.5 * sample_rate_hz
    }

    /// Same center, half-width scaled by `factor`, clipped to
    /// `(0, sample_rate/2)`.
    pub fn widened(&self, factor: f64, sample_rate_hz: f64) -> BandHz {
        let c = self.center_hz();
        let hw = self.half_width_hz() * factor;
        let margin = 1e-9 * sample_rate_hz;
        let low = (c - hw).max(margin);
        let high = (c + hw).min(0.5 * sample_rate_hz - margin);
        BandHz {
            low_hz: low.min(self.low_hz),
            high_hz: high.max(self.high_hz),
        }
    }

    pub fn scaled(&self, factor: f64) -> BandHz {
        BandHz {
            low_hz: self.low_hz * factor,
            high_hz: self.high_hz * factor,
        }
    }
}
