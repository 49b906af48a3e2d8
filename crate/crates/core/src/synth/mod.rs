//! Synthetic ground truth: ENF random walks, mains and flicker waveforms,
//! camera-sampled flicker video and the file writers that go with them.

mod phase;
mod video;
mod writers;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::ingest::IngestError;
use crate::signal::{SampledSignal, SignalError};

pub use phase::PhaseTrack;
pub use video::{render_video, Occluder, SceneModel};
pub use writers::{encode_wav, encode_y4m, write_wav, write_y4m};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "harmonic {harmonic} reaches {freq_hz} Hz, at or above the {nyquist_hz} Hz Nyquist limit"
    )]
    AboveNyquist {
        harmonic: usize,
        freq_hz: f64,
        nyquist_hz: f64,
    },
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Clamped Gaussian random walk around a nominal grid frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnfModel {
    pub nominal_hz: f64,
    /// Standard deviation of the increment accumulated over one second.
    pub step_std_hz: f64,
    pub max_dev_hz: f64,
    pub seed: u64,
}

impl EnfModel {
    pub fn new(nominal_hz: f64, seed: u64) -> Self {
        Self {
            nominal_hz,
            step_std_hz: 0.002,
            max_dev_hz: 0.1,
            seed,
        }
    }
}

/// Instantaneous ENF sampled at `rate_hz` over `[0, duration_s]`, both ends
/// included.
pub fn gen_enf_walk(
    model: EnfModel,
    duration_s: f64,
    rate_hz: f64,
) -> Result<SampledSignal, SynthError> {
    if !(duration_s > 0.0 && rate_hz > 0.0) {
        return Err(SynthError::InvalidParameter(format!(
            "duration {duration_s} s and rate {rate_hz} Hz must be positive"
        )));
    }
    if !(model.step_std_hz >= 0.0 && model.max_dev_hz > 0.0) {
        return Err(SynthError::InvalidParameter(
            "step std must be nonnegative and max deviation positive".into(),
        ));
    }
    let n = (duration_s * rate_hz - 1e-9).ceil() as usize + 1;
    let step = model.step_std_hz / rate_hz.sqrt();
    let (lo, hi) = (
        model.nominal_hz - model.max_dev_hz,
        model.nominal_hz + model.max_dev_hz,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let mut f = model.nominal_hz;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        values.push(f);
        f = (f + step * rng.sample::<f64, _>(StandardNormal)).clamp(lo, hi);
    }
    Ok(SampledSignal::new(values, rate_hz)?.with_label("enf"))
}

/// Default harmonic profile `1/z`, `z = 1..=count`.
pub fn harmonic_profile(count: usize) -> Vec<f64> {
    (1..=count).map(|z| 1.0 / z as f64).collect()
}

/// `x(t) = Σ amp_z cos(z φ(t)) + noise`, where `φ` integrates the ENF.
///
/// `harmonic_amps[z-1]` scales harmonic `z`; an amplitude of zero skips
/// that harmonic (so `[0, a]` renders light flicker at twice the ENF).
/// White Gaussian noise is scaled to `snr_db` relative to the total
/// harmonic power; `snr_db = +inf` means no noise.
pub fn render_mains(
    enf: &SampledSignal,
    out_rate_hz: f64,
    duration_s: f64,
    harmonic_amps: &[f64],
    snr_db: f64,
    seed: u64,
) -> Result<SampledSignal, SynthError> {
    if !(out_rate_hz > 0.0 && duration_s > 0.0) {
        return Err(SynthError::InvalidParameter(format!(
            "rate {out_rate_hz} Hz and duration {duration_s} s must be positive"
        )));
    }
    let track = PhaseTrack::new(enf)?;
    let peak_enf = enf.samples().iter().cloned().fold(0.0, f64::max);
    let nyquist = 0.5 * out_rate_hz;
    for (i, &a) in harmonic_amps.iter().enumerate() {
        let freq = (i + 1) as f64 * peak_enf;
        if a != 0.0 && freq >= nyquist {
            return Err(SynthError::AboveNyquist {
                harmonic: i + 1,
                freq_hz: freq,
                nyquist_hz: nyquist,
            });
        }
    }
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(SynthError::InvalidParameter(format!("SNR of {snr_db} dB")));
    }
    let n = (duration_s * out_rate_hz + 1e-9).floor() as usize;
    let mut x: Vec<f64> = (0..n)
        .map(|i| {
            let cycles = track.cycles_at(i as f64 / out_rate_hz);
            harmonic_amps
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != 0.0)
                .map(|(k, a)| a * unit_cos((k + 1) as f64 * cycles))
                .sum()
        })
        .collect();
    if snr_db.is_finite() {
        let power: f64 = harmonic_amps.iter().map(|a| 0.5 * a * a).sum();
        let sigma = (power / 10f64.powf(snr_db / 10.0)).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in &mut x {
            *v += sigma * rng.sample::<f64, _>(StandardNormal);
        }
    }
    Ok(SampledSignal::new(x, out_rate_hz)?)
}

/// `cos(2π c)` with whole cycles removed first to keep precision for large
/// `c`.
pub(crate) fn unit_cos(cycles: f64) -> f64 {
    (2.0 * std::f64::consts::PI * (cycles - cycles.floor())).cos()
}
