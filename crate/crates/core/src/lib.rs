//! Electric network frequency (ENF) extraction and matching.
//!
//! The crate turns mains recordings, photodiode light-sensor recordings and
//! video luminance into ENF traces, and compares traces by their maximum
//! correlation coefficient over time lags.
//!
//! Module map:
//! - [`signal`]: shared types ([`SampledSignal`], [`EnfTrace`], [`SpectrumEstimate`], [`BandHz`]).
//! - [`ingest`]: WAV and YUV4MPEG2 readers.
//! - [`video`]: superpixel segmentation and per-region luminance series.
//! - [`spectral`]: STFT, Blackman-Tukey, ESPRIT and harmonic spectrum combining.
//! - [`pipeline`]: aliasing, FIR bandpass design, sliding-window trace estimation.
//! - [`matching`]: Pearson correlation, lag search and duration sweeps.
//! - [`synth`]: ground-truth synthetic mains, flicker video and file writers.

// Negated float comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ingest;
pub mod matching;
pub mod pipeline;
pub mod signal;
pub mod spectral;
pub mod synth;
pub mod video;

pub use signal::{BandHz, EnfTrace, SampledSignal, SpectrumEstimate, TracePoint};
