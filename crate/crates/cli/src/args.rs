use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use enf_core::ingest::Rational;
use enf_core::signal::BandHz;

#[derive(Debug, Parser)]
#[command(
    name = "enf",
    version,
    about = "Electric network frequency extraction and matching"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a mains/photodiode WAV, optionally a flicker video, and the
    /// ground-truth ENF trace.
    Synth(SynthArgs),
    /// Extract an ENF trace from one channel of a WAV recording.
    ExtractAudio(AudioArgs),
    /// Extract an ENF trace from the light flicker in a Y4M video.
    ExtractVideo(VideoArgs),
    /// Correlate two traces over a range of lags.
    Match(MatchArgs),
    /// Match growing prefixes of two traces.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    /// mains (left channel of a stereo file)
    Left,
    /// photodiode (right channel of a stereo file)
    Right,
    /// the only channel of a mono file
    Mono,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodName {
    Stft,
    Bt,
    Esprit,
    Combine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SceneKind {
    Uniform,
    Textured,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory for mains.wav, truth.csv and video.y4m
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 480.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Nominal grid frequency, 50 or 60 Hz
    #[arg(long, default_value_t = 50.0, value_parser = parse_nominal)]
    pub nominal: f64,
    /// Audio sample rate in Hz
    #[arg(long, default_value_t = 1000)]
    pub rate: u32,
    /// Mains SNR in dB relative to the total harmonic power
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub snr_db: f64,
    /// Random-walk increment standard deviation, Hz per sqrt(s)
    #[arg(long, default_value_t = 0.002)]
    pub step_std: f64,
    /// Walk clamp half-width around nominal, Hz
    #[arg(long, default_value_t = 0.1)]
    pub max_dev: f64,
    /// Number of mains harmonics, amplitudes 0.3/z
    #[arg(long, default_value_t = 7)]
    pub harmonics: usize,
    /// Write the mains channel only (no photodiode channel)
    #[arg(long)]
    pub mono: bool,
    /// Also render a flicker video at this frame rate (e.g. 30 or 30000:1001)
    #[arg(long, value_parser = parse_rational)]
    pub fps: Option<Rational>,
    /// Video size WxH
    #[arg(long, default_value = "64x64", value_parser = parse_size)]
    pub size: (usize, usize),
    #[arg(long, value_enum, default_value_t = SceneKind::Textured)]
    pub scene: SceneKind,
    /// Flicker modulation index
    #[arg(long, default_value_t = 0.1)]
    pub flicker_depth: f64,
    /// Exposure time as a fraction of the frame period
    #[arg(long, default_value_t = 0.5)]
    pub exposure: f64,
    /// Gaussian luma noise standard deviation
    #[arg(long, default_value_t = 1.0)]
    pub video_noise: f64,
    /// Add a moving dark rectangle covering this fraction of the frame
    #[arg(long)]
    pub occluder_area: Option<f64>,
    /// Seconds for the occluder to cross the frame and come back
    #[arg(long, default_value_t = 60.0)]
    pub occluder_period: f64,
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    /// Analysis window in seconds (16 for audio, 21 for video by default)
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub hop: f64,
    /// Frequency grid step in Hz
    #[arg(long, default_value_t = 0.001)]
    pub step: f64,
    /// ESPRIT covariance dimension
    #[arg(long, default_value_t = 10)]
    pub cov_dim: usize,
    /// ESPRIT model order
    #[arg(long, default_value_t = 3)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct AudioArgs {
    #[arg(long)]
    pub wav: PathBuf,
    /// Channel to analyse; defaults to left for stereo and mono for mono files
    #[arg(long, value_enum)]
    pub channel: Option<Channel>,
    #[arg(long, value_enum, default_value_t = MethodName::Combine)]
    pub method: MethodName,
    #[arg(long, default_value_t = 50.0, value_parser = parse_nominal)]
    pub nominal: f64,
    /// Search band lo:hi in Hz (default nominal ± halfwidth, doubled for the photodiode)
    #[arg(long, value_parser = parse_band)]
    pub band: Option<BandHz>,
    /// Harmonics combined by --method combine (default 7 for mains, 1 for light)
    #[arg(long)]
    pub harmonics: Option<usize>,
    /// Half-width of the band around the nominal ENF, Hz
    #[arg(long, default_value_t = 0.1)]
    pub halfwidth: f64,
    #[command(flatten)]
    pub est: EstimatorArgs,
    /// Output trace CSV
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VideoArgs {
    #[arg(long)]
    pub y4m: PathBuf,
    #[arg(long, default_value_t = 50.0, value_parser = parse_nominal)]
    pub nominal: f64,
    /// Pass-band lo:hi in Hz (default: alias of twice nominal at the video rate ± 0.1)
    #[arg(long, value_parser = parse_band)]
    pub band: Option<BandHz>,
    /// Bandpass FIR order, odd
    #[arg(long, default_value_t = 111)]
    pub filter_order: usize,
    /// SLIC region count K
    #[arg(long, default_value_t = 150)]
    pub regions: usize,
    /// SLIC compactness m
    #[arg(long, default_value_t = 10.0)]
    pub compactness: f64,
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    /// Regions averaged after SNR ranking
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[arg(long, value_enum, default_value_t = MethodName::Esprit)]
    pub method: MethodName,
    #[command(flatten)]
    pub est: EstimatorArgs,
    /// Write the region label map as a PGM image
    #[arg(long)]
    pub labels_pgm: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub query: PathBuf,
    /// Largest lag searched, seconds
    #[arg(long, default_value_t = 0.0)]
    pub max_lag: f64,
    /// Minimum overlap as a fraction of the shorter trace
    #[arg(long, default_value_t = enf_core::matching::DEFAULT_MIN_OVERLAP)]
    pub min_overlap: f64,
    /// Output JSON (standard output if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub query: PathBuf,
    /// Durations in seconds: a comma list or start:stop:step
    #[arg(long, value_parser = parse_durations)]
    pub durations: Durations,
    #[arg(long, default_value_t = 0.0)]
    pub max_lag: f64,
    /// Output CSV (standard output if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Durations(pub Vec<f64>);

fn parse_nominal(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v == 50.0 || v == 60.0 => Ok(v),
        _ => Err(format!("nominal frequency must be 50 or 60, got '{s}'")),
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("size must be WxH, got '{s}'"))?;
    let w: usize = w.parse().map_err(|_| format!("bad width in '{s}'"))?;
    let h: usize = h.parse().map_err(|_| format!("bad height in '{s}'"))?;
    if w < 2 || h < 2 {
        return Err(format!("size {w}x{h} is smaller than 2x2"));
    }
    Ok((w, h))
}

pub(crate) fn parse_band(s: &str) -> Result<BandHz, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("band must be lo:hi, got '{s}'"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad band edge in '{s}'"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad band edge in '{s}'"))?;
    BandHz::new(lo, hi).map_err(|e| e.to_string())
}

pub(crate) fn parse_durations(s: &str) -> Result<Durations, String> {
    let bad = || format!("durations must be a comma list or start:stop:step, got '{s}'");
    let values: Vec<f64> = if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if !(step > 0.0 && start > 0.0 && stop >= start) {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| start + i as f64 * step).collect()
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?
    };
    if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(bad());
    }
    Ok(Durations(values))
}
