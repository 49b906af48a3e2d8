use std::fs;
use std::io::Write;
use std::path::Path;

use enf_core::ingest::{open_y4m, read_wav, IngestError, WavContents};
use enf_core::matching::{duration_sweep, mcc, MatchError};
use enf_core::pipeline::{
    alias_frequency, design_bandpass, estimate_enf, filter_signal, EstimatorConfig, FilterSpec,
    Method, PipelineError,
};
use enf_core::signal::{BandHz, EnfTrace, SampledSignal, TracePoint};
use enf_core::spectral::{CombineConfig, EspritConfig, WindowKind};
use enf_core::synth::{
    gen_enf_walk, render_mains, render_video, write_wav, write_y4m, EnfModel, Occluder, SceneModel,
    SynthError,
};
use enf_core::video::{select_regions, slic_segment, RegionAccumulator, SlicParams, VideoError};

use crate::args::{
    AudioArgs, Channel, Command, EstimatorArgs, MatchArgs, MethodName, SceneKind, SweepArgs,
    SynthArgs, VideoArgs,
};
use crate::report::{match_json, write_sweep};
use crate::trace_csv::{load_trace, save_trace};
use crate::CliError;

/// Mains harmonic z is rendered with amplitude `MAINS_AMPLITUDE / z`.
const MAINS_AMPLITUDE: f64 = 0.3;
/// Photodiode flicker amplitude, at twice the ENF.
const LIGHT_AMPLITUDE: f64 = 0.5;
/// Below this alias frequency the flicker is indistinguishable from DC.
const MIN_ALIAS_HZ: f64 = 0.5;
const VIDEO_HALFWIDTH_HZ: f64 = 0.1;
const OCCLUDER_LUMA: f64 = 10.0;

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Synth(a) => synth(&a),
        Command::ExtractAudio(a) => extract_audio(&a),
        Command::ExtractVideo(a) => extract_video(&a),
        Command::Match(a) => run_match(&a),
        Command::Sweep(a) => run_sweep(&a),
    }
}

fn ingest_err(path: &Path) -> impl Fn(IngestError) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", path.display()))
}

fn synth_err(e: SynthError) -> CliError {
    CliError::Input(e.to_string())
}

fn pipeline_err(e: PipelineError) -> CliError {
    match e {
        PipelineError::InvalidConfig(_) => CliError::Input(e.to_string()),
        _ => CliError::Estimation(e.to_string()),
    }
}

fn video_err(e: VideoError) -> CliError {
    match e {
        VideoError::InvalidParameter(_) | VideoError::DimensionMismatch(_) => {
            CliError::Input(e.to_string())
        }
        _ => CliError::Estimation(e.to_string()),
    }
}

fn match_err(e: MatchError) -> CliError {
    match e {
        MatchError::HopMismatch { .. } | MatchError::InvalidParameter(_) => {
            CliError::Input(e.to_string())
        }
        _ => CliError::Estimation(e.to_string()),
    }
}

fn synth(a: &SynthArgs) -> Result<(), CliError> {
    fs::create_dir_all(&a.out)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", a.out.display())))?;
    let model = EnfModel {
        nominal_hz: a.nominal,
        step_std_hz: a.step_std,
        max_dev_hz: a.max_dev,
        seed: a.seed,
    };
    let walk = gen_enf_walk(model, a.duration, 1.0).map_err(synth_err)?;
    let rate = a.rate as f64;
    let amps: Vec<f64> = (1..=a.harmonics)
        .map(|z| MAINS_AMPLITUDE / z as f64)
        .collect();
    let mains =
        render_mains(&walk, rate, a.duration, &amps, a.snr_db, a.seed + 1).map_err(synth_err)?;
    let wav_path = a.out.join("mains.wav");
    if a.mono {
        write_wav(&[&mains], &wav_path).map_err(synth_err)?;
    } else {
        let light = render_mains(
            &walk,
            rate,
            a.duration,
            &[0.0, LIGHT_AMPLITUDE],
            a.snr_db,
            a.seed + 3,
        )
        .map_err(synth_err)?;
        write_wav(&[&mains, &light], &wav_path).map_err(synth_err)?;
    }
    println!("wrote {}", wav_path.display());

    let points = walk
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &f)| TracePoint {
            time_s: i as f64,
            freq_hz: f,
            confidence: 1.0,
        })
        .collect();
    let truth = EnfTrace::new(a.nominal, 1.0, 1.0, points)
        .map_err(|e| CliError::Input(format!("ground truth: {e}")))?;
    let truth_path = a.out.join("truth.csv");
    save_trace(&truth, &truth_path)?;
    println!("wrote {}", truth_path.display());

    if let Some(fps) = a.fps {
        let (w, h) = a.size;
        let mut scene = match a.scene {
            SceneKind::Uniform => SceneModel::uniform(w, h, 128.0),
            SceneKind::Textured => SceneModel::textured(w, h),
        };
        scene.flicker_depth = a.flicker_depth;
        scene.noise_std = a.video_noise;
        if let Some(area) = a.occluder_area {
            if !(area > 0.0 && area <= 1.0) {
                return Err(CliError::Input(format!(
                    "occluder area {area} must be in (0, 1]"
                )));
            }
            let ow = ((w as f64 * area.sqrt()).round() as usize).clamp(1, w);
            let oh = ((h as f64 * area.sqrt()).round() as usize).clamp(1, h);
            scene.occluder = Some(Occluder {
                width: ow,
                height: oh,
                luma: OCCLUDER_LUMA,
                from: (0.0, 0.0),
                to: ((w - ow) as f64, (h - oh) as f64),
                period_s: a.occluder_period,
            });
        }
        let video = render_video(&walk, &scene, fps, a.duration, a.exposure, a.seed + 2)
            .map_err(synth_err)?;
        let video_path = a.out.join("video.y4m");
        write_y4m(&video, &video_path).map_err(synth_err)?;
        println!(
            "wrote {} ({} frames)",
            video_path.display(),
            video.frame_count()
        );
    }
    Ok(())
}

fn build_method(name: MethodName, est: &EstimatorArgs, combine: CombineConfig) -> Method {
    match name {
        MethodName::Stft => Method::StftPeak {
            analysis_window: WindowKind::Hann,
        },
        MethodName::Bt => Method::BtPeak { lag_window: None },
        MethodName::Esprit => Method::Esprit(EspritConfig {
            cov_dim: est.cov_dim,
            model_order: est.order,
        }),
        MethodName::Combine => Method::Combine(combine),
    }
}

fn apply_estimator_args(cfg: &mut EstimatorConfig, est: &EstimatorArgs) {
    if let Some(w) = est.window {
        cfg.window_s = w;
    }
    cfg.hop_s = est.hop;
    cfg.grid_step_hz = est.step;
}

fn print_summary(trace: &EnfTrace, out: &Path) {
    let valid: Vec<f64> = trace
        .points()
        .iter()
        .filter(|p| p.confidence > 0.0)
        .map(|p| p.freq_hz)
        .collect();
    let n = valid.len().max(1) as f64;
    let mean = valid.iter().sum::<f64>() / n;
    let std = (valid.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / n).sqrt();
    println!(
        "points={} valid={} mean_hz={mean:.6} std_hz={std:.6} -> {}",
        trace.len(),
        valid.len(),
        out.display()
    );
}

fn extract_audio(a: &AudioArgs) -> Result<(), CliError> {
    let contents = read_wav(&a.wav).map_err(ingest_err(&a.wav))?;
    let channel = a.channel.unwrap_or(match contents {
        WavContents::Mono(_) => Channel::Mono,
        WavContents::Stereo(_) => Channel::Left,
    });
    let signal: SampledSignal = match (contents, channel) {
        (WavContents::Mono(s), Channel::Mono) => s,
        (WavContents::Stereo(s), Channel::Left) => s.into_channels().0,
        (WavContents::Stereo(s), Channel::Right) => s.into_channels().1,
        (c, ch) => {
            return Err(CliError::Input(format!(
                "--channel {} needs a {} file, but {} has {} channel(s)",
                format!("{ch:?}").to_lowercase(),
                if ch == Channel::Mono {
                    "mono"
                } else {
                    "stereo"
                },
                a.wav.display(),
                c.channel_count()
            )))
        }
    };
    // the photodiode sees light flicker at twice the ENF
    let light = channel == Channel::Right;
    let (center, halfwidth, alias_context) = if light {
        let source = 2.0 * a.nominal;
        let f_a = alias_frequency(source, signal.sample_rate_hz()).f_alias_hz;
        (f_a, 2.0 * a.halfwidth, Some(source))
    } else {
        (a.nominal, a.halfwidth, None)
    };
    let band = match a.band {
        Some(b) => b,
        None => {
            BandHz::around(center, halfwidth).map_err(|e| CliError::Input(format!("band: {e}")))?
        }
    };
    let combine = CombineConfig {
        harmonic_count_za: a.harmonics.unwrap_or(if light { 1 } else { 7 }),
        band_halfwidth_hz: band.half_width_hz(),
        nominal_hz: band.center_hz(),
        ..CombineConfig::default()
    };
    let method = build_method(a.method, &a.est, combine);
    let mut cfg = EstimatorConfig::audio(method, a.nominal).map_err(pipeline_err)?;
    cfg.band = band;
    apply_estimator_args(&mut cfg, &a.est);
    let trace = estimate_enf(&signal, &cfg, alias_context).map_err(pipeline_err)?;
    save_trace(&trace, &a.out)?;
    print_summary(&trace, &a.out);
    Ok(())
}

fn extract_video(a: &VideoArgs) -> Result<(), CliError> {
    if a.filter_order.is_multiple_of(2) {
        return Err(CliError::Input(format!(
            "--filter-order {} must be odd for a linear-phase bandpass",
            a.filter_order
        )));
    }
    if a.method == MethodName::Combine {
        return Err(CliError::Input(
            "--method combine needs harmonics and is only available for audio".into(),
        ));
    }
    let mut reader = open_y4m(&a.y4m).map_err(ingest_err(&a.y4m))?;
    let header = *reader.header();
    let fps = header.frame_rate.as_f64();
    let source = 2.0 * a.nominal;
    let f_a = alias_frequency(source, fps).f_alias_hz;
    if f_a < MIN_ALIAS_HZ {
        return Err(CliError::Estimation(format!(
            "{source} Hz flicker sampled at {fps} fps aliases to {f_a} Hz, too close to DC to \
             separate from scene brightness; a frame rate that is not a divisor of {source} is needed"
        )));
    }
    let band = match a.band {
        Some(b) => b,
        None => BandHz::around(f_a, VIDEO_HALFWIDTH_HZ)
            .map_err(|e| CliError::Input(format!("band: {e}")))?,
    };
    if !band.is_below_nyquist(fps) {
        return Err(CliError::Input(format!(
            "band {}:{} Hz is not below the {} Hz Nyquist limit",
            band.low_hz(),
            band.high_hz(),
            fps / 2.0
        )));
    }
    let first = reader
        .next_frame()
        .map_err(ingest_err(&a.y4m))?
        .ok_or_else(|| CliError::Input(format!("{}: no frames", a.y4m.display())))?;
    let params = SlicParams {
        region_count_k: a.regions,
        compactness_m: a.compactness,
        iterations: a.iterations,
        ..SlicParams::default()
    };
    let labels = slic_segment(&first, header.width, header.height, params).map_err(video_err)?;
    if let Some(p) = &a.labels_pgm {
        fs::write(p, labels.to_pgm())
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display())))?;
    }
    let mut acc = RegionAccumulator::new(labels);
    acc.push_frame(&first).map_err(video_err)?;
    for frame in reader.by_ref() {
        acc.push_frame(&frame.map_err(ingest_err(&a.y4m))?)
            .map_err(video_err)?;
    }
    let regions = acc.finish(fps).map_err(video_err)?;
    let selection = select_regions(&regions, band, a.top_k).map_err(video_err)?;

    let spec = FilterSpec::new(band, a.filter_order).map_err(pipeline_err)?;
    let filter = design_bandpass(&spec, fps).map_err(pipeline_err)?;
    if filter.narrow_band_warning {
        eprintln!(
            "warning: {} Hz pass-band is narrower than the transition width of an order-{} filter",
            band.width_hz(),
            a.filter_order
        );
    }
    let filtered = filter_signal(&selection.signal, &filter.coeffs).map_err(pipeline_err)?;

    let method = build_method(a.method, &a.est, CombineConfig::default());
    let mut cfg = EstimatorConfig::video(method, band, a.nominal);
    apply_estimator_args(&mut cfg, &a.est);
    cfg.transient_samples = filtered.transient_samples;
    let trace = estimate_enf(&filtered.signal, &cfg, Some(source)).map_err(pipeline_err)?;
    save_trace(&trace, &a.out)?;
    println!(
        "band={}:{} regions={} picked={}",
        band.low_hz(),
        band.high_hz(),
        regions.len(),
        selection.picks.len()
    );
    print_summary(&trace, &a.out);
    Ok(())
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn run_match(a: &MatchArgs) -> Result<(), CliError> {
    let reference = load_trace(&a.reference)?;
    let query = load_trace(&a.query)?;
    let result = mcc(&reference, &query, a.max_lag, a.min_overlap).map_err(match_err)?;
    let mut json = match_json(&result)?;
    json.push('\n');
    write_output(a.out.as_deref(), json.as_bytes())?;
    if a.out.is_some() {
        println!("mcc={} best_lag_s={}", result.mcc, result.best_lag_s);
    }
    Ok(())
}

fn run_sweep(a: &SweepArgs) -> Result<(), CliError> {
    let reference = load_trace(&a.reference)?;
    let query = load_trace(&a.query)?;
    let (hr, hq) = (reference.hop_s(), query.hop_s());
    if (hr - hq).abs() > 1e-9 * hr.max(hq) {
        return Err(match_err(MatchError::HopMismatch {
            reference: hr,
            query: hq,
        }));
    }
    let entries = duration_sweep(&reference, &query, &a.durations.0, a.max_lag);
    let mut buf = Vec::new();
    write_sweep(&entries, &mut buf)?;
    write_output(a.out.as_deref(), &buf)?;
    for e in &entries {
        if let Err(err) = &e.result {
            eprintln!("warning: duration {} s: {err}", e.duration_s);
        }
    }
    if entries.iter().all(|e| e.result.is_err()) {
        return Err(CliError::Estimation(
            "no duration produced a correlation".into(),
        ));
    }
    Ok(())
}
