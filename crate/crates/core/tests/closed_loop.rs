//! Synthesis followed by analysis, checked against the synthesis ground truth.

use enf_core::pipeline::{estimate_enf, EstimatorConfig, Method};
use enf_core::signal::{EnfTrace, SampledSignal};
use enf_core::spectral::{CombineConfig, WindowKind};
use enf_core::synth::{gen_enf_walk, harmonic_profile, render_mains, EnfModel, PhaseTrack};

/// RMSE between a trace and the ENF averaged over each trace window.
fn rmse_vs_window_mean(trace: &EnfTrace, enf: &SampledSignal) -> f64 {
    let track = PhaseTrack::new(enf).unwrap();
    let half = trace.window_s() / 2.0;
    let sq: f64 = trace
        .points()
        .iter()
        .map(|p| {
            let truth = (track.cycles_at(p.time_s + half) - track.cycles_at(p.time_s - half))
                / trace.window_s();
            (p.freq_hz - truth).powi(2)
        })
        .sum();
    (sq / trace.len() as f64).sqrt()
}

#[test]
fn linear_ramp_tracked_within_5mhz() {
    let secs = 480.0;
    let ramp: Vec<f64> = (0..=480).map(|i| 49.9 + 0.2 * i as f64 / secs).collect();
    let enf = SampledSignal::new(ramp, 1.0).unwrap();
    let x = render_mains(&enf, 1000.0, secs, &harmonic_profile(7), f64::INFINITY, 0).unwrap();
    for method in [
        Method::Combine(CombineConfig::default()),
        Method::StftPeak {
            analysis_window: WindowKind::Hann,
        },
    ] {
        let cfg = EstimatorConfig::audio(method, 50.0).unwrap();
        let trace = estimate_enf(&x, &cfg, None).unwrap();
        assert_eq!(trace.len(), 465);
        let e = rmse_vs_window_mean(&trace, &enf);
        assert!(e <= 0.005, "{}: {e}", method.name());
    }
}

#[test]
fn random_walk_at_20db_recovered() {
    let secs = 240.0;
    let enf = gen_enf_walk(EnfModel::new(50.0, 11), secs, 1.0).unwrap();
    let x = render_mains(&enf, 1000.0, secs, &harmonic_profile(7), 20.0, 12).unwrap();
    let cfg = EstimatorConfig::audio(Method::Combine(CombineConfig::default()), 50.0).unwrap();
    let trace = estimate_enf(&x, &cfg, None).unwrap();
    let e = rmse_vs_window_mean(&trace, &enf);
    assert!(e <= 0.005, "{e}");
    assert!(trace.points().iter().all(|p| p.confidence > 0.5));
}

#[test]
fn photodiode_flicker_halved_to_enf() {
    // flicker at twice the ENF, estimated around 100 Hz and reported as ENF
    let secs = 60.0;
    let enf = gen_enf_walk(EnfModel::new(50.0, 3), secs, 1.0).unwrap();
    let x = render_mains(&enf, 1000.0, secs, &[0.0, 1.0], 20.0, 4).unwrap();
    let combine = CombineConfig {
        nominal_hz: 100.0,
        band_halfwidth_hz: 0.2,
        ..CombineConfig::default()
    };
    let cfg = EstimatorConfig::audio(Method::Combine(combine), 50.0).unwrap();
    let trace = estimate_enf(&x, &cfg, Some(100.0)).unwrap();
    assert_eq!(trace.nominal_hz(), 50.0);
    let e = rmse_vs_window_mean(&trace, &enf);
    assert!(e <= 0.005, "{e}");
}
