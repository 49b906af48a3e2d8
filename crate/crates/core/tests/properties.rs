use proptest::prelude::*;

use enf_core::ingest::{parse_wav, Rational, VideoLuma, WavContents};
use enf_core::matching::{mcc, DEFAULT_MIN_OVERLAP};
use enf_core::pipeline::{
    alias_frequency, dealias, estimate_enf, segment_count, EstimatorConfig, Method,
};
use enf_core::signal::{EnfTrace, SampledSignal, TracePoint};
use enf_core::spectral::WindowKind;
use enf_core::synth::encode_wav;
use enf_core::video::{region_time_series, LabelMap};

fn trace_from(values: &[f64], t0: f64) -> EnfTrace {
    let points = values
        .iter()
        .enumerate()
        .map(|(i, &f)| TracePoint {
            time_s: t0 + i as f64,
            freq_hz: f,
            confidence: 1.0,
        })
        .collect();
    EnfTrace::new(50.0, 16.0, 1.0, points).unwrap()
}

fn wiggle() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.1f64..0.1, 20..80).prop_map(|v| v.iter().map(|d| 50.0 + d).collect())
}

proptest! {
    #[test]
    fn alias_matches_brute_force(src in 0.0f64..500.0, rate in 1.0f64..200.0) {
        let a = alias_frequency(src, rate);
        prop_assert!(a.f_alias_hz <= rate / 2.0 + 1e-9);
        let brute = (0..1000u64)
            .map(|g| (g, (src - g as f64 * rate).abs()))
            .fold((0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
        prop_assert_eq!(a.gamma, brute.0);
        prop_assert_eq!(a.f_alias_hz, brute.1);
    }

    // The round trip holds while the source stays on the same side of both
    // γ·rate and the folding points γ·rate ± rate/2 as the nominal.
    #[test]
    fn dealias_round_trip(rate in 10.0f64..60.0, gamma in 1u64..8, off in 0.05f64..0.45, frac in -0.95f64..0.95) {
        let nominal = gamma as f64 * rate + off * rate;
        let margin = (off * rate).min(rate / 2.0 - off * rate);
        let f = nominal + frac * margin;
        let a = alias_frequency(f, rate);
        let back = dealias(a.f_alias_hz, rate, nominal).unwrap();
        prop_assert!((back - f).abs() <= 1e-9 * f, "{} vs {}", back, f);
    }

    #[test]
    fn mcc_symmetric_up_to_lag_sign(a in wiggle(), b in wiggle(), shift in 0usize..5) {
        let ta = trace_from(&a, 8.0);
        let tb = trace_from(&b, 8.0 + shift as f64);
        let ab = mcc(&ta, &tb, 6.0, DEFAULT_MIN_OVERLAP);
        let ba = mcc(&tb, &ta, 6.0, DEFAULT_MIN_OVERLAP);
        match (ab, ba) {
            (Ok(x), Ok(y)) => {
                prop_assert!((x.mcc - y.mcc).abs() < 1e-12);
                if x.curve.iter().filter(|c| c.1 == x.mcc).count() == 1 {
                    prop_assert_eq!(x.best_lag_s, -y.best_lag_s);
                }
                prop_assert!(x.curve.iter().all(|c| (-1.0..=1.0).contains(&c.1)));
            }
            (x, y) => prop_assert_eq!(x.is_err(), y.is_err()),
        }
    }

    #[test]
    fn mcc_curve_affine_invariant(a in wiggle(), noise in wiggle(), alpha in 0.1f64..6.0, beta in -5.0f64..5.0) {
        let n = a.len().min(noise.len());
        let q: Vec<f64> = a[..n].iter().zip(&noise[..n]).map(|(x, e)| x + 0.5 * (e - 50.0)).collect();
        let ref_trace = trace_from(&a[..n], 8.0);
        let plain = mcc(&ref_trace, &trace_from(&q, 8.0), 5.0, DEFAULT_MIN_OVERLAP);
        let scaled: Vec<f64> = q.iter().map(|v| alpha * (v - 50.0) + 50.0 + beta * 0.01).collect();
        let moved = mcc(&ref_trace, &trace_from(&scaled, 8.0), 5.0, DEFAULT_MIN_OVERLAP);
        if let (Ok(p), Ok(m)) = (plain, moved) {
            prop_assert_eq!(p.curve.len(), m.curve.len());
            for (x, y) in p.curve.iter().zip(&m.curve) {
                prop_assert_eq!(x.0, y.0);
                prop_assert!((x.1 - y.1).abs() < 1e-12, "{} vs {}", x.1, y.1);
            }
        }
    }

    #[test]
    fn wav_pcm16_round_trip_exact(raw in prop::collection::vec(any::<i16>(), 1..400), stereo in any::<bool>()) {
        let x: Vec<f64> = raw.iter().map(|&v| v as f64 / 32768.0).collect();
        let a = SampledSignal::new(x.clone(), 1000.0).unwrap();
        let rev: Vec<f64> = x.iter().rev().cloned().collect();
        let b = SampledSignal::new(rev, 1000.0).unwrap();
        let bytes = if stereo { encode_wav(&[&a, &b]).unwrap() } else { encode_wav(&[&a]).unwrap() };
        match parse_wav(&bytes).unwrap() {
            WavContents::Mono(m) => prop_assert_eq!(m.samples(), a.samples()),
            WavContents::Stereo(s) => {
                prop_assert_eq!(s.left().samples(), a.samples());
                prop_assert_eq!(s.right().samples(), b.samples());
            }
        }
    }

    #[test]
    fn region_series_invariant_under_relabeling(
        frames in prop::collection::vec(prop::collection::vec(any::<u8>(), 12), 1..6),
        perm_seed in 0usize..6,
    ) {
        let base = vec![0, 0, 1, 1, 0, 2, 2, 1, 3, 3, 2, 1];
        let perms = [[0, 1, 2, 3], [3, 2, 1, 0], [1, 0, 3, 2], [2, 3, 0, 1], [1, 2, 3, 0], [0, 2, 1, 3]];
        let p = perms[perm_seed];
        let relabeled: Vec<usize> = base.iter().map(|&l| p[l]).collect();
        let v = VideoLuma::new(4, 3, Rational::new(30, 1).unwrap(), frames).unwrap();
        let a = region_time_series(&v, &LabelMap::new(4, 3, base).unwrap()).unwrap();
        let b = region_time_series(&v, &LabelMap::new(4, 3, relabeled).unwrap()).unwrap();
        for r in &a {
            let twin = &b[p[r.region_id]];
            prop_assert_eq!(twin.series.samples(), r.series.samples());
            prop_assert_eq!(twin.pixel_count, r.pixel_count);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn estimate_point_count(extra in 0.0f64..30.0, hop in prop::sample::select(vec![0.5, 1.0, 2.0])) {
        let rate = 200.0;
        let secs = 16.0 + extra;
        let n = (secs * rate) as usize;
        let x: Vec<f64> = (0..n).map(|i| (2.0 * std::f64::consts::PI * 50.01 * i as f64 / rate).cos()).collect();
        let s = SampledSignal::new(x, rate).unwrap();
        let mut cfg = EstimatorConfig::audio(Method::StftPeak { analysis_window: WindowKind::Hann }, 50.0).unwrap();
        cfg.hop_s = hop;
        cfg.grid_step_hz = 0.005;
        let t = estimate_enf(&s, &cfg, None).unwrap();
        let want = ((s.duration_s() - 16.0) / hop + 1e-9).floor() as usize + 1;
        prop_assert_eq!(t.len(), want);
        prop_assert_eq!(segment_count(n, rate, 16.0, hop), want);
    }
}

#[test]
fn alias_grid_over_standard_rates() {
    let rates = [24.0, 25.0, 30000.0 / 1001.0, 30.0, 50.0, 60.0];
    for rate in rates {
        for i in 0..=50_000u32 {
            let src = i as f64 * 0.01;
            let a = alias_frequency(src, rate);
            assert!(a.f_alias_hz <= rate / 2.0 + 1e-9);
        }
    }
}
