use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;

use enf_cli::trace_csv::{load_trace, read_trace, write_trace};
use enf_core::ingest::parse_y4m;
use enf_core::signal::{BandHz, EnfTrace, SampledSignal, TracePoint};
use enf_core::spectral::{stft_frame, WindowKind};

fn enf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn synth(dir: &Path, extra: &[&str]) {
    let out = path(dir, "");
    let mut args = vec!["synth", "--out", &out];
    args.extend_from_slice(extra);
    let o = enf(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn synth_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        synth(
            d,
            &[
                "--duration",
                "480",
                "--seed",
                "7",
                "--fps",
                "30",
                "--size",
                "8x8",
            ],
        );
    }
    for f in ["mains.wav", "truth.csv", "video.y4m"] {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
    let c = tempfile::tempdir().unwrap();
    synth(c.path(), &["--duration", "480", "--seed", "8"]);
    assert_ne!(
        fs::read(a.path().join("truth.csv")).unwrap(),
        fs::read(c.path().join("truth.csv")).unwrap()
    );
}

#[test]
fn ground_truth_parses_as_trace() {
    let d = tempfile::tempdir().unwrap();
    synth(
        d.path(),
        &["--duration", "60", "--seed", "1", "--nominal", "60"],
    );
    let t = load_trace(&d.path().join("truth.csv")).unwrap();
    assert_eq!(t.len(), 61);
    assert_eq!(t.nominal_hz(), 60.0);
    assert!(t.points().iter().all(|p| (p.freq_hz - 60.0).abs() <= 0.1));
}

#[test]
fn audio_extraction_row_count() {
    let d = tempfile::tempdir().unwrap();
    synth(d.path(), &["--duration", "60", "--seed", "2"]);
    let (wav, out) = (path(d.path(), "mains.wav"), path(d.path(), "a.csv"));
    let o = enf(&[
        "extract-audio",
        "--wav",
        &wav,
        "--channel",
        "left",
        "--method",
        "combine",
        "--nominal",
        "50",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("points=45"));
    let t = load_trace(Path::new(&out)).unwrap();
    assert_eq!(t.len(), 45);
    assert_eq!((t.window_s(), t.hop_s()), (16.0, 1.0));
}

#[test]
fn photodiode_channel_reports_enf() {
    let d = tempfile::tempdir().unwrap();
    synth(d.path(), &["--duration", "40", "--seed", "3"]);
    let (wav, out) = (path(d.path(), "mains.wav"), path(d.path(), "light.csv"));
    let o = enf(&[
        "extract-audio",
        "--wav",
        &wav,
        "--channel",
        "right",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = load_trace(Path::new(&out)).unwrap();
    assert_eq!(t.nominal_hz(), 50.0);
    assert!(t
        .points()
        .iter()
        .all(|p| (p.freq_hz - 50.0).abs() < 0.1 && p.confidence > 0.5));
}

#[test]
fn right_channel_of_mono_file_rejected() {
    let d = tempfile::tempdir().unwrap();
    synth(d.path(), &["--duration", "20", "--mono"]);
    let (wav, out) = (path(d.path(), "mains.wav"), path(d.path(), "x.csv"));
    let o = enf(&[
        "extract-audio",
        "--wav",
        &wav,
        "--channel",
        "right",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("channel"));
    assert!(!Path::new(&out).exists());
}

#[test]
fn even_filter_order_rejected() {
    let d = tempfile::tempdir().unwrap();
    synth(
        d.path(),
        &["--duration", "30", "--fps", "30", "--size", "8x8"],
    );
    let (y4m, out) = (path(d.path(), "video.y4m"), path(d.path(), "v.csv"));
    let o = enf(&[
        "extract-video",
        "--y4m",
        &y4m,
        "--filter-order",
        "512",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn sixty_hz_at_thirty_fps_is_degenerate() {
    let d = tempfile::tempdir().unwrap();
    synth(
        d.path(),
        &[
            "--duration",
            "30",
            "--nominal",
            "60",
            "--fps",
            "30",
            "--size",
            "8x8",
        ],
    );
    let (y4m, out) = (path(d.path(), "video.y4m"), path(d.path(), "v.csv"));
    let o = enf(&[
        "extract-video",
        "--y4m",
        &y4m,
        "--nominal",
        "60",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("DC"));
}

#[test]
fn video_defaults_use_ten_hz_band() {
    let d = tempfile::tempdir().unwrap();
    synth(
        d.path(),
        &[
            "--duration",
            "60",
            "--seed",
            "4",
            "--fps",
            "30",
            "--size",
            "32x32",
        ],
    );
    let (y4m, out) = (path(d.path(), "video.y4m"), path(d.path(), "v.csv"));
    let o = enf(&[
        "extract-video",
        "--y4m",
        &y4m,
        "--nominal",
        "50",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("band=9.9:10.1"));
    let t = load_trace(Path::new(&out)).unwrap();
    assert_eq!(t.len(), 40);
    assert!(t.points().iter().all(|p| (p.freq_hz - 50.0).abs() < 0.1));
}

#[test]
fn synthetic_video_frame_mean_peaks_near_ten_hz() {
    let d = tempfile::tempdir().unwrap();
    synth(
        d.path(),
        &[
            "--duration",
            "30",
            "--seed",
            "5",
            "--fps",
            "30",
            "--size",
            "16x16",
        ],
    );
    let v = parse_y4m(fs::File::open(d.path().join("video.y4m")).unwrap()).unwrap();
    let means: Vec<f64> = v
        .frames()
        .iter()
        .map(|f| f.iter().map(|&p| p as f64).sum::<f64>() / f.len() as f64)
        .collect();
    let mu = means.iter().sum::<f64>() / means.len() as f64;
    let x = SampledSignal::new(means.iter().map(|m| m - mu).collect(), 30.0).unwrap();
    let s = stft_frame(&x, WindowKind::Hann, BandHz::new(1.0, 14.0).unwrap(), 0.01).unwrap();
    let peak = s.freq_at(s.argmax().unwrap());
    assert!((peak - 10.0).abs() < 0.2, "{peak}");
}

#[test]
fn self_match_is_perfect() {
    let d = tempfile::tempdir().unwrap();
    synth(d.path(), &["--duration", "120", "--seed", "6"]);
    let t = path(d.path(), "truth.csv");
    let o = enf(&["match", "--reference", &t, "--query", &t, "--max-lag", "10"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mcc"], 1.0);
    assert_eq!(v["best_lag_s"], 0.0);
    assert_eq!(v["curve"].as_array().unwrap().len(), 21);
}

#[test]
fn sweep_over_eight_durations() {
    let d = tempfile::tempdir().unwrap();
    synth(d.path(), &["--duration", "480", "--seed", "9"]);
    let t = path(d.path(), "truth.csv");
    let out = path(d.path(), "sweep.csv");
    let o = enf(&[
        "sweep",
        "--reference",
        &t,
        "--query",
        &t,
        "--durations",
        "60:480:60",
        "--out",
        &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "duration_s,mcc,best_lag_s");
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[1], "60,1,0");
    assert_eq!(lines[8], "480,1,0");
}

#[test]
fn hop_mismatch_is_input_error() {
    let d = tempfile::tempdir().unwrap();
    let a = d.path().join("a.csv");
    let b = d.path().join("b.csv");
    let rows = |hop: f64| {
        let mut s = String::from("time_s,freq_hz,confidence\n");
        for i in 0..50 {
            s += &format!(
                "{},{},1\n",
                8.0 + i as f64 * hop,
                50.0 + 0.01 * (i as f64).sin()
            );
        }
        s
    };
    fs::write(&a, rows(1.0)).unwrap();
    fs::write(&b, rows(2.0)).unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(code(&enf(&["match", "--reference", a, "--query", b])), 2);
    assert_eq!(
        code(&enf(&[
            "sweep",
            "--reference",
            a,
            "--query",
            b,
            "--durations",
            "40"
        ])),
        2
    );
}

#[test]
fn missing_files_and_bad_flags() {
    let d = tempfile::tempdir().unwrap();
    let gone = path(d.path(), "nope");
    let out = path(d.path(), "o.csv");
    assert_eq!(
        code(&enf(&["extract-audio", "--wav", &gone, "--out", &out])),
        2
    );
    assert_eq!(
        code(&enf(&["extract-video", "--y4m", &gone, "--out", &out])),
        2
    );
    assert_eq!(
        code(&enf(&["match", "--reference", &gone, "--query", &gone])),
        2
    );
    assert_eq!(code(&enf(&["synth", "--out", &out, "--nominal", "55"])), 2);
    assert_eq!(
        code(&enf(&[
            "extract-audio",
            "--wav",
            &gone,
            "--method",
            "music",
            "--out",
            &out
        ])),
        2
    );
    assert_eq!(code(&enf(&["frobnicate"])), 2);
    assert_eq!(code(&enf(&["--help"])), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_csv_round_trip(
        freqs in prop::collection::vec(49.0f64..51.0, 1..50),
        confs in prop::collection::vec(0.0f64..=1.0, 50),
        t0 in 0.0f64..100.0,
        hop in prop::sample::select(vec![0.25, 0.5, 1.0, 2.0]),
        window in 1.0f64..30.0,
    ) {
        let points = freqs
            .iter()
            .zip(&confs)
            .enumerate()
            .map(|(i, (&f, &c))| TracePoint { time_s: t0 + i as f64 * hop, freq_hz: f, confidence: c })
            .collect();
        let t = EnfTrace::new(50.0, window, hop, points).unwrap();
        let mut buf = Vec::new();
        write_trace(&t, &mut buf).unwrap();
        prop_assert_eq!(read_trace(&buf[..]).unwrap(), t);
    }
}
