//! ENF trace files: an optional `# nominal_hz=.. window_s=.. hop_s=..`
//! line, the header `time_s,freq_hz,confidence`, then one row per point.
//! Floats are written in shortest round-trip form, so a trace reads back
//! bit for bit.

use std::io::{Read, Write};
use std::path::Path;

use enf_core::signal::{EnfTrace, TracePoint};

use crate::CliError;

pub const HEADER: [&str; 3] = ["time_s", "freq_hz", "confidence"];

pub fn write_trace(trace: &EnfTrace, out: impl Write) -> Result<(), CliError> {
    let mut out = out;
    writeln!(
        out,
        "# nominal_hz={} window_s={} hop_s={}",
        trace.nominal_hz(),
        trace.window_s(),
        trace.hop_s()
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for p in trace.points() {
        w.write_record([
            p.time_s.to_string(),
            p.freq_hz.to_string(),
            p.confidence.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_trace(trace: &EnfTrace, path: &Path) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", path.display())))?;
    write_trace(trace, std::io::BufWriter::new(file))
}

#[derive(Debug, Default)]
struct Meta {
    nominal_hz: Option<f64>,
    window_s: Option<f64>,
    hop_s: Option<f64>,
}

fn parse_meta(line: &str) -> Result<Meta, CliError> {
    let mut meta = Meta::default();
    for item in line.trim_start_matches('#').split_whitespace() {
        let Some((key, value)) = item.split_once('=') else {
            continue;
        };
        let v: f64 = value
            .parse()
            .map_err(|_| CliError::Input(format!("bad trace metadata '{item}'")))?;
        match key {
            "nominal_hz" => meta.nominal_hz = Some(v),
            "window_s" => meta.window_s = Some(v),
            "hop_s" => meta.hop_s = Some(v),
            _ => {}
        }
    }
    Ok(meta)
}

/// Reads a trace. Without the metadata line, the hop is the spacing of the
/// first two rows, the window twice the first time stamp, and the nominal
/// frequency whichever of 50 and 60 Hz is closer to the median value.
pub fn read_trace(input: impl Read) -> Result<EnfTrace, CliError> {
    let mut text = String::new();
    let mut input = input;
    input
        .read_to_string(&mut text)
        .map_err(|e| CliError::Input(format!("cannot read trace: {e}")))?;
    let (meta, body) = match text.strip_prefix('#') {
        Some(rest) => {
            let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
            (parse_meta(line)?, body)
        }
        None => (Meta::default(), text.as_str()),
    };
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(body.as_bytes());
    let header = r
        .headers()
        .map_err(|e| CliError::Input(format!("trace header: {e}")))?;
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(CliError::Input(format!(
            "trace header must be '{}', found '{}'",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut points = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Input(format!("trace row {}: {e}", i + 1)))?;
        let field = |k: usize| -> Result<f64, CliError> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| CliError::Input(format!("trace row {}: bad {}", i + 1, HEADER[k])))
        };
        points.push(TracePoint {
            time_s: field(0)?,
            freq_hz: field(1)?,
            confidence: field(2)?,
        });
    }
    if points.is_empty() {
        return Err(CliError::Input("trace has no rows".into()));
    }
    let hop = meta.hop_s.unwrap_or_else(|| match points.get(1) {
        Some(p) => p.time_s - points[0].time_s,
        None => 1.0,
    });
    let window = meta.window_s.unwrap_or(2.0 * points[0].time_s);
    let nominal = meta.nominal_hz.unwrap_or_else(|| {
        let mut f: Vec<f64> = points.iter().map(|p| p.freq_hz).collect();
        f.sort_by(f64::total_cmp);
        let median = f[f.len() / 2];
        if (median - 50.0).abs() <= (median - 60.0).abs() {
            50.0
        } else {
            60.0
        }
    });
    EnfTrace::new(nominal, window, hop, points)
        .map_err(|e| CliError::Input(format!("invalid trace: {e}")))
}

pub fn load_trace(path: &Path) -> Result<EnfTrace, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Input(format!("cannot open {}: {e}", path.display())))?;
    read_trace(std::io::BufReader::new(file))
}
