//! Trace comparison: Pearson correlation, maximum correlation over lags and
//! duration sweeps.

use thiserror::Error;

use crate::signal::{trace_prefix, EnfTrace, SignalError};

/// Overlap guard used when the caller does not pick one.
pub const DEFAULT_MIN_OVERLAP: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchError {
    #[error("inputs have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 values, got {0}")]
    TooFewValues(usize),
    #[error("correlation undefined: an input has zero variance")]
    UndefinedCorrelation,
    #[error("traces have different hops ({reference} s and {query} s)")]
    HopMismatch { reference: f64, query: f64 },
    #[error("trace of {points} points at hop {hop_s} s is too short to correlate")]
    TraceTooShort { points: usize, hop_s: f64 },
    #[error("no lag within ±{max_lag_s} s leaves the required overlap of {required_s} s")]
    NoValidLag { max_lag_s: f64, required_s: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Signal(#[from] SignalError),
}

/// Pearson correlation coefficient of two equal-length series.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64, MatchError> {
    if a.len() != b.len() {
        return Err(MatchError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(MatchError::TooFewValues(a.len()));
    }
    if is_constant(a) || is_constant(b) {
        return Err(MatchError::UndefinedCorrelation);
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return Err(MatchError::UndefinedCorrelation);
    }
    // sqrt of the product keeps identical inputs at exactly 1
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|x| *x == v[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub mcc: f64,
    /// Positive when the query lags the reference.
    pub best_lag_s: f64,
    /// Duration covered by the pairs used at the best lag.
    pub overlap_s: f64,
    /// `(lag_s, correlation)` for every evaluated lag, ascending in lag.
    pub curve: Vec<(f64, f64)>,
}

/// Maximum Pearson correlation between `reference` and `query` over integer
/// hop lags `|k·hop| ≤ max_lag_s`.
///
/// Lag `k` pairs the reference point at time `t` with the query point at
/// `t + k·hop`. Pairs where either point has confidence 0 are skipped. Lags
/// whose usable overlap is below `min_overlap` times the shorter trace
/// duration, or whose correlation is undefined, are left out of the curve.
/// Equal maxima resolve to the smaller `|k|`, negative first.
pub fn mcc(
    reference: &EnfTrace,
    query: &EnfTrace,
    max_lag_s: f64,
    min_overlap: f64,
) -> Result<MatchResult, MatchError> {
    let hop = reference.hop_s();
    if (hop - query.hop_s()).abs() > 1e-9 * hop.max(query.hop_s()) {
        return Err(MatchError::HopMismatch {
            reference: hop,
            query: query.hop_s(),
        });
    }
    if !(max_lag_s >= 0.0) {
        return Err(MatchError::InvalidParameter(format!(
            "max lag must be nonnegative, got {max_lag_s}"
        )));
    }
    if !(min_overlap > 0.0 && min_overlap <= 1.0) {
        return Err(MatchError::InvalidParameter(format!(
            "min overlap must be in (0, 1], got {min_overlap}"
        )));
    }
    for t in [reference, query] {
        if t.len() < 2 || (t.len() as f64) * hop < 2.0 - 1e-9 {
            return Err(MatchError::TraceTooShort {
                points: t.len(),
                hop_s: hop,
            });
        }
    }

    let r = reference.points();
    let q = query.points();
    let base = ((q[0].time_s - r[0].time_s) / hop).round() as i64;
    let max_k = (max_lag_s / hop + 1e-9).floor() as i64;
    let required = min_overlap * reference.duration_s().min(query.duration_s());

    let mut curve = Vec::new();
    let mut best: Option<(i64, f64, usize)> = None;
    let mut any_overlap = false;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in -max_k..=max_k {
        // query index i = j + k - base
        xs.clear();
        ys.clear();
        let shift = k - base;
        let j_lo = (-shift).max(0);
        let j_hi = (r.len() as i64).min(q.len() as i64 - shift);
        for j in j_lo..j_hi {
            let (a, b) = (&r[j as usize], &q[(j + shift) as usize]);
            if a.confidence > 0.0 && b.confidence > 0.0 {
                xs.push(a.freq_hz);
                ys.push(b.freq_hz);
            }
        }
        if (xs.len() as f64) * hop + 1e-9 < required || xs.len() < 2 {
            continue;
        }
        any_overlap = true;
        let Ok(c) = pearson(&xs, &ys) else {
            continue;
        };
        curve.push((k as f64 * hop, c));
        let better = match best {
            None => true,
            Some((bk, bc, _)) => c > bc || (c == bc && (k.abs() < bk.abs())),
        };
        if better {
            best = Some((k, c, xs.len()));
        }
    }
    match best {
        Some((k, c, pairs)) => Ok(MatchResult {
            mcc: c,
            best_lag_s: k as f64 * hop,
            overlap_s: pairs as f64 * hop,
            curve,
        }),
        None if any_overlap => Err(MatchError::UndefinedCorrelation),
        None => Err(MatchError::NoValidLag {
            max_lag_s,
            required_s: required,
        }),
    }
}

/// One row of a duration sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub duration_s: f64,
    pub result: Result<MatchResult, MatchError>,
}

/// Correlates `reference` with growing prefixes of `query`, in the order
/// given. A failing duration is recorded and the sweep continues.
pub fn duration_sweep(
    reference: &EnfTrace,
    query: &EnfTrace,
    durations_s: &[f64],
    max_lag_s: f64,
) -> Vec<SweepEntry> {
    durations_s
        .iter()
        .map(|&d| {
            let result = if d < 2.0 * query.hop_s() {
                Err(MatchError::InvalidParameter(format!(
                    "duration {d} s is shorter than two hops"
                )))
            } else {
                trace_prefix(query, d)
                    .map_err(MatchError::from)
                    .and_then(|p| mcc(reference, &p, max_lag_s, DEFAULT_MIN_OVERLAP))
            };
            SweepEntry {
                duration_s: d,
                result,
            }
        })
        .collect()
}
