use super::PipelineError;

/// Folding of a source frequency under sampling: `f_A = |f - γ·fs|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasResult {
    pub gamma: u64,
    pub f_alias_hz: f64,
}

/// Finds the integer `γ ≥ 0` minimising `|source - γ·rate|`; ties go to the
/// smaller `γ`.
pub fn alias_frequency(source_hz: f64, sample_rate_hz: f64) -> AliasResult {
    let guess = (source_hz / sample_rate_hz).floor().max(0.0) as u64;
    let mut best = AliasResult {
        gamma: u64::MAX,
        f_alias_hz: f64::INFINITY,
    };
    // The floor can land one off after rounding; scan its neighbours in
    // increasing order so ties keep the smaller γ.
    for gamma in guess.saturating_sub(1)..=guess + 2 {
        let d = (source_hz - gamma as f64 * sample_rate_hz).abs();
        if d < best.f_alias_hz {
            best = AliasResult {
                gamma,
                f_alias_hz: d,
            };
        }
    }
    best
}

/// Maps an observed alias back to the source frequency closest to
/// `nominal_source_hz`, i.e. `γ·rate ± f_alias` with `γ` taken from the
/// nominal source.
pub fn dealias(
    f_alias_hz: f64,
    sample_rate_hz: f64,
    nominal_source_hz: f64,
) -> Result<f64, PipelineError> {
    if f_alias_hz.abs() > 0.5 * sample_rate_hz + 1e-9 {
        return Err(PipelineError::InvalidConfig(format!(
            "alias {f_alias_hz} Hz exceeds half the {sample_rate_hz} Hz rate"
        )));
    }
    let gamma = alias_frequency(nominal_source_hz, sample_rate_hz).gamma as f64;
    let base = gamma * sample_rate_hz;
    let upper = base + f_alias_hz;
    let lower = base - f_alias_hz;
    let du = (upper - nominal_source_hz).abs();
    let dl = (lower - nominal_source_hz).abs();
    if (du - dl).abs() <= 1e-12 * nominal_source_hz.abs().max(1.0) && du > 1.0 && upper != lower {
        return Err(PipelineError::AmbiguousAlias {
            f_alias_hz,
            candidates: (lower, upper),
        });
    }
    Ok(if du <= dl { upper } else { lower })
}
