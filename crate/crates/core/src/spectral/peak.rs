use super::SpectralError;
use crate::signal::SpectrumEstimate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakEstimate {
    pub freq_hz: f64,
    /// The maximum sat on the first or last grid point; `freq_hz` is that
    /// point's frequency and should not be trusted.
    pub at_edge: bool,
}

/// Refines the grid maximum with a parabola through the peak bin and its two
/// neighbours in log power.
pub fn quadratic_peak(spectrum: &SpectrumEstimate) -> Result<PeakEstimate, SpectralError> {
    if spectrum.len() < 3 {
        return Err(SpectralError::InvalidParameter(format!(
            "peak refinement needs at least 3 points, got {}",
            spectrum.len()
        )));
    }
    let k = spectrum.argmax().expect("non-empty");
    if k == 0 || k == spectrum.len() - 1 {
        return Ok(PeakEstimate {
            freq_hz: spectrum.freq_at(k),
            at_edge: true,
        });
    }
    let p = spectrum.power();
    let (a, b, c) = (p[k - 1], p[k], p[k + 1]);
    // Fall back to linear power when a neighbour is exactly zero.
    let (a, b, c) = if a > 0.0 && c > 0.0 {
        (a.ln(), b.ln(), c.ln())
    } else {
        (a, b, c)
    };
    let curvature = a - 2.0 * b + c;
    let offset = if curvature < 0.0 {
        (0.5 * (a - c) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    Ok(PeakEstimate {
        freq_hz: spectrum.freq_at(k) + offset * spectrum.freq_step_hz(),
        at_edge: false,
    })
}
