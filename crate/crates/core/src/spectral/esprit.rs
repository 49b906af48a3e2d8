use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

use super::SpectralError;
use crate::signal::SampledSignal;

/// Subspace estimator settings: covariance dimension and the number of
/// complex exponentials in the line-spectrum model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EspritConfig {
    pub cov_dim: usize,
    pub model_order: usize,
}

impl Default for EspritConfig {
    fn default() -> Self {
        Self {
            cov_dim: 10,
            model_order: 3,
        }
    }
}

impl EspritConfig {
    pub fn validate(&self) -> Result<(), SpectralError> {
        if self.model_order == 0 || self.model_order >= self.cov_dim {
            return Err(SpectralError::InvalidParameter(format!(
                "model order {} must lie in 1..{}",
                self.model_order, self.cov_dim
            )));
        }
        Ok(())
    }
}

/// Ratio below which the second covariance eigenvalue counts as zero.
const RANK_TOLERANCE: f64 = 1e-10;

/// Forward-backward averaged sample covariance from sliding snapshots of
/// length `dim`.
fn fb_covariance(x: &[f64], dim: usize) -> DMatrix<f64> {
    let snapshots = x.len() - dim + 1;
    let mut r = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let s: f64 = (0..snapshots).map(|t| x[t + i] * x[t + j]).sum();
            r[(i, j)] = s;
            r[(j, i)] = s;
        }
    }
    let mut fb = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            fb[(i, j)] = 0.5 * (r[(i, j)] + r[(dim - 1 - i, dim - 1 - j)]) / snapshots as f64;
        }
    }
    fb
}

/// Frequencies (Hz) of the positive-frequency roots of the rotational
/// invariance relation, sorted ascending.
///
/// A real sinusoid contributes a ± pair of roots, so with the default model
/// order of 3 one root is spurious; callers pick the root they need.
pub fn esprit_frequencies(
    segment: &SampledSignal,
    config: EspritConfig,
) -> Result<Vec<f64>, SpectralError> {
    config.validate()?;
    let x = segment.samples();
    let dim = config.cov_dim;
    if x.len() < 10 * dim {
        return Err(SpectralError::InvalidParameter(format!(
            "segment of {} samples is shorter than 10 × {dim}",
            x.len()
        )));
    }
    let cov = fb_covariance(x, dim);
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[order[0]];
    let second = eig.eigenvalues[order[1]];
    if !(top > 0.0) || second <= RANK_TOLERANCE * top {
        return Err(SpectralError::Degenerate(
            "covariance has rank below two (no oscillatory component)".into(),
        ));
    }

    let p = config.model_order;
    let mut signal_space = DMatrix::<f64>::zeros(dim, p);
    for (col, &k) in order.iter().take(p).enumerate() {
        signal_space.set_column(col, &eig.eigenvectors.column(k));
    }
    let upper = signal_space.rows(0, dim - 1).into_owned();
    let lower = signal_space.rows(1, dim - 1).into_owned();
    let rotation = upper
        .svd(true, true)
        .solve(&lower, 1e-14)
        .map_err(|e| SpectralError::Degenerate(e.to_string()))?;

    let nyquist = 0.5 * segment.sample_rate_hz();
    let mut freqs: Vec<f64> = rotation
        .complex_eigenvalues()
        .iter()
        .map(|z| z.arg() / (2.0 * PI) * segment.sample_rate_hz())
        .filter(|&f| f > 0.0 && f < nyquist)
        .collect();
    freqs.sort_by(f64::total_cmp);
    Ok(freqs)
}
