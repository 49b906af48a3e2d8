use std::f64::consts::PI;

use super::SpectralError;

/// Window shapes usable both as data tapers and as lag windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowKind {
    Rectangular,
    Bartlett,
    Hamming,
    #[default]
    Hann,
}

impl WindowKind {
    /// Symmetric data taper of `len` samples.
    pub fn taper(self, len: usize) -> Vec<f64> {
        if len == 1 {
            return vec![1.0];
        }
        let denom = (len - 1) as f64;
        (0..len)
            .map(|n| {
                let x = n as f64 / denom;
                match self {
                    WindowKind::Rectangular => 1.0,
                    WindowKind::Bartlett => 1.0 - (2.0 * x - 1.0).abs(),
                    WindowKind::Hamming => 0.54 - 0.46 * (2.0 * PI * x).cos(),
                    WindowKind::Hann => 0.5 - 0.5 * (2.0 * PI * x).cos(),
                }
            })
            .collect()
    }

    /// Even lag-window value at lag `lag` for half-length `m`; zero for
    /// `|lag| >= m`.
    pub fn lag_weight(self, lag: isize, m: usize) -> f64 {
        let a = lag.unsigned_abs();
        if a >= m {
            return 0.0;
        }
        let r = a as f64 / m as f64;
        match self {
            WindowKind::Rectangular => 1.0,
            WindowKind::Bartlett => 1.0 - r,
            WindowKind::Hamming => 0.54 + 0.46 * (PI * r).cos(),
            WindowKind::Hann => 0.5 + 0.5 * (PI * r).cos(),
        }
    }
}

/// Lag window `w(ζ)` applied to the autocorrelation in the Blackman-Tukey
/// estimate. Nonzero for `|ζ| < half_length_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagWindow {
    kind: WindowKind,
    half_length_m: usize,
}

impl LagWindow {
    pub fn new(kind: WindowKind, half_length_m: usize) -> Result<Self, SpectralError> {
        if half_length_m == 0 {
            return Err(SpectralError::InvalidParameter(
                "lag window half-length must be positive".into(),
            ));
        }
        Ok(Self {
            kind,
            half_length_m,
        })
    }

    /// Bartlett window with `M = N/4`.
    pub fn default_for(segment_len: usize) -> Self {
        Self {
            kind: WindowKind::Bartlett,
            half_length_m: (segment_len / 4).max(1),
        }
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn half_length_m(&self) -> usize {
        self.half_length_m
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.half_length_m)
            .map(|z| self.kind.lag_weight(z as isize, self.half_length_m))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tapers_are_symmetric() {
        for kind in [
            WindowKind::Rectangular,
            WindowKind::Bartlett,
            WindowKind::Hamming,
            WindowKind::Hann,
        ] {
            let w = kind.taper(17);
            for k in 0..17 {
                assert!((w[k] - w[16 - k]).abs() < 1e-15, "{kind:?}");
            }
        }
        let hann = WindowKind::Hann.taper(5);
        assert_eq!(hann[0], 0.0);
        assert!((hann[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lag_weights() {
        assert_eq!(WindowKind::Bartlett.lag_weight(0, 4), 1.0);
        assert_eq!(WindowKind::Bartlett.lag_weight(-2, 4), 0.5);
        assert_eq!(WindowKind::Bartlett.lag_weight(4, 4), 0.0);
        assert_eq!(WindowKind::Rectangular.lag_weight(3, 4), 1.0);
        assert!((WindowKind::Hann.lag_weight(2, 4) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn default_lag_window_is_quarter_bartlett() {
        let w = LagWindow::default_for(16000);
        assert_eq!(w.kind(), WindowKind::Bartlett);
        assert_eq!(w.half_length_m(), 4000);
        assert!(LagWindow::new(WindowKind::Hann, 0).is_err());
    }
}
