use crate::signal::{SampledSignal, SignalError};

/// Accumulated phase of a frequency signal, in cycles.
///
/// The frequency is linearly interpolated between its samples and held
/// constant past the last one, so the phase is a piecewise quadratic
/// integrated in closed form.
#[derive(Debug, Clone)]
pub struct PhaseTrack {
    freq: Vec<f64>,
    /// Cycles accumulated at each sample instant.
    knots: Vec<f64>,
    dt: f64,
}

impl PhaseTrack {
    pub fn new(freq: &SampledSignal) -> Result<Self, SignalError> {
        freq.ensure_non_empty()?;
        let dt = 1.0 / freq.sample_rate_hz();
        let f = freq.samples().to_vec();
        let mut knots = Vec::with_capacity(f.len());
        let mut acc = 0.0;
        knots.push(acc);
        for w in f.windows(2) {
            acc += 0.5 * (w[0] + w[1]) * dt;
            knots.push(acc);
        }
        Ok(Self { freq: f, knots, dt })
    }

    /// Instantaneous frequency at `t`, interpolated.
    pub fn freq_at(&self, t: f64) -> f64 {
        let (k, tau) = self.locate(t);
        match self.freq.get(k + 1) {
            Some(next) => self.freq[k] + (next - self.freq[k]) * tau / self.dt,
            None => self.freq[k],
        }
    }

    /// `∫_0^t f(s) ds` for `t ≥ 0`.
    pub fn cycles_at(&self, t: f64) -> f64 {
        let (k, tau) = self.locate(t);
        let f0 = self.freq[k];
        match self.freq.get(k + 1) {
            Some(f1) => self.knots[k] + f0 * tau + 0.5 * (f1 - f0) * tau * tau / self.dt,
            None => self.knots[k] + f0 * tau,
        }
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let t = t.max(0.0);
        let k = ((t / self.dt).floor() as usize).min(self.freq.len() - 1);
        (k, t - k as f64 * self.dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_integrates_exactly() {
        // f(t) = 50 + 0.1 t on knots at 1 Hz
        let f: Vec<f64> = (0..11).map(|i| 50.0 + 0.1 * i as f64).collect();
        let p = PhaseTrack::new(&SampledSignal::new(f, 1.0).unwrap()).unwrap();
        for t in [0.0, 0.3, 2.5, 7.25, 10.0] {
            let want = 50.0 * t + 0.05 * t * t;
            assert!((p.cycles_at(t) - want).abs() < 1e-11, "{t}");
            assert!((p.freq_at(t) - (50.0 + 0.1 * t)).abs() < 1e-12);
        }
        // held past the end
        assert!((p.cycles_at(12.0) - (p.cycles_at(10.0) + 2.0 * 51.0)).abs() < 1e-11);
    }
}
