//! Dense-grid DTFT evaluation over a narrow band.
//!
//! Computes `X(f_k) = Σ_n x[n] exp(-j 2π f_k n / fs)` for
//! `f_k = f_start + k·f_step`. Large problems go through the chirp-z
//! transform (Bluestein), small ones are summed directly.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Below this many multiply-adds the direct sum is cheaper and exact to
/// rounding.
const DIRECT_LIMIT: usize = 1 << 15;

/// `exp(-j 2π cycles)` with the integer part of `cycles` removed first.
fn unit_phasor(cycles: f64) -> Complex64 {
    let frac = cycles - cycles.round();
    let (s, c) = (2.0 * PI * frac).sin_cos();
    Complex64::new(c, -s)
}

pub(crate) fn zoom_dtft(
    x: &[f64],
    sample_rate_hz: f64,
    f_start_hz: f64,
    f_step_hz: f64,
    count: usize,
) -> Vec<Complex64> {
    if x.is_empty() || count == 0 {
        return vec![Complex64::new(0.0, 0.0); count];
    }
    if x.len().saturating_mul(count) <= DIRECT_LIMIT {
        direct(x, sample_rate_hz, f_start_hz, f_step_hz, count)
    } else {
        chirp_z(x, sample_rate_hz, f_start_hz, f_step_hz, count)
    }
}

pub(crate) fn direct(
    x: &[f64],
    sample_rate_hz: f64,
    f_start_hz: f64,
    f_step_hz: f64,
    count: usize,
) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let f = (f_start_hz + k as f64 * f_step_hz) / sample_rate_hz;
            x.iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (n, &v)| {
                    acc + unit_phasor(f * n as f64) * v
                })
        })
        .collect()
}

pub(crate) fn chirp_z(
    x: &[f64],
    sample_rate_hz: f64,
    f_start_hz: f64,
    f_step_hz: f64,
    count: usize,
) -> Vec<Complex64> {
    let n = x.len();
    let len = (n + count - 1).next_power_of_two();
    let start = f_start_hz / sample_rate_hz;
    let step = f_step_hz / sample_rate_hz;

    // chirp(m) = exp(-j π step m²); m² is exact in u128 and whole cycles are
    // dropped before the trig call.
    let chirp = |m: usize| -> Complex64 {
        let m2 = (m as u128) * (m as u128);
        unit_phasor(0.5 * step * (m2 as f64))
    };

    let mut a = vec![Complex64::new(0.0, 0.0); len];
    for (i, &v) in x.iter().enumerate() {
        a[i] = unit_phasor(start * i as f64) * chirp(i) * v;
    }
    let mut b = vec![Complex64::new(0.0, 0.0); len];
    let span = n.max(count);
    for m in 0..span {
        let c = chirp(m).conj();
        if m < count {
            b[m] = c;
        }
        if m > 0 && m < n {
            b[len - m] = c;
        }
    }

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (ai, bi) in a.iter_mut().zip(&b) {
        *ai *= bi;
    }
    inv.process(&mut a);
    let scale = 1.0 / len as f64;
    (0..count).map(|k| a[k] * chirp(k) * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chirp_z_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..700).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = direct(&x, 1000.0, 47.3, 0.013, 300);
        let b = chirp_z(&x, 1000.0, 47.3, 0.013, 300);
        let scale: f64 = x.iter().map(|v| v.abs()).sum();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).norm() < 1e-12 * scale, "{p} vs {q}");
        }
    }

    #[test]
    fn chirp_z_handles_more_bins_than_samples() {
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let a = direct(&x, 30.0, 0.5, 0.01, 1200);
        let b = chirp_z(&x, 30.0, 0.5, 0.01, 1200);
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).norm() < 1e-10);
        }
    }
}
