use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

use super::{PhaseTrack, SynthError};
use crate::ingest::{Rational, VideoLuma};
use crate::signal::SampledSignal;

/// Dark rectangle bouncing between two top-left positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occluder {
    pub width: usize,
    pub height: usize,
    pub luma: f64,
    pub from: (f64, f64),
    pub to: (f64, f64),
    /// Time for a full there-and-back trip.
    pub period_s: f64,
}

impl Occluder {
    /// Top-left corner at time `t`, rounded to whole pixels.
    pub fn position(&self, t: f64) -> (i64, i64) {
        let phase = (t / self.period_s).rem_euclid(1.0);
        let u = 1.0 - (2.0 * phase - 1.0).abs();
        (
            (self.from.0 + u * (self.to.0 - self.from.0)).round() as i64,
            (self.from.1 + u * (self.to.1 - self.from.1)).round() as i64,
        )
    }

    pub fn area_fraction(&self, width: usize, height: usize) -> f64 {
        (self.width * self.height) as f64 / (width * height) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneModel {
    pub width: usize,
    pub height: usize,
    /// Row-major luma of the unlit scene, in `[0, 255]`.
    pub base_luma: Vec<f64>,
    /// Modulation index of the light flicker.
    pub flicker_depth: f64,
    pub noise_std: f64,
    pub occluder: Option<Occluder>,
}

impl SceneModel {
    pub fn uniform(width: usize, height: usize, luma: f64) -> Self {
        Self {
            width,
            height,
            base_luma: vec![luma; width * height],
            flicker_depth: 0.1,
            noise_std: 0.0,
            occluder: None,
        }
    }

    /// Blocks of differing brightness over a shallow horizontal gradient,
    /// so segmentation has edges to follow.
    pub fn textured(width: usize, height: usize) -> Self {
        let block = (width.min(height) / 4).max(1);
        let base_luma = (0..height)
            .flat_map(|y| {
                (0..width).map(move |x| {
                    let level = ((x / block) + 2 * (y / block)) % 5;
                    60.0 + 25.0 * level as f64 + 10.0 * x as f64 / width as f64
                })
            })
            .collect();
        Self {
            base_luma,
            ..Self::uniform(width, height, 0.0)
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        if self.width == 0 || self.height == 0 || self.base_luma.len() != self.width * self.height {
            return Err(SynthError::InvalidParameter(format!(
                "scene {}x{} with {} base pixels",
                self.width,
                self.height,
                self.base_luma.len()
            )));
        }
        if !(0.0..=1.0).contains(&self.flicker_depth) || !(self.noise_std >= 0.0) {
            return Err(SynthError::InvalidParameter(
                "flicker depth must be in [0, 1] and noise std nonnegative".into(),
            ));
        }
        if let Some(o) = self.occluder {
            if !(o.period_s > 0.0) {
                return Err(SynthError::InvalidParameter(
                    "occluder period must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Mean of `cos(2π·2c(t))` over an exposure from `c0` to `c1` cycles of the
/// ENF phase, treating the phase as linear within the exposure.
fn mean_flicker(c0: f64, c1: f64) -> f64 {
    let span = 2.0 * (c1 - c0);
    if span <= 0.0 {
        return super::unit_cos(2.0 * c0);
    }
    let s = |c: f64| (2.0 * PI * (2.0 * c - (2.0 * c).floor())).sin();
    (s(c1) - s(c0)) / (2.0 * PI * span)
}

/// Global-shutter camera looking at a scene lit by mains-powered light.
///
/// Each frame integrates `1 + depth·cos(2φ(t))` over its exposure
/// (`exposure_fraction / fps` seconds from the frame start), scales the base
/// scene by it, paints the occluder, adds Gaussian noise and rounds to 8 bits.
pub fn render_video(
    enf: &SampledSignal,
    scene: &SceneModel,
    fps: Rational,
    duration_s: f64,
    exposure_fraction: f64,
    seed: u64,
) -> Result<VideoLuma, SynthError> {
    scene.validate()?;
    if !(exposure_fraction > 0.0 && exposure_fraction <= 1.0) || !(duration_s > 0.0) {
        return Err(SynthError::InvalidParameter(format!(
            "exposure fraction {exposure_fraction} must be in (0, 1] and duration positive"
        )));
    }
    let track = PhaseTrack::new(enf)?;
    let rate = fps.as_f64();
    let frame_count = (duration_s * rate + 1e-9).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (scene.width, scene.height);
    let mut frames = Vec::with_capacity(frame_count);
    let mut plane = vec![0.0; w * h];
    for k in 0..frame_count {
        // k·den/num without accumulating rounding
        let t0 = (k as f64 * fps.den as f64) / fps.num as f64;
        let t1 = t0 + exposure_fraction / rate;
        let factor =
            1.0 + scene.flicker_depth * mean_flicker(track.cycles_at(t0), track.cycles_at(t1));
        for (p, b) in plane.iter_mut().zip(&scene.base_luma) {
            *p = b * factor;
        }
        if let Some(o) = scene.occluder {
            let (x0, y0) = o.position(t0);
            let xs =
                x0.clamp(0, w as i64) as usize..(x0 + o.width as i64).clamp(0, w as i64) as usize;
            let ys =
                y0.clamp(0, h as i64) as usize..(y0 + o.height as i64).clamp(0, h as i64) as usize;
            for y in ys {
                plane[y * w + xs.start..y * w + xs.end].fill(o.luma);
            }
        }
        let frame = plane
            .iter()
            .map(|&p| {
                let v = if scene.noise_std > 0.0 {
                    p + scene.noise_std * rng.sample::<f64, _>(StandardNormal)
                } else {
                    p
                };
                v.round().clamp(0.0, 255.0) as u8
            })
            .collect();
        frames.push(frame);
    }
    Ok(VideoLuma::new(w, h, fps, frames)?)
}
