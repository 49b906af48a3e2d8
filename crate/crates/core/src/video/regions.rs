use super::{LabelMap, VideoError};
use crate::ingest::VideoLuma;
use crate::signal::{BandHz, SampledSignal};
use crate::spectral::{local_snr, stft_frame, WindowKind, NOISE_CONTEXT_FACTOR};

/// Mean luma of one region over time.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSeries {
    pub region_id: usize,
    pub centroid: (f64, f64),
    pub pixel_count: usize,
    pub series: SampledSignal,
}

/// Builds per-region mean series one frame at a time, so a video never has
/// to be held in memory.
#[derive(Debug, Clone)]
pub struct RegionAccumulator {
    labels: LabelMap,
    counts: Vec<usize>,
    sums: Vec<f64>,
    series: Vec<Vec<f64>>,
}

impl RegionAccumulator {
    pub fn new(labels: LabelMap) -> Self {
        let r = labels.region_count();
        let mut counts = vec![0; r];
        labels.labels().iter().for_each(|&l| counts[l] += 1);
        Self {
            labels,
            counts,
            sums: vec![0.0; r],
            series: vec![Vec::new(); r],
        }
    }

    pub fn push_frame(&mut self, frame: &[u8]) -> Result<(), VideoError> {
        if frame.len() != self.labels.labels().len() {
            return Err(VideoError::DimensionMismatch(format!(
                "frame of {} pixels against a {}x{} label map",
                frame.len(),
                self.labels.width(),
                self.labels.height()
            )));
        }
        self.sums.fill(0.0);
        for (&l, &v) in self.labels.labels().iter().zip(frame) {
            self.sums[l] += v as f64;
        }
        for ((s, sum), &n) in self.series.iter_mut().zip(&self.sums).zip(&self.counts) {
            s.push(sum / n as f64);
        }
        Ok(())
    }

    pub fn finish(self, frame_rate_hz: f64) -> Result<Vec<RegionSeries>, VideoError> {
        let w = self.labels.width();
        let r = self.labels.region_count();
        let mut cx = vec![0.0; r];
        let mut cy = vec![0.0; r];
        for (p, &l) in self.labels.labels().iter().enumerate() {
            cx[l] += (p % w) as f64 + 0.5;
            cy[l] += (p / w) as f64 + 0.5;
        }
        self.series
            .into_iter()
            .enumerate()
            .map(|(id, s)| {
                let n = self.counts[id];
                Ok(RegionSeries {
                    region_id: id,
                    centroid: (cx[id] / n as f64, cy[id] / n as f64),
                    pixel_count: n,
                    series: SampledSignal::new(s, frame_rate_hz)?
                        .with_label(format!("region {id}")),
                })
            })
            .collect()
    }
}

/// Mean luma per region and frame; the labels stay fixed for the whole
/// video.
pub fn region_time_series(
    video: &VideoLuma,
    labels: &LabelMap,
) -> Result<Vec<RegionSeries>, VideoError> {
    if video.width() != labels.width() || video.height() != labels.height() {
        return Err(VideoError::DimensionMismatch(format!(
            "video {}x{} vs labels {}x{}",
            video.width(),
            video.height(),
            labels.width(),
            labels.height()
        )));
    }
    let mut acc = RegionAccumulator::new(labels.clone());
    for f in video.frames() {
        acc.push_frame(f)?;
    }
    acc.finish(video.frame_rate_hz())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPick {
    pub region_id: usize,
    pub snr: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionSelection {
    /// SNR-weighted mean of the picked series, zero mean and unit variance.
    pub signal: SampledSignal,
    /// Picked regions, highest SNR first.
    pub picks: Vec<RegionPick>,
}

/// Grid step for the SNR spectra: 1/20 of the band width.
const SNR_GRID_DIVISIONS: f64 = 20.0;

/// Ranks mean-removed region series by in-band SNR, keeps the best `top_k`
/// and averages them with weights proportional to linear SNR.
pub fn select_regions(
    regions: &[RegionSeries],
    band: BandHz,
    top_k: usize,
) -> Result<RegionSelection, VideoError> {
    let Some(first) = regions.first() else {
        return Err(VideoError::NoUsableRegion);
    };
    if top_k == 0 {
        return Err(VideoError::InvalidParameter(
            "top_k must be at least 1".into(),
        ));
    }
    let (len, rate) = (first.series.len(), first.series.sample_rate_hz());
    if let Some(r) = regions
        .iter()
        .find(|r| r.series.len() != len || r.series.sample_rate_hz() != rate)
    {
        return Err(VideoError::DimensionMismatch(format!(
            "region {} has {} samples at {} Hz, expected {len} at {rate} Hz",
            r.region_id,
            r.series.len(),
            r.series.sample_rate_hz()
        )));
    }
    if !band.is_below_nyquist(rate) {
        return Err(VideoError::InvalidParameter(format!(
            "band [{}, {}] Hz is outside (0, {}) Hz",
            band.low_hz(),
            band.high_hz(),
            0.5 * rate
        )));
    }
    let context = band.widened(NOISE_CONTEXT_FACTOR, rate);
    let step = band.width_hz() / SNR_GRID_DIVISIONS;

    let mut scored: Vec<(usize, f64, Vec<f64>)> = Vec::with_capacity(regions.len());
    for (i, r) in regions.iter().enumerate() {
        let x = r.series.samples();
        let mean = x.iter().sum::<f64>() / len as f64;
        let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
        let spec = stft_frame(
            &r.series.with_samples(centered.clone()),
            WindowKind::Hann,
            context,
            step,
        )?;
        let snr = local_snr(&spec, band, context)?.ratio;
        if snr.is_finite() && snr > 0.0 {
            scored.push((i, snr, centered));
        }
    }
    if scored.is_empty() {
        return Err(VideoError::NoUsableRegion);
    }
    // stable sort keeps region order among equal SNRs
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    scored.truncate(top_k);

    let total: f64 = scored.iter().map(|s| s.1).sum();
    let mut combined = vec![0.0; len];
    let mut picks = Vec::with_capacity(scored.len());
    for (i, snr, centered) in &scored {
        let w = snr / total;
        for (c, v) in combined.iter_mut().zip(centered) {
            *c += w * v;
        }
        picks.push(RegionPick {
            region_id: regions[*i].region_id,
            snr: *snr,
            weight: w,
        });
    }
    let mean = combined.iter().sum::<f64>() / len as f64;
    let var = combined.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / len as f64;
    if !(var > 0.0) {
        return Err(VideoError::NoUsableRegion);
    }
    let sd = var.sqrt();
    let normalized = combined.iter().map(|v| (v - mean) / sd).collect();
    Ok(RegionSelection {
        signal: SampledSignal::new(normalized, rate)?.with_label("selected regions"),
        picks,
    })
}
