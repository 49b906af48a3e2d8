//! SLIC superpixels on a single luma plane.

use std::collections::VecDeque;

use super::VideoError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicParams {
    pub region_count_k: usize,
    pub compactness_m: f64,
    pub iterations: usize,
    /// Move each seed to the lowest-gradient pixel of its 3×3 neighbourhood.
    pub perturb_seeds: bool,
}

impl Default for SlicParams {
    fn default() -> Self {
        Self {
            region_count_k: 150,
            compactness_m: 10.0,
            iterations: 10,
            perturb_seeds: true,
        }
    }
}

impl SlicParams {
    pub fn with_k(region_count_k: usize) -> Self {
        Self {
            region_count_k,
            ..Self::default()
        }
    }
}

/// Dense region labels, `0..region_count`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<usize>,
    region_count: usize,
}

impl LabelMap {
    /// Validates that every label is below `region_count` and every region
    /// is non-empty.
    pub fn new(width: usize, height: usize, labels: Vec<usize>) -> Result<Self, VideoError> {
        if width == 0 || height == 0 || labels.len() != width * height {
            return Err(VideoError::InvalidParameter(format!(
                "{} labels for a {width}x{height} map",
                labels.len()
            )));
        }
        let region_count = labels.iter().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; region_count];
        labels.iter().for_each(|&l| seen[l] = true);
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(VideoError::InvalidParameter(format!(
                "label {missing} is unused"
            )));
        }
        Ok(Self {
            width,
            height,
            labels,
            region_count,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn region_count(&self) -> usize {
        self.region_count
    }

    pub fn label_at(&self, x: usize, y: usize) -> usize {
        self.labels[y * self.width + x]
    }

    /// Binary PGM with gray level `label mod 256`.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.labels.iter().map(|&l| (l % 256) as u8));
        out
    }
}

/// Cluster center in (intensity, x, y), with pixel centers at `x + 0.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicCenter {
    pub intensity: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlicOutput {
    pub labels: LabelMap,
    /// Centers used by the final assignment step, indexed by the raw
    /// cluster id (before connectivity enforcement and relabeling).
    pub centers: Vec<SlicCenter>,
    /// Raw cluster id per pixel from the final assignment step.
    pub raw_labels: Vec<usize>,
    /// Grid step `S = sqrt(W·H/K)` in the distance measure.
    pub grid_step: f64,
}

/// Picks an `nx × ny` seed grid with `nx·ny ≤ K`: cells no more than 2:1
/// elongated when possible, then the most seeds, the squarest cells, and
/// finally more columns.
fn seed_grid(width: usize, height: usize, k: usize) -> (usize, usize) {
    type Score = (bool, usize, f64, usize);
    let mut best: Option<(Score, (usize, usize))> = None;
    for nx in 1..=k.min(width) {
        for ny in 1..=(k / nx).min(height) {
            let (sx, sy) = (width as f64 / nx as f64, height as f64 / ny as f64);
            let aspect = (sx / sy).max(sy / sx);
            let key = (aspect <= 2.0 + 1e-12, nx * ny, -aspect, nx);
            let better = match &best {
                None => true,
                Some((b, _)) => {
                    (key.0, key.1) > (b.0, b.1)
                        || ((key.0, key.1) == (b.0, b.1)
                            && (key.2 > b.2 || (key.2 == b.2 && key.3 > b.3)))
                }
            };
            if better {
                best = Some((key, (nx, ny)));
            }
        }
    }
    best.map_or((1, 1), |(_, g)| g)
}

pub fn slic_segment(
    keyframe: &[u8],
    width: usize,
    height: usize,
    params: SlicParams,
) -> Result<LabelMap, VideoError> {
    Ok(slic_segment_detailed(keyframe, width, height, params)?.labels)
}

pub fn slic_segment_detailed(
    keyframe: &[u8],
    width: usize,
    height: usize,
    params: SlicParams,
) -> Result<SlicOutput, VideoError> {
    if width < 2 || height < 2 || keyframe.len() != width * height {
        return Err(VideoError::InvalidParameter(format!(
            "keyframe of {} bytes is not a {width}x{height} plane of at least 2x2",
            keyframe.len()
        )));
    }
    let k = params.region_count_k;
    if k == 0 || k > width * height {
        return Err(VideoError::InvalidParameter(format!(
            "region count {k} must be in 1..={}",
            width * height
        )));
    }
    if params.iterations == 0 || !(params.compactness_m > 0.0) {
        return Err(VideoError::InvalidParameter(
            "iterations must be at least 1 and compactness positive".into(),
        ));
    }
    let img: Vec<f64> = keyframe.iter().map(|&v| v as f64).collect();
    let at = |x: usize, y: usize| img[y * width + x];

    let (nx, ny) = seed_grid(width, height, k);
    let (sx, sy) = (width as f64 / nx as f64, height as f64 / ny as f64);
    let s = ((width * height) as f64 / k as f64).sqrt();
    let spatial = (params.compactness_m / s).powi(2);

    let gradient = |x: usize, y: usize| {
        let xl = x.saturating_sub(1);
        let xr = (x + 1).min(width - 1);
        let yu = y.saturating_sub(1);
        let yd = (y + 1).min(height - 1);
        (at(xr, y) - at(xl, y)).powi(2) + (at(x, yd) - at(x, yu)).powi(2)
    };

    let mut centers: Vec<SlicCenter> = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (cx, cy) = ((i as f64 + 0.5) * sx, (j as f64 + 0.5) * sy);
            let (mut px, mut py) = (
                (cx.floor() as usize).min(width - 1),
                (cy.floor() as usize).min(height - 1),
            );
            let (mut x, mut y) = (cx, cy);
            if params.perturb_seeds {
                let mut best = gradient(px, py);
                let (ox, oy) = (px, py);
                for qy in oy.saturating_sub(1)..=(oy + 1).min(height - 1) {
                    for qx in ox.saturating_sub(1)..=(ox + 1).min(width - 1) {
                        let g = gradient(qx, qy);
                        if g < best {
                            best = g;
                            (px, py) = (qx, qy);
                        }
                    }
                }
                if (px, py) != (ox, oy) {
                    (x, y) = (px as f64 + 0.5, py as f64 + 0.5);
                }
            }
            centers.push(SlicCenter {
                intensity: at(px, py),
                x,
                y,
            });
        }
    }

    // start from the seed cells so pixels outside every window keep a label
    let mut raw: Vec<usize> = (0..width * height)
        .map(|p| {
            let (x, y) = (p % width, p / width);
            let i = (((x as f64 + 0.5) / sx) as usize).min(nx - 1);
            let j = (((y as f64 + 0.5) / sy) as usize).min(ny - 1);
            j * nx + i
        })
        .collect();
    let mut dist = vec![f64::INFINITY; width * height];
    let mut used = centers.clone();
    for it in 0..params.iterations {
        dist.fill(f64::INFINITY);
        for (c_idx, c) in centers.iter().enumerate() {
            let x_lo = (c.x - sx - 0.5).ceil().max(0.0) as usize;
            let x_hi = ((c.x + sx - 0.5).floor().max(-1.0) as i64).min(width as i64 - 1);
            let y_lo = (c.y - sy - 0.5).ceil().max(0.0) as usize;
            let y_hi = ((c.y + sy - 0.5).floor().max(-1.0) as i64).min(height as i64 - 1);
            for y in y_lo as i64..=y_hi {
                let y = y as usize;
                let dy = y as f64 + 0.5 - c.y;
                for x in x_lo as i64..=x_hi {
                    let x = x as usize;
                    let dx = x as f64 + 0.5 - c.x;
                    let di = at(x, y) - c.intensity;
                    let d = di * di + spatial * (dx * dx + dy * dy);
                    let p = y * width + x;
                    if d < dist[p] {
                        dist[p] = d;
                        raw[p] = c_idx;
                    }
                }
            }
        }
        used.clone_from(&centers);
        if it + 1 == params.iterations {
            break;
        }
        let mut acc = vec![(0.0, 0.0, 0.0, 0usize); centers.len()];
        for (p, &l) in raw.iter().enumerate() {
            let a = &mut acc[l];
            a.0 += img[p];
            a.1 += (p % width) as f64 + 0.5;
            a.2 += (p / width) as f64 + 0.5;
            a.3 += 1;
        }
        for (c, a) in centers.iter_mut().zip(&acc) {
            if a.3 > 0 {
                let n = a.3 as f64;
                *c = SlicCenter {
                    intensity: a.0 / n,
                    x: a.1 / n,
                    y: a.2 / n,
                };
            }
        }
    }

    let labels = enforce_connectivity(&raw, width, height);
    Ok(SlicOutput {
        labels: LabelMap::new(width, height, labels)?,
        centers: used,
        raw_labels: raw,
        grid_step: s,
    })
}

fn neighbours(p: usize, width: usize, height: usize) -> impl Iterator<Item = usize> {
    let (x, y) = (p % width, p / width);
    [
        (x > 0).then(|| p - 1),
        (x + 1 < width).then(|| p + 1),
        (y > 0).then(|| p - width),
        (y + 1 < height).then(|| p + width),
    ]
    .into_iter()
    .flatten()
}

/// Keeps the largest 4-connected piece of each cluster, merges every other
/// piece into the largest region it touches, and renumbers regions in
/// raster order of first appearance.
fn enforce_connectivity(raw: &[usize], width: usize, height: usize) -> Vec<usize> {
    let n = raw.len();
    let mut component = vec![usize::MAX; n];
    let mut comp_label = Vec::new();
    let mut comp_pixels: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = comp_pixels.len();
        let mut pixels = Vec::new();
        component[start] = id;
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            pixels.push(p);
            for q in neighbours(p, width, height) {
                if component[q] == usize::MAX && raw[q] == raw[start] {
                    component[q] = id;
                    queue.push_back(q);
                }
            }
        }
        comp_label.push(raw[start]);
        comp_pixels.push(pixels);
    }

    // largest component per cluster; the first found wins ties
    let clusters = raw.iter().max().map_or(0, |m| m + 1);
    let mut keeper: Vec<Option<usize>> = vec![None; clusters];
    for (c, pixels) in comp_pixels.iter().enumerate() {
        let l = comp_label[c];
        if keeper[l].is_none_or(|k| pixels.len() > comp_pixels[k].len()) {
            keeper[l] = Some(c);
        }
    }
    // owner[c] = component whose region `c` ends up in
    let mut owner: Vec<Option<usize>> = (0..comp_pixels.len())
        .map(|c| (keeper[comp_label[c]] == Some(c)).then_some(c))
        .collect();
    let mut size: Vec<usize> = comp_pixels.iter().map(Vec::len).collect();
    loop {
        let mut progressed = false;
        let mut pending = false;
        for c in 0..comp_pixels.len() {
            if owner[c].is_some() {
                continue;
            }
            let target = comp_pixels[c]
                .iter()
                .flat_map(|&p| neighbours(p, width, height))
                .filter_map(|q| owner[component[q]])
                .max_by(|a, b| size[*a].cmp(&size[*b]).then(b.cmp(a)));
            match target {
                Some(t) => {
                    owner[c] = Some(t);
                    size[t] += comp_pixels[c].len();
                    progressed = true;
                }
                None => pending = true,
            }
        }
        if !pending || !progressed {
            break;
        }
    }

    let mut renumber = vec![usize::MAX; comp_pixels.len()];
    let mut next = 0;
    (0..n)
        .map(|p| {
            let root = owner[component[p]].unwrap_or(component[p]);
            if renumber[root] == usize::MAX {
                renumber[root] = next;
                next += 1;
            }
            renumber[root]
        })
        .collect()
}
