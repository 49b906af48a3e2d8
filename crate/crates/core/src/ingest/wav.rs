use std::path::Path;

use super::IngestError;
use crate::signal::SampledSignal;

const FORMAT_PCM: u16 = 0x0001;
const FORMAT_FLOAT: u16 = 0x0003;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

/// Two-channel capture: left carries the mains reference, right the
/// photodiode.
#[derive(Debug, Clone, PartialEq)]
pub struct StereoRecording {
    left: SampledSignal,
    right: SampledSignal,
}

impl StereoRecording {
    pub fn new(left: SampledSignal, right: SampledSignal) -> Result<Self, IngestError> {
        if left.len() != right.len() || left.sample_rate_hz() != right.sample_rate_hz() {
            return Err(IngestError::Invalid(format!(
                "channels differ: {} samples at {} Hz vs {} samples at {} Hz",
                left.len(),
                left.sample_rate_hz(),
                right.len(),
                right.sample_rate_hz()
            )));
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &SampledSignal {
        &self.left
    }

    pub fn right(&self) -> &SampledSignal {
        &self.right
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.left.sample_rate_hz()
    }

    pub fn into_channels(self) -> (SampledSignal, SampledSignal) {
        (self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WavContents {
    Mono(SampledSignal),
    Stereo(StereoRecording),
}

impl WavContents {
    pub fn channel_count(&self) -> usize {
        match self {
            WavContents::Mono(_) => 1,
            WavContents::Stereo(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum SampleFormat {
    Pcm16,
    Float32,
}

#[derive(Debug, Clone, Copy)]
struct Format {
    sample: SampleFormat,
    channels: usize,
    rate: u32,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_fmt(body: &[u8], offset: usize) -> Result<Format, IngestError> {
    if body.len() < 16 {
        return Err(IngestError::malformed(
            offset,
            "fmt chunk shorter than 16 bytes",
        ));
    }
    let mut tag = u16_at(body, 0);
    let channels = u16_at(body, 2) as usize;
    let rate = u32_at(body, 4);
    let bits = u16_at(body, 14);
    if tag == FORMAT_EXTENSIBLE {
        if body.len() < 26 {
            return Err(IngestError::malformed(
                offset,
                "extensible fmt chunk too short",
            ));
        }
        tag = u16_at(body, 24);
    }
    let sample = match (tag, bits) {
        (FORMAT_PCM, 16) => SampleFormat::Pcm16,
        (FORMAT_FLOAT, 32) => SampleFormat::Float32,
        (FORMAT_PCM | FORMAT_FLOAT, b) => {
            return Err(IngestError::Unsupported(format!(
                "{b}-bit samples with format tag {tag:#06x}"
            )))
        }
        _ => {
            return Err(IngestError::Unsupported(format!("format tag {tag:#06x}")));
        }
    };
    if !(1..=2).contains(&channels) {
        return Err(IngestError::Unsupported(format!("{channels} channels")));
    }
    if rate == 0 {
        return Err(IngestError::malformed(offset + 4, "sample rate is zero"));
    }
    Ok(Format {
        sample,
        channels,
        rate,
    })
}

/// Decodes a RIFF/WAVE byte buffer. 16-bit integers map to `v / 32768`.
pub fn parse_wav(bytes: &[u8]) -> Result<WavContents, IngestError> {
    if bytes.len() < 12 {
        return Err(IngestError::malformed(
            bytes.len(),
            "file shorter than the RIFF header",
        ));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(IngestError::malformed(0, "missing RIFF magic"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(IngestError::malformed(8, "missing WAVE form type"));
    }
    let mut at = 12;
    let mut format = None;
    let mut data: Option<(usize, &[u8])> = None;
    while at + 8 <= bytes.len() {
        let id = &bytes[at..at + 4];
        let size = u32_at(bytes, at + 4) as usize;
        let body_at = at + 8;
        let available = bytes.len() - body_at;
        match id {
            b"fmt " => {
                if size > available {
                    return Err(IngestError::malformed(bytes.len(), "fmt chunk truncated"));
                }
                format = Some(parse_fmt(&bytes[body_at..body_at + size], body_at)?);
            }
            b"data" => {
                if size > available {
                    return Err(IngestError::malformed(
                        bytes.len(),
                        format!("data chunk declares {size} bytes but only {available} follow"),
                    ));
                }
                data = Some((body_at, &bytes[body_at..body_at + size]));
            }
            _ => {}
        }
        at = body_at.saturating_add(size).saturating_add(size & 1);
        if data.is_some() && format.is_some() {
            break;
        }
    }
    let format = format.ok_or_else(|| IngestError::malformed(bytes.len(), "no fmt chunk"))?;
    let (data_at, data) =
        data.ok_or_else(|| IngestError::malformed(bytes.len(), "no data chunk"))?;

    let width = match format.sample {
        SampleFormat::Pcm16 => 2,
        SampleFormat::Float32 => 4,
    };
    let frame_bytes = width * format.channels;
    if data.len() % frame_bytes != 0 {
        let whole = data.len() / frame_bytes * frame_bytes;
        return Err(IngestError::malformed(
            data_at + whole,
            format!("data ends inside a {frame_bytes}-byte frame"),
        ));
    }
    let frames = data.len() / frame_bytes;
    let mut channels = vec![Vec::with_capacity(frames); format.channels];
    for (i, chunk) in data.chunks_exact(width).enumerate() {
        let v = match format.sample {
            SampleFormat::Pcm16 => i16::from_le_bytes([chunk[0], chunk[1]]) as f64 / 32768.0,
            SampleFormat::Float32 => {
                f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]) as f64
            }
        };
        channels[i % format.channels].push(v);
    }
    let rate = format.rate as f64;
    let mut it = channels.into_iter();
    let first = SampledSignal::new(it.next().unwrap_or_default(), rate)
        .map_err(|e| IngestError::Invalid(e.to_string()))?;
    match it.next() {
        None => Ok(WavContents::Mono(first)),
        Some(right) => {
            let right =
                SampledSignal::new(right, rate).map_err(|e| IngestError::Invalid(e.to_string()))?;
            Ok(WavContents::Stereo(StereoRecording::new(
                first.with_label("left"),
                right.with_label("right"),
            )?))
        }
    }
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<WavContents, IngestError> {
    parse_wav(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(tag: u16, channels: u16, rate: u32, bits: u16, data_len: u32) -> Vec<u8> {
        let block = channels * bits / 8;
        let mut b = Vec::new();
        b.extend_from_slice(b"RIFF");
        b.extend_from_slice(&(36 + data_len).to_le_bytes());
        b.extend_from_slice(b"WAVE");
        b.extend_from_slice(b"fmt ");
        b.extend_from_slice(&16u32.to_le_bytes());
        b.extend_from_slice(&tag.to_le_bytes());
        b.extend_from_slice(&channels.to_le_bytes());
        b.extend_from_slice(&rate.to_le_bytes());
        b.extend_from_slice(&(rate * block as u32).to_le_bytes());
        b.extend_from_slice(&block.to_le_bytes());
        b.extend_from_slice(&bits.to_le_bytes());
        b.extend_from_slice(b"data");
        b.extend_from_slice(&data_len.to_le_bytes());
        b
    }

    #[test]
    fn stereo_pcm16_by_hand() {
        let mut b = header(1, 2, 1000, 16, 16);
        assert_eq!(b.len(), 44);
        for v in [0x7FFFi16, -32768, 1, -1, 0, 100, 16384, -16384] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        let WavContents::Stereo(rec) = parse_wav(&b).unwrap() else {
            panic!("expected stereo")
        };
        assert_eq!(rec.sample_rate_hz(), 1000.0);
        assert_eq!(
            rec.left().samples(),
            &[32767.0 / 32768.0, 1.0 / 32768.0, 0.0, 0.5]
        );
        assert_eq!(
            rec.right().samples(),
            &[-1.0, -1.0 / 32768.0, 100.0 / 32768.0, -0.5]
        );
    }

    #[test]
    fn mono_float32() {
        let mut b = header(3, 1, 48000, 32, 8);
        b.extend_from_slice(&0.25f32.to_le_bytes());
        b.extend_from_slice(&(-0.75f32).to_le_bytes());
        let WavContents::Mono(s) = parse_wav(&b).unwrap() else {
            panic!("expected mono")
        };
        assert_eq!(s.samples(), &[0.25, -0.75]);
        assert_eq!(s.sample_rate_hz(), 48000.0);
    }

    #[test]
    fn mp3_tag_unsupported() {
        let b = header(0x0055, 1, 8000, 16, 0);
        assert!(matches!(parse_wav(&b), Err(IngestError::Unsupported(_))));
    }

    #[test]
    fn truncated_data_reports_offset() {
        let mut b = header(1, 1, 1000, 16, 100);
        b.extend_from_slice(&[0u8; 10]);
        match parse_wav(&b) {
            Err(IngestError::Malformed { offset, .. }) => assert_eq!(offset, 54),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn half_frame_reports_offset() {
        let mut b = header(1, 2, 1000, 16, 6);
        b.extend_from_slice(&[0u8; 6]);
        match parse_wav(&b) {
            Err(IngestError::Malformed { offset, .. }) => assert_eq!(offset, 48),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_magic() {
        let mut b = header(1, 1, 1000, 16, 0);
        b[0] = b'X';
        assert!(matches!(
            parse_wav(&b),
            Err(IngestError::Malformed { offset: 0, .. })
        ));
    }

    #[test]
    fn unknown_chunks_skipped() {
        let mut b = Vec::new();
        b.extend_from_slice(b"RIFF\0\0\0\0WAVE");
        b.extend_from_slice(b"LIST");
        b.extend_from_slice(&3u32.to_le_bytes());
        b.extend_from_slice(&[1, 2, 3, 0]); // odd size plus pad byte
        let h = header(1, 1, 1000, 16, 2);
        b.extend_from_slice(&h[12..]);
        b.extend_from_slice(&1000i16.to_le_bytes());
        let WavContents::Mono(s) = parse_wav(&b).unwrap() else {
            panic!()
        };
        assert_eq!(s.samples(), &[1000.0 / 32768.0]);
    }
}
