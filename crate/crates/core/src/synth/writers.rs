use std::path::Path;

use super::SynthError;
use crate::ingest::VideoLuma;
use crate::signal::SampledSignal;

/// 16-bit PCM WAV of one or two channels. Samples are scaled by 32768,
/// rounded and clipped to the i16 range.
pub fn encode_wav(channels: &[&SampledSignal]) -> Result<Vec<u8>, SynthError> {
    let Some(first) = channels.first() else {
        return Err(SynthError::InvalidParameter("no channels to write".into()));
    };
    if channels.len() > 2 {
        return Err(SynthError::InvalidParameter(format!(
            "{} channels",
            channels.len()
        )));
    }
    for c in &channels[1..] {
        if c.len() != first.len() || c.sample_rate_hz() != first.sample_rate_hz() {
            return Err(SynthError::InvalidParameter(format!(
                "channel lengths/rates differ: {} @ {} Hz vs {} @ {} Hz",
                first.len(),
                first.sample_rate_hz(),
                c.len(),
                c.sample_rate_hz()
            )));
        }
    }
    let rate = first.sample_rate_hz();
    if rate.fract() != 0.0 || rate > u32::MAX as f64 {
        return Err(SynthError::InvalidParameter(format!(
            "WAV needs an integer sample rate, got {rate}"
        )));
    }
    let rate = rate as u32;
    let nch = channels.len() as u16;
    let block = 2 * nch;
    let data_len = first.len() * block as usize;
    let data_len_u32 = u32::try_from(data_len)
        .ok()
        .filter(|n| *n <= u32::MAX - 36)
        .ok_or_else(|| SynthError::InvalidParameter("audio too long for WAV".into()))?;

    let mut b = Vec::with_capacity(44 + data_len);
    b.extend_from_slice(b"RIFF");
    b.extend_from_slice(&(36 + data_len_u32).to_le_bytes());
    b.extend_from_slice(b"WAVEfmt ");
    b.extend_from_slice(&16u32.to_le_bytes());
    b.extend_from_slice(&1u16.to_le_bytes());
    b.extend_from_slice(&nch.to_le_bytes());
    b.extend_from_slice(&rate.to_le_bytes());
    b.extend_from_slice(&(rate * block as u32).to_le_bytes());
    b.extend_from_slice(&block.to_le_bytes());
    b.extend_from_slice(&16u16.to_le_bytes());
    b.extend_from_slice(b"data");
    b.extend_from_slice(&data_len_u32.to_le_bytes());
    for i in 0..first.len() {
        for c in channels {
            let q = (c.samples()[i] * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
            b.extend_from_slice(&q.to_le_bytes());
        }
    }
    Ok(b)
}

pub fn write_wav(channels: &[&SampledSignal], path: impl AsRef<Path>) -> Result<(), SynthError> {
    std::fs::write(path, encode_wav(channels)?)?;
    Ok(())
}

/// Chroma-free YUV4MPEG2 stream.
pub fn encode_y4m(video: &VideoLuma) -> Result<Vec<u8>, SynthError> {
    let r = video.frame_rate();
    if r.num > u32::MAX as u64 || r.den > u32::MAX as u64 {
        return Err(SynthError::InvalidParameter(format!(
            "frame rate {r} does not fit the Y4M rational"
        )));
    }
    let header = format!(
        "YUV4MPEG2 W{} H{} F{}:{} Ip A1:1 Cmono\n",
        video.width(),
        video.height(),
        r.num,
        r.den
    );
    let plane = video.width() * video.height();
    let mut b = Vec::with_capacity(header.len() + video.frame_count() * (6 + plane));
    b.extend_from_slice(header.as_bytes());
    for f in video.frames() {
        b.extend_from_slice(b"FRAME\n");
        b.extend_from_slice(f);
    }
    Ok(b)
}

pub fn write_y4m(video: &VideoLuma, path: impl AsRef<Path>) -> Result<(), SynthError> {
    std::fs::write(path, encode_y4m(video)?)?;
    Ok(())
}
