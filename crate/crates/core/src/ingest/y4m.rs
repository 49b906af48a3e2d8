use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, ErrorKind, Read};
use std::path::Path;

use super::IngestError;

const MAGIC: &str = "YUV4MPEG2";
const MAX_HEADER: usize = 4096;

/// Exact frame rate as a ratio of positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self, IngestError> {
        if num == 0 || den == 0 {
            return Err(IngestError::Invalid(format!(
                "frame rate {num}:{den} is not positive"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.num, self.den)
    }
}

impl std::str::FromStr for Rational {
    type Err = IngestError;

    /// Accepts `n:d`, `n/d` or a bare integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IngestError::Invalid(format!("cannot parse frame rate '{s}'"));
        let (n, d) = match s.split_once([':', '/']) {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        Rational::new(
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        )
    }
}

/// Chroma layouts the reader can skip over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colorspace {
    C420,
    C422,
    C444,
    Mono,
}

impl Colorspace {
    fn parse(tag: &str) -> Result<Self, IngestError> {
        match tag {
            "420" | "420jpeg" | "420paldv" | "420mpeg2" => Ok(Colorspace::C420),
            "422" => Ok(Colorspace::C422),
            "444" => Ok(Colorspace::C444),
            "mono" => Ok(Colorspace::Mono),
            other => Err(IngestError::Unsupported(format!("colorspace C{other}"))),
        }
    }

    pub fn chroma_bytes(&self, width: usize, height: usize) -> usize {
        let (cw, ch) = (width.div_ceil(2), height.div_ceil(2));
        match self {
            Colorspace::C420 => 2 * cw * ch,
            Colorspace::C422 => 2 * cw * height,
            Colorspace::C444 => 2 * width * height,
            Colorspace::Mono => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Y4mHeader {
    pub width: usize,
    pub height: usize,
    pub frame_rate: Rational,
    pub colorspace: Colorspace,
}

/// Luma planes of a video, row-major, one byte per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoLuma {
    width: usize,
    height: usize,
    frame_rate: Rational,
    frames: Vec<Vec<u8>>,
}

impl VideoLuma {
    pub fn new(
        width: usize,
        height: usize,
        frame_rate: Rational,
        frames: Vec<Vec<u8>>,
    ) -> Result<Self, IngestError> {
        if width == 0 || height == 0 {
            return Err(IngestError::Invalid(format!("frame size {width}x{height}")));
        }
        if let Some(i) = frames.iter().position(|f| f.len() != width * height) {
            return Err(IngestError::BadFrame {
                frame_index: i,
                message: format!(
                    "plane has {} bytes, expected {}",
                    frames[i].len(),
                    width * height
                ),
            });
        }
        Ok(Self {
            width,
            height,
            frame_rate,
            frames,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn frame_rate(&self) -> Rational {
        self.frame_rate
    }

    pub fn frame_rate_hz(&self) -> f64 {
        self.frame_rate.as_f64()
    }

    pub fn frames(&self) -> &[Vec<u8>] {
        &self.frames
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }
}

/// Streaming reader yielding one luma plane per frame. Chroma is read and
/// discarded, so the input need not be seekable.
pub struct Y4mReader<R> {
    inner: R,
    header: Y4mHeader,
    frame_index: usize,
    bytes_read: u64,
    scratch: Vec<u8>,
    done: bool,
}

/// Reads up to and excluding `\n`. `Ok(None)` on a clean EOF before any byte.
fn read_line<R: BufRead>(r: &mut R, limit: usize) -> std::io::Result<Option<Vec<u8>>> {
    let mut line = Vec::new();
    let n = r
        .by_ref()
        .take(limit as u64 + 1)
        .read_until(b'\n', &mut line)?;
    if n == 0 {
        return Ok(None);
    }
    Ok(Some(line))
}

impl<R: BufRead> Y4mReader<R> {
    pub fn new(mut inner: R) -> Result<Self, IngestError> {
        let line = read_line(&mut inner, MAX_HEADER)?
            .ok_or_else(|| IngestError::malformed(0, "empty stream"))?;
        let bytes_read = line.len() as u64;
        if line.last() != Some(&b'\n') {
            return Err(IngestError::malformed(
                line.len(),
                "stream header not terminated",
            ));
        }
        let text = std::str::from_utf8(&line[..line.len() - 1])
            .map_err(|_| IngestError::malformed(0, "stream header is not ASCII"))?;
        let mut tokens = text.split(' ');
        if tokens.next() != Some(MAGIC) {
            return Err(IngestError::malformed(0, "missing YUV4MPEG2 magic"));
        }
        let (mut width, mut height, mut rate) = (None, None, None);
        let mut colorspace = Colorspace::C420;
        for tok in tokens.filter(|t| !t.is_empty()) {
            let (tag, val) = tok.split_at(1);
            let num = |v: &str| {
                v.parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| IngestError::malformed(0, format!("bad header tag '{tok}'")))
            };
            match tag {
                "W" => width = Some(num(val)?),
                "H" => height = Some(num(val)?),
                "F" => {
                    let (n, d) = val.split_once(':').ok_or_else(|| {
                        IngestError::malformed(0, format!("bad frame rate '{tok}'"))
                    })?;
                    rate = Some(Rational::new(num(n)? as u64, num(d)? as u64)?);
                }
                "C" => colorspace = Colorspace::parse(val)?,
                _ => {}
            }
        }
        let missing = |t: &str| IngestError::malformed(0, format!("header lacks the {t} tag"));
        let header = Y4mHeader {
            width: width.ok_or_else(|| missing("W"))?,
            height: height.ok_or_else(|| missing("H"))?,
            frame_rate: rate.ok_or_else(|| missing("F"))?,
            colorspace,
        };
        Ok(Self {
            inner,
            header,
            frame_index: 0,
            bytes_read,
            scratch: Vec::new(),
            done: false,
        })
    }

    pub fn header(&self) -> &Y4mHeader {
        &self.header
    }

    /// Total bytes consumed so far, headers included.
    pub fn bytes_read(&self) -> u64 {
        self.bytes_read
    }

    pub fn next_frame(&mut self) -> Result<Option<Vec<u8>>, IngestError> {
        if self.done {
            return Ok(None);
        }
        let idx = self.frame_index;
        let bad = |message: String| IngestError::BadFrame {
            frame_index: idx,
            message,
        };
        let Some(line) = read_line(&mut self.inner, MAX_HEADER)? else {
            self.done = true;
            return Ok(None);
        };
        self.bytes_read += line.len() as u64;
        let ok = line.last() == Some(&b'\n')
            && line.starts_with(b"FRAME")
            && matches!(line[5], b' ' | b'\n');
        if !ok {
            return Err(bad("frame header is not FRAME".into()));
        }
        let (w, h) = (self.header.width, self.header.height);
        let mut plane = vec![0u8; w * h];
        let chroma = self.header.colorspace.chroma_bytes(w, h);
        self.scratch.resize(chroma, 0);
        for (buf, what) in [(&mut plane[..], "luma"), (&mut self.scratch[..], "chroma")] {
            match self.inner.read_exact(buf) {
                Ok(()) => self.bytes_read += buf.len() as u64,
                Err(e) if e.kind() == ErrorKind::UnexpectedEof => {
                    return Err(bad(format!("stream ends inside the {what} plane")));
                }
                Err(e) => return Err(e.into()),
            }
        }
        self.frame_index += 1;
        Ok(Some(plane))
    }
}

impl<R: BufRead> Iterator for Y4mReader<R> {
    type Item = Result<Vec<u8>, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.next_frame() {
            Ok(Some(f)) => Some(Ok(f)),
            Ok(None) => None,
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

pub fn open_y4m(path: impl AsRef<Path>) -> Result<Y4mReader<BufReader<File>>, IngestError> {
    Y4mReader::new(BufReader::new(File::open(path)?))
}

/// Reads a whole stream into memory.
pub fn parse_y4m(stream: impl Read) -> Result<VideoLuma, IngestError> {
    let mut reader = Y4mReader::new(BufReader::new(stream))?;
    let mut frames = Vec::new();
    while let Some(f) = reader.next_frame()? {
        frames.push(f);
    }
    let h = *reader.header();
    VideoLuma::new(h.width, h.height, h.frame_rate, frames)
}
