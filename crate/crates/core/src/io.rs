//! File formats.
//!
//! * **TNS3** – `b"TNS3"`, `u32` LE version (1), `n1`, `n2`, `n3` as `u64` LE,
//!   then `n1 n2 n3` IEEE-754 binary64 LE values in tensor storage order
//!   (slice `k` outermost, column `j`, row `i` innermost).
//! * **MSK3** – same header with magic `b"MSK3"`, then one byte (0 or 1) per entry.
//! * Binary PGM (P5) and PPM (P6) with maxval 255. Image rows map to `i`,
//!   columns to `j`, and PPM channels R, G, B to slices 0, 1, 2.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::{ObservationMask, RealTensor3};

const TENSOR_MAGIC: &[u8; 4] = b"TNS3";
const MASK_MAGIC: &[u8; 4] = b"MSK3";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 3 * 8;

fn with_path(e: std::io::Error, path: &Path) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| with_path(e, path))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| with_path(e, path))
}

fn encode_header(magic: &[u8; 4], dims: (usize, usize, usize), payload: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + payload);
    out.extend_from_slice(magic);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for d in [dims.0, dims.1, dims.2] {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    out
}

fn decode_header(bytes: &[u8], magic: &[u8; 4], elem: usize) -> Result<(usize, usize, usize)> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "file too short for header ({} bytes)",
            bytes.len()
        )));
    }
    if &bytes[0..4] != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&bytes[0..4]),
            String::from_utf8_lossy(magic)
        )));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let dim = |at: usize| -> Result<usize> {
        let v = u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        if v == 0 {
            return Err(Error::Format("zero dimension".into()));
        }
        usize::try_from(v).map_err(|_| Error::Format(format!("dimension {v} too large")))
    };
    let dims = (dim(8)?, dim(16)?, dim(24)?);
    let expected = dims
        .0
        .checked_mul(dims.1)
        .and_then(|x| x.checked_mul(dims.2))
        .and_then(|x| x.checked_mul(elem))
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    let got = bytes.len() - HEADER_LEN;
    if got != expected {
        return Err(Error::Format(format!(
            "payload is {got} bytes, expected {expected} for {}x{}x{}",
            dims.0, dims.1, dims.2
        )));
    }
    Ok(dims)
}

pub fn encode_tensor(a: &RealTensor3) -> Vec<u8> {
    let mut out = encode_header(TENSOR_MAGIC, a.dims(), 8 * a.len());
    for v in a.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_tensor(bytes: &[u8]) -> Result<RealTensor3> {
    let (n1, n2, n3) = decode_header(bytes, TENSOR_MAGIC, 8)?;
    let data = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    RealTensor3::from_vec(n1, n2, n3, data).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_tensor(path: impl AsRef<Path>, a: &RealTensor3) -> Result<()> {
    write_bytes(path.as_ref(), &encode_tensor(a))
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<RealTensor3> {
    decode_tensor(&read_bytes(path.as_ref())?)
}

pub fn encode_mask(m: &ObservationMask) -> Vec<u8> {
    let flags = m.as_slice();
    let mut out = encode_header(MASK_MAGIC, m.dims(), flags.len());
    out.extend(flags.iter().map(|&b| b as u8));
    out
}

pub fn decode_mask(bytes: &[u8]) -> Result<ObservationMask> {
    let (n1, n2, n3) = decode_header(bytes, MASK_MAGIC, 1)?;
    let flags = bytes[HEADER_LEN..]
        .iter()
        .enumerate()
        .map(|(pos, &b)| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(Error::Format(format!("mask byte {other} at offset {pos}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    ObservationMask::from_vec(n1, n2, n3, flags)
}

pub fn write_mask(path: impl AsRef<Path>, m: &ObservationMask) -> Result<()> {
    write_bytes(path.as_ref(), &encode_mask(m))
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<ObservationMask> {
    decode_mask(&read_bytes(path.as_ref())?)
}

struct PnmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PnmCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("missing or invalid {what} in image header")))
    }
}

/// Parses a binary PGM (`n1 x n2 x 1`) or PPM (`n1 x n2 x 3`) image.
pub fn decode_image(bytes: &[u8]) -> Result<RealTensor3> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(Error::Format("not a PNM image".into()));
    }
    let channels = match bytes[1] {
        b'5' => 1,
        b'6' => 3,
        b'2' | b'3' => {
            return Err(Error::Format(
                "ASCII PNM variants (P2/P3) are not supported".into(),
            ))
        }
        other => {
            return Err(Error::Format(format!(
                "unsupported PNM type P{}",
                other as char
            )))
        }
    };
    let mut cur = PnmCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Format("image has zero size".into()));
    }
    if maxval != 255 {
        return Err(Error::Format(format!(
            "maxval {maxval} unsupported, expected 255"
        )));
    }
    match bytes.get(cur.pos) {
        Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(Error::Format("missing whitespace before pixel data".into())),
    }
    let pixels = &bytes[cur.pos..];
    let need = width * height * channels;
    if pixels.len() != need {
        return Err(Error::Format(format!(
            "pixel data is {} bytes, expected {need}",
            pixels.len()
        )));
    }
    Ok(RealTensor3::from_fn(height, width, channels, |i, j, k| {
        pixels[(i * width + j) * channels + k] as f64
    }))
}

fn to_byte(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Encodes a depth-1 tensor as PGM or a depth-3 tensor as PPM, clamping to
/// `[0, 255]` and rounding half up.
pub fn encode_image(a: &RealTensor3) -> Result<Vec<u8>> {
    let (n1, n2, n3) = a.dims();
    let tag = match n3 {
        1 => "P5",
        3 => "P6",
        other => {
            return Err(Error::Format(format!(
                "images need depth 1 or 3, tensor has depth {other}"
            )))
        }
    };
    let mut out = format!("{tag}\n{n2} {n1}\n255\n").into_bytes();
    out.reserve(n1 * n2 * n3);
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                out.push(to_byte(a.get(i, j, k)));
            }
        }
    }
    Ok(out)
}

pub fn read_image(path: impl AsRef<Path>) -> Result<RealTensor3> {
    decode_image(&read_bytes(path.as_ref())?)
}

pub fn write_image(path: impl AsRef<Path>, a: &RealTensor3) -> Result<()> {
    write_bytes(path.as_ref(), &encode_image(a)?)
}

/// Stacks the `.pgm` frames of a directory, in lexicographic file-name
/// order, as frontal slices.
pub fn read_frames(dir: impl AsRef<Path>) -> Result<RealTensor3> {
    let dir = dir.as_ref();
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| with_path(e, dir))? {
        let path = entry.map_err(|e| with_path(e, dir))?.path();
        let is_pgm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
        if path.is_file() && is_pgm {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(Error::EmptyDir(dir.to_path_buf()));
    }
    paths.sort();

    let first = read_image(&paths[0])?;
    let (n1, n2, c) = first.dims();
    if c != 1 {
        return Err(Error::Format(format!(
            "{} is not a grayscale frame",
            paths[0].display()
        )));
    }
    let mut out = RealTensor3::zeros(n1, n2, paths.len());
    out.frontal_mut(0).copy_from_slice(first.as_slice());
    for (k, path) in paths.iter().enumerate().skip(1) {
        let frame = read_image(path)?;
        if frame.dims() != (n1, n2, 1) {
            return Err(Error::Format(format!(
                "{} is {:?}, expected {n1}x{n2} grayscale like the first frame",
                path.display(),
                frame.dims()
            )));
        }
        out.frontal_mut(k).copy_from_slice(frame.as_slice());
    }
    Ok(out)
}
