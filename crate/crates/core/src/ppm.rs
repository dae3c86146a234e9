//! Binary PPM (P6) frames, 640×480, maxval 255.
//!
//! Written headers are always exactly `P6\n640 480\n255\n`. The reader also
//! accepts the comments and arbitrary whitespace allowed by netpbm.

use std::fs;
use std::path::Path;

use crate::render::{Frame, FRAME_BYTES, FRAME_H, FRAME_W};
use crate::time::SimTime;
use crate::{Error, Result};

pub fn encode(frame: &Frame) -> Vec<u8> {
    let header = format!("P6\n{FRAME_W} {FRAME_H}\n255\n");
    let mut out = Vec::with_capacity(header.len() + FRAME_BYTES);
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(frame.pixels());
    out
}

/// Parses a P6 image. Distance and timestamp are not stored in the file and
/// come back as `distance_cm` and time 0.
pub fn decode(bytes: &[u8], distance_cm: f64) -> Result<Frame> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos)?;
    if magic != b"P6" {
        return Err(Error::Format(format!(
            "expected magic P6, found {:?}",
            String::from_utf8_lossy(magic)
        )));
    }
    let w = next_number(bytes, &mut pos, "width")?;
    let h = next_number(bytes, &mut pos, "height")?;
    let maxval = next_number(bytes, &mut pos, "maxval")?;
    if (w, h) != (FRAME_W, FRAME_H) {
        return Err(Error::Format(format!(
            "expected {FRAME_W}x{FRAME_H}, found {w}x{h}"
        )));
    }
    if maxval != 255 {
        return Err(Error::Format(format!(
            "expected maxval 255, found {maxval}"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Format("missing whitespace after maxval".into())),
    }
    let data = &bytes[pos..];
    if data.len() < FRAME_BYTES {
        return Err(Error::Format(format!(
            "truncated pixel data: {} of {FRAME_BYTES} bytes",
            data.len()
        )));
    }
    if data.len() > FRAME_BYTES {
        return Err(Error::Format(format!(
            "{} trailing bytes after pixel data",
            data.len() - FRAME_BYTES
        )));
    }
    Frame::new(data.to_vec(), distance_cm, SimTime(0))
}

pub fn write_ppm(frame: &Frame, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(frame)).map_err(|e| Error::io(path, e))
}

pub fn read_ppm(path: impl AsRef<Path>, distance_cm: f64) -> Result<Frame> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, distance_cm)
}

fn skip_space_and_comments(bytes: &[u8], pos: &mut usize) {
    while let Some(&b) = bytes.get(*pos) {
        if b.is_ascii_whitespace() {
            *pos += 1;
        } else if b == b'#' {
            while let Some(&c) = bytes.get(*pos) {
                *pos += 1;
                if c == b'\n' || c == b'\r' {
                    break;
                }
            }
        } else {
            break;
        }
    }
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    skip_space_and_comments(bytes, pos);
    let start = *pos;
    while bytes
        .get(*pos)
        .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
    {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Format("unexpected end of header".into()));
    }
    Ok(&bytes[start..*pos])
}

fn next_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let tok = next_token(bytes, pos)?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Format(format!("bad {what} `{}`", String::from_utf8_lossy(tok))))
}
