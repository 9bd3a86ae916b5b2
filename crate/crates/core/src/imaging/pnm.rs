//! Binary PNM (P5 grayscale / P6 RGB) with maxval 255.
//!
//! The writer emits the canonical minimal form: header tokens separated by a
//! single space, one newline before the payload (`P5 W H 255\n<bytes>`).
//! The reader accepts any ASCII whitespace between header tokens, so
//! `save_pnm(load_pnm(b)) == b` holds for every file in canonical form.

use super::{Image, ImageError};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, reason: impl Into<String>) -> ImageError {
        ImageError::Pnm {
            offset: self.pos,
            reason: reason.into(),
        }
    }

    fn skip_whitespace(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn read_u32(&mut self, what: &str) -> Result<u32, ImageError> {
        self.skip_whitespace();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err(format!("{what} out of range")))
    }
}

/// Decodes a binary PNM byte buffer into an [`Image`].
pub fn load_pnm(bytes: &[u8]) -> Result<Image, ImageError> {
    let mut cur = Cursor { bytes, pos: 0 };
    if bytes.len() < 2 {
        return Err(cur.err("missing magic number"));
    }
    let channels = match &bytes[0..2] {
        b"P5" => 1u8,
        b"P6" => 3u8,
        _ => return Err(cur.err("magic number is not P5 or P6")),
    };
    cur.pos = 2;
    let width = cur.read_u32("width")?;
    let height = cur.read_u32("height")?;
    if width == 0 || height == 0 {
        return Err(cur.err("zero width or height"));
    }
    let maxval = cur.read_u32("maxval")?;
    if maxval != 255 {
        return Err(cur.err(format!("maxval {maxval} is not 255")));
    }
    // exactly one whitespace byte separates the header from the payload
    if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
        return Err(cur.err("expected whitespace before payload"));
    }
    cur.pos += 1;
    let expected = width as usize * height as usize * channels as usize;
    let payload = &bytes[cur.pos..];
    if payload.len() < expected {
        cur.pos = bytes.len();
        return Err(cur.err(format!(
            "payload truncated: need {expected} bytes, got {}",
            payload.len()
        )));
    }
    if payload.len() > expected {
        cur.pos += expected;
        return Err(cur.err("trailing bytes after payload"));
    }
    Image::new(width, height, channels, payload.to_vec())
}

/// Encodes an [`Image`] as canonical binary PNM (P5 for grayscale, P6 for
/// RGB).
pub fn save_pnm(img: &Image) -> Vec<u8> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let header = format!("{magic} {} {} 255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.data().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.data());
    out
}
