//! Deterministic image primitives.
//!
//! Owned 8-bit rasters (grayscale or RGB), portable PNM I/O, BT.601 grayscale
//! conversion, bilinear resize with half-pixel centers, cropping, bounding-box
//! expansion, brightness statistics, CLAHE enhancement, and dHash perceptual
//! hashing. Every operation is a pure function: equal inputs give bit-equal
//! outputs.

mod clahe;
mod dhash;
mod pnm;

pub use clahe::{clahe, clahe_mappings};
pub use dhash::{dhash, DHash};
pub use pnm::{load_pnm, save_pnm};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("pnm parse error at byte {offset}: {reason}")]
    Pnm { offset: usize, reason: String },
    #[error("image data length {actual} does not match {width}x{height}x{channels}")]
    DataLength {
        width: u32,
        height: u32,
        channels: u8,
        actual: usize,
    },
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    BadChannels(u8),
    #[error("image dimensions must be at least 1x1")]
    EmptyImage,
    #[error("crop {out_w}x{out_h} larger than image {width}x{height}")]
    CropTooLarge {
        out_w: u32,
        out_h: u32,
        width: u32,
        height: u32,
    },
    #[error("bounding box does not intersect the image")]
    EmptyIntersection,
    #[error("operation requires a grayscale image")]
    NotGrayscale,
    #[error("bounding box width and height must be positive")]
    EmptyBox,
    #[error("CLAHE needs at least one tile per axis and clip limit >= 1.0")]
    BadClaheParams,
}

/// Owned 8-bit raster, row-major, 1 (grayscale) or 3 (RGB) channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyImage);
        }
        if channels != 1 && channels != 3 {
            return Err(ImageError::BadChannels(channels));
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(ImageError::DataLength {
                width,
                height,
                channels,
                actual: data.len(),
            });
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    /// Constant-valued image; handy for tests and synthesized mock frames.
    pub fn filled(width: u32, height: u32, channels: u8, value: u8) -> Result<Self, ImageError> {
        let len = width as usize * height as usize * channels as usize;
        Image::new(width, height, channels, vec![value; len])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn is_grayscale(&self) -> bool {
        self.channels == 1
    }

    /// Samples of pixel (x, y): one byte for grayscale, three for RGB.
    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        let c = self.channels as usize;
        let idx = (y as usize * self.width as usize + x as usize) * c;
        &self.data[idx..idx + c]
    }
}

/// Axis-aligned box in pixel coordinates. `x`/`y` may lie outside an image
/// (detector output, pre-clamp); `w`/`h` are always positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub x: i64,
    pub y: i64,
    pub w: u32,
    pub h: u32,
}

impl BoundingBox {
    pub fn new(x: i64, y: i64, w: u32, h: u32) -> Result<Self, ImageError> {
        if w == 0 || h == 0 {
            return Err(ImageError::EmptyBox);
        }
        Ok(BoundingBox { x, y, w, h })
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    /// Intersection with `[0, width) x [0, height)`, or `None` if empty.
    pub fn clamped(&self, width: u32, height: u32) -> Option<BoundingBox> {
        let x0 = self.x.max(0);
        let y0 = self.y.max(0);
        let x1 = (self.x + self.w as i64).min(width as i64);
        let y1 = (self.y + self.h as i64).min(height as i64);
        if x1 <= x0 || y1 <= y0 {
            return None;
        }
        Some(BoundingBox {
            x: x0,
            y: y0,
            w: (x1 - x0) as u32,
            h: (y1 - y0) as u32,
        })
    }
}

/// BT.601 luma conversion, round half up. Grayscale input is returned as-is.
pub fn to_grayscale(img: &Image) -> Image {
    if img.channels == 1 {
        return img.clone();
    }
    let mut data = Vec::with_capacity(img.width as usize * img.height as usize);
    for px in img.data.chunks_exact(3) {
        let luma = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
        data.push(luma.round() as u8);
    }
    Image {
        width: img.width,
        height: img.height,
        channels: 1,
        data,
    }
}

/// Bilinear resize with half-pixel-center mapping: the source coordinate of
/// destination sample `d` is `(d + 0.5) * src/dst - 0.5`, clamped to the
/// source domain.
pub fn resize(img: &Image, out_w: u32, out_h: u32) -> Result<Image, ImageError> {
    if out_w == 0 || out_h == 0 {
        return Err(ImageError::EmptyImage);
    }
    let c = img.channels as usize;
    let scale_x = img.width as f64 / out_w as f64;
    let scale_y = img.height as f64 / out_h as f64;
    let mut data = vec![0u8; out_w as usize * out_h as usize * c];

    for dy in 0..out_h {
        let sy = ((dy as f64 + 0.5) * scale_y - 0.5).clamp(0.0, (img.height - 1) as f64);
        let y0 = sy.floor() as u32;
        let y1 = (y0 + 1).min(img.height - 1);
        let fy = sy - y0 as f64;
        for dx in 0..out_w {
            let sx = ((dx as f64 + 0.5) * scale_x - 0.5).clamp(0.0, (img.width - 1) as f64);
            let x0 = sx.floor() as u32;
            let x1 = (x0 + 1).min(img.width - 1);
            let fx = sx - x0 as f64;
            let out_idx = (dy as usize * out_w as usize + dx as usize) * c;
            for ch in 0..c {
                let p00 = img.pixel(x0, y0)[ch] as f64;
                let p10 = img.pixel(x1, y0)[ch] as f64;
                let p01 = img.pixel(x0, y1)[ch] as f64;
                let p11 = img.pixel(x1, y1)[ch] as f64;
                let top = p00 * (1.0 - fx) + p10 * fx;
                let bottom = p01 * (1.0 - fx) + p11 * fx;
                let v = top * (1.0 - fy) + bottom * fy;
                data[out_idx + ch] = v.round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    Image::new(out_w, out_h, img.channels, data)
}

/// Crop of size `out_w` x `out_h` about the image center; the origin is
/// `(floor((w - out_w)/2), floor((h - out_h)/2))`.
pub fn center_crop(img: &Image, out_w: u32, out_h: u32) -> Result<Image, ImageError> {
    if out_w > img.width || out_h > img.height {
        return Err(ImageError::CropTooLarge {
            out_w,
            out_h,
            width: img.width,
            height: img.height,
        });
    }
    if out_w == 0 || out_h == 0 {
        return Err(ImageError::EmptyImage);
    }
    let x = ((img.width - out_w) / 2) as i64;
    let y = ((img.height - out_h) / 2) as i64;
    crop(
        img,
        &BoundingBox {
            x,
            y,
            w: out_w,
            h: out_h,
        },
    )
}

/// Copies the pixels under `bbox` after clamping it to the image bounds.
pub fn crop(img: &Image, bbox: &BoundingBox) -> Result<Image, ImageError> {
    let clamped = bbox
        .clamped(img.width, img.height)
        .ok_or(ImageError::EmptyIntersection)?;
    let c = img.channels as usize;
    let mut data = Vec::with_capacity(clamped.w as usize * clamped.h as usize * c);
    for y in clamped.y..clamped.y + clamped.h as i64 {
        let row_start = (y as usize * img.width as usize + clamped.x as usize) * c;
        let row_end = row_start + clamped.w as usize * c;
        data.extend_from_slice(&img.data[row_start..row_end]);
    }
    Image::new(clamped.w, clamped.h, img.channels, data)
}

fn round_half_up(v: f64) -> i64 {
    (v + 0.5).floor() as i64
}

// Rounds to nearest with ties going down; used for the top/left corner so a
// half-pixel tie moves the edge away from the box center.
fn round_ties_down(v: f64) -> i64 {
    let f = v.floor();
    if v - f > 0.5 {
        f as i64 + 1
    } else {
        f as i64
    }
}

/// Scales a box by `1 + factor` about its center, rounds to whole pixels
/// (size ties up, corner ties away from center), then clamps to
/// `bounds_w` x `bounds_h`.
pub fn expand_box(bbox: &BoundingBox, factor: f64, bounds_w: u32, bounds_h: u32) -> BoundingBox {
    let new_w = round_half_up(bbox.w as f64 * (1.0 + factor)).max(1);
    let new_h = round_half_up(bbox.h as f64 * (1.0 + factor)).max(1);
    let cx = bbox.x as f64 + bbox.w as f64 / 2.0;
    let cy = bbox.y as f64 + bbox.h as f64 / 2.0;
    let x = round_ties_down(cx - new_w as f64 / 2.0);
    let y = round_ties_down(cy - new_h as f64 / 2.0);
    let unclamped = BoundingBox {
        x,
        y,
        w: new_w as u32,
        h: new_h as u32,
    };
    // A box expanded about a point inside the bounds always intersects them.
    unclamped.clamped(bounds_w, bounds_h).unwrap_or(*bbox)
}

/// Arithmetic mean of the grayscale conversion's samples, in `[0, 255]`.
pub fn mean_brightness(img: &Image) -> f64 {
    let gray;
    let data = if img.channels == 1 {
        &img.data
    } else {
        gray = to_grayscale(img);
        &gray.data
    };
    let sum: u64 = data.iter().map(|&v| v as u64).sum();
    sum as f64 / data.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gray(w: u32, h: u32, data: Vec<u8>) -> Image {
        Image::new(w, h, 1, data).unwrap()
    }

    #[test]
    fn grayscale_white_stays_white() {
        let img = Image::filled(2, 2, 3, 255).unwrap();
        let g = to_grayscale(&img);
        assert_eq!(g.channels(), 1);
        assert!(g.data().iter().all(|&v| v == 255));
    }

    #[test]
    fn grayscale_pure_red() {
        // round(0.299 * 255) = 76
        let img = Image::new(1, 1, 3, vec![255, 0, 0]).unwrap();
        assert_eq!(to_grayscale(&img).data(), &[76]);
    }

    #[test]
    fn grayscale_input_unchanged() {
        let img = gray(2, 2, vec![1, 2, 3, 4]);
        assert_eq!(to_grayscale(&img), img);
    }

    #[test]
    fn resize_constant_stays_constant() {
        let img = Image::filled(4, 4, 1, 100).unwrap();
        let out = resize(&img, 2, 2).unwrap();
        assert!(out.data().iter().all(|&v| v == 100));
    }

    #[test]
    fn resize_identity_scale() {
        let img = gray(2, 2, vec![10, 20, 30, 40]);
        assert_eq!(resize(&img, 2, 2).unwrap(), img);
    }

    #[test]
    fn resize_upscale_matches_hand_bilinear() {
        // src coords for dst 0..4 at scale 0.5: -0.25, 0.25, 0.75, 1.25
        // clamped: 0, 0.25, 0.75, 1 -> 0, 63.75, 191.25, 255
        let img = gray(2, 1, vec![0, 255]);
        let out = resize(&img, 4, 1).unwrap();
        assert_eq!(out.data(), &[0, 64, 191, 255]);
    }

    #[test]
    fn center_crop_256_to_224_origin() {
        let mut data = vec![0u8; 256 * 256];
        // mark the pixel expected at the crop's origin
        data[16 * 256 + 16] = 77;
        let img = gray(256, 256, data);
        let out = center_crop(&img, 224, 224).unwrap();
        assert_eq!((out.width(), out.height()), (224, 224));
        assert_eq!(out.pixel(0, 0)[0], 77);
    }

    #[test]
    fn center_crop_full_size_is_identity() {
        let img = gray(3, 2, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(center_crop(&img, 3, 2).unwrap(), img);
    }

    #[test]
    fn center_crop_5_to_3_origin() {
        let data: Vec<u8> = (0..25).collect();
        let img = gray(5, 5, data);
        let out = center_crop(&img, 3, 3).unwrap();
        assert_eq!(out.pixel(0, 0)[0], 6); // (1,1) of the source
    }

    #[test]
    fn center_crop_too_large_errors() {
        let img = Image::filled(4, 4, 1, 0).unwrap();
        assert!(matches!(
            center_crop(&img, 5, 4),
            Err(ImageError::CropTooLarge { .. })
        ));
    }

    #[test]
    fn crop_whole_image_is_identity() {
        let img = gray(3, 2, vec![1, 2, 3, 4, 5, 6]);
        let bb = BoundingBox::new(0, 0, 3, 2).unwrap();
        assert_eq!(crop(&img, &bb).unwrap(), img);
    }

    #[test]
    fn crop_clamps_negative_origin() {
        let img = Image::filled(8, 4, 1, 9).unwrap();
        let bb = BoundingBox::new(-5, 0, 10, 4).unwrap();
        let out = crop(&img, &bb).unwrap();
        assert_eq!((out.width(), out.height()), (5, 4));
    }

    #[test]
    fn crop_checkerboard_subregion() {
        let data: Vec<u8> = (0..16)
            .map(|i| if (i % 4 + i / 4) % 2 == 0 { 255 } else { 0 })
            .collect();
        let img = gray(4, 4, data);
        let bb = BoundingBox::new(1, 1, 2, 2).unwrap();
        let out = crop(&img, &bb).unwrap();
        assert_eq!(out.data(), &[255, 0, 0, 255]);
    }

    #[test]
    fn crop_outside_errors() {
        let img = Image::filled(4, 4, 1, 0).unwrap();
        let bb = BoundingBox::new(10, 10, 2, 2).unwrap();
        assert!(matches!(
            crop(&img, &bb),
            Err(ImageError::EmptyIntersection)
        ));
    }

    #[test]
    fn expand_box_twenty_percent() {
        let bb = BoundingBox::new(40, 40, 100, 100).unwrap();
        let out = expand_box(&bb, 0.20, 640, 480);
        assert_eq!(out, BoundingBox::new(30, 30, 120, 120).unwrap());
    }

    #[test]
    fn expand_box_clamps_to_bounds() {
        let bb = BoundingBox::new(0, 0, 600, 460).unwrap();
        let out = expand_box(&bb, 0.20, 640, 480);
        assert_eq!(out, BoundingBox::new(0, 0, 640, 480).unwrap());
    }

    #[test]
    fn mean_brightness_values() {
        assert_eq!(mean_brightness(&Image::filled(3, 3, 1, 255).unwrap()), 255.0);
        let half = gray(2, 1, vec![0, 255]);
        assert_eq!(mean_brightness(&half), 127.5);
        assert_eq!(mean_brightness(&gray(2, 2, vec![10, 20, 30, 40])), 25.0);
    }

    #[test]
    fn image_rejects_bad_data_length() {
        assert!(matches!(
            Image::new(2, 2, 1, vec![0; 3]),
            Err(ImageError::DataLength { .. })
        ));
    }

    proptest! {
        #[test]
        fn expand_box_factor_zero_is_identity(
            x in -50i64..200, y in -50i64..200, w in 1u32..100, h in 1u32..100,
        ) {
            let bb = BoundingBox { x, y, w, h };
            // only boxes that intersect the bounds keep their shape
            prop_assume!(bb.clamped(320, 240) == Some(bb));
            prop_assert_eq!(expand_box(&bb, 0.0, 320, 240), bb);
        }

        #[test]
        fn expand_box_output_always_in_bounds(
            x in 0i64..300, y in 0i64..200, w in 1u32..100, h in 1u32..100,
            factor in 0.0f64..3.0,
        ) {
            prop_assume!(x < 320 && y < 240);
            let bb = BoundingBox { x, y, w, h };
            prop_assume!(bb.clamped(320, 240).is_some());
            let out = expand_box(&bb, factor, 320, 240);
            prop_assert_eq!(out.clamped(320, 240), Some(out));
        }

        #[test]
        fn nested_crops_compose(
            data in proptest::collection::vec(any::<u8>(), 64..=64),
            ax in 0i64..4, ay in 0i64..4, aw in 2u32..5, ah in 2u32..5,
            bx in 0i64..2, by in 0i64..2, bw in 1u32..3, bh in 1u32..3,
        ) {
            let img = Image::new(8, 8, 1, data).unwrap();
            let a = BoundingBox { x: ax, y: ay, w: aw, h: ah };
            let a_clamped = a.clamped(8, 8).unwrap();
            prop_assume!(bx < a_clamped.w as i64 && by < a_clamped.h as i64);
            let b = BoundingBox { x: bx, y: by, w: bw, h: bh };
            let inner = crop(&crop(&img, &a).unwrap(), &b).unwrap();
            let b_in_a = b.clamped(a_clamped.w, a_clamped.h).unwrap();
            let composed = BoundingBox {
                x: a_clamped.x + b_in_a.x,
                y: a_clamped.y + b_in_a.y,
                w: b_in_a.w,
                h: b_in_a.h,
            };
            prop_assert_eq!(inner, crop(&img, &composed).unwrap());
        }

        #[test]
        fn resize_constant_any_scale(
            value in any::<u8>(),
            w in 1u32..16, h in 1u32..16,
            ow in 1u32..24, oh in 1u32..24,
        ) {
            let img = Image::filled(w, h, 1, value).unwrap();
            let out = resize(&img, ow, oh).unwrap();
            prop_assert!(out.data().iter().all(|&v| v == value));
        }
    }
}
