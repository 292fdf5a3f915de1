//! Binary masks, grayscale frames and their on-disk formats.
//!
//! Masks are stored one bit per pixel, row-major, packed into `u64` words.
//! Bits past `width * height` in the last word are always zero, so set
//! operations can work word-at-a-time.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    words: Vec<u64>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        BinaryImage {
            width,
            height,
            words: vec![0; (width * height).div_ceil(64)],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut img = BinaryImage::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    img.set(x, y, true);
                }
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        let i = y * self.width + x;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        let i = y * self.width + x;
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Sets pixels `x0..=x1` of row `y`.
    pub fn fill_span(&mut self, y: usize, x0: usize, x1: usize) {
        let start = y * self.width + x0;
        let end = y * self.width + x1 + 1;
        let (ws, we) = (start / 64, (end - 1) / 64);
        let lo = !0u64 << (start % 64);
        let hi = !0u64 >> (63 - (end - 1) % 64);
        if ws == we {
            self.words[ws] |= lo & hi;
        } else {
            self.words[ws] |= lo;
            for w in &mut self.words[ws + 1..we] {
                *w = !0;
            }
            self.words[we] |= hi;
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn check_dims(&self, other: &BinaryImage) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }

    /// Number of pixels set in both images.
    pub fn count_common(&self, other: &BinaryImage) -> Result<usize> {
        self.check_dims(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    pub fn union_with(&mut self, other: &BinaryImage) -> Result<()> {
        self.check_dims(other)?;
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
        Ok(())
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height).flat_map(move |y| {
            (0..self.width).filter_map(move |x| self.get(x, y).then_some((x, y)))
        })
    }

    /// Foreground pixels with at least one 4-neighbour in the background
    /// (pixels outside the image count as background).
    pub fn boundary(&self) -> BinaryImage {
        let (w, h) = self.dims();
        BinaryImage::from_fn(w, h, |x, y| {
            self.get(x, y)
                && (x == 0
                    || y == 0
                    || x + 1 == w
                    || y + 1 == h
                    || !self.get(x - 1, y)
                    || !self.get(x + 1, y)
                    || !self.get(x, y - 1)
                    || !self.get(x, y + 1))
        })
    }

    /// Dilation by a square of half-size `r` (Chebyshev distance ≤ r).
    pub fn dilate(&self, r: usize) -> BinaryImage {
        let (w, h) = self.dims();
        let mut out = BinaryImage::new(w, h);
        for (x, y) in self.iter_ones() {
            for yy in y.saturating_sub(r)..=(y + r).min(h - 1) {
                out.fill_span(yy, x.saturating_sub(r), (x + r).min(w - 1));
            }
        }
        out
    }

    /// Erosion by a square of half-size `r`; pixels near the border erode.
    pub fn erode(&self, r: usize) -> BinaryImage {
        let (w, h) = self.dims();
        let ri = r as isize;
        BinaryImage::from_fn(w, h, |x, y| {
            (-ri..=ri).all(|dy| {
                (-ri..=ri).all(|dx| {
                    let (xx, yy) = (x as isize + dx, y as isize + dy);
                    xx >= 0
                        && yy >= 0
                        && (xx as usize) < w
                        && (yy as usize) < h
                        && self.get(xx as usize, yy as usize)
                })
            })
        })
    }

    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: (0..self.height)
                .flat_map(|y| (0..self.width).map(move |x| (x, y)))
                .map(|(x, y)| if self.get(x, y) { 255 } else { 0 })
                .collect(),
        }
    }

    /// Mask of pixels with a nonzero value.
    pub fn from_gray(g: &GrayImage) -> BinaryImage {
        BinaryImage::from_fn(g.width, g.height, |x, y| g.get(x, y) != 0)
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        self.to_gray().write_pgm(path)
    }

    pub fn read_pgm(path: &Path) -> Result<BinaryImage> {
        Ok(BinaryImage::from_gray(&GrayImage::read_pgm(path)?))
    }
}

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize) -> Self {
        GrayImage {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> u8) -> Self {
        GrayImage {
            width,
            height,
            data: (0..height)
                .flat_map(|y| (0..width).map(move |x| (x, y)))
                .map(|(x, y)| f(x, y))
                .collect(),
        }
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        GrayImage {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn encode_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn decode_pgm(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
        if bytes.len() < 2 || &bytes[..2] != b"P5" {
            return Err("not a binary PGM (P5)".into());
        }
        let mut pos = 2;
        let mut fields = [0usize; 3];
        for field in &mut fields {
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    break;
                }
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            *field = std::str::from_utf8(&bytes[start..pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or("bad header field")?;
        }
        let [width, height, maxval] = fields;
        if maxval == 0 || maxval > 255 {
            return Err(format!("unsupported maxval {maxval}"));
        }
        // exactly one whitespace byte separates the header from the raster
        pos += 1;
        let n = width * height;
        if bytes.len() < pos + n {
            return Err("truncated raster".into());
        }
        Ok(GrayImage {
            width,
            height,
            data: bytes[pos..pos + n].to_vec(),
        })
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        fs::write(path, self.encode_pgm()).map_err(Error::file(path))
    }

    pub fn read_pgm(path: &Path) -> Result<GrayImage> {
        let bytes = fs::read(path).map_err(Error::file(path))?;
        GrayImage::decode_pgm(&bytes).map_err(|reason| Error::Image {
            path: path.to_owned(),
            reason,
        })
    }

    /// Reads a PGM or PNG file. Color PNGs are converted by averaging the
    /// channels.
    pub fn read(path: &Path) -> Result<GrayImage> {
        let is_png = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("png"));
        if !is_png {
            return GrayImage::read_pgm(path);
        }
        let img = ::image::open(path).map_err(|e| Error::Image {
            path: path.to_owned(),
            reason: e.to_string(),
        })?;
        let rgb = img.to_rgb8();
        let (w, h) = rgb.dimensions();
        let data = rgb
            .pixels()
            .map(|p| ((p[0] as u16 + p[1] as u16 + p[2] as u16) / 3) as u8)
            .collect();
        Ok(GrayImage {
            width: w as usize,
            height: h as usize,
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spans_and_counts() {
        let mut img = BinaryImage::new(100, 3);
        img.fill_span(1, 3, 90);
        assert_eq!(img.count_ones(), 88);
        assert!(!img.get(2, 1) && img.get(3, 1) && img.get(90, 1) && !img.get(91, 1));
        img.fill_span(2, 0, 99);
        assert_eq!(img.count_ones(), 188);
        img.fill_span(0, 63, 63);
        assert!(img.get(63, 0));
        assert_eq!(img.count_ones(), 189);
    }

    #[test]
    fn pgm_header_with_comment() {
        let bytes = b"P5\n# made by hand\n2 1\n255\n\x00\xff";
        let g = GrayImage::decode_pgm(bytes).unwrap();
        assert_eq!((g.width, g.height, g.data.clone()), (2, 1, vec![0, 255]));
        assert!(GrayImage::decode_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(GrayImage::decode_pgm(b"P5\n4 4\n255\n\x00").is_err());
    }

    #[test]
    fn boundary_of_square() {
        let img = BinaryImage::from_fn(10, 10, |x, y| (2..7).contains(&x) && (2..7).contains(&y));
        let b = img.boundary();
        assert_eq!(b.count_ones(), 16);
        assert!(!b.get(4, 4));
    }

    #[test]
    fn dilate_erode_square() {
        let img = BinaryImage::from_fn(10, 10, |x, y| x == 5 && y == 5);
        assert_eq!(img.dilate(1).count_ones(), 9);
        assert_eq!(img.dilate(1).erode(1), img);
    }

    proptest! {
        #[test]
        fn pgm_round_trip_is_bit_exact(w in 1usize..40, h in 1usize..40, seed in any::<u64>()) {
            let img = BinaryImage::from_fn(w, h, |x, y| {
                (seed.rotate_left((x * 7 + y * 13) as u32 % 64) ^ (x * y) as u64) & 1 == 1
            });
            let bytes = img.to_gray().encode_pgm();
            let back = BinaryImage::from_gray(&GrayImage::decode_pgm(&bytes).unwrap());
            prop_assert_eq!(&back, &img);
            prop_assert_eq!(back.to_gray().encode_pgm(), bytes);
        }
    }
}
