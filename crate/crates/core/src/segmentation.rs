//! Silhouette extraction by background subtraction and thresholding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{BinaryImage, GrayImage};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentationConfig {
    /// Absolute intensity difference that must be exceeded.
    pub threshold: u8,
    /// Apply a 3×3 opening then closing to the mask.
    #[serde(default)]
    pub morphology: bool,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        SegmentationConfig {
            threshold: 30,
            morphology: false,
        }
    }
}

/// Pixel is foreground iff `|frame - background| > threshold`.
pub fn background_subtract(frame: &GrayImage, background: &GrayImage, threshold: u8) -> Result<BinaryImage> {
    if (frame.width, frame.height) != (background.width, background.height) {
        return Err(Error::DimensionMismatch(
            frame.width,
            frame.height,
            background.width,
            background.height,
        ));
    }
    Ok(BinaryImage::from_fn(frame.width, frame.height, |x, y| {
        frame.get(x, y).abs_diff(background.get(x, y)) > threshold
    }))
}

/// Opening (removes specks) followed by closing (fills pinholes).
pub fn open_close(mask: &BinaryImage) -> BinaryImage {
    let opened = mask.erode(1).dilate(1);
    let closed = opened.dilate(1).erode(1);
    // erosion treats the frame border as background; keep the opened mask there
    let mut out = closed;
    out.union_with(&opened).expect("same dims");
    out
}

pub fn segment(frame: &GrayImage, background: &GrayImage, cfg: &SegmentationConfig) -> Result<BinaryImage> {
    let mask = background_subtract(frame, background, cfg.threshold)?;
    Ok(if cfg.morphology { open_close(&mask) } else { mask })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gray(w: usize, h: usize, data: Vec<u8>) -> GrayImage {
        GrayImage { width: w, height: h, data }
    }

    #[test]
    fn single_pixel_examples() {
        let f = gray(1, 1, vec![200]);
        let b = gray(1, 1, vec![50]);
        assert!(background_subtract(&f, &b, 30).unwrap().get(0, 0));
        let f = gray(1, 1, vec![51]);
        assert!(background_subtract(&f, &b, 0).unwrap().get(0, 0));
        assert!(!background_subtract(&b, &b, 0).unwrap().get(0, 0));
    }

    #[test]
    fn identical_frames_are_empty() {
        let f = gray(4, 3, (0..12).map(|i| i * 20).collect());
        for t in [0, 10, 255] {
            assert!(background_subtract(&f, &f, t).unwrap().is_empty());
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = GrayImage::new(4, 3);
        let b = GrayImage::new(3, 4);
        assert!(matches!(background_subtract(&a, &b, 10), Err(Error::DimensionMismatch(..))));
    }

    #[test]
    fn morphology_removes_speck_and_fills_hole() {
        let bg = GrayImage::filled(20, 20, 0);
        let mut f = bg.clone();
        for y in 5..15 {
            for x in 5..15 {
                f.set(x, y, 200);
            }
        }
        f.set(10, 10, 0);
        f.set(1, 1, 200);
        let cfg = SegmentationConfig { threshold: 30, morphology: true };
        let m = segment(&f, &bg, &cfg).unwrap();
        assert!(m.get(10, 10));
        assert!(!m.get(1, 1));
        assert_eq!(m.count_ones(), 100);
        let raw = segment(&f, &bg, &SegmentationConfig::default()).unwrap();
        assert_eq!(raw.count_ones(), 100);
    }

    proptest! {
        #[test]
        fn symmetric_and_monotone(
            data in proptest::collection::vec((any::<u8>(), any::<u8>()), 24),
            t1 in any::<u8>(),
            t2 in any::<u8>(),
        ) {
            let f = gray(6, 4, data.iter().map(|p| p.0).collect());
            let b = gray(6, 4, data.iter().map(|p| p.1).collect());
            prop_assert_eq!(background_subtract(&f, &b, t1).unwrap(), background_subtract(&b, &f, t1).unwrap());
            let (lo, hi) = (t1.min(t2), t1.max(t2));
            let m_lo = background_subtract(&f, &b, lo).unwrap();
            let m_hi = background_subtract(&f, &b, hi).unwrap();
            prop_assert_eq!(m_hi.count_common(&m_lo).unwrap(), m_hi.count_ones());
        }
    }
}
