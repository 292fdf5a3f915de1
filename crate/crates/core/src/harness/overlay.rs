//! Estimated-model outlines drawn over the input frames.

use std::path::{Path, PathBuf};

use super::report::{FrameRecord, TrackReport};
use crate::camera::CameraModel;
use crate::error::{Error, Result};
use crate::imaging::{BinaryImage, GrayImage};
use crate::skeleton::{body_volume, SkeletonSpec};

/// Outline of the estimated body as seen by `camera`.
pub fn model_boundary(spec: &SkeletonSpec, camera: &CameraModel, record: &FrameRecord) -> Result<BinaryImage> {
    let body = body_volume(spec, &record.pose, &record.origin)?;
    Ok(camera.rasterize(&body).boundary())
}

/// Copy of `frame` with `outline` drawn in the contrasting extreme (black on
/// bright pixels, white on dark ones).
pub fn draw_outline(frame: &GrayImage, outline: &BinaryImage) -> Result<GrayImage> {
    if (frame.width, frame.height) != outline.dims() {
        return Err(Error::DimensionMismatch(frame.width, frame.height, outline.width(), outline.height()));
    }
    let mut out = frame.clone();
    for (x, y) in outline.iter_ones() {
        out.set(x, y, if frame.get(x, y) > 127 { 0 } else { 255 });
    }
    Ok(out)
}

/// Writes `overlay_{k:04}.pgm` into `out` for every report record. An empty
/// report writes nothing.
pub fn render_overlay(
    spec: &SkeletonSpec,
    report: &TrackReport,
    frames: &[GrayImage],
    camera: &CameraModel,
    out: &Path,
) -> Result<Vec<PathBuf>> {
    if report.is_empty() {
        return Ok(Vec::new());
    }
    if report.len() != frames.len() {
        return Err(Error::FrameCount(report.len(), frames.len()));
    }
    std::fs::create_dir_all(out)?;
    report
        .frames
        .iter()
        .zip(frames)
        .map(|(record, frame)| {
            let img = draw_outline(frame, &model_boundary(spec, camera, record)?)?;
            let path = out.join(format!("overlay_{:04}.pgm", record.frame));
            img.write_pgm(&path)?;
            Ok(path)
        })
        .collect()
}
