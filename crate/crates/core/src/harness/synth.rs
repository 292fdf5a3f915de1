//! Synthetic sequences rendered from a scripted trajectory.

use std::path::Path;

use super::frames::{background_path, frame_path};
use super::report::{FrameRecord, TrackReport};
use super::trajectory::{TrajectorySpec, TruthFrame};
use crate::camera::CameraModel;
use crate::error::Result;
use crate::imaging::{BinaryImage, GrayImage};
use crate::likelihood::Observation;
use crate::skeleton::{body_volume, SkeletonSpec};

/// Rendered masks, indexed `[frame][camera]`.
pub type MaskSequence = Vec<Vec<BinaryImage>>;

pub fn render_frame(spec: &SkeletonSpec, cameras: &[CameraModel], truth: &TruthFrame) -> Result<Vec<BinaryImage>> {
    let body = body_volume(spec, &truth.pose, &truth.origin)?;
    Ok(cameras.iter().map(|c| c.rasterize(&body)).collect())
}

pub fn render_sequence(spec: &SkeletonSpec, cameras: &[CameraModel], truth: &[TruthFrame]) -> Result<MaskSequence> {
    truth.iter().map(|t| render_frame(spec, cameras, t)).collect()
}

/// Ground truth as a report: joint positions from the true pose, weight of
/// the true pose against its own rendering.
pub fn truth_report(spec: &SkeletonSpec, cameras: &[CameraModel], truth: &[TruthFrame], masks: &MaskSequence) -> Result<TrackReport> {
    let frames = truth
        .iter()
        .zip(masks)
        .enumerate()
        .map(|(k, (t, m))| {
            let w = Observation::new(cameras, m)?.weigh(spec, &t.pose, &t.origin);
            FrameRecord::new(spec, k, t.pose.clone(), t.origin, w, false)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrackReport { frames })
}

/// Gray level of the body in raw frames.
const BODY_LEVEL: u8 = 220;

/// A smooth, textured backdrop whose levels stay far from [`BODY_LEVEL`].
pub fn backdrop(width: usize, height: usize) -> GrayImage {
    let mut g = GrayImage::new(width, height);
    for y in 0..height {
        for x in 0..width {
            let v = 70.0 + 25.0 * ((x as f64) * 0.09).sin() * ((y as f64) * 0.05).cos() + 0.1 * y as f64;
            g.set(x, y, v.round() as u8);
        }
    }
    g
}

/// The body painted over the backdrop.
pub fn compose(mask: &BinaryImage, background: &GrayImage) -> GrayImage {
    let mut g = background.clone();
    for (x, y) in mask.iter_ones() {
        g.set(x, y, BODY_LEVEL);
    }
    g
}

/// Renders `trajectory` and writes `cam{i}/frame_{k:04}.pgm` for every camera
/// and frame, plus `truth.csv`. With `raw`, frames are gray images over a
/// backdrop saved as `cam{i}/background.pgm`; otherwise they are masks.
///
/// The trajectory is rejected if a `tracked` dof moves more than `bound`
/// degrees between frames.
#[allow(clippy::too_many_arguments)]
pub fn generate_synthetic(
    spec: &SkeletonSpec,
    cameras: &[CameraModel],
    trajectory: &TrajectorySpec,
    tracked: &[usize],
    bound: f64,
    out: &Path,
    raw: bool,
) -> Result<TrackReport> {
    let truth = trajectory.checked_frames(spec, tracked, bound)?;
    let masks = render_sequence(spec, cameras, &truth)?;
    for (i, cam) in cameras.iter().enumerate() {
        std::fs::create_dir_all(out.join(format!("cam{i}")))?;
        let (w, h) = cam.resolution();
        let bg = backdrop(w, h);
        if raw {
            bg.write_pgm(&background_path(out, i))?;
        }
        for (k, m) in masks.iter().enumerate() {
            let path = frame_path(out, i, k);
            if raw {
                compose(&m[i], &bg).write_pgm(&path)?;
            } else {
                m[i].write_pgm(&path)?;
            }
        }
    }
    let report = truth_report(spec, cameras, &truth, &masks)?;
    report.write_csv(&out.join("truth.csv"))?;
    Ok(report)
}
