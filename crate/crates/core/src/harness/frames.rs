//! On-disk frame layout: `<dir>/cam{i}/frame_{k:04}.{pgm,png}`, with an
//! optional `<dir>/cam{i}/background.{pgm,png}` marking raw frames that need
//! background subtraction. Without a background, frames are masks and any
//! nonzero pixel is foreground.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::imaging::{BinaryImage, GrayImage};
use crate::segmentation::{segment, SegmentationConfig};

pub fn frame_path(dir: &Path, camera: usize, frame: usize) -> PathBuf {
    dir.join(format!("cam{camera}")).join(format!("frame_{frame:04}.pgm"))
}

pub fn background_path(dir: &Path, camera: usize) -> PathBuf {
    dir.join(format!("cam{camera}")).join("background.pgm")
}

fn find_with_ext(stem: &Path) -> Option<PathBuf> {
    ["pgm", "png", "PNG"]
        .iter()
        .map(|e| stem.with_extension(e))
        .find(|p| p.is_file())
}

/// Frame files of one camera directory, sorted by frame number.
fn list_frames(cam_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut found = Vec::new();
    for entry in std::fs::read_dir(cam_dir).map_err(Error::file(cam_dir))? {
        let path = entry?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some((stem, ext)) = name.rsplit_once('.') else {
            continue;
        };
        if !matches!(ext.to_ascii_lowercase().as_str(), "pgm" | "png") {
            continue;
        }
        if let Some(num) = stem.strip_prefix("frame_").and_then(|n| n.parse::<usize>().ok()) {
            found.push((num, path));
        }
    }
    found.sort();
    if let Some(k) = found.iter().enumerate().position(|(i, (n, _))| *n != i) {
        return Err(Error::Config(format!("{}: frame {k} is missing", cam_dir.display())));
    }
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

/// Loads every frame of every camera as a silhouette, indexed
/// `[frame][camera]`.
pub fn load_frames(dir: &Path, cameras: usize, seg: &SegmentationConfig) -> Result<Vec<Vec<BinaryImage>>> {
    let mut per_camera = Vec::with_capacity(cameras);
    for i in 0..cameras {
        let cam_dir = dir.join(format!("cam{i}"));
        let background = find_with_ext(&cam_dir.join("background"))
            .map(|p| GrayImage::read(&p))
            .transpose()?;
        let masks = list_frames(&cam_dir)?
            .iter()
            .map(|p| {
                let g = GrayImage::read(p)?;
                match &background {
                    Some(bg) => segment(&g, bg, seg),
                    None => Ok(BinaryImage::from_gray(&g)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        per_camera.push(masks);
    }
    let n = per_camera.first().map_or(0, Vec::len);
    if let Some(other) = per_camera.iter().find(|m| m.len() != n) {
        return Err(Error::FrameCount(n, other.len()));
    }
    Ok((0..n)
        .map(|k| per_camera.iter().map(|m| m[k].clone()).collect())
        .collect())
}

/// Loads raw gray frames of one camera, for overlays.
pub fn load_gray_frames(dir: &Path, camera: usize) -> Result<Vec<GrayImage>> {
    list_frames(&dir.join(format!("cam{camera}")))?
        .iter()
        .map(|p| GrayImage::read(p))
        .collect()
}
