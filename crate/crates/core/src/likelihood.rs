//! Silhouette-overlap likelihood.
//!
//! With `Nc` pixels common to the silhouette and the rendered model, `Ns`
//! silhouette-only pixels and `Nm` model-only pixels, a configuration's
//! weight is `Nc / (Ns + Nm)`. Perfect overlap (`Ns + Nm = 0`) uses a
//! denominator of 1; two empty masks weigh 0. Multiple cameras average their
//! weights.

use crate::camera::CameraModel;
use crate::error::{Error, Result};
use crate::imaging::BinaryImage;
use crate::skeleton::{body_volume, PoseVector, RigidTransform, SkeletonSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OverlapCounts {
    pub n_common: usize,
    pub n_silhouette_only: usize,
    pub n_model_only: usize,
}

pub fn overlap_counts(silhouette: &BinaryImage, synthetic: &BinaryImage) -> Result<OverlapCounts> {
    let n_common = silhouette.count_common(synthetic)?;
    Ok(OverlapCounts {
        n_common,
        n_silhouette_only: silhouette.count_ones() - n_common,
        n_model_only: synthetic.count_ones() - n_common,
    })
}

pub fn weight(counts: &OverlapCounts) -> f64 {
    let miss = counts.n_silhouette_only + counts.n_model_only;
    counts.n_common as f64 / miss.max(1) as f64
}

pub fn multi_camera_weight(per_camera: &[f64]) -> Result<f64> {
    if per_camera.is_empty() {
        return Err(Error::Empty("per-camera weight list"));
    }
    Ok(per_camera.iter().sum::<f64>() / per_camera.len() as f64)
}

/// One frame's silhouettes, paired with the cameras that saw them.
#[derive(Debug, Clone)]
pub struct Observation<'a> {
    pub cameras: &'a [CameraModel],
    pub silhouettes: &'a [BinaryImage],
    silhouette_counts: Vec<usize>,
}

impl<'a> Observation<'a> {
    pub fn new(cameras: &'a [CameraModel], silhouettes: &'a [BinaryImage]) -> Result<Self> {
        if cameras.is_empty() {
            return Err(Error::Empty("camera list"));
        }
        if cameras.len() != silhouettes.len() {
            return Err(Error::Config(format!(
                "{} cameras but {} silhouettes",
                cameras.len(),
                silhouettes.len()
            )));
        }
        for (c, s) in cameras.iter().zip(silhouettes) {
            let (w, h) = c.resolution();
            if s.dims() != (w, h) {
                return Err(Error::DimensionMismatch(w, h, s.width(), s.height()));
            }
        }
        Ok(Observation {
            cameras,
            silhouettes,
            silhouette_counts: silhouettes.iter().map(BinaryImage::count_ones).collect(),
        })
    }

    /// Raw (unnormalized) weight of a pose placed at `origin`. Poses outside
    /// the joint limits weigh 0.
    pub fn weigh(&self, spec: &SkeletonSpec, pose: &PoseVector, origin: &RigidTransform) -> f64 {
        let Ok(body) = body_volume(spec, pose, origin) else {
            return 0.0;
        };
        let mut scratch = None::<BinaryImage>;
        let total: f64 = self
            .cameras
            .iter()
            .zip(self.silhouettes)
            .zip(&self.silhouette_counts)
            .map(|((cam, sil), &sil_count)| {
                let img = scratch.get_or_insert_with(|| cam.blank());
                if img.dims() != sil.dims() {
                    *img = cam.blank();
                } else {
                    img.clear();
                }
                cam.rasterize_into(&body, img);
                let n_common = sil.count_common(img).expect("dims checked");
                weight(&OverlapCounts {
                    n_common,
                    n_silhouette_only: sil_count - n_common,
                    n_model_only: img.count_ones() - n_common,
                })
            })
            .sum();
        total / self.cameras.len() as f64
    }
}
