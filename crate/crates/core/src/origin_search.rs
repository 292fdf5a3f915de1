//! Per-frame estimation of the body origin by coordinate-wise grid search.
//!
//! With the pose held fixed, each of the six origin coordinates is searched
//! in turn (x, y, z, yaw, pitch, roll) over a symmetric grid around its
//! current value; the best value is fixed before moving to the next
//! coordinate. Candidates are enumerated by increasing displacement
//! (0, −1, +1, −2, +2, … steps) so that ties keep the smaller move.
//!
//! The three position coordinates are offsets along a chosen orthonormal
//! basis: the world axes, or the first camera's axes (image right, image
//! down, depth). A single view pins the body well across the image but
//! poorly in depth; searching along the camera axes keeps that weak
//! direction on one coordinate.

use serde::{Deserialize, Serialize};

use crate::geometry::{Mat3, Vec3};
use crate::likelihood::Observation;
use crate::skeleton::{PoseVector, RigidTransform, SkeletonSpec};

/// Axes the position coordinates move along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PositionAxes {
    /// The first camera's x (right), y (down) and z (viewing direction).
    #[default]
    Camera,
    World,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OriginSearch {
    /// Half-width of the position search, meters.
    pub position_range: f64,
    pub position_step: f64,
    /// Half-width of the orientation search, degrees.
    pub angle_range: f64,
    pub angle_step: f64,
    /// Coordinate-descent sweeps over the six coordinates.
    #[serde(default = "one")]
    pub passes: usize,
    #[serde(default)]
    pub position_axes: PositionAxes,
}

fn one() -> usize {
    1
}

impl Default for OriginSearch {
    fn default() -> Self {
        OriginSearch {
            position_range: 0.3,
            position_step: 0.05,
            angle_range: 15.0,
            angle_step: 5.0,
            passes: 1,
            position_axes: PositionAxes::Camera,
        }
    }
}

impl OriginSearch {
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.position_range >= 0.0
            && self.position_step > 0.0
            && self.angle_range >= 0.0
            && self.angle_step > 0.0;
        if !ok {
            return Err(crate::Error::Config(
                "origin search ranges must be nonnegative and steps positive".into(),
            ));
        }
        Ok(())
    }

    /// `(step, steps each side)` for coordinate `dim`.
    fn grid(&self, dim: usize) -> (f64, i64) {
        let (range, step) = if dim < 3 {
            (self.position_range, self.position_step)
        } else {
            (self.angle_range, self.angle_step)
        };
        (step, (range / step + 1e-9).floor() as i64)
    }

    /// Displacements in enumeration order: 0, −1, +1, −2, +2, …
    fn displacements(k: i64) -> impl Iterator<Item = i64> {
        std::iter::once(0).chain((1..=k).flat_map(|i| [-i, i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginEstimate {
    pub origin: RigidTransform,
    pub weight: f64,
    /// Every candidate scored zero; `origin` is the previous one.
    pub lost: bool,
}

/// Coordinate-descent search around `prev` maximizing `score`. Rows of
/// `basis` are the orthonormal axes the position coordinates move along.
pub fn search_origin<F>(prev: &RigidTransform, search: &OriginSearch, basis: &Mat3, score: F) -> OriginEstimate
where
    F: Fn(&RigidTransform) -> f64 + Sync,
{
    let axes = basis.transpose();
    let [_, _, _, yaw, pitch, roll] = prev.coords();
    // position offsets along the basis, then absolute angles
    let mut coords = [0.0, 0.0, 0.0, yaw, pitch, roll];
    let place = |c: [f64; 6]| {
        let p = prev.position + axes * Vec3::new(c[0], c[1], c[2]);
        RigidTransform::new(p, c[3], c[4], c[5])
    };
    let mut best = score(prev);
    let mut any_positive = best > 0.0;
    for _ in 0..search.passes.max(1) {
        for dim in 0..6 {
            let (step, k) = search.grid(dim);
            let trial: Vec<[f64; 6]> = OriginSearch::displacements(k)
                .map(|d| {
                    let mut c = coords;
                    c[dim] += d as f64 * step;
                    c
                })
                .collect();
            let candidates: Vec<RigidTransform> = trial.iter().map(|&c| place(c)).collect();
            let weights = evaluate(&candidates, &score);
            let mut pick = 0;
            for (i, &w) in weights.iter().enumerate() {
                if w > weights[pick] {
                    pick = i;
                }
            }
            any_positive |= weights[pick] > 0.0;
            // candidate 0 is the current value, so this never lowers the score
            best = weights[pick];
            coords = trial[pick];
        }
    }
    if !any_positive {
        return OriginEstimate {
            origin: *prev,
            weight: 0.0,
            lost: true,
        };
    }
    OriginEstimate {
        origin: place(coords),
        weight: best,
        lost: false,
    }
}

#[cfg(feature = "parallel")]
fn evaluate<F: Fn(&RigidTransform) -> f64 + Sync>(c: &[RigidTransform], score: &F) -> Vec<f64> {
    use rayon::prelude::*;
    c.par_iter().map(score).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate<F: Fn(&RigidTransform) -> f64 + Sync>(c: &[RigidTransform], score: &F) -> Vec<f64> {
    c.iter().map(score).collect()
}

/// Finds the origin that best explains `observation` for the previous pose.
pub fn estimate_origin(
    spec: &SkeletonSpec,
    observation: &Observation<'_>,
    prev_pose: &PoseVector,
    prev_origin: &RigidTransform,
    search: &OriginSearch,
) -> OriginEstimate {
    let basis = match search.position_axes {
        PositionAxes::Camera => observation.cameras[0].extrinsic().rotation(),
        PositionAxes::World => Mat3::IDENTITY,
    };
    search_origin(prev_origin, search, &basis, |o| observation.weigh(spec, prev_pose, o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;

    #[test]
    fn displacement_order() {
        let d: Vec<i64> = OriginSearch::displacements(2).collect();
        assert_eq!(d, vec![0, -1, 1, -2, 2]);
    }

    #[test]
    fn grid_counts_include_endpoints() {
        let s = OriginSearch::default();
        assert_eq!(s.grid(0), (0.05, 6));
        assert_eq!(s.grid(4), (5.0, 3));
    }

    #[test]
    fn separable_objective_is_recovered() {
        let target = [0.1, -0.05, 0.2, 10.0, -5.0, 15.0];
        let score = |o: &RigidTransform| {
            let c = o.coords();
            let d: f64 = c.iter().zip(target).map(|(a, b)| (a - b).abs()).sum();
            1.0 / (1.0 + d)
        };
        let est = search_origin(&RigidTransform::IDENTITY, &OriginSearch::default(), &Mat3::IDENTITY, score);
        for (a, b) in est.origin.coords().iter().zip(target) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(!est.lost);
    }

    #[test]
    fn rotated_basis_moves_along_its_rows() {
        let basis = Mat3::rot_y(30.0);
        let target = Vec3::new(0.1, -0.05, 0.2);
        let goal = basis.transpose() * target;
        let score = |o: &RigidTransform| 1.0 / (1.0 + (o.position - goal).norm() + o.yaw().abs());
        let est = search_origin(&RigidTransform::IDENTITY, &OriginSearch::default(), &basis, score);
        assert!(est.origin.position.distance(goal) < 1e-9, "{}", est.origin);
    }

    #[test]
    fn flat_zero_objective_is_lost() {
        let prev = RigidTransform::from_translation(Vec3::new(1.0, 2.0, 3.0));
        let est = search_origin(&prev, &OriginSearch::default(), &Mat3::IDENTITY, |_| 0.0);
        assert!(est.lost);
        assert_eq!(est.origin, prev);
    }

    #[test]
    fn never_worse_than_start() {
        let prev = RigidTransform::new(Vec3::new(0.0, 1.0, 0.0), 0.0, 0.0, 0.0);
        let score = |o: &RigidTransform| {
            let c = o.coords();
            (c[0] * 7.0).sin().abs() + (c[3] / 13.0).cos() + c[1]
        };
        let est = search_origin(&prev, &OriginSearch::default(), &Mat3::IDENTITY, score);
        assert!(est.weight >= score(&prev));
    }
}
