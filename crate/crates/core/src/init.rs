//! First-frame initialization by exhaustive search over a configuration grid.

use crate::error::{Error, Result};
use crate::skeleton::{clamp_pose, PoseVector, RigidTransform, SkeletonSpec};

/// Cartesian grid over a subset of dofs; the other dofs keep `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitGrid {
    pub base: PoseVector,
    pub axes: Vec<(usize, Vec<f64>)>,
}

impl InitGrid {
    /// Every multiple of `step` inside each listed dof's limits.
    pub fn spanning_limits(spec: &SkeletonSpec, dofs: &[usize], step: f64, base: PoseVector) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::Config(format!("init grid step {step} must be positive")));
        }
        let axes = dofs
            .iter()
            .map(|&i| {
                let d = &spec.dofs()[i];
                let lo = (d.min / step).ceil() as i64;
                let hi = (d.max / step).floor() as i64;
                (i, (lo..=hi).map(|k| k as f64 * step).collect())
            })
            .collect();
        Ok(InitGrid { base, axes })
    }

    pub fn size(&self) -> usize {
        self.axes.iter().map(|(_, v)| v.len()).product()
    }

    /// The `index`-th configuration, odometer order (last axis fastest).
    pub fn pose(&self, index: usize) -> PoseVector {
        let mut pose = self.base.clone();
        let mut rem = index;
        for (dof, values) in self.axes.iter().rev() {
            pose[*dof] = values[rem % values.len()];
            rem /= values.len();
        }
        pose
    }
}

/// Every origin on a grid around `start`: the product over the six
/// coordinates of `0, ±step, ±2·step, …` within the given half-widths.
pub fn origin_grid(
    start: &RigidTransform,
    position_range: f64,
    position_step: f64,
    angle_range: f64,
    angle_step: f64,
) -> Vec<RigidTransform> {
    let axis = |range: f64, step: f64| -> Vec<f64> {
        let k = if step > 0.0 { (range / step + 1e-9).floor() as i64 } else { 0 };
        (-k..=k).map(|i| i as f64 * step).collect()
    };
    let p = axis(position_range, position_step);
    let a = axis(angle_range, angle_step);
    let axes = [&p, &p, &p, &a, &a, &a];
    let total: usize = axes.iter().map(|v| v.len()).product();
    let base = start.coords();
    (0..total)
        .map(|mut idx| {
            let mut c = base;
            for d in (0..6).rev() {
                c[d] += axes[d][idx % axes[d].len()];
                idx /= axes[d].len();
            }
            RigidTransform::from_coords(c)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Initialization {
    pub pose: PoseVector,
    pub origin: RigidTransform,
    pub weight: f64,
    /// Every grid pose with its raw weight at the chosen origin, grid order.
    pub candidates: Vec<(PoseVector, f64)>,
}

/// Scores every (origin, pose) pair and returns the heaviest. Enumeration is
/// origin-major; ties go to the lowest index.
pub fn initialize<F>(
    spec: &SkeletonSpec,
    grid: &InitGrid,
    origins: &[RigidTransform],
    budget: usize,
    score: F,
) -> Result<Initialization>
where
    F: Fn(&PoseVector, &RigidTransform) -> f64 + Sync,
{
    if origins.is_empty() {
        return Err(Error::Empty("origin grid"));
    }
    let per_origin = grid.size();
    let size = per_origin * origins.len();
    if size > budget {
        return Err(Error::GridBudget { size, budget });
    }
    let poses: Vec<PoseVector> = (0..per_origin).map(|i| clamp_pose(spec, &grid.pose(i))).collect();
    let weights = evaluate(size, |k| score(&poses[k % per_origin], &origins[k / per_origin]));
    let mut best = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w > weights[best] {
            best = k;
        }
    }
    if !(weights[best] > 0.0) {
        return Err(Error::InitializationFailed);
    }
    let o = best / per_origin;
    let candidates = poses
        .iter()
        .cloned()
        .zip(weights[o * per_origin..(o + 1) * per_origin].iter().copied())
        .collect();
    Ok(Initialization {
        pose: poses[best % per_origin].clone(),
        origin: origins[o],
        weight: weights[best],
        candidates,
    })
}

#[cfg(feature = "parallel")]
fn evaluate<F: Fn(usize) -> f64 + Sync>(n: usize, f: F) -> Vec<f64> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(&f).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate<F: Fn(usize) -> f64 + Sync>(n: usize, f: F) -> Vec<f64> {
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn default_style_grid() {
        let spec = SkeletonSpec::default_body();
        let dofs: Vec<usize> = ["l_hip_z", "r_hip_z", "l_knee_z", "r_knee_z"]
            .iter()
            .map(|n| spec.dof_index(n).unwrap())
            .collect();
        let g = InitGrid::spanning_limits(&spec, &dofs, 15.0, spec.neutral_pose()).unwrap();
        assert_eq!(g.axes[0].1, vec![-30.0, -15.0, 0.0, 15.0, 30.0, 45.0, 60.0]);
        assert_eq!(g.axes[2].1.len(), 10);
        assert_eq!(g.size(), 7 * 7 * 10 * 10);
        let last = g.pose(g.size() - 1);
        assert_eq!((last[dofs[0]], last[dofs[3]]), (60.0, 0.0));
        let second = g.pose(1);
        assert_eq!((second[dofs[2]], second[dofs[3]]), (-135.0, -120.0));
    }

    #[test]
    fn singleton_grid() {
        let spec = SkeletonSpec::default_body();
        let g = InitGrid { base: spec.neutral_pose(), axes: vec![] };
        let o = RigidTransform::from_translation(Vec3::new(0.0, 1.0, 0.0));
        let init = initialize(&spec, &g, &[o], 1, |_, _| 0.5).unwrap();
        assert_eq!(init.pose, spec.neutral_pose());
        assert_eq!(init.origin, o);
        assert_eq!(init.candidates.len(), 1);
    }

    #[test]
    fn budget_checked_before_evaluation() {
        let spec = SkeletonSpec::default_body();
        let g = InitGrid {
            base: spec.neutral_pose(),
            axes: vec![(9, (0..32).map(f64::from).collect()), (15, (0..32).map(f64::from).collect())],
        };
        assert_eq!(g.size(), 1024);
        let calls = AtomicUsize::new(0);
        let r = initialize(&spec, &g, &[RigidTransform::IDENTITY], 1000, |_, _| {
            calls.fetch_add(1, Ordering::Relaxed);
            1.0
        });
        assert!(matches!(r, Err(Error::GridBudget { size: 1024, budget: 1000 })));
        assert_eq!(calls.load(Ordering::Relaxed), 0);
    }

    #[test]
    fn all_zero_fails() {
        let spec = SkeletonSpec::default_body();
        let g = InitGrid { base: spec.neutral_pose(), axes: vec![(9, vec![0.0, 10.0])] };
        assert!(matches!(
            initialize(&spec, &g, &[RigidTransform::IDENTITY], 10, |_, _| 0.0),
            Err(Error::InitializationFailed)
        ));
    }

    #[test]
    fn argmax_over_origins_and_poses() {
        let spec = SkeletonSpec::default_body();
        let g = InitGrid { base: spec.neutral_pose(), axes: vec![(9, vec![0.0, 10.0, 20.0])] };
        let origins = origin_grid(&RigidTransform::IDENTITY, 0.1, 0.05, 0.0, 5.0);
        assert_eq!(origins.len(), 125);
        let init = initialize(&spec, &g, &origins, 1000, |p, o| {
            let x = o.position.x;
            1.0 / (1.0 + (p[9] - 10.0).abs() + (x - 0.05).abs() * 100.0)
        })
        .unwrap();
        assert_eq!(init.pose[9], 10.0);
        assert!((init.origin.position.x - 0.05).abs() < 1e-12);
        assert_eq!(init.candidates.len(), 3);
        let best = init.candidates.iter().map(|c| c.1).fold(0.0, f64::max);
        assert_eq!(best, init.weight);
    }
}
