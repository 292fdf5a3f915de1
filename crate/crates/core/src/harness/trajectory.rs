//! Scripted ground-truth motion for synthetic sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::skeleton::{validate_pose, PoseVector, RigidTransform, SkeletonSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySpec {
    /// Seconds.
    pub duration: f64,
    /// Frames per second.
    #[serde(default = "default_frame_rate")]
    pub frame_rate: f64,
    /// Piecewise-linear origin path; held constant outside its time span.
    #[serde(default)]
    pub origin: Vec<OriginWaypoint>,
    /// Dofs without a motion stay at zero.
    #[serde(default)]
    pub motion: Vec<Motion>,
}

fn default_frame_rate() -> f64 {
    20.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OriginWaypoint {
    pub time: f64,
    pub position: [f64; 3],
    /// `[yaw, pitch, roll]`, degrees.
    #[serde(default)]
    pub orientation: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Motion {
    pub dof: String,
    #[serde(flatten)]
    pub waveform: Waveform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Waveform {
    Constant {
        value: f64,
    },
    /// `center + amplitude · sin(2π t / period + phase)`, phase in degrees.
    Sinusoid {
        #[serde(default)]
        center: f64,
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl Waveform {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Waveform::Constant { value } => value,
            Waveform::Sinusoid {
                center,
                amplitude,
                period,
                phase,
            } => center + amplitude * (std::f64::consts::TAU * t / period + phase.to_radians()).sin(),
        }
    }
}

/// One frame of ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthFrame {
    pub pose: PoseVector,
    pub origin: RigidTransform,
}

impl TrajectorySpec {
    /// A trajectory that holds `pose` at `origin` for `frames` frames.
    pub fn constant(spec: &SkeletonSpec, pose: &PoseVector, origin: &RigidTransform, frames: usize, frame_rate: f64) -> Self {
        TrajectorySpec {
            duration: frames as f64 / frame_rate,
            frame_rate,
            origin: vec![OriginWaypoint {
                time: 0.0,
                position: origin.position.to_array(),
                orientation: origin.orientation,
            }],
            motion: spec
                .dofs()
                .iter()
                .zip(pose.as_slice())
                .filter(|(_, &v)| v != 0.0)
                .map(|(d, &v)| Motion {
                    dof: d.name.clone(),
                    waveform: Waveform::Constant { value: v },
                })
                .collect(),
        }
    }

    pub fn frame_count(&self) -> usize {
        (self.duration * self.frame_rate).round().max(0.0) as usize
    }

    pub fn validate(&self, spec: &SkeletonSpec) -> Result<()> {
        if !(self.frame_rate > 0.0) || !(self.duration >= 0.0) {
            return Err(Error::Config("trajectory duration and frame rate must be positive".into()));
        }
        for m in &self.motion {
            spec.require_dof(&m.dof)?;
            if let Waveform::Sinusoid { period, .. } = m.waveform {
                if !(period > 0.0) {
                    return Err(Error::Config(format!("sinusoid on {} needs a positive period", m.dof)));
                }
            }
        }
        if self.origin.windows(2).any(|w| !(w[1].time > w[0].time)) {
            return Err(Error::Config("origin waypoints must have increasing times".into()));
        }
        Ok(())
    }

    pub fn pose_at(&self, spec: &SkeletonSpec, t: f64) -> Result<PoseVector> {
        let mut pose = PoseVector::zeros(spec.dof_count());
        for m in &self.motion {
            pose[spec.require_dof(&m.dof)?] = m.waveform.value(t);
        }
        Ok(pose)
    }

    pub fn origin_at(&self, t: f64) -> RigidTransform {
        let w = &self.origin;
        let make = |p: [f64; 3], o: [f64; 3]| RigidTransform::new(Vec3::from_array(p), o[0], o[1], o[2]);
        match w.iter().position(|p| p.time > t) {
            None => w.last().map_or(RigidTransform::IDENTITY, |p| make(p.position, p.orientation)),
            Some(0) => make(w[0].position, w[0].orientation),
            Some(i) => {
                let (a, b) = (&w[i - 1], &w[i]);
                let s = (t - a.time) / (b.time - a.time);
                let mix = |x: [f64; 3], y: [f64; 3]| [0, 1, 2].map(|k| x[k] + s * (y[k] - x[k]));
                make(mix(a.position, b.position), mix(a.orientation, b.orientation))
            }
        }
    }

    /// Ground truth for every frame; frame `k` is at time `k / frame_rate`.
    pub fn frames(&self, spec: &SkeletonSpec) -> Result<Vec<TruthFrame>> {
        self.validate(spec)?;
        (0..self.frame_count())
            .map(|k| {
                let t = k as f64 / self.frame_rate;
                Ok(TruthFrame {
                    pose: self.pose_at(spec, t)?,
                    origin: self.origin_at(t),
                })
            })
            .collect()
    }

    /// Ground truth, rejected if any pose leaves the joint limits or any of
    /// the `tracked` dofs changes by more than `bound` degrees between
    /// consecutive frames.
    pub fn checked_frames(&self, spec: &SkeletonSpec, tracked: &[usize], bound: f64) -> Result<Vec<TruthFrame>> {
        let frames = self.frames(spec)?;
        for f in &frames {
            if let Some(&i) = validate_pose(spec, &f.pose).first() {
                let d = &spec.dofs()[i];
                return Err(Error::PoseOutOfLimits {
                    index: i,
                    name: d.name.clone(),
                    value: f.pose[i],
                    min: d.min,
                    max: d.max,
                });
            }
        }
        for (k, w) in frames.windows(2).enumerate() {
            for &dof in tracked {
                let change = (w[1].pose[dof] - w[0].pose[dof]).abs();
                if change > bound + 1e-9 {
                    return Err(Error::TrajectoryBound {
                        frame: k,
                        next: k + 1,
                        dof,
                        change,
                        bound,
                    });
                }
            }
        }
        Ok(frames)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sinusoid(amplitude: f64, period: f64) -> TrajectorySpec {
        TrajectorySpec {
            duration: 5.0,
            frame_rate: 20.0,
            origin: vec![],
            motion: vec![Motion {
                dof: "l_hip_z".into(),
                waveform: Waveform::Sinusoid {
                    center: 0.0,
                    amplitude,
                    period,
                    phase: 0.0,
                },
            }],
        }
    }

    #[test]
    fn sinusoid_bound_accepts_slow_motion() {
        let spec = SkeletonSpec::default_body();
        let hip = spec.dof_index("l_hip_z").unwrap();
        let frames = sinusoid(20.0, 2.0).checked_frames(&spec, &[hip], 5.0).unwrap();
        assert_eq!(frames.len(), 100);
        let max = frames
            .windows(2)
            .map(|w| (w[1].pose[hip] - w[0].pose[hip]).abs())
            .fold(0.0, f64::max);
        let analytic = std::f64::consts::TAU * 20.0 / 40.0;
        assert!(max <= analytic && max > analytic * 0.99, "{max}");
    }

    #[test]
    fn sinusoid_bound_rejects_fast_motion() {
        let spec = SkeletonSpec::default_body();
        let hip = spec.dof_index("l_hip_z").unwrap();
        let mut t = sinusoid(40.0, 1.0);
        t.motion[0].waveform = Waveform::Sinusoid {
            center: 10.0,
            amplitude: 40.0,
            period: 1.0,
            phase: 0.0,
        };
        match t.checked_frames(&spec, &[hip], 5.0) {
            Err(Error::TrajectoryBound { dof, change, .. }) => {
                assert_eq!(dof, hip);
                assert!(change > 12.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn limits_are_enforced() {
        let spec = SkeletonSpec::default_body();
        let t = sinusoid(40.0, 2.0);
        assert!(matches!(t.checked_frames(&spec, &[], 5.0), Err(Error::PoseOutOfLimits { .. })));
    }

    #[test]
    fn origin_interpolation() {
        let t = TrajectorySpec {
            duration: 1.0,
            frame_rate: 10.0,
            origin: vec![
                OriginWaypoint { time: 0.0, position: [0.0, 1.0, 0.0], orientation: [0.0; 3] },
                OriginWaypoint { time: 1.0, position: [1.0, 1.0, 0.0], orientation: [20.0, 0.0, 0.0] },
            ],
            motion: vec![],
        };
        let o = t.origin_at(0.25);
        assert!((o.position.x - 0.25).abs() < 1e-12);
        assert!((o.yaw() - 5.0).abs() < 1e-12);
        assert_eq!(t.origin_at(-1.0).position.x, 0.0);
        assert_eq!(t.origin_at(7.0).position.x, 1.0);
    }

    #[test]
    fn constant_trajectory_repeats() {
        let spec = SkeletonSpec::default_body();
        let mut pose = spec.neutral_pose();
        pose[10] = -40.0;
        let o = RigidTransform::from_translation(Vec3::new(0.0, 1.0, 0.0));
        let frames = TrajectorySpec::constant(&spec, &pose, &o, 10, 20.0).frames(&spec).unwrap();
        assert_eq!(frames.len(), 10);
        assert!(frames.iter().all(|f| f.pose == pose && f.origin == o));
    }
}
