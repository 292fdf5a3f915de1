#![allow(dead_code)]

use ipf_track::camera::CameraModel;
use ipf_track::config::Config;
use ipf_track::geometry::Vec3;
use ipf_track::imaging::BinaryImage;
use ipf_track::skeleton::{body_volume, PoseVector, RigidTransform, SkeletonSpec};

pub struct Scene {
    pub config: Config,
    pub spec: SkeletonSpec,
    pub cameras: Vec<CameraModel>,
}

impl Scene {
    pub fn new(config: Config) -> Scene {
        Scene {
            spec: config.skeleton().unwrap(),
            cameras: config.camera_models().unwrap(),
            config,
        }
    }

    pub fn default() -> Scene {
        Scene::new(Config::default())
    }

    pub fn render(&self, pose: &PoseVector, origin: &RigidTransform) -> Vec<BinaryImage> {
        let body = body_volume(&self.spec, pose, origin).unwrap();
        self.cameras.iter().map(|c| c.rasterize(&body)).collect()
    }

    pub fn dof(&self, name: &str) -> usize {
        self.spec.require_dof(name).unwrap()
    }

    pub fn joint(&self, name: &str) -> usize {
        self.spec.joint_index(name).unwrap()
    }

    /// Neutral pose with slightly bent legs, like a relaxed stance.
    pub fn stance(&self) -> PoseVector {
        let mut p = self.spec.neutral_pose();
        p[self.dof("l_hip_z")] = 10.0;
        p[self.dof("r_hip_z")] = -5.0;
        p[self.dof("l_knee_z")] = -20.0;
        p[self.dof("r_knee_z")] = -35.0;
        p
    }
}

pub fn standing_origin() -> RigidTransform {
    RigidTransform::from_translation(Vec3::new(0.0, 1.0, 0.0))
}
