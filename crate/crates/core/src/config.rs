//! The shared configuration file.
//!
//! A user file only needs the keys it changes: it is merged over the shipped
//! default (tables merge key by key, everything else is replaced).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::camera::{CameraDef, CameraModel};
use crate::error::{Error, Result};
use crate::filter::{Condensation, DofSplit, IntervalSpec, TrackerConfig};
use crate::harness::trajectory::TrajectorySpec;
use crate::init::{origin_grid, InitGrid};
use crate::origin_search::OriginSearch;
use crate::segmentation::SegmentationConfig;
use crate::skeleton::{SkeletonDef, SkeletonSpec};
use crate::{geometry::Vec3, skeleton::RigidTransform};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Ipf,
    Condensation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackerSection {
    pub filter: FilterKind,
    /// Distinct survivors per step (M).
    pub survivors: usize,
    pub tracked: Vec<String>,
    /// Degrees.
    pub half_width: f64,
    pub q: usize,
    /// Degrees.
    pub rest_noise_sigma: f64,
    /// Degrees; the baseline's noise on the tracked dofs.
    pub condensation_tracked_sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OriginDef {
    pub position: [f64; 3],
    /// `[yaw, pitch, roll]`, degrees.
    #[serde(default)]
    pub orientation: [f64; 3],
}

impl OriginDef {
    pub fn transform(&self) -> RigidTransform {
        let o = self.orientation;
        RigidTransform::new(Vec3::from_array(self.position), o[0], o[1], o[2])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSection {
    pub dofs: Vec<String>,
    /// Degrees.
    pub step: f64,
    pub budget: usize,
    pub position_range: f64,
    pub position_step: f64,
    pub angle_range: f64,
    pub angle_step: f64,
    pub origin: OriginDef,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub skeleton: SkeletonDef,
    pub cameras: Vec<CameraDef>,
    pub tracker: TrackerSection,
    pub origin_search: OriginSearch,
    pub init: InitSection,
    pub segmentation: SegmentationConfig,
    pub trajectory: TrajectorySpec,
}

impl Default for Config {
    fn default() -> Self {
        Config::from_toml_str("").expect("default config is valid")
    }
}

impl Config {
    /// Parses `text` merged over the default configuration.
    pub fn from_toml_str(text: &str) -> Result<Config> {
        let mut base: toml::Table = SkeletonSpec::default_config_text().parse()?;
        let user: toml::Table = text.parse()?;
        merge(&mut base, user);
        let cfg: Config = toml::Value::Table(base).try_into()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        Config::from_toml_str(&std::fs::read_to_string(path).map_err(Error::file(path))?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.skeleton()?;
        self.camera_models()?;
        self.tracker_config(&spec)?;
        self.origin_search.validate()?;
        self.init_grid(&spec)?;
        if self.tracker.condensation_tracked_sigma < 0.0 {
            return Err(Error::Config("condensation_tracked_sigma must be nonnegative".into()));
        }
        self.trajectory.validate(&spec)
    }

    pub fn skeleton(&self) -> Result<SkeletonSpec> {
        SkeletonSpec::from_def(&self.skeleton)
    }

    pub fn camera_models(&self) -> Result<Vec<CameraModel>> {
        if self.cameras.is_empty() {
            return Err(Error::Config("at least one camera is required".into()));
        }
        self.cameras.iter().map(CameraModel::from_def).collect()
    }

    pub fn tracked_indices(&self, spec: &SkeletonSpec) -> Result<Vec<usize>> {
        self.tracker.tracked.iter().map(|n| spec.require_dof(n)).collect()
    }

    pub fn tracker_config(&self, spec: &SkeletonSpec) -> Result<TrackerConfig> {
        let t = &self.tracker;
        let cfg = TrackerConfig {
            survivors: t.survivors,
            interval: IntervalSpec::uniform(self.tracked_indices(spec)?, t.half_width, t.q),
            rest_noise_sigma: t.rest_noise_sigma,
            rng_seed: t.seed,
        };
        cfg.validate(spec.dof_count())?;
        Ok(cfg)
    }

    /// Per-dof noise of the Condensation baseline.
    pub fn condensation_sigma(&self, spec: &SkeletonSpec) -> Result<Vec<f64>> {
        let split = DofSplit::new(&self.tracked_indices(spec)?, spec.dof_count());
        Ok(Condensation::split_sigma(
            &split,
            self.tracker.condensation_tracked_sigma,
            self.tracker.rest_noise_sigma,
        ))
    }

    pub fn init_grid(&self, spec: &SkeletonSpec) -> Result<InitGrid> {
        let dofs = self
            .init
            .dofs
            .iter()
            .map(|n| spec.require_dof(n))
            .collect::<Result<Vec<_>>>()?;
        InitGrid::spanning_limits(spec, &dofs, self.init.step, spec.neutral_pose())
    }

    pub fn init_origins(&self) -> Vec<RigidTransform> {
        let i = &self.init;
        origin_grid(
            &i.origin.transform(),
            i.position_range,
            i.position_step,
            i.angle_range,
            i.angle_step,
        )
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_parses() {
        let c = Config::default();
        let spec = c.skeleton().unwrap();
        assert_eq!(spec, SkeletonSpec::default_body());
        let t = c.tracker_config(&spec).unwrap();
        assert_eq!(t.particle_count(), 6561);
        assert_eq!(c.init_grid(&spec).unwrap().size(), 4900);
        assert_eq!(c.init_origins().len(), 1);
        assert_eq!(c.trajectory.frame_count(), 100);
    }

    #[test]
    fn partial_override_merges() {
        let c = Config::from_toml_str("[tracker]\nseed = 7\nfilter = \"condensation\"\n").unwrap();
        assert_eq!(c.tracker.seed, 7);
        assert_eq!(c.tracker.filter, FilterKind::Condensation);
        assert_eq!(c.tracker.survivors, 81);
    }

    #[test]
    fn round_trips_through_text() {
        let c = Config::from_toml_str("[origin_search]\nposition_range = 0.2\n").unwrap();
        let again = Config::from_toml_str(&c.to_toml_string()).unwrap();
        assert_eq!(again.origin_search, c.origin_search);
        assert_eq!(again.to_toml_string(), c.to_toml_string());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Config::from_toml_str("[tracker]\nq = 2\n").is_err());
        assert!(Config::from_toml_str("[tracker]\ntracked = [\"nope\"]\n").is_err());
        assert!(Config::from_toml_str("[tracker]\nbogus = 1\n").is_err());
        assert!(Config::from_toml_str("cameras = []\n").is_err());
        assert!(Config::from_toml_str("[origin_search]\nposition_step = 0.0\n").is_err());
    }
}
