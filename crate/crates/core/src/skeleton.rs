//! Articulated body model: topology, joint limits, forward kinematics and
//! capsule fleshing.
//!
//! The body is a tree of 19 joints rooted at the sacrum. Each joint carries up
//! to three rotational degrees of freedom (one per axis); 31 in total. A
//! joint's local rotation is `Rz · Ry · Rx` of its dof angles and moves every
//! descendant. The root has no dofs of its own: its placement is the body
//! origin, a [`RigidTransform`].
//!
//! The shipped default model lives in `config/default.toml` and is embedded
//! into the crate; see [`SkeletonSpec::default_body`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_degrees, Mat3, Vec3};

pub const JOINT_COUNT: usize = 19;
pub const SEGMENT_COUNT: usize = 17;
pub const DOF_COUNT: usize = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn slot(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub name: String,
    pub parent: Option<usize>,
    pub offset: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub joints: (usize, usize),
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dof {
    pub name: String,
    pub joint: usize,
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
}

/// Serialized form of the body model, with joints referenced by name.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonDef {
    pub joints: Vec<JointDef>,
    pub segments: Vec<SegmentDef>,
    pub dofs: Vec<DofDef>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointDef {
    pub name: String,
    #[serde(default)]
    pub parent: Option<String>,
    pub offset: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDef {
    pub joints: [String; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DofDef {
    pub name: String,
    pub joint: String,
    pub axis: Axis,
    pub limits: [f64; 2],
}

/// Immutable, validated body topology.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonSpec {
    joints: Vec<Joint>,
    segments: Vec<Segment>,
    dofs: Vec<Dof>,
    root: usize,
    /// Joints ordered so every parent precedes its children.
    order: Vec<usize>,
    /// Per joint, the dof index driving each of the x, y, z rotations.
    joint_dofs: Vec<[Option<usize>; 3]>,
}

const DEFAULT_CONFIG: &str = include_str!("../config/default.toml");

impl SkeletonSpec {
    /// The shipped default body model.
    pub fn default_body() -> SkeletonSpec {
        SkeletonSpec::from_def(&default_def()).expect("default skeleton is valid")
    }

    /// Text of the shipped default configuration file.
    pub fn default_config_text() -> &'static str {
        DEFAULT_CONFIG
    }

    pub fn from_def(def: &SkeletonDef) -> Result<SkeletonSpec> {
        let bad = |m: String| Error::InvalidSkeleton(m);
        if def.joints.len() != JOINT_COUNT {
            return Err(bad(format!("{} joints, expected {JOINT_COUNT}", def.joints.len())));
        }
        if def.segments.len() != SEGMENT_COUNT {
            return Err(bad(format!(
                "{} segments, expected {SEGMENT_COUNT}",
                def.segments.len()
            )));
        }
        if def.dofs.len() != DOF_COUNT {
            return Err(bad(format!("{} dofs, expected {DOF_COUNT}", def.dofs.len())));
        }

        let mut by_name = HashMap::new();
        for (i, j) in def.joints.iter().enumerate() {
            if by_name.insert(j.name.as_str(), i).is_some() {
                return Err(bad(format!("duplicate joint name {}", j.name)));
            }
        }
        let lookup = |name: &str| -> Result<usize> {
            by_name
                .get(name)
                .copied()
                .ok_or_else(|| bad(format!("unknown joint {name}")))
        };

        let mut joints = Vec::with_capacity(JOINT_COUNT);
        for j in &def.joints {
            let parent = j.parent.as_deref().map(lookup).transpose()?;
            joints.push(Joint {
                name: j.name.clone(),
                parent,
                offset: Vec3::from_array(j.offset),
            });
        }

        let roots: Vec<usize> = (0..joints.len()).filter(|&i| joints[i].parent.is_none()).collect();
        if roots.len() != 1 {
            return Err(bad(format!("expected exactly one root joint, found {}", roots.len())));
        }
        let root = roots[0];
        let order = topological_order(&joints, root)?;

        let mut segments = Vec::with_capacity(SEGMENT_COUNT);
        for s in &def.segments {
            let a = lookup(&s.joints[0])?;
            let b = lookup(&s.joints[1])?;
            if a == b {
                return Err(bad(format!("segment joins {} to itself", s.joints[0])));
            }
            if !(s.radius > 0.0) {
                return Err(bad(format!(
                    "segment {}-{} has radius {}",
                    s.joints[0], s.joints[1], s.radius
                )));
            }
            segments.push(Segment {
                joints: (a, b),
                radius: s.radius,
            });
        }

        let mut dofs = Vec::with_capacity(DOF_COUNT);
        let mut joint_dofs = vec![[None; 3]; joints.len()];
        let mut dof_names = HashMap::new();
        for (i, d) in def.dofs.iter().enumerate() {
            let joint = lookup(&d.joint)?;
            let [min, max] = d.limits;
            if !(min < max) {
                return Err(bad(format!("dof {} has limits [{min}, {max}]", d.name)));
            }
            if dof_names.insert(d.name.as_str(), i).is_some() {
                return Err(bad(format!("duplicate dof name {}", d.name)));
            }
            let slot = &mut joint_dofs[joint][d.axis.slot()];
            if slot.is_some() {
                return Err(bad(format!("joint {} has two {:?} dofs", d.joint, d.axis)));
            }
            *slot = Some(i);
            dofs.push(Dof {
                name: d.name.clone(),
                joint,
                axis: d.axis,
                min,
                max,
            });
        }
        if joint_dofs[root].iter().any(Option::is_some) {
            return Err(bad("the root joint cannot carry dofs".into()));
        }

        Ok(SkeletonSpec {
            joints,
            segments,
            dofs,
            root,
            order,
            joint_dofs,
        })
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn dofs(&self) -> &[Dof] {
        &self.dofs
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn dof_count(&self) -> usize {
        self.dofs.len()
    }

    pub fn joint_index(&self, name: &str) -> Option<usize> {
        self.joints.iter().position(|j| j.name == name)
    }

    pub fn dof_index(&self, name: &str) -> Option<usize> {
        self.dofs.iter().position(|d| d.name == name)
    }

    /// Resolves a dof name, returning a config error if it is unknown.
    pub fn require_dof(&self, name: &str) -> Result<usize> {
        self.dof_index(name)
            .ok_or_else(|| Error::Config(format!("unknown dof {name}")))
    }

    /// The all-zero pose clamped into the limits.
    pub fn neutral_pose(&self) -> PoseVector {
        clamp_pose(self, &PoseVector::zeros(self.dof_count()))
    }
}

pub(crate) fn default_def() -> SkeletonDef {
    let table: toml::Table = toml::from_str(DEFAULT_CONFIG).expect("default config parses");
    table["skeleton"]
        .clone()
        .try_into()
        .expect("default config has a [skeleton] table")
}

fn topological_order(joints: &[Joint], root: usize) -> Result<Vec<usize>> {
    let mut children = vec![Vec::new(); joints.len()];
    for (i, j) in joints.iter().enumerate() {
        if let Some(p) = j.parent {
            children[p].push(i);
        }
    }
    let mut order = Vec::with_capacity(joints.len());
    let mut stack = vec![root];
    while let Some(j) = stack.pop() {
        order.push(j);
        stack.extend(children[j].iter().rev());
    }
    if order.len() != joints.len() {
        return Err(Error::InvalidSkeleton(
            "parent links contain a cycle or unreachable joints".into(),
        ));
    }
    Ok(order)
}

/// Joint angles in degrees, ordered as the skeleton's dof table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseVector(Vec<f64>);

impl PoseVector {
    pub fn new(angles: Vec<f64>) -> Self {
        PoseVector(angles)
    }

    pub fn zeros(n: usize) -> Self {
        PoseVector(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Index<usize> for PoseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for PoseVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

/// Rigid placement of a frame: `p' = R · p + position`.
///
/// `orientation` holds `[yaw, pitch, roll]` in degrees: yaw about the
/// vertical y axis, pitch about z, roll about x, composed as
/// `R = Rz(pitch) · Ry(yaw) · Rx(roll)`. Each angle lies in `[-180, 180)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidTransform {
    pub position: Vec3,
    pub orientation: [f64; 3],
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl RigidTransform {
    pub const IDENTITY: RigidTransform = RigidTransform {
        position: Vec3::ZERO,
        orientation: [0.0; 3],
    };

    pub fn new(position: Vec3, yaw: f64, pitch: f64, roll: f64) -> Self {
        RigidTransform {
            position,
            orientation: [wrap_degrees(yaw), wrap_degrees(pitch), wrap_degrees(roll)],
        }
    }

    pub fn from_translation(position: Vec3) -> Self {
        RigidTransform {
            position,
            orientation: [0.0; 3],
        }
    }

    pub fn yaw(&self) -> f64 {
        self.orientation[0]
    }

    pub fn pitch(&self) -> f64 {
        self.orientation[1]
    }

    pub fn roll(&self) -> f64 {
        self.orientation[2]
    }

    pub fn rotation(&self) -> Mat3 {
        let [yaw, pitch, roll] = self.orientation;
        Mat3::from_euler_zyx(roll, yaw, pitch)
    }

    pub fn from_rotation(position: Vec3, rotation: &Mat3) -> Self {
        let (roll, yaw, pitch) = rotation.to_euler_zyx();
        RigidTransform::new(position, yaw, pitch, roll)
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        self.rotation() * p + self.position
    }

    /// The six search coordinates `(x, y, z, yaw, pitch, roll)`.
    pub fn coords(&self) -> [f64; 6] {
        let p = self.position;
        let [yaw, pitch, roll] = self.orientation;
        [p.x, p.y, p.z, yaw, pitch, roll]
    }

    pub fn from_coords(c: [f64; 6]) -> Self {
        RigidTransform::new(Vec3::new(c[0], c[1], c[2]), c[3], c[4], c[5])
    }
}

impl fmt::Display for RigidTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.position;
        write!(
            f,
            "pos ({:.3}, {:.3}, {:.3}) ypr ({:.1}, {:.1}, {:.1})",
            p.x, p.y, p.z, self.orientation[0], self.orientation[1], self.orientation[2]
        )
    }
}

/// A sphere-swept segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capsule {
    pub a: Vec3,
    pub b: Vec3,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BodyVolume {
    pub capsules: Vec<Capsule>,
}

/// Indices of every dof outside its limits, in table order.
pub fn validate_pose(spec: &SkeletonSpec, pose: &PoseVector) -> Vec<usize> {
    spec.dofs
        .iter()
        .zip(pose.as_slice())
        .enumerate()
        .filter(|(_, (d, &v))| !(v >= d.min && v <= d.max))
        .map(|(i, _)| i)
        .collect()
}

pub fn clamp_pose(spec: &SkeletonSpec, pose: &PoseVector) -> PoseVector {
    let mut out = pose.clone();
    clamp_in_place(spec, &mut out);
    out
}

pub(crate) fn clamp_in_place(spec: &SkeletonSpec, pose: &mut PoseVector) {
    for (v, d) in pose.as_mut_slice().iter_mut().zip(&spec.dofs) {
        *v = v.clamp(d.min, d.max);
    }
}

fn check_pose(spec: &SkeletonSpec, pose: &PoseVector) -> Result<()> {
    if pose.len() != spec.dof_count() {
        return Err(Error::PoseLength {
            expected: spec.dof_count(),
            got: pose.len(),
        });
    }
    if let Some(&i) = validate_pose(spec, pose).first() {
        let d = &spec.dofs[i];
        return Err(Error::PoseOutOfLimits {
            index: i,
            name: d.name.clone(),
            value: pose[i],
            min: d.min,
            max: d.max,
        });
    }
    Ok(())
}

/// World positions of every joint, indexed like `spec.joints()`.
pub fn forward_kinematics(
    spec: &SkeletonSpec,
    pose: &PoseVector,
    origin: &RigidTransform,
) -> Result<Vec<Vec3>> {
    check_pose(spec, pose)?;
    let mut pos = vec![Vec3::ZERO; spec.joints.len()];
    let mut rot = vec![Mat3::IDENTITY; spec.joints.len()];
    let angle = |slot: Option<usize>| slot.map_or(0.0, |i| pose[i]);
    for &j in &spec.order {
        let [dx, dy, dz] = spec.joint_dofs[j];
        let local = Mat3::from_euler_zyx(angle(dx), angle(dy), angle(dz));
        match spec.joints[j].parent {
            None => {
                pos[j] = origin.position;
                rot[j] = origin.rotation() * local;
            }
            Some(p) => {
                pos[j] = pos[p] + rot[p] * spec.joints[j].offset;
                rot[j] = rot[p] * local;
            }
        }
    }
    Ok(pos)
}

pub fn flesh(spec: &SkeletonSpec, joint_positions: &[Vec3]) -> BodyVolume {
    BodyVolume {
        capsules: spec
            .segments
            .iter()
            .map(|s| Capsule {
                a: joint_positions[s.joints.0],
                b: joint_positions[s.joints.1],
                radius: s.radius,
            })
            .collect(),
    }
}

/// Forward kinematics followed by fleshing.
pub fn body_volume(
    spec: &SkeletonSpec,
    pose: &PoseVector,
    origin: &RigidTransform,
) -> Result<BodyVolume> {
    Ok(flesh(spec, &forward_kinematics(spec, pose, origin)?))
}
