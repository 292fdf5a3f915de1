//! Per-frame tracking output and its CSV form.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::skeleton::{forward_kinematics, PoseVector, RigidTransform, SkeletonSpec, DOF_COUNT, JOINT_COUNT};

#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub frame: usize,
    pub origin: RigidTransform,
    /// Degrees.
    pub pose: PoseVector,
    /// World positions, meters.
    pub joints: Vec<Vec3>,
    pub max_weight: f64,
    pub lost: bool,
}

impl FrameRecord {
    pub fn new(spec: &SkeletonSpec, frame: usize, pose: PoseVector, origin: RigidTransform, max_weight: f64, lost: bool) -> Result<Self> {
        let joints = forward_kinematics(spec, &pose, &origin)?;
        Ok(FrameRecord {
            frame,
            origin,
            pose,
            joints,
            max_weight,
            lost,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrackReport {
    pub frames: Vec<FrameRecord>,
}

/// Column names, in order.
pub fn csv_header() -> Vec<String> {
    let mut h: Vec<String> = ["frame", "origin_x", "origin_y", "origin_z", "origin_yaw", "origin_pitch", "origin_roll"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend((0..DOF_COUNT).map(|i| format!("dof_{i:02}")));
    for j in 0..JOINT_COUNT {
        for axis in ["x", "y", "z"] {
            h.push(format!("j{j:02}_{axis}"));
        }
    }
    h.push("max_weight".into());
    h.push("lost".into());
    h
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

impl TrackReport {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn write_csv_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(csv_header())?;
        for r in &self.frames {
            if r.pose.len() != DOF_COUNT || r.joints.len() != JOINT_COUNT {
                return Err(Error::Csv(format!("frame {} does not match the report schema", r.frame)));
            }
            let mut row = vec![r.frame.to_string()];
            row.extend(r.origin.coords().into_iter().map(fmt));
            row.extend(r.pose.as_slice().iter().copied().map(fmt));
            row.extend(r.joints.iter().flat_map(|j| j.to_array()).map(fmt));
            row.push(fmt(r.max_weight));
            row.push(u8::from(r.lost).to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv_to(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ascii"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        self.write_csv_to(std::fs::File::create(path).map_err(Error::file(path))?)
    }

    pub fn read_csv_from<R: Read>(input: R) -> Result<TrackReport> {
        let mut r = csv::Reader::from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
        if header != csv_header() {
            return Err(Error::Csv("unexpected header".into()));
        }
        let mut frames = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let bad = |what: &str| Error::Csv(format!("row {}: bad {what}", line + 1));
            let num = |i: usize| -> Result<f64> { rec[i].parse::<f64>().map_err(|_| bad(&header[i])) };
            let frame = rec[0].parse::<usize>().map_err(|_| bad("frame"))?;
            let mut c = [0.0; 6];
            for (k, v) in c.iter_mut().enumerate() {
                *v = num(1 + k)?;
            }
            let pose = (7..7 + DOF_COUNT).map(num).collect::<Result<Vec<_>>>()?;
            let jb = 7 + DOF_COUNT;
            let joints = (0..JOINT_COUNT)
                .map(|j| Ok(Vec3::new(num(jb + 3 * j)?, num(jb + 3 * j + 1)?, num(jb + 3 * j + 2)?)))
                .collect::<Result<Vec<_>>>()?;
            let mw = jb + 3 * JOINT_COUNT;
            let lost = match &rec[mw + 1] {
                "0" => false,
                "1" => true,
                _ => return Err(bad("lost")),
            };
            frames.push(FrameRecord {
                frame,
                origin: RigidTransform::from_coords(c),
                pose: PoseVector::new(pose),
                joints,
                max_weight: num(mw)?,
                lost,
            });
        }
        Ok(TrackReport { frames })
    }

    pub fn read_csv(path: &Path) -> Result<TrackReport> {
        TrackReport::read_csv_from(std::fs::File::open(path).map_err(Error::file(path))?)
    }
}
