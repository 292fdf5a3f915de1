//! Error metrics of a tracking report against ground truth.

use std::path::Path;

use super::report::TrackReport;
use crate::error::{Error, Result};
use crate::skeleton::SkeletonSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct FrameError {
    pub frame: usize,
    /// Absolute error per dof, degrees.
    pub dofs: Vec<f64>,
    /// Euclidean error per joint, meters.
    pub joints: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Mean absolute error per dof, degrees.
    pub dof_mae: Vec<f64>,
    /// Mean Euclidean error per joint, meters.
    pub joint_error: Vec<f64>,
    /// Mean distance between estimated and true origin positions, meters.
    pub origin_error: f64,
    pub per_frame: Vec<FrameError>,
}

pub fn evaluate(report: &TrackReport, truth: &TrackReport) -> Result<Evaluation> {
    if report.len() != truth.len() {
        return Err(Error::FrameCount(report.len(), truth.len()));
    }
    let per_frame: Vec<FrameError> = report
        .frames
        .iter()
        .zip(&truth.frames)
        .map(|(e, t)| {
            if e.pose.len() != t.pose.len() || e.joints.len() != t.joints.len() {
                return Err(Error::Csv(format!("frame {}: record sizes differ", e.frame)));
            }
            Ok(FrameError {
                frame: e.frame,
                dofs: e.pose.as_slice().iter().zip(t.pose.as_slice()).map(|(a, b)| (a - b).abs()).collect(),
                joints: e.joints.iter().zip(&t.joints).map(|(a, b)| a.distance(*b)).collect(),
            })
        })
        .collect::<Result<_>>()?;
    let n = per_frame.len().max(1) as f64;
    let column_mean = |get: &dyn Fn(&FrameError) -> &Vec<f64>, width: usize| -> Vec<f64> {
        (0..width)
            .map(|i| per_frame.iter().map(|f| get(f)[i]).sum::<f64>() / n)
            .collect()
    };
    let dof_width = per_frame.first().map_or(0, |f| f.dofs.len());
    let joint_width = per_frame.first().map_or(0, |f| f.joints.len());
    let origin_error = report
        .frames
        .iter()
        .zip(&truth.frames)
        .map(|(e, t)| e.origin.position.distance(t.origin.position))
        .sum::<f64>()
        / n;
    Ok(Evaluation {
        dof_mae: column_mean(&|f| &f.dofs, dof_width),
        joint_error: column_mean(&|f| &f.joints, joint_width),
        origin_error,
        per_frame,
    })
}

impl Evaluation {
    /// Mean of the per-dof MAE over `dofs`.
    pub fn mean_dof_mae(&self, dofs: &[usize]) -> f64 {
        mean(dofs.iter().map(|&i| self.dof_mae[i]))
    }

    /// Mean of the per-joint error over `joints`.
    pub fn mean_joint_error(&self, joints: &[usize]) -> f64 {
        mean(joints.iter().map(|&i| self.joint_error[i]))
    }

    /// Per-frame errors, one row per frame, for plotting.
    pub fn write_series_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let dofs = self.dof_mae.len();
        let joints = self.joint_error.len();
        let mut header = vec!["frame".to_string()];
        header.extend((0..dofs).map(|i| format!("dof_{i:02}")));
        header.extend((0..joints).map(|j| format!("j{j:02}")));
        w.write_record(&header)?;
        for f in &self.per_frame {
            let mut row = vec![f.frame.to_string()];
            row.extend(f.dofs.iter().chain(&f.joints).map(|v| format!("{v:.6}")));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `kind,name,value` rows: per-dof MAE, per-joint error, origin error.
    pub fn write_summary_csv(&self, spec: &SkeletonSpec, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["kind", "name", "value"])?;
        for (d, v) in spec.dofs().iter().zip(&self.dof_mae) {
            w.write_record(["dof_mae_deg", d.name.as_str(), &format!("{v:.6}")])?;
        }
        for (j, v) in spec.joints().iter().zip(&self.joint_error) {
            w.write_record(["joint_error_m", j.name.as_str(), &format!("{v:.6}")])?;
        }
        w.write_record(["origin_error_m", "origin", &format!("{:.6}", self.origin_error)])?;
        w.flush()?;
        Ok(())
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}
