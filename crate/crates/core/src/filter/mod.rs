//! Sequential pose estimation: interval particle filtering and the
//! Condensation baseline.
//!
//! Both filters share the particle representation, the measure step and the
//! randomness contract: every noise draw comes from a stream keyed by
//! `(seed, frame, particle index)`, so results do not depend on evaluation
//! order or thread count.

mod condensation;
mod ipf;
mod noise;

pub use condensation::{condensation_step, resample_indices, Condensation};
pub use ipf::{grid_offsets, ipf_select, IntervalFilter};
pub use noise::NoiseSource;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::skeleton::{PoseVector, SkeletonSpec};

/// Anything that assigns a raw, nonnegative weight to a pose.
pub trait PoseScorer: Sync {
    fn score(&self, pose: &PoseVector) -> f64;
}

impl<F: Fn(&PoseVector) -> f64 + Sync> PoseScorer for F {
    fn score(&self, pose: &PoseVector) -> f64 {
        self(pose)
    }
}

/// The tracked dofs (grid-expanded) and their per-dimension interval.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSpec {
    pub tracked: Vec<usize>,
    pub half_width: Vec<f64>,
    pub q: Vec<usize>,
}

impl IntervalSpec {
    /// Same half-width and `q` on every tracked dof.
    pub fn uniform(tracked: Vec<usize>, half_width: f64, q: usize) -> Self {
        let n = tracked.len();
        IntervalSpec {
            tracked,
            half_width: vec![half_width; n],
            q: vec![q; n],
        }
    }

    pub fn dims(&self) -> usize {
        self.tracked.len()
    }

    /// Number of grid points per particle, `∏ q_i`.
    pub fn grid_size(&self) -> usize {
        self.q.iter().product()
    }

    pub fn validate(&self, dof_count: usize) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let n = self.tracked.len();
        if n == 0 {
            return bad("at least one tracked dof is required".into());
        }
        if self.half_width.len() != n || self.q.len() != n {
            return bad("interval half_width and q must match the tracked dofs".into());
        }
        let mut seen = HashSet::new();
        for &i in &self.tracked {
            if i >= dof_count {
                return bad(format!("tracked dof index {i} out of range"));
            }
            if !seen.insert(i) {
                return bad(format!("tracked dof {i} listed twice"));
            }
        }
        if let Some(h) = self.half_width.iter().find(|&&h| !(h > 0.0)) {
            return bad(format!("interval half-width {h} must be positive"));
        }
        if let Some(q) = self.q.iter().find(|&&q| q < 3 || q % 2 == 0) {
            return bad(format!("q = {q}: must be odd and at least 3"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerConfig {
    /// Distinct particles kept by selection (M).
    pub survivors: usize,
    pub interval: IntervalSpec,
    /// Standard deviation of the per-step noise on untracked dofs, degrees.
    pub rest_noise_sigma: f64,
    pub rng_seed: u64,
}

impl TrackerConfig {
    pub fn validate(&self, dof_count: usize) -> Result<()> {
        if self.survivors == 0 {
            return Err(Error::Config("survivor count M must be at least 1".into()));
        }
        if !(self.rest_noise_sigma >= 0.0) {
            return Err(Error::Config("rest noise sigma must be nonnegative".into()));
        }
        self.interval.validate(dof_count)
    }

    /// Particles measured per step, `M · q^n`.
    pub fn particle_count(&self) -> usize {
        self.survivors * self.interval.grid_size()
    }
}

/// Partition of the pose vector into tracked and remaining dofs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofSplit {
    tracked: Vec<usize>,
    rest: Vec<usize>,
}

impl DofSplit {
    pub fn new(tracked: &[usize], dof_count: usize) -> Self {
        DofSplit {
            tracked: tracked.to_vec(),
            rest: (0..dof_count).filter(|i| !tracked.contains(i)).collect(),
        }
    }

    pub fn tracked(&self) -> &[usize] {
        &self.tracked
    }

    pub fn rest(&self) -> &[usize] {
        &self.rest
    }

    pub fn split(&self, pose: &PoseVector, weight: f64) -> Particle {
        Particle {
            tracked: self.tracked.iter().map(|&i| pose[i]).collect(),
            rest: self.rest.iter().map(|&i| pose[i]).collect(),
            weight,
        }
    }

    pub fn assemble(&self, p: &Particle) -> PoseVector {
        let mut pose = PoseVector::zeros(self.tracked.len() + self.rest.len());
        for (&i, &v) in self.tracked.iter().zip(&p.tracked) {
            pose[i] = v;
        }
        for (&i, &v) in self.rest.iter().zip(&p.rest) {
            pose[i] = v;
        }
        pose
    }
}

/// One candidate configuration: tracked part, remainder, and weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub tracked: Vec<f64>,
    pub rest: Vec<f64>,
    pub weight: f64,
}

impl Particle {
    /// Bit pattern of the state vector, for exact distinctness checks.
    pub fn state_key(&self) -> Vec<u64> {
        self.tracked
            .iter()
            .chain(&self.rest)
            .map(|v| v.to_bits())
            .collect()
    }
}

/// Weighted particle set carried between frames.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    pub particles: Vec<Particle>,
    /// Index of the frame the particles were last measured against.
    pub frame: u64,
    pub last_estimate: Option<PoseVector>,
}

impl FilterState {
    pub fn new(particles: Vec<Particle>, frame: u64) -> Self {
        FilterState {
            particles,
            frame,
            last_estimate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measured {
    pub estimate_index: usize,
    /// Raw weight of the estimate.
    pub max_raw_weight: f64,
    /// Every raw weight was zero; weights were set uniform.
    pub lost: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub frame: u64,
    pub estimate: PoseVector,
    pub max_raw_weight: f64,
    pub lost: bool,
    pub measured: usize,
}

/// Weighs every particle, normalizes the weights to sum to one and picks the
/// heaviest (lowest index on ties).
pub fn measure<S: PoseScorer + ?Sized>(
    particles: &mut [Particle],
    split: &DofSplit,
    scorer: &S,
) -> Result<Measured> {
    if particles.is_empty() {
        return Err(Error::Empty("particle set"));
    }
    let raw = raw_weights(particles, split, scorer);
    let total: f64 = raw.iter().sum();
    let lost = !(total > 0.0);
    let n = particles.len() as f64;
    for (p, &w) in particles.iter_mut().zip(&raw) {
        p.weight = if lost { 1.0 / n } else { w / total };
    }
    let mut best = 0;
    for (i, p) in particles.iter().enumerate() {
        if p.weight > particles[best].weight {
            best = i;
        }
    }
    Ok(Measured {
        estimate_index: best,
        max_raw_weight: raw[best],
        lost,
    })
}

#[cfg(feature = "parallel")]
fn raw_weights<S: PoseScorer + ?Sized>(particles: &[Particle], split: &DofSplit, scorer: &S) -> Vec<f64> {
    use rayon::prelude::*;
    particles
        .par_iter()
        .map(|p| scorer.score(&split.assemble(p)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn raw_weights<S: PoseScorer + ?Sized>(particles: &[Particle], split: &DofSplit, scorer: &S) -> Vec<f64> {
    particles
        .iter()
        .map(|p| scorer.score(&split.assemble(p)))
        .collect()
}

/// Turns an evaluated set of poses into a particle set seeded for filtering.
pub fn seed_particles(spec: &SkeletonSpec, split: &DofSplit, poses: &[(PoseVector, f64)]) -> Vec<Particle> {
    debug_assert!(poses.iter().all(|(p, _)| p.len() == spec.dof_count()));
    let total: f64 = poses.iter().map(|(_, w)| w).sum();
    let n = poses.len() as f64;
    poses
        .iter()
        .map(|(p, w)| split.split(p, if total > 0.0 { w / total } else { 1.0 / n }))
        .collect()
}
