//! Interval particle filtering.
//!
//! One step per frame: keep the `M` distinct heaviest particles, replace each
//! by the full grid of `q^n` neighbours over the tracked dofs (untracked dofs
//! get white Gaussian noise), then weigh all `M · q^n` candidates. The
//! heaviest candidate is the frame's estimate.

use std::collections::HashSet;

use rand_distr::{Distribution, StandardNormal};

use super::{measure, DofSplit, FilterState, Measured, NoiseSource, Particle, PoseScorer, StepReport, TrackerConfig};
use crate::error::{Error, Result};
use crate::skeleton::SkeletonSpec;

/// `q` evenly spaced offsets covering `[-half_width, +half_width]`.
pub fn grid_offsets(half_width: f64, q: usize) -> Vec<f64> {
    debug_assert!(q >= 2);
    let step = 2.0 * half_width / (q - 1) as f64;
    (0..q).map(|j| -half_width + j as f64 * step).collect()
}

/// The `m` heaviest particles with pairwise-distinct states. Equal weights
/// keep input order.
pub fn ipf_select(particles: &[Particle], m: usize) -> Result<Vec<Particle>> {
    let mut order: Vec<usize> = (0..particles.len()).collect();
    order.sort_by(|&a, &b| particles[b].weight.total_cmp(&particles[a].weight));
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    for i in order {
        if seen.insert(particles[i].state_key()) {
            out.push(particles[i].clone());
            if out.len() == m {
                return Ok(out);
            }
        }
    }
    Err(Error::DegenerateParticleSet {
        available: out.len(),
        requested: m,
    })
}

#[derive(Debug, Clone)]
pub struct IntervalFilter<'a> {
    spec: &'a SkeletonSpec,
    config: TrackerConfig,
    split: DofSplit,
    noise: NoiseSource,
    offsets: Vec<Vec<f64>>,
}

impl<'a> IntervalFilter<'a> {
    pub fn new(spec: &'a SkeletonSpec, config: TrackerConfig) -> Result<Self> {
        config.validate(spec.dof_count())?;
        let split = DofSplit::new(&config.interval.tracked, spec.dof_count());
        let offsets = config
            .interval
            .half_width
            .iter()
            .zip(&config.interval.q)
            .map(|(&h, &q)| grid_offsets(h, q))
            .collect();
        Ok(IntervalFilter {
            spec,
            noise: NoiseSource::new(config.rng_seed),
            config,
            split,
            offsets,
        })
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.config
    }

    pub fn split(&self) -> &DofSplit {
        &self.split
    }

    pub fn select(&self, particles: &[Particle]) -> Result<Vec<Particle>> {
        ipf_select(particles, self.config.survivors)
    }

    /// Expands one particle into its `q^n` grid neighbours. Grid points are
    /// enumerated in odometer order (last tracked dof varies fastest); the
    /// child at grid position `g` draws its noise from stream
    /// `(frame, first_index + g)`.
    pub fn predict(&self, particle: &Particle, frame: u64, first_index: u64) -> Vec<Particle> {
        let dofs = self.spec.dofs();
        let q = &self.config.interval.q;
        let sigma = self.config.rest_noise_sigma;
        let count = self.config.interval.grid_size();
        (0..count)
            .map(|g| {
                let mut tracked = particle.tracked.clone();
                let mut rem = g;
                for d in (0..tracked.len()).rev() {
                    let digit = rem % q[d];
                    rem /= q[d];
                    let dof = &dofs[self.split.tracked()[d]];
                    tracked[d] = (tracked[d] + self.offsets[d][digit]).clamp(dof.min, dof.max);
                }
                let mut rest = particle.rest.clone();
                if sigma > 0.0 {
                    let mut rng = self.noise.particle(frame, first_index + g as u64);
                    for (v, &i) in rest.iter_mut().zip(self.split.rest()) {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        *v = (*v + sigma * z).clamp(dofs[i].min, dofs[i].max);
                    }
                } else {
                    for (v, &i) in rest.iter_mut().zip(self.split.rest()) {
                        *v = v.clamp(dofs[i].min, dofs[i].max);
                    }
                }
                Particle {
                    tracked,
                    rest,
                    weight: 0.0,
                }
            })
            .collect()
    }

    pub fn measure<S: PoseScorer + ?Sized>(&self, particles: &mut [Particle], scorer: &S) -> Result<Measured> {
        measure(particles, &self.split, scorer)
    }

    /// Select, predict and measure once; advances `state` to the next frame.
    pub fn step<S: PoseScorer + ?Sized>(&self, state: &mut FilterState, scorer: &S) -> Result<StepReport> {
        let survivors = self.select(&state.particles)?;
        let frame = state.frame + 1;
        let grid = self.config.interval.grid_size();
        let mut next = Vec::with_capacity(survivors.len() * grid);
        for (rank, p) in survivors.iter().enumerate() {
            next.extend(self.predict(p, frame, (rank * grid) as u64));
        }
        let m = self.measure(&mut next, scorer)?;
        let estimate = match (&state.last_estimate, m.lost) {
            (Some(prev), true) => prev.clone(),
            _ => self.split.assemble(&next[m.estimate_index]),
        };
        let report = StepReport {
            frame,
            estimate: estimate.clone(),
            max_raw_weight: m.max_raw_weight,
            lost: m.lost,
            measured: next.len(),
        };
        state.particles = next;
        state.frame = frame;
        state.last_estimate = Some(estimate);
        Ok(report)
    }
}
