//! Condensation baseline: resample with replacement in proportion to weight,
//! perturb every dof with white Gaussian noise, measure.

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{measure, DofSplit, FilterState, NoiseSource, Particle, PoseScorer, StepReport};
use crate::error::{Error, Result};
use crate::skeleton::SkeletonSpec;

/// Draws `n` indices with replacement, with probability proportional to
/// `weights`. If no weight is positive the draw is uniform and the second
/// value is `true`.
pub fn resample_indices<R: Rng + ?Sized>(weights: &[f64], n: usize, rng: &mut R) -> (Vec<usize>, bool) {
    assert!(!weights.is_empty(), "cannot resample an empty set");
    match WeightedIndex::new(weights) {
        Ok(dist) => ((0..n).map(|_| dist.sample(rng)).collect(), false),
        Err(_) => ((0..n).map(|_| rng.random_range(0..weights.len())).collect(), true),
    }
}

#[derive(Debug, Clone)]
pub struct Condensation<'a> {
    spec: &'a SkeletonSpec,
    split: DofSplit,
    /// Per-dof noise standard deviation, pose order.
    sigma: Vec<f64>,
    particle_count: usize,
    noise: NoiseSource,
}

impl<'a> Condensation<'a> {
    pub fn new(
        spec: &'a SkeletonSpec,
        split: DofSplit,
        sigma: Vec<f64>,
        particle_count: usize,
        seed: u64,
    ) -> Result<Self> {
        if sigma.len() != spec.dof_count() {
            return Err(Error::Config(format!(
                "{} noise sigmas for {} dofs",
                sigma.len(),
                spec.dof_count()
            )));
        }
        if sigma.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::Config("noise sigmas must be nonnegative".into()));
        }
        if particle_count == 0 {
            return Err(Error::Config("particle count must be positive".into()));
        }
        Ok(Condensation {
            spec,
            split,
            sigma,
            particle_count,
            noise: NoiseSource::new(seed),
        })
    }

    /// Noise `tracked_sigma` on the split's tracked dofs and `rest_sigma`
    /// elsewhere.
    pub fn split_sigma(split: &DofSplit, tracked_sigma: f64, rest_sigma: f64) -> Vec<f64> {
        let n = split.tracked().len() + split.rest().len();
        (0..n)
            .map(|i| if split.tracked().contains(&i) { tracked_sigma } else { rest_sigma })
            .collect()
    }

    pub fn split(&self) -> &DofSplit {
        &self.split
    }

    pub fn step<S: PoseScorer + ?Sized>(&self, state: &mut FilterState, scorer: &S) -> Result<StepReport> {
        if state.particles.is_empty() {
            return Err(Error::Empty("particle set"));
        }
        let frame = state.frame + 1;
        let weights: Vec<f64> = state.particles.iter().map(|p| p.weight).collect();
        let (picks, degenerate) = resample_indices(&weights, self.particle_count, &mut self.noise.resampling(frame));
        let dofs = self.spec.dofs();
        let mut next: Vec<Particle> = picks
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let mut pose = self.split.assemble(&state.particles[i]);
                let mut rng = self.noise.particle(frame, k as u64);
                for (j, v) in pose.as_mut_slice().iter_mut().enumerate() {
                    if self.sigma[j] > 0.0 {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        *v += self.sigma[j] * z;
                    }
                    *v = v.clamp(dofs[j].min, dofs[j].max);
                }
                self.split.split(&pose, 0.0)
            })
            .collect();
        let m = measure(&mut next, &self.split, scorer)?;
        let lost = m.lost || degenerate;
        let estimate = match (&state.last_estimate, m.lost) {
            (Some(prev), true) => prev.clone(),
            _ => self.split.assemble(&next[m.estimate_index]),
        };
        let report = StepReport {
            frame,
            estimate: estimate.clone(),
            max_raw_weight: m.max_raw_weight,
            lost,
            measured: next.len(),
        };
        state.particles = next;
        state.frame = frame;
        state.last_estimate = Some(estimate);
        Ok(report)
    }
}

/// One Condensation step with the same noise on every dof.
pub fn condensation_step<S: PoseScorer + ?Sized>(
    spec: &SkeletonSpec,
    split: &DofSplit,
    state: &mut FilterState,
    scorer: &S,
    noise_sigma: f64,
    particle_count: usize,
    seed: u64,
) -> Result<StepReport> {
    let sigma = vec![noise_sigma; spec.dof_count()];
    Condensation::new(spec, split.clone(), sigma, particle_count, seed)?.step(state, scorer)
}
