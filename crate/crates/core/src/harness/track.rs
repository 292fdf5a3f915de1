//! End-to-end tracking over a frame sequence.

use std::time::Instant;

use super::report::{FrameRecord, TrackReport};
use crate::config::{Config, FilterKind};
use crate::error::{Error, Result};
use crate::filter::{seed_particles, Condensation, DofSplit, FilterState, IntervalFilter, PoseScorer, StepReport};
use crate::imaging::BinaryImage;
use crate::init::initialize;
use crate::likelihood::Observation;
use crate::origin_search::estimate_origin;
use crate::skeleton::PoseVector;

enum Stepper<'a> {
    Ipf(IntervalFilter<'a>),
    Condensation(Condensation<'a>),
}

impl Stepper<'_> {
    fn split(&self) -> &DofSplit {
        match self {
            Stepper::Ipf(f) => f.split(),
            Stepper::Condensation(f) => f.split(),
        }
    }

    fn step<S: PoseScorer>(&self, state: &mut FilterState, scorer: &S) -> Result<StepReport> {
        match self {
            Stepper::Ipf(f) => f.step(state, scorer),
            Stepper::Condensation(f) => f.step(state, scorer),
        }
    }
}

/// Tracks a sequence of silhouettes indexed `[frame][camera]`.
///
/// Frame 0 is initialized by grid search; every later frame first
/// re-estimates the origin with the previous pose, then runs one filter step
/// at that origin. A lost frame repeats the previous estimate.
pub fn run_tracker(cfg: &Config, frames: &[Vec<BinaryImage>]) -> Result<TrackReport> {
    let spec = cfg.skeleton()?;
    let cameras = cfg.camera_models()?;
    let tracker = cfg.tracker_config(&spec)?;
    let Some(first) = frames.first() else {
        return Ok(TrackReport::default());
    };

    let started = Instant::now();
    let obs = Observation::new(&cameras, first)?;
    let init = initialize(
        &spec,
        &cfg.init_grid(&spec)?,
        &cfg.init_origins(),
        cfg.init.budget,
        |p, o| obs.weigh(&spec, p, o),
    )?;
    log::info!(
        "frame 0: initialized over {} candidates in {:.3} s, weight {:.3}",
        init.candidates.len(),
        started.elapsed().as_secs_f64(),
        init.weight
    );

    let stepper = match cfg.tracker.filter {
        FilterKind::Ipf => Stepper::Ipf(IntervalFilter::new(&spec, tracker.clone())?),
        FilterKind::Condensation => Stepper::Condensation(Condensation::new(
            &spec,
            DofSplit::new(&tracker.interval.tracked, spec.dof_count()),
            cfg.condensation_sigma(&spec)?,
            tracker.particle_count(),
            tracker.rng_seed,
        )?),
    };
    let mut state = FilterState::new(seed_particles(&spec, stepper.split(), &init.candidates), 0);
    state.last_estimate = Some(init.pose.clone());

    let mut records = vec![FrameRecord::new(&spec, 0, init.pose, init.origin, init.weight, false)?];
    let mut origin = init.origin;
    for (k, masks) in frames.iter().enumerate().skip(1) {
        let started = Instant::now();
        let obs = Observation::new(&cameras, masks)?;
        let prev_pose = state.last_estimate.clone().expect("set at initialization");
        let found = estimate_origin(&spec, &obs, &prev_pose, &origin, &cfg.origin_search);
        origin = found.origin;
        let scorer = |p: &PoseVector| obs.weigh(&spec, p, &origin);
        let step = stepper.step(&mut state, &scorer)?;
        if step.frame as usize != k {
            return Err(Error::FrameCount(k, step.frame as usize));
        }
        log::info!(
            "frame {k}: {:.3} s, weight {:.3}{}",
            started.elapsed().as_secs_f64(),
            step.max_raw_weight,
            if step.lost { ", lost" } else { "" }
        );
        records.push(FrameRecord::new(&spec, k, step.estimate, origin, step.max_raw_weight, step.lost)?);
    }
    Ok(TrackReport { frames: records })
}
