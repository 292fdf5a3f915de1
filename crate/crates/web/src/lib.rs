//! Browser demo: pose a body against a synthetic silhouette, and step the
//! interval particle filter through a walking sequence.
//!
//! [`DemoCore`] holds the logic and runs natively; [`Demo`] is the thin
//! wasm-bindgen wrapper the page talks to.

use ipf_track::camera::CameraModel;
use ipf_track::config::Config;
use ipf_track::filter::{seed_particles, DofSplit, FilterState, IntervalFilter, TrackerConfig};
use ipf_track::harness::{render_sequence, MaskSequence, TruthFrame};
use ipf_track::imaging::BinaryImage;
use ipf_track::init::initialize;
use ipf_track::likelihood::{overlap_counts, weight, Observation, OverlapCounts};
use ipf_track::origin_search::estimate_origin;
use ipf_track::skeleton::{body_volume, clamp_pose, PoseVector, RigidTransform, SkeletonSpec};
use wasm_bindgen::prelude::*;

/// The default scene at half resolution, to keep browser steps quick.
const DEMO_CAMERA: &str = r#"
[[cameras]]
focal = 190.0
principal = [80.0, 60.0]
resolution = [160, 120]
eye = [2.8284, 2.2, -2.8284]
target = [0.0, 0.95, 0.0]
"#;

const BACKGROUND: [u8; 4] = [24, 26, 32, 255];
const COMMON: [u8; 4] = [90, 200, 120, 255];
const SILHOUETTE_ONLY: [u8; 4] = [220, 90, 80, 255];
const MODEL_ONLY: [u8; 4] = [90, 140, 230, 255];

/// Colors each pixel by which of the two masks cover it.
pub fn compose_rgba(silhouette: &BinaryImage, model: &BinaryImage) -> Vec<u8> {
    let (w, h) = silhouette.dims();
    let mut out = Vec::with_capacity(w * h * 4);
    for y in 0..h {
        for x in 0..w {
            let c = match (silhouette.get(x, y), model.get(x, y)) {
                (true, true) => COMMON,
                (true, false) => SILHOUETTE_ONLY,
                (false, true) => MODEL_ONLY,
                (false, false) => BACKGROUND,
            };
            out.extend_from_slice(&c);
        }
    }
    out
}

/// Outcome of one tracking step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSummary {
    pub frame: usize,
    /// Mean absolute error over the tracked dofs, degrees.
    pub mae: f64,
    pub weight: f64,
    pub lost: bool,
    pub measured: usize,
}

pub struct DemoCore {
    cfg: Config,
    spec: SkeletonSpec,
    camera: CameraModel,
    tracker: TrackerConfig,
    truth: Vec<TruthFrame>,
    masks: MaskSequence,
    state: Option<FilterState>,
    origin: RigidTransform,
    next: usize,
    rgba: Vec<u8>,
}

impl DemoCore {
    pub fn new(seed: u64, survivors: usize, q: usize) -> ipf_track::Result<DemoCore> {
        let cfg = Config::from_toml_str(&format!(
            "{DEMO_CAMERA}\n[tracker]\nseed = {seed}\nsurvivors = {survivors}\nq = {q}\n"
        ))?;
        let spec = cfg.skeleton()?;
        let cameras = cfg.camera_models()?;
        let tracker = cfg.tracker_config(&spec)?;
        let truth = cfg.trajectory.frames(&spec)?;
        let masks = render_sequence(&spec, &cameras, &truth)?;
        let camera = cameras[0].clone();
        let (w, h) = camera.resolution();
        Ok(DemoCore {
            origin: cfg.init.origin.transform(),
            rgba: compose_rgba(&masks[0][0], &BinaryImage::new(w, h)),
            cfg,
            spec,
            camera,
            tracker,
            truth,
            masks,
            state: None,
            next: 0,
        })
    }

    pub fn resolution(&self) -> (usize, usize) {
        self.camera.resolution()
    }

    pub fn frame_count(&self) -> usize {
        self.truth.len()
    }

    /// Index of the frame the next [`DemoCore::step`] tracks.
    pub fn next_frame(&self) -> usize {
        self.next
    }

    pub fn rgba(&self) -> &[u8] {
        &self.rgba
    }

    fn tracked(&self) -> &[usize] {
        &self.tracker.interval.tracked
    }

    fn render(&self, pose: &PoseVector, origin: &RigidTransform) -> ipf_track::Result<BinaryImage> {
        Ok(self.camera.rasterize(&body_volume(&self.spec, pose, origin)?))
    }

    fn observation(&self, frame: usize) -> ipf_track::Result<Observation<'_>> {
        Observation::new(std::slice::from_ref(&self.camera), &self.masks[frame])
    }

    /// Scores a hand-set pose of the tracked dofs, at the true origin,
    /// against the silhouette of `frame`. Values outside the joint limits are
    /// clamped.
    pub fn probe(&mut self, frame: usize, tracked_values: &[f64]) -> ipf_track::Result<OverlapCounts> {
        let frame = frame.min(self.frame_count() - 1);
        let truth = &self.truth[frame];
        let mut pose = truth.pose.clone();
        for (&d, &v) in self.tracked().iter().zip(tracked_values) {
            pose[d] = v;
        }
        let pose = clamp_pose(&self.spec, &pose);
        let model = self.render(&pose, &truth.origin)?;
        let silhouette = &self.masks[frame][0];
        let counts = overlap_counts(silhouette, &model)?;
        self.rgba = compose_rgba(silhouette, &model);
        Ok(counts)
    }

    /// True tracked-dof values of `frame`.
    pub fn truth_values(&self, frame: usize) -> Vec<f64> {
        let pose = &self.truth[frame.min(self.frame_count() - 1)].pose;
        self.tracked().iter().map(|&d| pose[d]).collect()
    }

    /// Initializes on `state == None`, otherwise runs one filter step.
    #[allow(clippy::type_complexity)]
    fn advance(
        &self,
        k: usize,
        state: Option<FilterState>,
    ) -> ipf_track::Result<(FilterState, RigidTransform, PoseVector, f64, bool, usize)> {
        let obs = self.observation(k)?;
        match state {
            None => {
                let init = initialize(
                    &self.spec,
                    &self.cfg.init_grid(&self.spec)?,
                    &self.cfg.init_origins(),
                    self.cfg.init.budget,
                    |p, o| obs.weigh(&self.spec, p, o),
                )?;
                let split = DofSplit::new(self.tracked(), self.spec.dof_count());
                let mut state = FilterState::new(seed_particles(&self.spec, &split, &init.candidates), 0);
                state.last_estimate = Some(init.pose.clone());
                let n = init.candidates.len();
                Ok((state, init.origin, init.pose, init.weight, false, n))
            }
            Some(mut state) => {
                let prev = state.last_estimate.clone().expect("set at initialization");
                let origin = estimate_origin(&self.spec, &obs, &prev, &self.origin, &self.cfg.origin_search).origin;
                let filter = IntervalFilter::new(&self.spec, self.tracker.clone())?;
                let step = filter.step(&mut state, &|p: &PoseVector| obs.weigh(&self.spec, p, &origin))?;
                Ok((state, origin, step.estimate, step.max_raw_weight, step.lost, step.measured))
            }
        }
    }

    /// Tracks the next frame: grid initialization on the first, one filter
    /// step after origin re-estimation on the rest. Returns `None` past the
    /// end of the sequence.
    pub fn step(&mut self) -> ipf_track::Result<Option<StepSummary>> {
        let k = self.next;
        if k >= self.frame_count() {
            return Ok(None);
        }
        let current = self.state.take();
        let (state, origin, pose, weight, lost, measured) = self.advance(k, current)?;
        self.state = Some(state);
        self.origin = origin;
        let truth = &self.truth[k].pose;
        let mae = self.tracked().iter().map(|&d| (pose[d] - truth[d]).abs()).sum::<f64>() / self.tracked().len() as f64;
        let model = self.render(&pose, &self.origin)?;
        self.rgba = compose_rgba(&self.masks[k][0], &model);
        self.next += 1;
        Ok(Some(StepSummary {
            frame: k,
            mae,
            weight,
            lost,
            measured,
        }))
    }
}

fn js_err(e: ipf_track::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Demo(DemoCore);

#[wasm_bindgen]
impl Demo {
    /// Builds the scene and renders the synthetic walk. `survivors` and `q`
    /// set the filter's particle budget (`survivors * q^4`).
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32, survivors: u32, q: u32) -> Result<Demo, JsError> {
        DemoCore::new(seed as u64, survivors as usize, q as usize).map(Demo).map_err(js_err)
    }

    pub fn width(&self) -> u32 {
        self.0.resolution().0 as u32
    }

    pub fn height(&self) -> u32 {
        self.0.resolution().1 as u32
    }

    #[wasm_bindgen(js_name = frameCount)]
    pub fn frame_count(&self) -> u32 {
        self.0.frame_count() as u32
    }

    #[wasm_bindgen(js_name = nextFrame)]
    pub fn next_frame(&self) -> u32 {
        self.0.next_frame() as u32
    }

    /// RGBA pixels of the last rendering: green where silhouette and model
    /// agree, red for silhouette only, blue for model only.
    pub fn rgba(&self) -> Vec<u8> {
        self.0.rgba().to_vec()
    }

    /// Tracked-dof values of the true pose at `frame`
    /// (l_hip_z, r_hip_z, l_knee_z, r_knee_z).
    #[wasm_bindgen(js_name = truthValues)]
    pub fn truth_values(&self, frame: u32) -> Vec<f64> {
        self.0.truth_values(frame as usize)
    }

    /// Scores hand-set tracked-dof values against `frame`; returns
    /// `[common, silhouette_only, model_only, weight]`.
    pub fn probe(&mut self, frame: u32, values: &[f64]) -> Result<Vec<f64>, JsError> {
        let c = self.0.probe(frame as usize, values).map_err(js_err)?;
        Ok(vec![
            c.n_common as f64,
            c.n_silhouette_only as f64,
            c.n_model_only as f64,
            weight(&c),
        ])
    }

    /// Tracks the next frame; returns `[frame, mae, weight, lost, measured]`,
    /// or an empty array at the end of the sequence.
    pub fn step(&mut self) -> Result<Vec<f64>, JsError> {
        Ok(match self.0.step().map_err(js_err)? {
            Some(s) => vec![s.frame as f64, s.mae, s.weight, s.lost as u8 as f64, s.measured as f64],
            None => Vec::new(),
        })
    }
}
