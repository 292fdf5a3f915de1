//! Synthetic data, end-to-end tracking runs, metrics and overlays.

pub mod evaluate;
pub mod frames;
pub mod overlay;
pub mod report;
pub mod synth;
pub mod track;
pub mod trajectory;

pub use evaluate::{evaluate, Evaluation, FrameError};
pub use frames::{load_frames, load_gray_frames};
pub use overlay::{model_boundary, render_overlay};
pub use report::{FrameRecord, TrackReport};
pub use synth::{generate_synthetic, render_sequence, truth_report, MaskSequence};
pub use track::run_tracker;
pub use trajectory::{TrajectorySpec, TruthFrame, Waveform};
