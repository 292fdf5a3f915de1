//! Markerless articulated body tracking from silhouettes.
//!
//! A 31-dof kinematic skeleton fleshed out with capsules is projected into
//! calibrated pinhole cameras; the overlap between the projected body and the
//! observed foreground mask weighs each pose hypothesis. Poses are tracked
//! frame to frame with interval particle filtering, with Condensation as a
//! baseline.

pub mod camera;
pub mod config;
pub mod error;
pub mod filter;
pub mod geometry;
pub mod harness;
pub mod imaging;
pub mod init;
pub mod likelihood;
pub mod origin_search;
pub mod segmentation;
pub mod skeleton;

pub use error::{Error, Result};
