//! Pinhole camera and capsule rasterizer.
//!
//! Camera frame: x to the right of the image, y down, z along the optical
//! axis. Pixel `(i, j)` covers `[i, i+1) × [j, j+1)`; rays are cast through
//! pixel centers.
//!
//! A pixel is set iff its viewing ray passes within `radius` of a capsule's
//! axis segment, in front of the camera. The image of a convex body under
//! central projection is convex, so each capsule covers one contiguous span
//! per row: rows are scanned inward from both ends of the capsule's bounding
//! box until the first hit, and the span between is filled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Mat3, Vec3};
use crate::imaging::BinaryImage;
use crate::skeleton::{BodyVolume, RigidTransform};

const NEAR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    Pixel(f64, f64),
    BehindCamera,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CameraModel {
    focal: f64,
    principal: (f64, f64),
    extrinsic: RigidTransform,
    resolution: (usize, usize),
    rotation: Mat3,
}

/// Config-file form: a look-at placement.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraDef {
    pub focal: f64,
    pub principal: [f64; 2],
    pub resolution: [usize; 2],
    pub eye: [f64; 3],
    pub target: [f64; 3],
    #[serde(default = "default_up")]
    pub up: [f64; 3],
}

fn default_up() -> [f64; 3] {
    [0.0, 1.0, 0.0]
}

impl CameraModel {
    pub fn new(
        focal: f64,
        principal: (f64, f64),
        extrinsic: RigidTransform,
        resolution: (usize, usize),
    ) -> Result<Self> {
        let (w, h) = resolution;
        if !(focal > 0.0) {
            return Err(Error::Config(format!("camera focal {focal} must be positive")));
        }
        if w == 0 || h == 0 {
            return Err(Error::Config("camera resolution must be nonzero".into()));
        }
        let (px, py) = principal;
        if !(px >= 0.0 && px <= w as f64 && py >= 0.0 && py <= h as f64) {
            return Err(Error::Config(format!(
                "principal point ({px}, {py}) outside {w}x{h} image"
            )));
        }
        Ok(CameraModel {
            focal,
            principal,
            extrinsic,
            resolution,
            rotation: extrinsic.rotation(),
        })
    }

    /// Camera at `eye` looking at `target`, with `up` projecting to the top
    /// of the image.
    pub fn look_at(
        focal: f64,
        principal: (f64, f64),
        resolution: (usize, usize),
        eye: Vec3,
        target: Vec3,
        up: Vec3,
    ) -> Result<Self> {
        let forward = (target - eye).normalized();
        let right = forward.cross(up).normalized();
        if right.norm() < 0.5 {
            return Err(Error::Config("camera up vector is parallel to view direction".into()));
        }
        let down = forward.cross(right);
        let rot = Mat3::from_rows(right, down, forward);
        let extrinsic = RigidTransform::from_rotation(-(rot * eye), &rot);
        CameraModel::new(focal, principal, extrinsic, resolution)
    }

    pub fn from_def(def: &CameraDef) -> Result<Self> {
        CameraModel::look_at(
            def.focal,
            (def.principal[0], def.principal[1]),
            (def.resolution[0], def.resolution[1]),
            Vec3::from_array(def.eye),
            Vec3::from_array(def.target),
            Vec3::from_array(def.up),
        )
    }

    pub fn focal(&self) -> f64 {
        self.focal
    }

    pub fn principal(&self) -> (f64, f64) {
        self.principal
    }

    pub fn extrinsic(&self) -> &RigidTransform {
        &self.extrinsic
    }

    pub fn resolution(&self) -> (usize, usize) {
        self.resolution
    }

    /// World point in camera coordinates.
    pub fn to_camera(&self, p: Vec3) -> Vec3 {
        self.rotation * p + self.extrinsic.position
    }

    /// Projects a world point.
    pub fn project_point(&self, p: Vec3) -> Projection {
        self.project_camera_point(self.to_camera(p))
    }

    pub fn project_camera_point(&self, c: Vec3) -> Projection {
        if c.z <= 0.0 {
            return Projection::BehindCamera;
        }
        Projection::Pixel(
            self.principal.0 + self.focal * c.x / c.z,
            self.principal.1 + self.focal * c.y / c.z,
        )
    }

    pub fn blank(&self) -> BinaryImage {
        BinaryImage::new(self.resolution.0, self.resolution.1)
    }

    pub fn rasterize(&self, body: &BodyVolume) -> BinaryImage {
        let mut img = self.blank();
        self.rasterize_into(body, &mut img);
        img
    }

    /// ORs the body's footprint into `out`, which must match the camera
    /// resolution.
    pub fn rasterize_into(&self, body: &BodyVolume, out: &mut BinaryImage) {
        assert_eq!(out.dims(), self.resolution, "mask size differs from camera resolution");
        for cap in &body.capsules {
            let a = self.to_camera(cap.a);
            let b = self.to_camera(cap.b);
            if let Some((a, b)) = clip_to_front(a, b) {
                self.draw_capsule(a, b, cap.radius, out);
            }
        }
    }

    /// Pixel range `[lo, hi]` (inclusive, unclamped) covered by the image of
    /// a sphere along one image axis. `lateral` is the sphere center's
    /// coordinate along that axis.
    fn sphere_extent(&self, lateral: f64, depth: f64, r: f64, center_px: f64) -> (f64, f64) {
        let rho = lateral.hypot(depth);
        if rho <= r {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let theta = lateral.atan2(depth);
        let delta = (r / rho).asin();
        let half_pi = std::f64::consts::FRAC_PI_2;
        let lo = if theta - delta <= -half_pi {
            f64::NEG_INFINITY
        } else {
            center_px + self.focal * (theta - delta).tan()
        };
        let hi = if theta + delta >= half_pi {
            f64::INFINITY
        } else {
            center_px + self.focal * (theta + delta).tan()
        };
        (lo, hi)
    }

    fn pixel_range(lo: f64, hi: f64, n: usize) -> Option<(usize, usize)> {
        // pixel centers i + 0.5 inside [lo, hi], widened by one pixel for rounding
        let first = (lo - 0.5).ceil() - 1.0;
        let last = (hi - 0.5).floor() + 1.0;
        if last < 0.0 || first > (n - 1) as f64 || first > last {
            return None;
        }
        Some((first.max(0.0) as usize, last.min((n - 1) as f64) as usize))
    }

    fn draw_capsule(&self, a: Vec3, b: Vec3, r: f64, out: &mut BinaryImage) {
        let (w, h) = self.resolution;
        let (px, py) = self.principal;
        let (ua, ub) = (
            self.sphere_extent(a.x, a.z, r, px),
            self.sphere_extent(b.x, b.z, r, px),
        );
        let (va, vb) = (
            self.sphere_extent(a.y, a.z, r, py),
            self.sphere_extent(b.y, b.z, r, py),
        );
        let Some((x0, x1)) = Self::pixel_range(ua.0.min(ub.0), ua.1.max(ub.1), w) else {
            return;
        };
        let Some((y0, y1)) = Self::pixel_range(va.0.min(vb.0), va.1.max(vb.1), h) else {
            return;
        };

        let test = CapsuleRayTest::new(a, b, r);
        let inv_f = 1.0 / self.focal;
        let mut prev = None;
        for y in y0..=y1 {
            let dy = (y as f64 + 0.5 - py) * inv_f;
            let hit = |x: usize| test.hits(Vec3::new((x as f64 + 0.5 - px) * inv_f, dy, 1.0));
            match row_span(hit, x0, x1, prev) {
                Some((left, right)) => {
                    out.fill_span(y, left, right);
                    prev = Some((left, right));
                }
                // the covered rows of a convex footprint are contiguous
                None if prev.is_some() => break,
                None => {}
            }
        }
    }
}

/// The span of pixels in `x0..=x1` where `hit` holds, assuming they form one
/// interval. `prev` is the previous row's span and is used as the starting
/// guess.
fn row_span(hit: impl Fn(usize) -> bool, x0: usize, x1: usize, prev: Option<(usize, usize)>) -> Option<(usize, usize)> {
    let walk_left = |mut l: usize| {
        while l > x0 && hit(l - 1) {
            l -= 1;
        }
        l
    };
    let walk_right = |mut r: usize| {
        while r < x1 && hit(r + 1) {
            r += 1;
        }
        r
    };
    let Some((pl, pr)) = prev else {
        let left = (x0..=x1).find(|&x| hit(x))?;
        let right = (left..=x1).rev().find(|&x| hit(x)).unwrap_or(left);
        return Some((left, right));
    };
    let (pl, pr) = (pl.clamp(x0, x1), pr.clamp(x0, x1));
    if let Some(left) = (pl..=pr).find(|&x| hit(x)) {
        let left = if left == pl { walk_left(pl) } else { left };
        let right = if hit(pr) {
            walk_right(pr)
        } else {
            (left..pr).rev().find(|&x| hit(x)).unwrap_or(left)
        };
        return Some((left, right));
    }
    if let Some(right) = (x0..pl).rev().find(|&x| hit(x)) {
        return Some((walk_left(right), right));
    }
    let left = (pr + 1..=x1).find(|&x| hit(x))?;
    Some((left, walk_right(left)))
}

/// Clips segment `ab` (camera coordinates) to `z >= NEAR`.
fn clip_to_front(a: Vec3, b: Vec3) -> Option<(Vec3, Vec3)> {
    match (a.z >= NEAR, b.z >= NEAR) {
        (true, true) => Some((a, b)),
        (false, false) => None,
        (true, false) => Some((a, a.lerp(b, (a.z - NEAR) / (a.z - b.z)))),
        (false, true) => Some((b.lerp(a, (b.z - NEAR) / (b.z - a.z)), b)),
    }
}

/// Ray-through-origin versus capsule test with per-capsule constants hoisted.
struct CapsuleRayTest {
    a: Vec3,
    e: Vec3,
    aa: f64,
    ae: f64,
    ee: f64,
    r2: f64,
}

impl CapsuleRayTest {
    fn new(a: Vec3, b: Vec3, r: f64) -> Self {
        let e = b - a;
        CapsuleRayTest {
            a,
            e,
            aa: a.dot(a),
            ae: a.dot(e),
            ee: e.dot(e),
            r2: r * r,
        }
    }

    /// True if the ray `s·d, s > 0` passes within the radius of the segment.
    /// `d` need not be normalized: every quantity below is scaled by `|d|²`.
    #[inline]
    fn hits(&self, d: Vec3) -> bool {
        let dd = d.dot(d);
        let ad = self.a.dot(d);
        let ed = self.e.dot(d);
        // squared distance from P(t) = a + t e to the ray's line, times dd:
        // c0 + 2 c1 t + c2 t²
        let c0 = self.aa * dd - ad * ad;
        let c1 = self.ae * dd - ad * ed;
        let c2 = self.ee * dd - ed * ed;
        let t = if c2 > 1e-15 {
            (-c1 / c2).clamp(0.0, 1.0)
        } else if c1 < 0.0 {
            1.0
        } else {
            0.0
        };
        let dist2 = c0 + 2.0 * c1 * t + c2 * t * t;
        dist2 <= self.r2 * dd && ad + t * ed > 0.0
    }
}
