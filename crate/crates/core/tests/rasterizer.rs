use ipf_track::camera::{CameraModel, Projection};
use ipf_track::geometry::Vec3;
use ipf_track::imaging::BinaryImage;
use ipf_track::skeleton::{body_volume, BodyVolume, Capsule, RigidTransform, SkeletonSpec};
use proptest::prelude::*;

const W: usize = 320;
const H: usize = 240;
const F: f64 = 500.0;

fn axial_camera() -> CameraModel {
    CameraModel::new(F, (160.0, 120.0), RigidTransform::IDENTITY, (W, H)).unwrap()
}

fn capsule(a: [f64; 3], b: [f64; 3], radius: f64) -> Capsule {
    Capsule {
        a: Vec3::from_array(a),
        b: Vec3::from_array(b),
        radius,
    }
}

fn body(caps: &[Capsule]) -> BodyVolume {
    BodyVolume { capsules: caps.to_vec() }
}

/// Distance from point `p` to the ray `s·d, s ≥ 0` (`d` unit length).
fn point_ray_distance(p: Vec3, d: Vec3) -> f64 {
    let s = p.dot(d).max(0.0);
    (p - d * s).norm()
}

/// Distance from the ray to segment `ab`, by ternary search over the segment
/// parameter (the distance is convex in it).
fn ray_segment_distance(a: Vec3, b: Vec3, d: Vec3) -> f64 {
    let f = |t: f64| point_ray_distance(a.lerp(b, t), d);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    f(0.5 * (lo + hi)).min(f(0.0)).min(f(1.0))
}

/// Pixel verdict from the oracle: `Some(hit)` unless the ray grazes the
/// surface too closely to call.
fn oracle_pixel(cam: &CameraModel, caps: &[Capsule], x: usize, y: usize) -> Option<bool> {
    let (px, py) = cam.principal();
    let d = Vec3::new((x as f64 + 0.5 - px) / cam.focal(), (y as f64 + 0.5 - py) / cam.focal(), 1.0).normalized();
    let mut hit = false;
    for c in caps {
        let a = cam.to_camera(c.a);
        let b = cam.to_camera(c.b);
        if a.z <= 0.0 || b.z <= 0.0 {
            return None;
        }
        let dist = ray_segment_distance(a, b, d);
        if (dist - c.radius).abs() < 1e-7 {
            return None;
        }
        hit |= dist < c.radius;
    }
    Some(hit)
}

fn shift(img: &BinaryImage, dx: i64, dy: i64) -> BinaryImage {
    BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        let (sx, sy) = (x as i64 - dx, y as i64 - dy);
        sx >= 0 && sy >= 0 && (sx as usize) < img.width() && (sy as usize) < img.height() && img.get(sx as usize, sy as usize)
    })
}

fn subset(a: &BinaryImage, b: &BinaryImage) -> bool {
    a.iter_ones().all(|(x, y)| b.get(x, y))
}

#[test]
fn projection_examples() {
    let cam = axial_camera();
    assert_eq!(cam.project_point(Vec3::new(0.0, 0.0, 3.0)), Projection::Pixel(160.0, 120.0));
    assert_eq!(cam.project_point(Vec3::new(0.1, 0.0, 1.0)), Projection::Pixel(210.0, 120.0));
    assert_eq!(cam.project_point(Vec3::new(0.1, 0.0, 0.0)), Projection::BehindCamera);
    assert_eq!(cam.project_point(Vec3::new(0.1, 0.0, -2.0)), Projection::BehindCamera);
}

#[test]
fn invalid_cameras_are_rejected() {
    assert!(CameraModel::new(0.0, (160.0, 120.0), RigidTransform::IDENTITY, (W, H)).is_err());
    assert!(CameraModel::new(F, (160.0, 120.0), RigidTransform::IDENTITY, (0, H)).is_err());
    assert!(CameraModel::new(F, (400.0, 120.0), RigidTransform::IDENTITY, (W, H)).is_err());
}

#[test]
fn empty_and_hidden_bodies_give_blank_images() {
    let cam = axial_camera();
    assert!(cam.rasterize(&BodyVolume::default()).is_empty());
    let behind = body(&[capsule([0.0, 0.0, -3.0], [0.2, 0.1, -2.0], 0.1)]);
    assert!(cam.rasterize(&behind).is_empty());
}

#[test]
fn sphere_projects_to_disc() {
    let cam = axial_camera();
    for (r, z) in [(0.1, 2.0), (0.05, 1.0), (0.2, 4.0), (0.15, 3.0)] {
        let img = cam.rasterize(&body(&[capsule([0.0, 0.0, z], [0.0, 0.0, z], r)]));
        let expected = std::f64::consts::PI * (F * r / z).powi(2);
        let got = img.count_ones() as f64;
        assert!((got - expected).abs() <= 0.05 * expected, "r {r} z {z}: {got} vs {expected}");
        let n = img.count_ones() as f64;
        let (sx, sy) = img
            .iter_ones()
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + x as f64 + 0.5, b + y as f64 + 0.5));
        assert!((sx / n - 160.0).abs() < 0.5 && (sy / n - 120.0).abs() < 0.5);
    }
}

#[test]
fn sphere_matches_ray_casting_oracle() {
    let cam = axial_camera();
    let caps = [capsule([0.0, 0.0, 2.0], [0.0, 0.0, 2.0], 0.1)];
    let img = cam.rasterize(&body(&caps));
    for y in (0..H).step_by(2) {
        for x in (0..W).step_by(2) {
            if let Some(hit) = oracle_pixel(&cam, &caps, x, y) {
                assert_eq!(img.get(x, y), hit, "pixel ({x}, {y})");
            }
        }
    }
}

#[test]
fn default_body_matches_oracle_on_coarse_grid() {
    let spec = SkeletonSpec::default_body();
    let cfg = ipf_track::config::Config::default();
    let cam = &cfg.camera_models().unwrap()[0];
    let b = body_volume(&spec, &spec.neutral_pose(), &RigidTransform::from_translation(Vec3::new(0.0, 1.0, 0.0))).unwrap();
    let img = cam.rasterize(&b);
    assert!(img.count_ones() > 1000);
    for y in (0..H).step_by(3) {
        for x in (0..W).step_by(3) {
            if let Some(hit) = oracle_pixel(cam, &b.capsules, x, y) {
                assert_eq!(img.get(x, y), hit, "pixel ({x}, {y})");
            }
        }
    }
}

#[test]
fn disjoint_capsules_rasterize_to_union() {
    let cam = axial_camera();
    let a = capsule([-0.5, -0.2, 3.0], [-0.3, 0.3, 3.2], 0.08);
    let b = capsule([0.3, -0.1, 2.5], [0.5, 0.2, 2.8], 0.05);
    let both = cam.rasterize(&body(&[a, b]));
    let mut or = cam.rasterize(&body(&[a]));
    or.union_with(&cam.rasterize(&body(&[b]))).unwrap();
    assert_eq!(both, or);
}

#[test]
fn body_translation_shifts_mask() {
    let spec = SkeletonSpec::default_body();
    let cam = axial_camera();
    // far enough that the shifted body stays inside the frame
    let z = 6.0;
    let d = 12.0 * z / F;
    let at = |x: f64, y: f64| {
        let o = RigidTransform::new(Vec3::new(x, y, z), 90.0, 0.0, 0.0);
        cam.rasterize(&body_volume(&spec, &spec.neutral_pose(), &o).unwrap())
    };
    let base = at(0.0, 0.0);
    for (dx, dy) in [(1, 0), (0, 1), (-1, 1)] {
        let moved = at(d * dx as f64, d * dy as f64);
        let expect = shift(&base, 12 * dx, 12 * dy);
        assert!(subset(&moved, &expect.dilate(1)), "shift ({dx}, {dy})");
        assert!(subset(&expect, &moved.dilate(1)), "shift ({dx}, {dy})");
    }
}

fn arb_capsule() -> impl Strategy<Value = Capsule> {
    (
        prop::array::uniform3(-1.0..1.0f64),
        prop::array::uniform3(-0.5..0.5f64),
        1.5..5.0f64,
        0.02..0.3f64,
    )
        .prop_map(|(a, e, z, r)| {
            let a = [a[0], a[1] * 0.7, z];
            let b = [a[0] + e[0], a[1] + e[1], (z + e[2]).max(1.0)];
            capsule(a, b, r)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn capsule_matches_oracle(c in arb_capsule()) {
        let cam = axial_camera();
        let img = cam.rasterize(&body(&[c]));
        prop_assert_eq!(img.dims(), (W, H));
        for y in (0..H).step_by(4) {
            for x in (0..W).step_by(4) {
                if let Some(hit) = oracle_pixel(&cam, &[c], x, y) {
                    prop_assert_eq!(img.get(x, y), hit, "pixel ({}, {})", x, y);
                }
            }
        }
    }

    #[test]
    fn adding_a_capsule_never_clears_pixels(caps in prop::collection::vec(arb_capsule(), 1..6), extra in arb_capsule()) {
        let cam = axial_camera();
        let before = cam.rasterize(&body(&caps));
        let mut more = caps.clone();
        more.push(extra);
        let after = cam.rasterize(&body(&more));
        prop_assert!(subset(&before, &after));
        let mut or = before.clone();
        or.union_with(&cam.rasterize(&body(&[extra]))).unwrap();
        prop_assert_eq!(after, or);
    }

    #[test]
    fn output_matches_resolution(w in 1usize..64, h in 1usize..64, c in arb_capsule()) {
        let cam = CameraModel::new(F / 5.0, (w as f64 / 2.0, h as f64 / 2.0), RigidTransform::IDENTITY, (w, h)).unwrap();
        prop_assert_eq!(cam.rasterize(&body(&[c])).dims(), (w, h));
    }
}
