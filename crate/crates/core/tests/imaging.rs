use ipf_track::imaging::{BinaryImage, GrayImage};
use ipf_track::segmentation::{background_subtract, segment, SegmentationConfig};
use proptest::prelude::*;

fn arb_gray() -> impl Strategy<Value = GrayImage> {
    (1usize..48, 1usize..32).prop_flat_map(|(w, h)| {
        prop::collection::vec(any::<u8>(), w * h)
            .prop_map(move |px| GrayImage::from_fn(w, h, |x, y| px[y * w + x]))
    })
}

fn arb_gray_pair() -> impl Strategy<Value = (GrayImage, GrayImage)> {
    (1usize..40, 1usize..30).prop_flat_map(|(w, h)| {
        let img = move || prop::collection::vec(any::<u8>(), w * h).prop_map(move |px| GrayImage::from_fn(w, h, |x, y| px[y * w + x]));
        (img(), img())
    })
}

#[test]
fn pgm_file_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.pgm");
    let g = GrayImage::from_fn(37, 19, |x, y| (x * 7 + y * 13) as u8);
    g.write_pgm(&path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert!(bytes.starts_with(b"P5\n37 19\n255\n"));
    let back = GrayImage::read(&path).unwrap();
    assert_eq!(back, g);
    back.write_pgm(&path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
}

#[test]
fn mask_pgm_uses_0_and_255() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.pgm");
    let m = BinaryImage::from_fn(70, 3, |x, y| (x + y) % 3 == 0);
    m.write_pgm(&path).unwrap();
    let g = GrayImage::read(&path).unwrap();
    for y in 0..3 {
        for x in 0..70 {
            assert_eq!(g.get(x, y), if m.get(x, y) { 255 } else { 0 });
        }
    }
    assert_eq!(BinaryImage::read_pgm(&path).unwrap(), m);
}

#[test]
fn pgm_header_comments_are_skipped() {
    let mut bytes = b"P5\n# made by hand\n3 2\n# max\n255\n".to_vec();
    bytes.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
    let g = GrayImage::decode_pgm(&bytes).unwrap();
    assert_eq!((g.width, g.height, g.get(2, 1)), (3, 2, 6));
    assert!(GrayImage::decode_pgm(b"P2\n1 1\n255\n0").is_err());
    assert!(GrayImage::decode_pgm(b"P5\n4 4\n255\n\x00").is_err());
}

#[test]
fn png_grayscale_and_color_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let gray = dir.path().join("g.png");
    let buf = image::GrayImage::from_fn(9, 5, |x, y| image::Luma([(x * 20 + y) as u8]));
    buf.save(&gray).unwrap();
    let g = GrayImage::read(&gray).unwrap();
    assert_eq!((g.width, g.height), (9, 5));
    assert_eq!(g.get(4, 3), 83);

    let color = dir.path().join("c.png");
    image::RgbImage::from_fn(2, 1, |_, _| image::Rgb([30, 60, 90])).save(&color).unwrap();
    assert_eq!(GrayImage::read(&color).unwrap().get(1, 0), 60);
    assert!(GrayImage::read(&dir.path().join("missing.png")).is_err());
}

#[test]
fn subtraction_examples() {
    let frame = GrayImage::filled(4, 4, 200);
    let bg = GrayImage::filled(4, 4, 50);
    assert_eq!(background_subtract(&frame, &bg, 30).unwrap().count_ones(), 16);
    assert!(background_subtract(&frame, &frame, 0).unwrap().is_empty());
    let mut one = bg.clone();
    one.set(2, 1, 51);
    let m = background_subtract(&one, &bg, 0).unwrap();
    assert_eq!(m.count_ones(), 1);
    assert!(m.get(2, 1));
    assert!(background_subtract(&frame, &GrayImage::filled(4, 5, 0), 10).is_err());
}

#[test]
fn morphology_is_off_by_default_and_removes_specks() {
    let bg = GrayImage::filled(20, 20, 0);
    let mut frame = GrayImage::from_fn(20, 20, |x, y| if (5..15).contains(&x) && (5..15).contains(&y) { 200 } else { 0 });
    frame.set(1, 1, 200);
    let plain = segment(&frame, &bg, &SegmentationConfig::default()).unwrap();
    assert!(plain.get(1, 1));
    let cleaned = segment(&frame, &bg, &SegmentationConfig { threshold: 30, morphology: true }).unwrap();
    assert!(!cleaned.get(1, 1));
    assert_eq!(cleaned.count_ones(), 100);
}

proptest! {
    #[test]
    fn pgm_bytes_round_trip(g in arb_gray()) {
        let bytes = g.encode_pgm();
        let back = GrayImage::decode_pgm(&bytes).unwrap();
        prop_assert_eq!(back.encode_pgm(), bytes);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn subtraction_is_symmetric((a, b) in arb_gray_pair(), t in any::<u8>()) {
        prop_assert_eq!(background_subtract(&a, &b, t).unwrap(), background_subtract(&b, &a, t).unwrap());
    }

    #[test]
    fn raising_threshold_never_adds_pixels((a, b) in arb_gray_pair(), t in any::<u8>(), dt in any::<u8>()) {
        let lo = background_subtract(&a, &b, t).unwrap();
        let hi = background_subtract(&a, &b, t.saturating_add(dt)).unwrap();
        prop_assert!(hi.iter_ones().all(|(x, y)| lo.get(x, y)));
    }

    #[test]
    fn subtraction_matches_definition((a, b) in arb_gray_pair(), t in any::<u8>()) {
        let m = background_subtract(&a, &b, t).unwrap();
        for y in 0..a.height {
            for x in 0..a.width {
                let d = (a.get(x, y) as i32 - b.get(x, y) as i32).abs();
                prop_assert_eq!(m.get(x, y), d > t as i32);
            }
        }
    }
}
