use ipf_track::imaging::BinaryImage;
use ipf_track::likelihood::{multi_camera_weight, overlap_counts, weight, OverlapCounts};
use proptest::prelude::*;

fn counts(c: usize, s: usize, m: usize) -> OverlapCounts {
    OverlapCounts {
        n_common: c,
        n_silhouette_only: s,
        n_model_only: m,
    }
}

fn brute_force(a: &BinaryImage, b: &BinaryImage) -> OverlapCounts {
    let mut out = counts(0, 0, 0);
    for y in 0..a.height() {
        for x in 0..a.width() {
            match (a.get(x, y), b.get(x, y)) {
                (true, true) => out.n_common += 1,
                (true, false) => out.n_silhouette_only += 1,
                (false, true) => out.n_model_only += 1,
                (false, false) => {}
            }
        }
    }
    out
}

fn square(w: usize, h: usize, x0: usize, y0: usize, side: usize) -> BinaryImage {
    BinaryImage::from_fn(w, h, |x, y| (x0..x0 + side).contains(&x) && (y0..y0 + side).contains(&y))
}

#[test]
fn count_examples() {
    let a = square(40, 30, 3, 4, 10);
    assert_eq!(overlap_counts(&a, &a).unwrap(), counts(100, 0, 0));
    let b = square(40, 30, 25, 15, 7);
    assert_eq!(overlap_counts(&a, &b).unwrap(), counts(0, 100, 49));
    let shifted = square(40, 30, 8, 4, 10);
    let got = overlap_counts(&a, &shifted).unwrap();
    assert_eq!(got, counts(50, 50, 50));
    assert_eq!(got, brute_force(&a, &shifted));
}

#[test]
fn dimension_mismatch_is_an_error() {
    assert!(overlap_counts(&BinaryImage::new(10, 10), &BinaryImage::new(10, 11)).is_err());
}

#[test]
fn weight_examples() {
    assert_eq!(weight(&counts(100, 50, 50)), 1.0);
    assert_eq!(weight(&counts(0, 30, 70)), 0.0);
    assert_eq!(weight(&counts(100, 0, 0)), 100.0);
    assert_eq!(weight(&counts(0, 0, 0)), 0.0);
}

#[test]
fn multi_camera_examples() {
    assert!((multi_camera_weight(&[0.5, 0.7]).unwrap() - 0.6).abs() < 1e-15);
    assert_eq!(multi_camera_weight(&[0.42]).unwrap(), 0.42);
    assert!((multi_camera_weight(&[0.0, 0.0, 0.9]).unwrap() - 0.3).abs() < 1e-15);
    assert!(multi_camera_weight(&[]).is_err());
}

fn arb_mask(w: usize, h: usize) -> impl Strategy<Value = BinaryImage> {
    prop::collection::vec(any::<bool>(), w * h).prop_map(move |bits| BinaryImage::from_fn(w, h, |x, y| bits[y * w + x]))
}

fn arb_pair() -> impl Strategy<Value = (BinaryImage, BinaryImage)> {
    (1usize..90, 1usize..40).prop_flat_map(|(w, h)| (arb_mask(w, h), arb_mask(w, h)))
}

proptest! {
    #[test]
    fn counts_match_brute_force((a, b) in arb_pair()) {
        let got = overlap_counts(&a, &b).unwrap();
        let want = brute_force(&a, &b);
        prop_assert_eq!(got, want);
        prop_assert_eq!(got.n_common + got.n_silhouette_only, a.count_ones());
        prop_assert_eq!(got.n_common + got.n_model_only, b.count_ones());
        let w = want.n_common as f64 / (want.n_silhouette_only + want.n_model_only).max(1) as f64;
        prop_assert!((weight(&got) - w).abs() <= 1e-12);
    }

    #[test]
    fn weight_is_symmetric((a, b) in arb_pair()) {
        let ab = weight(&overlap_counts(&a, &b).unwrap());
        let ba = weight(&overlap_counts(&b, &a).unwrap());
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn common_pixels_help_and_model_only_pixels_hurt((a, b) in arb_pair(), px in any::<prop::sample::Index>()) {
        let free: Vec<_> = (0..a.height())
            .flat_map(|y| (0..a.width()).map(move |x| (x, y)))
            .filter(|&(x, y)| !a.get(x, y) && !b.get(x, y))
            .collect();
        prop_assume!(!free.is_empty());
        let (x, y) = free[px.index(free.len())];
        let base = weight(&overlap_counts(&a, &b).unwrap());

        let (mut a2, mut b2) = (a.clone(), b.clone());
        a2.set(x, y, true);
        b2.set(x, y, true);
        prop_assert!(weight(&overlap_counts(&a2, &b2).unwrap()) >= base);

        let mut b3 = b.clone();
        b3.set(x, y, true);
        prop_assert!(weight(&overlap_counts(&a, &b3).unwrap()) <= base);
    }
}
