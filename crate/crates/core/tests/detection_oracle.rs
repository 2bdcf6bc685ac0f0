mod common;

use lac_core::lattice::{
    extremal_construction, find_yk_copy, find_yk_prime_copy, is_admissible, CopyKind,
};
use lac_core::SetFamily;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn detectors_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut positives = 0;
    for round in 0..300 {
        let n = 2 + round % 5;
        let k = 2 + (round / 5) % 3;
        let f = common::random_family(&mut rng, n, k, 18);
        let y = find_yk_copy(&f, k);
        let yp = find_yk_prime_copy(&f, k);
        assert_eq!(
            y.is_some(),
            common::brute_has_y(&f, k),
            "Y n={n} k={k} {:?}",
            f.lines()
        );
        assert_eq!(
            yp.is_some(),
            common::brute_has_y_prime(&f, k),
            "Y' n={n} k={k} {:?}",
            f.lines()
        );
        positives += usize::from(!is_admissible(&f, k));
        if let Some(c) = y {
            assert_eq!(c.kind, CopyKind::Y);
            assert!(c.is_valid_in(&f, k));
        }
        if let Some(c) = yp {
            assert_eq!(c.kind, CopyKind::YPrime);
            assert!(c.is_valid_in(&f, k));
        }
    }
    // both outcomes are well represented
    assert!((60..240).contains(&positives), "{positives}");
}

#[test]
fn complement_swaps_the_two_posets() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let f = common::random_family(&mut rng, 5, 3, 18);
        let c = f.complement();
        assert_eq!(
            find_yk_copy(&f, 3).is_some(),
            find_yk_prime_copy(&c, 3).is_some()
        );
        assert_eq!(is_admissible(&f, 3), is_admissible(&c, 3));
    }
}

#[test]
fn construction_has_no_copy_by_brute_force() {
    for (n, k) in [(4, 3), (4, 4), (5, 3), (5, 4)] {
        let f = extremal_construction(n, k).unwrap();
        assert!(!common::brute_has_y(&f, k));
        assert!(!common::brute_has_y_prime(&f, k));
    }
}

#[test]
fn power_set_contains_both() {
    let f = SetFamily::power_set(4).unwrap();
    for k in 2..=4 {
        assert!(find_yk_copy(&f, k).is_some());
        assert!(find_yk_prime_copy(&f, k).is_some());
    }
}
