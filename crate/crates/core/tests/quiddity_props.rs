mod common;

use ::quiddity::quiddity::{dihedral_images, small_classification};
use ::quiddity::{is_quiddity, normal_form, quiddity_sign, sum_oplus, Elem, QTuple};
use common::{all_tuples, glued_quiddity, ring, SMALL_RINGS};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn sum_with_a_quiddity_preserves_the_property_over_z3() {
    let r = ring("Z/3");
    let tuples: Vec<QTuple> = (2..=5)
        .flat_map(|n| all_tuples(&r, n))
        .map(|t| QTuple::new(&r, t).unwrap())
        .collect();
    let quiddities: Vec<&QTuple> = tuples.iter().filter(|t| is_quiddity(t)).collect();
    assert!(!quiddities.is_empty());
    for t in &tuples {
        for s in &quiddities {
            assert_eq!(is_quiddity(&sum_oplus(t, s).unwrap()), is_quiddity(t));
            assert_eq!(is_quiddity(&sum_oplus(s, t).unwrap()), is_quiddity(t));
        }
    }
}

proptest! {
    #[test]
    fn sum_with_a_quiddity_over_z8(raw in prop::collection::vec(0i64..8, 2..9), seed in any::<u64>()) {
        let r = ring("Z/8");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = glued_quiddity(&r, 3, &mut rng);
        let t = QTuple::from_ints(&r, &raw).unwrap();
        prop_assert_eq!(is_quiddity(&sum_oplus(&t, &s).unwrap()), is_quiddity(&t));
    }
}

#[test]
fn sign_is_invariant_under_equivalence_over_z4() {
    let r = ring("Z/4");
    for n in 1..=6 {
        for t in all_tuples(&r, n) {
            let sign = quiddity_sign(&QTuple::new(&r, t.clone()).unwrap());
            for img in dihedral_images(&t) {
                assert_eq!(quiddity_sign(&QTuple::new(&r, img).unwrap()), sign);
            }
        }
    }
}

#[test]
fn small_classification_matches_brute_force() {
    for spec in SMALL_RINGS {
        let r = ring(spec);
        for n in 1..=4 {
            let mut want: Vec<Vec<Elem>> = all_tuples(&r, n)
                .into_iter()
                .filter(|t| is_quiddity(&QTuple::new(&r, t.clone()).unwrap()))
                .collect();
            want.sort();
            let mut got: Vec<Vec<Elem>> =
                small_classification(&r, n).unwrap().into_iter().map(QTuple::into_entries).collect();
            got.sort();
            assert_eq!(got, want, "{spec} n={n}");
        }
    }
}

#[test]
fn z4_size_four_count() {
    // (-a,b,a,-b) with ab = 0 gives 8 tuples and (a,b,a,b) with ab = 2 gives 4
    assert_eq!(small_classification(&ring("Z/4"), 4).unwrap().len(), 12);
}

proptest! {
    #[test]
    fn normal_form_is_a_class_invariant(raw in prop::collection::vec(0i64..5, 1..9), k in 0usize..9, flip in any::<bool>()) {
        let r = ring("Z/5");
        let t: Vec<Elem> = raw.iter().map(|&x| r.from_int(x)).collect();
        let mut u = t.clone();
        u.rotate_left(k % t.len());
        if flip {
            u.reverse();
        }
        prop_assert_eq!(normal_form(&t), normal_form(&u));
        prop_assert!(dihedral_images(&t).contains(&normal_form(&t)));
    }
}
