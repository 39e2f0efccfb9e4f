mod common;

use ::quiddity::irreducible::{
    continuant_windows_by_pigeonhole, default_coset_system, find_continuant_value, ContinuantTarget,
};
use ::quiddity::quiddity::small_classification;
use ::quiddity::search::{enumerate_quiddities, SearchOptions};
use ::quiddity::{
    brute_force_reducible, build_coset_system, continuant, decompose_via_cosets, find_reduction_window,
    is_irreducible, validate_submagma, CosetKind, Elem, QTuple, Ring, SubsetR,
};
use common::{glued_quiddity, ring, SMALL_RINGS};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quiddities(r: &std::sync::Arc<Ring>, n: usize, subset: Option<&SubsetR>) -> Vec<QTuple> {
    enumerate_quiddities(r, n, subset, false, &SearchOptions::default())
        .unwrap()
        .tuples
        .into_iter()
        .map(|t| QTuple::new(r, t).unwrap())
        .collect()
}

#[test]
fn window_scan_agrees_with_the_definition() {
    let z4 = ring("Z/4");
    let even = validate_submagma(&z4, &[Elem(0), Elem(2)]).unwrap();
    let cases = [(ring("Z/4"), None), (ring("Z/5"), None), (z4.clone(), Some(&even))];
    for (r, subset) in &cases {
        for n in 3..=7 {
            for t in quiddities(r, n, *subset) {
                let w = find_reduction_window(&t, *subset).unwrap();
                assert_eq!(w.is_some(), brute_force_reducible(&t, *subset).unwrap(), "{t} over {:?}", subset);
                if let Some(w) = w {
                    w.verify(t.entries(), r, *subset).unwrap();
                }
            }
        }
    }
}

#[test]
fn size_four_criterion() {
    for spec in SMALL_RINGS {
        let r = ring(spec);
        for t in small_classification(&r, 4).unwrap() {
            let has_unit = t.entries().iter().any(|&e| r.is_unit_sign(e));
            assert_eq!(is_irreducible(&t, None).unwrap(), !has_unit, "{spec} {t}");
        }
    }
}

#[test]
fn size_five_and_up_with_zero_or_unit_is_reducible() {
    let r = ring("Z/4");
    for n in 5..=8 {
        for t in quiddities(&r, n, None) {
            if t.entries().iter().any(|&e| e == r.zero() || r.is_unit_sign(e)) {
                assert!(!is_irreducible(&t, None).unwrap(), "{t}");
            }
        }
    }
}

#[test]
fn coset_decomposition_on_glued_quiddities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for spec in ["Z/5", "Z/4", "Z/2 x Z/2", "Z/2[x]/(x^2+x+1)", "Z/3[x]/(x^2+1)"] {
        let r = ring(spec);
        let cs = default_coset_system(&r).unwrap();
        for _ in 0..1000 {
            let len = rng.gen_range(cs.threshold()..cs.threshold() + 12);
            let t = glued_quiddity(&r, len, &mut rng);
            let w = decompose_via_cosets(&t, &cs).unwrap();
            w.verify(t.entries(), &r, None).unwrap();
        }
    }
}

#[test]
fn prime_subring_system_on_f9() {
    let r = ring("Z/3[x]/(x^2+1)");
    let cs = build_coset_system(&r, CosetKind::PrimeSubring).unwrap();
    assert_eq!(cs.threshold(), 33);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let t = glued_quiddity(&r, 33, &mut rng);
        decompose_via_cosets(&t, &cs).unwrap().verify(t.entries(), &r, None).unwrap();
    }
}

proptest! {
    #[test]
    fn witnesses_recompose(idx in 0usize..SMALL_RINGS.len(), len in 4usize..20, seed in any::<u64>()) {
        let r = ring(SMALL_RINGS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = glued_quiddity(&r, len, &mut rng);
        if let Some(w) = find_reduction_window(&t, None).unwrap() {
            prop_assert!(w.verify(t.entries(), &r, None).is_ok());
        }
    }

    #[test]
    fn long_tuples_hit_every_small_continuant(raw in prop::collection::vec(0i64..3, 73)) {
        let r = ring("Z/3");
        let t = QTuple::from_ints(&r, &raw).unwrap();
        for target in [ContinuantTarget::Zero, ContinuantTarget::One, ContinuantTarget::MinusOne] {
            let w = find_continuant_value(&t, target).unwrap();
            let window = &t.entries()[w.start - 1..w.start - 1 + w.length];
            prop_assert_eq!(continuant(&r, window), target.elem(&r));
        }
        let found = continuant_windows_by_pigeonhole(&t, 24).unwrap();
        for (w, target) in found.iter().zip([ContinuantTarget::One, ContinuantTarget::MinusOne, ContinuantTarget::Zero]) {
            let window = &t.entries()[w.start - 1..w.start - 1 + w.length];
            prop_assert_eq!(continuant(&r, window), target.elem(&r));
        }
    }
}
