mod common;

use ::quiddity::ring::{validate_submagma, RingConfig, RingSpec};
use ::quiddity::{Elem, Ring};
use common::{ring, SMALL_RINGS};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AXIOM_RINGS: [&str; 8] = [
    "Z/12",
    "Z/2[x]/(x^3+x+1)",
    "Z/5[x]/(x^2+2)",
    "Z/2 x Z/2[x]/(x^2+x+1)",
    "Z/3 x Z/3",
    "Z/2[x]/(x^5+x^2+1)",
    "Z/4 x Z/9",
    "Z/7[x]/(x^2)",
];

#[test]
fn ring_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in AXIOM_RINGS.iter().chain(SMALL_RINGS.iter()) {
        let r = ring(spec);
        let n = r.size() as u32;
        for _ in 0..1000 {
            let [a, b, c] = [0; 3].map(|_| Elem(rng.gen_range(0..n)));
            assert_eq!(r.add(a, b), r.add(b, a), "{spec}");
            assert_eq!(r.mul(a, b), r.mul(b, a), "{spec}");
            assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)), "{spec}");
            assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)), "{spec}");
            assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)), "{spec}");
            assert_eq!(r.mul(r.one(), a), a);
            assert_eq!(r.add(a, r.neg(a)), r.zero());
        }
    }
}

#[test]
fn table_free_arithmetic_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in AXIOM_RINGS {
        let s: RingSpec = spec.parse().unwrap();
        let tabled = Ring::build(&s, &RingConfig::default()).unwrap();
        let plain = Ring::build(&s, &RingConfig { table_threshold: 0, ..RingConfig::default() }).unwrap();
        assert!(!plain.has_tables());
        for _ in 0..500 {
            let [a, b] = [0; 2].map(|_| Elem(rng.gen_range(0..tabled.size() as u32)));
            assert_eq!(tabled.mul(a, b), plain.mul(a, b));
            assert_eq!(tabled.add(a, b), plain.add(a, b));
        }
    }
}

#[test]
fn characteristics() {
    for n in 2..=32u64 {
        assert_eq!(ring(&format!("Z/{n}")).characteristic(), n);
    }
    for (spec, lcm) in [("Z/4 x Z/6", 12), ("Z/2 x Z/2", 2), ("Z/3 x Z/5 x Z/2", 30), ("Z/2[x]/(x^2+x+1) x Z/9", 18)] {
        assert_eq!(ring(spec).characteristic(), lcm, "{spec}");
    }
}

#[test]
fn literals_round_trip() {
    for spec in AXIOM_RINGS.iter().chain(SMALL_RINGS.iter()).chain(["Z/256", "Z/2[x]/(x^8+x^4+x^3+x+1)"].iter()) {
        let r = ring(spec);
        if r.size() > 256 {
            continue;
        }
        for e in r.elements() {
            assert_eq!(r.parse_elem(&r.format(e)).unwrap(), e, "{spec}");
        }
    }
}

fn closure(r: &Ring, gens: &[Elem]) -> Vec<Elem> {
    let mut members: Vec<Elem> = gens.to_vec();
    loop {
        let mut grown = members.clone();
        for &a in &members {
            for &b in &members {
                let s = r.add(a, b);
                if !grown.contains(&s) {
                    grown.push(s);
                }
            }
        }
        if grown.len() == members.len() {
            return members;
        }
        members = grown;
    }
}

proptest! {
    #[test]
    fn submagmas_contain_zero(idx in 0usize..SMALL_RINGS.len(), raw in prop::collection::vec(0u32..9, 1..4)) {
        let r = ring(SMALL_RINGS[idx]);
        let gens: Vec<Elem> = raw.iter().map(|&g| Elem(g % r.size() as u32)).collect();
        let s = validate_submagma(&r, &closure(&r, &gens)).unwrap();
        prop_assert!(s.contains(r.zero()));
    }

    #[test]
    fn open_sets_are_rejected(idx in 0usize..SMALL_RINGS.len()) {
        let r = ring(SMALL_RINGS[idx]);
        // {1} is never closed: 1 + 1 = 1 would force 1 = 0
        prop_assert!(validate_submagma(&r, &[r.one()]).is_err());
    }
}
