#![allow(dead_code)]

use std::sync::Arc;

use ::quiddity::quiddity::small_classification;
use ::quiddity::{ring_from_str, sum_oplus, Elem, QTuple, Ring};
use rand::seq::SliceRandom;
use rand::Rng;

/// Rings with at most 9 elements used by the exhaustive checks.
pub const SMALL_RINGS: [&str; 13] = [
    "Z/2",
    "Z/3",
    "Z/4",
    "Z/5",
    "Z/6",
    "Z/7",
    "Z/8",
    "Z/9",
    "Z/2 x Z/2",
    "Z/2[x]/(x^2+x+1)",
    "Z/2[x]/(x^2)",
    "Z/2 x Z/4",
    "Z/3[x]/(x^2+1)",
];

pub fn ring(spec: &str) -> Arc<Ring> {
    ring_from_str(spec).unwrap()
}

/// All tuples of length `n` over the ring, in index order.
pub fn all_tuples(r: &Ring, n: usize) -> Vec<Vec<Elem>> {
    let elems: Vec<Elem> = r.elements().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| elems.iter().map(move |&e| [t.clone(), vec![e]].concat()))
            .collect();
    }
    out
}

fn shuffle_dihedral<R: Rng>(t: &QTuple, rng: &mut R) -> QTuple {
    let mut e = t.entries().to_vec();
    let k = rng.gen_range(0..e.len());
    e.rotate_left(k);
    if rng.gen_bool(0.5) {
        e.reverse();
    }
    QTuple::new(t.ring(), e).unwrap()
}

/// A λ-quiddity of length at least `min_len`, glued from sizes 3 and 4.
pub fn glued_quiddity<R: Rng>(r: &Arc<Ring>, min_len: usize, rng: &mut R) -> QTuple {
    let base: Vec<QTuple> = (3..=4).flat_map(|n| small_classification(r, n).unwrap()).collect();
    let mut t = base.choose(rng).unwrap().clone();
    while t.len() < min_len {
        let s = shuffle_dihedral(base.choose(rng).unwrap(), rng);
        t = if rng.gen_bool(0.5) { sum_oplus(&t, &s).unwrap() } else { sum_oplus(&s, &t).unwrap() };
        t = shuffle_dihedral(&t, rng);
    }
    t
}
