//! Tuples over a ring, the λ-quiddity test, the gluing sum `⊕` and the
//! dihedral equivalence `~` with its normal form.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::mat2::m_n_unchecked;
use crate::ring::{Elem, Ring, SubsetR};

/// A nonempty tuple of ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTuple {
    ring: Arc<Ring>,
    entries: Vec<Elem>,
}

impl QTuple {
    pub fn new(ring: &Arc<Ring>, entries: Vec<Elem>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if let Some(bad) = entries.iter().find(|e| !ring.contains(**e)) {
            return Err(Error::ElementNotInRing(bad.0.to_string()));
        }
        Ok(QTuple { ring: ring.clone(), entries })
    }

    /// Parses `[a,b,…]` with the ring's element literals.
    pub fn parse(ring: &Arc<Ring>, text: &str) -> Result<Self> {
        QTuple::new(ring, ring.parse_tuple(text)?)
    }

    /// Convenience for integer entries, read as multiples of one.
    pub fn from_ints(ring: &Arc<Ring>, xs: &[i64]) -> Result<Self> {
        QTuple::new(ring, xs.iter().map(|&x| ring.from_int(x)).collect())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Elem> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn format(&self) -> String {
        self.ring.format_tuple(&self.entries)
    }

    /// Errors unless every entry is a member of `subset`.
    pub fn check_subset(&self, subset: &SubsetR) -> Result<()> {
        self.check_ring(subset.ring())?;
        match self.entries.iter().find(|e| !subset.contains(**e)) {
            Some(&e) => Err(Error::NotInSubset(self.ring.format(e))),
            None => Ok(()),
        }
    }

    pub(crate) fn check_ring(&self, other: &Ring) -> Result<()> {
        if *self.ring != *other {
            return Err(Error::RingMismatch(
                self.ring.spec().to_string(),
                other.spec().to_string(),
            ));
        }
        Ok(())
    }

    fn with_entries(&self, entries: Vec<Elem>) -> QTuple {
        QTuple { ring: self.ring.clone(), entries }
    }
}

impl fmt::Display for QTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// The signs `ε` with `M_n = ε Id`. In characteristic 2 both are reported,
/// since `Id = -Id` there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuiddSign {
    pub plus: bool,
    pub minus: bool,
}

impl QuiddSign {
    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::with_capacity(2);
        if self.plus {
            out.push("+");
        }
        if self.minus {
            out.push("-");
        }
        out
    }
}

impl Serialize for QuiddSign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let labels = self.labels();
        let mut seq = s.serialize_seq(Some(labels.len()))?;
        for l in labels {
            seq.serialize_element(l)?;
        }
        seq.end()
    }
}

/// Sign set of `M_n(t)`, or `None` when it is not `±Id`.
pub fn quiddity_sign(t: &QTuple) -> Option<QuiddSign> {
    sign_of(&t.ring, &t.entries)
}

pub(crate) fn sign_of(ring: &Ring, entries: &[Elem]) -> Option<QuiddSign> {
    if entries.is_empty() {
        return None;
    }
    let m = m_n_unchecked(ring, entries);
    let sign = QuiddSign { plus: m.is_identity(ring), minus: m.is_neg_identity(ring) };
    (sign.plus || sign.minus).then_some(sign)
}

pub fn is_quiddity(t: &QTuple) -> bool {
    quiddity_sign(t).is_some()
}

/// `(a_1..a_n) ⊕ (b_1..b_m) = (a_1+b_m, a_2, …, a_{n-1}, a_n+b_1, b_2, …, b_{m-1})`.
pub fn sum_oplus(t: &QTuple, s: &QTuple) -> Result<QTuple> {
    s.check_ring(&t.ring)?;
    for x in [t, s] {
        if x.len() < 2 {
            return Err(Error::TooShort { op: "sum", min: 2, got: x.len() });
        }
    }
    Ok(t.with_entries(oplus(&t.ring, &t.entries, &s.entries)))
}

pub(crate) fn oplus(ring: &Ring, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (n, m) = (a.len(), b.len());
    let mut out = Vec::with_capacity(n + m - 2);
    out.push(ring.add(a[0], b[m - 1]));
    out.extend_from_slice(&a[1..n - 1]);
    out.push(ring.add(a[n - 1], b[0]));
    out.extend_from_slice(&b[1..m - 1]);
    out
}

/// Offset of the lexicographically least rotation.
fn least_rotation(t: &[Elem]) -> usize {
    let n = t.len();
    let mut best = 0;
    for r in 1..n {
        for k in 0..n {
            let (x, y) = (t[(r + k) % n], t[(best + k) % n]);
            if x != y {
                if x < y {
                    best = r;
                }
                break;
            }
        }
    }
    best
}

pub(crate) fn rotate(t: &[Elem], r: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(t.len());
    out.extend_from_slice(&t[r..]);
    out.extend_from_slice(&t[..r]);
    out
}

pub(crate) fn reversed(t: &[Elem]) -> Vec<Elem> {
    t.iter().rev().copied().collect()
}

/// Least rotation of `t` (reflections not allowed).
pub fn rotation_normal_form(t: &[Elem]) -> Vec<Elem> {
    if t.is_empty() {
        return Vec::new();
    }
    rotate(t, least_rotation(t))
}

/// Least sequence among all rotations of `t` and of its reversal.
pub fn normal_form(t: &[Elem]) -> Vec<Elem> {
    let a = rotation_normal_form(t);
    let b = rotation_normal_form(&reversed(t));
    a.min(b)
}

pub fn dihedral_normal_form(t: &QTuple) -> QTuple {
    t.with_entries(normal_form(&t.entries))
}

/// All distinct rotations and reflected rotations of `t`.
pub fn dihedral_images(t: &[Elem]) -> BTreeSet<Vec<Elem>> {
    let rev = reversed(t);
    (0..t.len())
        .flat_map(|r| [rotate(t, r), rotate(&rev, r)])
        .collect()
}

/// The one or two rotation classes (as rotation normal forms) making up the
/// dihedral class of `t`.
pub fn rotation_classes(t: &[Elem]) -> BTreeSet<Vec<Elem>> {
    [rotation_normal_form(t), rotation_normal_form(&reversed(t))]
        .into_iter()
        .collect()
}

/// `t ~ s`; tuples of different lengths are never equivalent.
pub fn equivalent(t: &QTuple, s: &QTuple) -> Result<bool> {
    s.check_ring(&t.ring)?;
    Ok(t.len() == s.len() && normal_form(&t.entries) == normal_form(&s.entries))
}

/// Every λ-quiddity of size `n <= 4`, from the closed forms: nothing of size
/// 1, `(0,0)`, `(1,1,1)` and `(-1,-1,-1)`, and for size 4 the union of
/// `(-a,b,a,-b)` with `ab = 0` and `(a,b,a,b)` with `ab = 2`.
/// Raw tuples, duplicates removed, in index order.
pub fn small_classification(ring: &Arc<Ring>, n: usize) -> Result<Vec<QTuple>> {
    let r: &Ring = ring;
    let mut set: BTreeSet<Vec<Elem>> = BTreeSet::new();
    match n {
        0 => return Err(Error::EmptyTuple),
        1 => {}
        2 => {
            set.insert(vec![r.zero(); 2]);
        }
        3 => {
            set.insert(vec![r.one(); 3]);
            set.insert(vec![r.minus_one(); 3]);
        }
        4 => {
            let two = r.from_int(2);
            for a in r.elements() {
                for b in r.elements() {
                    let ab = r.mul(a, b);
                    if ab == r.zero() {
                        set.insert(vec![r.neg(a), b, a, r.neg(b)]);
                    }
                    if ab == two {
                        set.insert(vec![a, b, a, b]);
                    }
                }
            }
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "closed-form classification exists for sizes 1 to 4 only, got {n}"
            )))
        }
    }
    Ok(set
        .into_iter()
        .map(|entries| QTuple { ring: ring.clone(), entries })
        .collect())
}
