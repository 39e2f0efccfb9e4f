//! Reducibility of λ-quiddities.
//!
//! A λ-quiddity `t` of size `n` is reducible when some rotation or reflection
//! of it splits as `(a_1..a_m) ⊕ (c_1..c_l)` with `m, l >= 3` and `c` a
//! λ-quiddity. The inner part `w = (c_2..c_{l-1})` then sits in `t` as a
//! contiguous cyclic window of length `1..=n-3`, and `c` being a λ-quiddity
//! forces `K(w) = ±1`. Conversely a window with `K(w) = ε = ±1` extends to the
//! λ-quiddity `(x, w, y)` with `x = ε K(w_2..)`, `y = ε K(..w_{l-3})`, and the
//! borders of the left factor are then forced. Over a submagma the forced
//! borders must also be members.
//!
//! Three routes are provided:
//!
//! * [`find_reduction_window`]: the window scan above, `O(n^2)`.
//! * [`brute_force_reducible`]: the definition taken literally, searching
//!   every split and every border pair. Oracle scale only.
//! * [`decompose_via_cosets`]: pigeonholing the prefixes `M_k` into right
//!   cosets of a subgroup, which yields a window whenever `n` exceeds the
//!   coset index by 3.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mat2::{continuant, sl2_order_auto, sl2_with_entries, Mat2};
use crate::quiddity::{oplus, reversed, rotate, sign_of, QTuple};
use crate::ring::{Elem, Ring, SubsetR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn apply(self, ring: &Ring, e: Elem) -> Elem {
        match self {
            Sign::Plus => e,
            Sign::Minus => ring.neg(e),
        }
    }

    /// `Plus` for `1_A` (also when `1_A = -1_A`), `Minus` for `-1_A`.
    pub fn of_unit(ring: &Ring, e: Elem) -> Option<Sign> {
        if e == ring.one() {
            Some(Sign::Plus)
        } else if e == ring.minus_one() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Proof that a λ-quiddity is reducible.
///
/// Take the input, reverse it when `reflected`, then rotate it left by
/// `rotation`: the result equals `left ⊕ right` entrywise. The window
/// `(c_2..c_{l-1})` starts at the 1-based position `window_start` of the
/// (possibly reversed) input, `right = (c1, window…, cl)` satisfies
/// `M_l(right) = alpha·Id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionWitness {
    pub reflected: bool,
    pub rotation: usize,
    pub window_start: usize,
    pub window_len: usize,
    pub alpha: Sign,
    pub c1: Elem,
    pub cl: Elem,
    pub left: Vec<Elem>,
    pub right: Vec<Elem>,
}

impl ReductionWitness {
    pub fn to_json(&self, ring: &Ring) -> Value {
        let fmt = |xs: &[Elem]| xs.iter().map(|&e| ring.format(e)).collect::<Vec<_>>();
        json!({
            "reflected": self.reflected,
            "rotation": self.rotation,
            "window": [self.window_start, self.window_len],
            "alpha": self.alpha.label(),
            "c1": ring.format(self.c1),
            "cl": ring.format(self.cl),
            "left": fmt(&self.left),
            "right": fmt(&self.right),
        })
    }

    /// Checks every stated property of the witness against `t`.
    pub fn verify(&self, t: &[Elem], ring: &Ring, subset: Option<&SubsetR>) -> std::result::Result<(), String> {
        let n = t.len();
        let (m, l) = (self.left.len(), self.right.len());
        if m < 3 || l < 3 || m + l - 2 != n {
            return Err(format!("bad lengths m = {m}, l = {l} for n = {n}"));
        }
        if l != self.window_len + 2 || self.window_start == 0 || self.window_start > n {
            return Err("window does not match the right factor".into());
        }
        let oriented = if self.reflected { reversed(t) } else { t.to_vec() };
        if rotate(&oriented, self.rotation % n) != oplus(ring, &self.left, &self.right) {
            return Err("recomposition mismatch".into());
        }
        let window: Vec<Elem> = (0..self.window_len)
            .map(|k| oriented[(self.window_start - 1 + k) % n])
            .collect();
        if window != self.right[1..l - 1] {
            return Err("window entries differ from the right factor".into());
        }
        let sign = sign_of(ring, &self.right).ok_or("right factor is not a lambda-quiddity")?;
        let alpha_ok = match self.alpha {
            Sign::Plus => sign.plus,
            Sign::Minus => sign.minus,
        };
        if !alpha_ok {
            return Err("alpha is not the sign of the right factor".into());
        }
        let minus_alpha = self.alpha.negate();
        if self.right[0] != self.c1
            || self.right[l - 1] != self.cl
            || self.c1 != minus_alpha.apply(ring, continuant(ring, &self.right[2..l - 1]))
            || self.cl != minus_alpha.apply(ring, continuant(ring, &self.right[1..l - 2]))
        {
            return Err("border entries do not follow from the window".into());
        }
        if let Some(s) = subset {
            if self.left.iter().chain(&self.right).any(|&e| !s.contains(e)) {
                return Err("factor leaves the subset".into());
            }
        }
        Ok(())
    }
}

/// Builds the witness for the cyclic window `u[start..start+len]` when its
/// continuant is `±1` and, over a subset, the forced entries are members.
pub(crate) fn witness_from_window(
    ring: &Ring,
    u: &[Elem],
    reflected: bool,
    start: usize,
    len: usize,
    subset: Option<&SubsetR>,
) -> Option<ReductionWitness> {
    let n = u.len();
    if len == 0 || len + 3 > n {
        return None;
    }
    let w: Vec<Elem> = (0..len).map(|k| u[(start + k) % n]).collect();
    let eps = Sign::of_unit(ring, continuant(ring, &w))?;
    let c1 = eps.apply(ring, continuant(ring, &w[1..]));
    let cl = eps.apply(ring, continuant(ring, &w[..len - 1]));
    let rotation = (start + len) % n;
    let rotated = rotate(u, rotation);
    let m = n - len;
    let a1 = ring.sub(rotated[0], cl);
    let am = ring.sub(rotated[m - 1], c1);
    if let Some(s) = subset {
        if ![c1, cl, a1, am].iter().all(|&e| s.contains(e)) {
            return None;
        }
    }
    let mut left = Vec::with_capacity(m);
    left.push(a1);
    left.extend_from_slice(&rotated[1..m - 1]);
    left.push(am);
    let mut right = Vec::with_capacity(len + 2);
    right.push(c1);
    right.extend_from_slice(&w);
    right.push(cl);
    Some(ReductionWitness {
        reflected,
        rotation,
        window_start: start + 1,
        window_len: len,
        alpha: eps.negate(),
        c1,
        cl,
        left,
        right,
    })
}

/// Window scan over `u` only (no reflection, no validation).
pub(crate) fn scan_windows(ring: &Ring, u: &[Elem], reflected: bool, subset: Option<&SubsetR>) -> Option<ReductionWitness> {
    let n = u.len();
    if n < 4 {
        return None;
    }
    let max_len = n - 3;
    let (one, minus_one) = (ring.one(), ring.minus_one());
    for start in 0..n {
        let (mut prev, mut cur) = (ring.zero(), one);
        for len in 1..=max_len {
            let a = u[(start + len - 1) % n];
            let next = ring.sub(ring.mul(a, cur), prev);
            prev = cur;
            cur = next;
            if cur == one || cur == minus_one {
                if let Some(w) = witness_from_window(ring, u, reflected, start, len, subset) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn check_quiddity_input(t: &QTuple, subset: Option<&SubsetR>, min_len: usize) -> Result<()> {
    if let Some(s) = subset {
        t.check_subset(s)?;
    }
    if t.len() < min_len {
        return Err(Error::TooShort { op: "reducibility check", min: min_len, got: t.len() });
    }
    if sign_of(t.ring(), t.entries()).is_none() {
        return Err(Error::NotQuiddity(t.format()));
    }
    Ok(())
}

/// Scans every cyclic window of length `1..=n-3` of `t`, then of its
/// reversal, for a continuant `±1` and returns the first complete witness.
pub fn find_reduction_window(t: &QTuple, subset: Option<&SubsetR>) -> Result<Option<ReductionWitness>> {
    check_quiddity_input(t, subset, 3)?;
    Ok(reduction_window_unchecked(t.ring(), t.entries(), subset))
}

pub(crate) fn reduction_window_unchecked(ring: &Ring, u: &[Elem], subset: Option<&SubsetR>) -> Option<ReductionWitness> {
    scan_windows(ring, u, false, subset).or_else(|| scan_windows(ring, &reversed(u), true, subset))
}

/// Sizes 1 and 2 never count as irreducible.
pub fn is_irreducible(t: &QTuple, subset: Option<&SubsetR>) -> Result<bool> {
    check_quiddity_input(t, subset, 1)?;
    if t.len() <= 2 {
        return Ok(false);
    }
    Ok(reduction_window_unchecked(t.ring(), t.entries(), subset).is_none())
}

/// Largest ring accepted by [`brute_force_reducible`].
pub const BRUTE_FORCE_MAX_RING: usize = 16;
/// Longest tuple accepted by [`brute_force_reducible`].
pub const BRUTE_FORCE_MAX_LEN: usize = 10;

/// The definition of reducibility, searched exhaustively: every rotation of
/// `t` and of its reversal, every split `m + l - 2 = n` with `m, l >= 3`, and
/// every pair of borders `c_1, c_l` from the ring (or subset).
pub fn brute_force_reducible(t: &QTuple, subset: Option<&SubsetR>) -> Result<bool> {
    let ring = t.ring();
    if ring.size() > BRUTE_FORCE_MAX_RING {
        return Err(Error::ScaleGuard {
            what: "brute-force reducibility",
            size: ring.size(),
            max: BRUTE_FORCE_MAX_RING,
        });
    }
    if t.len() > BRUTE_FORCE_MAX_LEN {
        return Err(Error::ScaleGuard {
            what: "brute-force reducibility (tuple length)",
            size: t.len(),
            max: BRUTE_FORCE_MAX_LEN,
        });
    }
    check_quiddity_input(t, subset, 3)?;
    let n = t.len();
    let pool: Vec<Elem> = match subset {
        Some(s) => s.members().to_vec(),
        None => ring.elements().collect(),
    };
    let member = |e: Elem| subset.map_or(true, |s| s.contains(e));
    let rev = reversed(t.entries());
    for base in [t.entries(), &rev[..]] {
        for r in 0..n {
            let rep = rotate(base, r);
            for l in 3..n {
                let m = n - l + 2;
                let inner = &rep[m..];
                for &c1 in &pool {
                    for &cl in &pool {
                        let mut c = Vec::with_capacity(l);
                        c.push(c1);
                        c.extend_from_slice(inner);
                        c.push(cl);
                        if sign_of(ring, &c).is_none() {
                            continue;
                        }
                        let mut a = Vec::with_capacity(m);
                        a.push(ring.sub(rep[0], cl));
                        a.extend_from_slice(&rep[1..m - 1]);
                        a.push(ring.sub(rep[m - 1], c1));
                        if a.iter().all(|&e| member(e)) && oplus(ring, &a, &c) == rep {
                            return Ok(true);
                        }
                    }
                }
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetKind {
    /// `H = {±[[1, x], [0, 1]]}`.
    Unitriangular,
    /// `H = SL_2` of the prime subring; needs characteristic 2 or 3.
    PrimeSubring,
}

/// Right cosets `H·M` of a subgroup `H` of `SL_2(A)`.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    ring: Arc<Ring>,
    kind: CosetKind,
    /// Materialized only for the prime-subring kind.
    subgroup: Vec<Mat2>,
    sl2_order: u64,
    index: u64,
}

pub fn build_coset_system(ring: &Arc<Ring>, kind: CosetKind) -> Result<CosetSystem> {
    let (sl2, _) = sl2_order_auto(ring)?;
    let (subgroup, order) = match kind {
        CosetKind::Unitriangular => {
            let h = if ring.characteristic() == 2 { ring.size() } else { 2 * ring.size() };
            (Vec::new(), h as u64)
        }
        CosetKind::PrimeSubring => {
            let p = ring.characteristic();
            if p != 2 && p != 3 {
                return Err(Error::Unsupported(format!(
                    "prime-subring cosets need characteristic 2 or 3 (nonzero prime-subring \
                     elements must be ±1), got {p}"
                )));
            }
            let entries: Vec<Elem> = (0..p as i64).map(|k| ring.from_int(k)).collect();
            let h = sl2_with_entries(ring, &entries);
            let order = h.len() as u64;
            (h, order)
        }
    };
    Ok(CosetSystem { ring: ring.clone(), kind, subgroup, sl2_order: sl2, index: sl2 / order })
}

impl CosetSystem {
    pub fn kind(&self) -> CosetKind {
        self.kind
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Number of right cosets.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn sl2_order(&self) -> u64 {
        self.sl2_order
    }

    /// Length from which [`decompose_via_cosets`] is guaranteed to succeed.
    pub fn threshold(&self) -> usize {
        (self.index as usize + 3).max(5)
    }

    /// The elements of `H`.
    pub fn subgroup(&self) -> Vec<Mat2> {
        match self.kind {
            CosetKind::PrimeSubring => self.subgroup.clone(),
            CosetKind::Unitriangular => {
                let r = &*self.ring;
                let (z, o, mo) = (r.zero(), r.one(), r.minus_one());
                let mut out: Vec<Mat2> = r.elements().map(|x| Mat2::new(o, x, z, o)).collect();
                if o != mo {
                    out.extend(r.elements().map(|x| Mat2::new(mo, x, z, mo)));
                }
                out
            }
        }
    }

    /// Equal keys exactly when `M' M^{-1} ∈ H`.
    pub fn coset_key(&self, m: &Mat2) -> u128 {
        let r = &*self.ring;
        match self.kind {
            CosetKind::Unitriangular => {
                // left multiplication by ±unitriangular fixes the bottom row up to sign
                let pos = ((m.a21.0 as u128) << 32) | m.a22.0 as u128;
                let neg = ((r.neg(m.a21).0 as u128) << 32) | r.neg(m.a22).0 as u128;
                pos.min(neg)
            }
            CosetKind::PrimeSubring => self
                .subgroup
                .iter()
                .map(|h| h.mul(r, m).key())
                .min()
                .expect("subgroup contains the identity"),
        }
    }
}

/// The system with the smaller index among those that apply to `ring`.
pub fn default_coset_system(ring: &Arc<Ring>) -> Result<CosetSystem> {
    let uni = build_coset_system(ring, CosetKind::Unitriangular)?;
    let p = ring.characteristic();
    if (p == 2 || p == 3) && ring.size() as u64 > p {
        let prime = build_coset_system(ring, CosetKind::PrimeSubring)?;
        if prime.index < uni.index {
            return Ok(prime);
        }
    }
    Ok(uni)
}

/// Pigeonholes the cosets `H·M_k(a_1..a_k)`, `k = 1..=n-2`. A collision
/// `i < j` puts `M_{j-i}(a_{i+1..j})` in `H`, which pins down a window with
/// continuant `±1`:
///
/// * unitriangular `H`: the window `a_{i+1..j}` itself;
/// * prime-subring `H`: for `j - i = 1` the entry is `0` or `±1`; otherwise
///   at least one of `K(a_{i+1..j})`, `K(a_{i+2..j})`, `K(a_{i+1..j-1})` is
///   nonzero, hence `±1`.
pub fn decompose_via_cosets(t: &QTuple, cs: &CosetSystem) -> Result<ReductionWitness> {
    t.check_ring(cs.ring())?;
    check_quiddity_input(t, None, 3)?;
    let ring = &**cs.ring();
    let u = t.entries();
    let n = u.len();
    let mut seen: HashMap<u128, Vec<usize>> = HashMap::new();
    let mut m = Mat2::identity(ring);
    for j in 1..=n.saturating_sub(2) {
        m = m.push_entry(ring, u[j - 1]);
        let key = cs.coset_key(&m);
        let earlier = seen.entry(key).or_default();
        for &i in earlier.iter() {
            if let Some(w) = witness_for_collision(ring, cs.kind, u, i, j) {
                return Ok(w);
            }
        }
        earlier.push(j);
    }
    if n >= cs.threshold() {
        return Err(Error::BoundViolation { n, bound: cs.threshold() - 1 });
    }
    Err(Error::NoGuarantee { len: n, threshold: cs.threshold() })
}

fn witness_for_collision(ring: &Ring, kind: CosetKind, u: &[Elem], i: usize, j: usize) -> Option<ReductionWitness> {
    let n = u.len();
    let d = j - i;
    let candidates: Vec<(usize, usize)> = match kind {
        CosetKind::Unitriangular => vec![(i, d)],
        CosetKind::PrimeSubring if d == 1 => {
            let a = u[i];
            if ring.is_unit_sign(a) {
                vec![(i, 1)]
            } else if a == ring.zero() && n >= 5 {
                // (.., p, 0, q, r_1..r_{n-3}) ~ (.., p+q, r_1..) and the inner
                // window r_1..r_{n-4} of that shorter quiddity has K = ±1
                vec![((i + 2) % n, n - 4)]
            } else {
                vec![]
            }
        }
        CosetKind::PrimeSubring => vec![(i, d), (i + 1, d - 1), (i, d - 1)],
    };
    candidates
        .into_iter()
        .find_map(|(start, len)| witness_from_window(ring, u, false, start, len, None))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuantTarget {
    Zero,
    One,
    MinusOne,
}

impl ContinuantTarget {
    pub fn elem(self, ring: &Ring) -> Elem {
        match self {
            ContinuantTarget::Zero => ring.zero(),
            ContinuantTarget::One => ring.one(),
            ContinuantTarget::MinusOne => ring.minus_one(),
        }
    }
}

/// A non-cyclic window, 1-based: `K_length(a_start, …, a_{start+length-1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuantWindow {
    pub length: usize,
    pub start: usize,
}

/// First window (shortest, then leftmost) whose continuant equals `target`.
pub fn find_continuant_value(t: &QTuple, target: ContinuantTarget) -> Option<ContinuantWindow> {
    let ring = &**t.ring();
    let u = t.entries();
    let x = target.elem(ring);
    let n = u.len();
    // rows[s] holds (K of window starting at s with the current length, previous length)
    let mut rows: Vec<(Elem, Elem)> = vec![(ring.one(), ring.zero()); n];
    for len in 1..=n {
        for start in 0..=n - len {
            let (cur, prev) = rows[start];
            let next = ring.sub(ring.mul(u[start + len - 1], cur), prev);
            rows[start] = (next, cur);
            if next == x {
                return Some(ContinuantWindow { length: len, start: start + 1 });
            }
        }
    }
    None
}

/// Windows with continuant `1`, `-1` and `0` (in that order) found by
/// pigeonholing `M_{3k+1}(a_1..a_{3k+1})`, `k = 0..=|SL_2|`. Needs
/// `n >= 3·|SL_2(A)| + 1`; returns `None` below that.
pub fn continuant_windows_by_pigeonhole(t: &QTuple, sl2_order: u64) -> Option<[ContinuantWindow; 3]> {
    let ring = &**t.ring();
    let u = t.entries();
    let l = sl2_order as usize;
    if u.len() < 3 * l + 1 {
        return None;
    }
    let mut seen: HashMap<Mat2, usize> = HashMap::new();
    let mut m = Mat2::identity(ring);
    let mut consumed = 0;
    for k in 0..=l {
        while consumed < 3 * k + 1 {
            m = m.push_entry(ring, u[consumed]);
            consumed += 1;
        }
        if let Some(&i) = seen.get(&m) {
            // M_{3(k-i)}(a_{3i+2..3k+1}) = Id
            let len = 3 * (k - i);
            return Some([
                ContinuantWindow { length: len, start: 3 * i + 2 },
                ContinuantWindow { length: len - 2, start: 3 * i + 3 },
                ContinuantWindow { length: len - 1, start: 3 * i + 2 },
            ]);
        }
        seen.insert(m, k);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiddity::{equivalent, is_quiddity};
    use crate::ring::{ring_from_str, validate_submagma};

    fn t(ring: &Arc<Ring>, xs: &[i64]) -> QTuple {
        QTuple::from_ints(ring, xs).unwrap()
    }

    #[test]
    fn window_witness_for_two_one_two_one() {
        let z5 = ring_from_str("Z/5").unwrap();
        let q = t(&z5, &[2, 1, 2, 1]);
        let w = find_reduction_window(&q, None).unwrap().unwrap();
        assert_eq!(w.window_len, 1);
        assert!(equivalent(&QTuple::new(&z5, w.right.clone()).unwrap(), &t(&z5, &[1, 1, 1])).unwrap());
        w.verify(q.entries(), &z5, None).unwrap();
        assert!(!is_irreducible(&q, None).unwrap());
        let json = w.to_json(&z5);
        assert_eq!(json["window"], json!([2, 1]));
        assert_eq!(json["right"], json!(["1", "1", "1"]));
    }

    #[test]
    fn irreducible_examples() {
        let z4 = ring_from_str("Z/4").unwrap();
        assert!(find_reduction_window(&t(&z4, &[0, 2, 0, 2]), None).unwrap().is_none());
        for spec in ["Z/2", "Z/4", "Z/7", "Z/2 x Z/2", "Z/3[x]/(x^2+1)"] {
            let r = ring_from_str(spec).unwrap();
            assert!(is_irreducible(&t(&r, &[0, 0, 0, 0]), None).unwrap(), "{spec}");
            assert!(is_irreducible(&t(&r, &[1, 1, 1]), None).unwrap(), "{spec}");
            assert!(!is_irreducible(&t(&r, &[0, 0]), None).unwrap(), "{spec}");
        }
        let z2 = ring_from_str("Z/2").unwrap();
        let zeros = t(&z2, &[0; 6]);
        let w = find_reduction_window(&zeros, None).unwrap().unwrap();
        w.verify(zeros.entries(), &z2, None).unwrap();
    }

    #[test]
    fn input_validation() {
        let z3 = ring_from_str("Z/3").unwrap();
        assert!(matches!(find_reduction_window(&t(&z3, &[1, 1, 2]), None), Err(Error::NotQuiddity(_))));
        assert!(matches!(brute_force_reducible(&t(&z3, &[1, 1, 2]), None), Err(Error::NotQuiddity(_))));
        assert!(matches!(find_reduction_window(&t(&z3, &[0, 0]), None), Err(Error::TooShort { .. })));
        assert!(is_irreducible(&t(&z3, &[1, 2]), None).is_err());
        let z17 = ring_from_str("Z/17").unwrap();
        assert!(matches!(
            brute_force_reducible(&t(&z17, &[1, 1, 1]), None),
            Err(Error::ScaleGuard { .. })
        ));
    }

    #[test]
    fn brute_force_on_zero_a_zero_minus_a() {
        let z7 = ring_from_str("Z/7").unwrap();
        for a in [0, 2, 3, 4, 5] {
            let q = t(&z7, &[0, a, 0, -a]);
            assert!(is_quiddity(&q));
            assert!(!brute_force_reducible(&q, None).unwrap(), "a = {a}");
        }
        assert!(brute_force_reducible(&t(&z7, &[0, 1, 0, -1]), None).unwrap());
    }

    #[test]
    fn subset_side_conditions() {
        let z4 = ring_from_str("Z/4").unwrap();
        let even = validate_submagma(&z4, &[Elem(0), Elem(2)]).unwrap();
        // (0,0,0,0,0,0) over {0,2}: window (0,0) has K = -1 and forces borders 0
        let zeros = t(&z4, &[0; 6]);
        let w = find_reduction_window(&zeros, Some(&even)).unwrap().unwrap();
        w.verify(zeros.entries(), &z4, Some(&even)).unwrap();
        assert!(brute_force_reducible(&zeros, Some(&even)).unwrap());
        assert!(matches!(
            find_reduction_window(&t(&z4, &[1, 1, 1]), Some(&even)),
            Err(Error::NotInSubset(_))
        ));
    }

    #[test]
    fn coset_indices() {
        let z7 = ring_from_str("Z/7").unwrap();
        assert_eq!(build_coset_system(&z7, CosetKind::Unitriangular).unwrap().index(), 24);
        assert!(build_coset_system(&z7, CosetKind::PrimeSubring).is_err());
        let f9 = ring_from_str("Z/3[x]/(x^2+1)").unwrap();
        let cs = build_coset_system(&f9, CosetKind::PrimeSubring).unwrap();
        assert_eq!((cs.index(), cs.subgroup().len()), (30, 24));
        let f4 = ring_from_str("Z/2[x]/(x^2+x+1)").unwrap();
        assert_eq!(build_coset_system(&f4, CosetKind::PrimeSubring).unwrap().index(), 10);
        assert_eq!(default_coset_system(&f4).unwrap().kind(), CosetKind::PrimeSubring);
        assert_eq!(default_coset_system(&z7).unwrap().kind(), CosetKind::Unitriangular);
    }

    #[test]
    fn subgroups_are_closed_and_keys_match_cosets() {
        for (spec, kind) in [
            ("Z/4", CosetKind::Unitriangular),
            ("Z/2 x Z/2", CosetKind::Unitriangular),
            ("Z/2[x]/(x^2+x+1)", CosetKind::PrimeSubring),
            ("Z/3[x]/(x^2+1)", CosetKind::PrimeSubring),
        ] {
            let r = ring_from_str(spec).unwrap();
            let cs = build_coset_system(&r, kind).unwrap();
            let h = cs.subgroup();
            assert!(h.contains(&Mat2::identity(&r)));
            for a in &h {
                assert!(h.contains(&a.adjugate(&r)));
                for b in &h {
                    assert!(h.contains(&a.mul(&r, b)));
                }
            }
            // distinct keys over SL2 = index; key equality <=> M' M^-1 in H
            let elems: Vec<Elem> = r.elements().collect();
            let sl2 = sl2_with_entries(&r, &elems);
            let keys: std::collections::HashSet<u128> = sl2.iter().map(|m| cs.coset_key(m)).collect();
            assert_eq!(keys.len() as u64, cs.index(), "{spec}");
            for m in sl2.iter().step_by(7) {
                for m2 in sl2.iter().step_by(5) {
                    let same = cs.coset_key(m) == cs.coset_key(m2);
                    let quotient = m2.mul(&r, &m.adjugate(&r));
                    assert_eq!(same, h.contains(&quotient));
                }
            }
        }
    }

    #[test]
    fn coset_decomposition_of_zeros_over_z2() {
        let z2 = ring_from_str("Z/2").unwrap();
        let cs = build_coset_system(&z2, CosetKind::Unitriangular).unwrap();
        assert_eq!((cs.index(), cs.threshold()), (3, 6));
        let zeros = t(&z2, &[0; 6]);
        let w = decompose_via_cosets(&zeros, &cs).unwrap();
        w.verify(zeros.entries(), &z2, None).unwrap();
        assert!((3..=5).contains(&w.right.len()));
    }

    #[test]
    fn coset_decomposition_below_threshold() {
        let z5 = ring_from_str("Z/5").unwrap();
        let cs = build_coset_system(&z5, CosetKind::Unitriangular).unwrap();
        assert_eq!(cs.threshold(), 15);
        // (2,2,2,2,2) is irreducible, so no collision can produce a witness
        let err = decompose_via_cosets(&t(&z5, &[2; 5]), &cs).unwrap_err();
        assert_eq!(err, Error::NoGuarantee { len: 5, threshold: 15 });
    }

    #[test]
    fn continuant_values() {
        let z4 = ring_from_str("Z/4").unwrap();
        assert_eq!(
            find_continuant_value(&t(&z4, &[0, 0, 0]), ContinuantTarget::Zero),
            Some(ContinuantWindow { length: 1, start: 1 })
        );
        let z7 = ring_from_str("Z/7").unwrap();
        assert_eq!(find_continuant_value(&t(&z7, &[2, 2]), ContinuantTarget::One), None);
        assert_eq!(
            find_continuant_value(&t(&z7, &[2, 2]), ContinuantTarget::MinusOne),
            None
        );
        assert_eq!(
            find_continuant_value(&t(&z7, &[3, 3]), ContinuantTarget::One),
            Some(ContinuantWindow { length: 2, start: 1 })
        );
        assert_eq!(
            find_continuant_value(&t(&z7, &[3, 5]), ContinuantTarget::Zero),
            Some(ContinuantWindow { length: 2, start: 1 })
        );
    }
}
