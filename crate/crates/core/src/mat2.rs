//! 2×2 matrices over a [`Ring`]: the generators `M(a) = [[a, -1], [1, 0]]`,
//! their products `M_n`, continuants and the order of `SL_2`.
//!
//! Product order is fixed: `M_n(a_1, …, a_n) = M(a_n) · M(a_{n-1}) ⋯ M(a_1)`,
//! so appending an entry multiplies on the left. Prefix/window splitting
//! throughout the crate relies on this.

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    pub a11: Elem,
    pub a12: Elem,
    pub a21: Elem,
    pub a22: Elem,
}

impl Mat2 {
    pub fn new(a11: Elem, a12: Elem, a21: Elem, a22: Elem) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn identity(ring: &Ring) -> Self {
        let (z, o) = (ring.zero(), ring.one());
        Mat2::new(o, z, z, o)
    }

    pub fn neg_identity(ring: &Ring) -> Self {
        let (z, m) = (ring.zero(), ring.minus_one());
        Mat2::new(m, z, z, m)
    }

    pub fn mul(&self, ring: &Ring, rhs: &Mat2) -> Mat2 {
        let dot = |a: Elem, b: Elem, c: Elem, d: Elem| ring.add(ring.mul(a, b), ring.mul(c, d));
        Mat2 {
            a11: dot(self.a11, rhs.a11, self.a12, rhs.a21),
            a12: dot(self.a11, rhs.a12, self.a12, rhs.a22),
            a21: dot(self.a21, rhs.a11, self.a22, rhs.a21),
            a22: dot(self.a21, rhs.a12, self.a22, rhs.a22),
        }
    }

    /// `M(a) · self`, two multiplications instead of eight.
    #[inline]
    pub fn push_entry(&self, ring: &Ring, a: Elem) -> Mat2 {
        Mat2 {
            a11: ring.sub(ring.mul(a, self.a11), self.a21),
            a12: ring.sub(ring.mul(a, self.a12), self.a22),
            a21: self.a11,
            a22: self.a12,
        }
    }

    pub fn det(&self, ring: &Ring) -> Elem {
        ring.sub(ring.mul(self.a11, self.a22), ring.mul(self.a12, self.a21))
    }

    /// The adjugate, which is the inverse whenever `det = 1`.
    pub fn adjugate(&self, ring: &Ring) -> Mat2 {
        Mat2 {
            a11: self.a22,
            a12: ring.neg(self.a12),
            a21: ring.neg(self.a21),
            a22: self.a11,
        }
    }

    pub fn neg(&self, ring: &Ring) -> Mat2 {
        Mat2 {
            a11: ring.neg(self.a11),
            a12: ring.neg(self.a12),
            a21: ring.neg(self.a21),
            a22: ring.neg(self.a22),
        }
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        *self == Mat2::identity(ring)
    }

    pub fn is_neg_identity(&self, ring: &Ring) -> bool {
        *self == Mat2::neg_identity(ring)
    }

    /// Packed entries, usable as a hash or ordering key.
    pub fn key(&self) -> u128 {
        ((self.a11.0 as u128) << 96)
            | ((self.a12.0 as u128) << 64)
            | ((self.a21.0 as u128) << 32)
            | self.a22.0 as u128
    }

    /// `[[a,b],[c,d]]` with element literals.
    pub fn format(&self, ring: &Ring) -> String {
        format!(
            "[[{},{}],[{},{}]]",
            ring.format(self.a11),
            ring.format(self.a12),
            ring.format(self.a21),
            ring.format(self.a22)
        )
    }
}

/// The generator `[[a, -1], [1, 0]]`.
pub fn mat_of_entry(ring: &Ring, a: Elem) -> Mat2 {
    Mat2::new(a, ring.minus_one(), ring.one(), ring.zero())
}

/// `M(a_n) ⋯ M(a_1)`.
pub fn m_n(ring: &Ring, t: &[Elem]) -> Result<Mat2> {
    if t.is_empty() {
        return Err(Error::EmptyTuple);
    }
    Ok(m_n_unchecked(ring, t))
}

pub(crate) fn m_n_unchecked(ring: &Ring, t: &[Elem]) -> Mat2 {
    t.iter()
        .fold(Mat2::identity(ring), |m, &a| m.push_entry(ring, a))
}

/// The continuant `K_i(a_1, …, a_i)` through `K_i = a_i K_{i-1} - K_{i-2}`,
/// with `K_{-1} = 0` and `K_0 = 1`.
pub fn continuant(ring: &Ring, seq: &[Elem]) -> Elem {
    let (mut prev, mut cur) = (ring.zero(), ring.one());
    for &a in seq {
        let next = ring.sub(ring.mul(a, cur), prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Checks `M_n(t)` against its continuant form
/// `[[K_n(a_1..a_n), -K_{n-1}(a_2..a_n)], [K_{n-1}(a_1..a_{n-1}), -K_{n-2}(a_2..a_{n-1})]]`.
/// Test oracle only; the crate itself never goes through this identity.
pub fn mat_vs_continuant_check(ring: &Ring, t: &[Elem]) -> bool {
    let n = t.len();
    if n == 0 {
        return false;
    }
    let m = m_n_unchecked(ring, t);
    let inner = if n >= 2 {
        ring.neg(continuant(ring, &t[1..n - 1]))
    } else {
        ring.zero() // -K_{-1}
    };
    m.a11 == continuant(ring, t)
        && m.a12 == ring.neg(continuant(ring, &t[1..]))
        && m.a21 == continuant(ring, &t[..n - 1])
        && m.a22 == inner
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sl2Method {
    Formula,
    Enumerate,
}

/// Rings above this size are refused by [`Sl2Method::Enumerate`].
pub const SL2_ENUMERATION_GUARD: usize = 64;

/// `|SL_2(A)|` by closed formula or by counting matrices of determinant one.
pub fn sl2_order(ring: &Ring, method: Sl2Method) -> Result<u64> {
    match method {
        Sl2Method::Formula => sl2_order_formula(ring.spec()),
        Sl2Method::Enumerate => sl2_order_enumerate(ring, SL2_ENUMERATION_GUARD),
    }
}

/// Tries the formula first and falls back to enumeration.
pub fn sl2_order_auto(ring: &Ring) -> Result<(u64, Sl2Method)> {
    match sl2_order_formula(ring.spec()) {
        Ok(v) => Ok((v, Sl2Method::Formula)),
        Err(Error::FormulaNotApplicable(_)) => {
            sl2_order_enumerate(ring, SL2_ENUMERATION_GUARD).map(|v| (v, Sl2Method::Enumerate))
        }
        Err(e) => Err(e),
    }
}

/// `N^3 ∏ (1 - 1/p^2)` for `Z/N`, `q(q^2 - 1)` for a field `F_q` given as an
/// irreducible quotient, and the product of the factors' orders for products.
pub fn sl2_order_formula(spec: &RingSpec) -> Result<u64> {
    match spec {
        RingSpec::ZMod(n) => {
            let mut order: u64 = 1;
            for (p, k) in factorize(*n) {
                // p^{3k} (1 - 1/p^2) = p^{3k-2} (p^2 - 1)
                order = order
                    .checked_mul(p.pow(3 * k - 2) * (p * p - 1))
                    .ok_or_else(|| Error::FormulaNotApplicable("order overflows u64".into()))?;
            }
            Ok(order)
        }
        RingSpec::Quotient { p, modulus } => {
            if !is_irreducible_poly(*p, modulus) {
                return Err(Error::FormulaNotApplicable(format!(
                    "{spec} is not a field (reducible modulus)"
                )));
            }
            let q = (*p as u128).pow((modulus.len() - 1) as u32);
            u64::try_from(q * (q * q - 1))
                .map_err(|_| Error::FormulaNotApplicable("order overflows u64".into()))
        }
        RingSpec::Product(fs) => fs.iter().try_fold(1u64, |acc, f| {
            acc.checked_mul(sl2_order_formula(f)?)
                .ok_or_else(|| Error::FormulaNotApplicable("order overflows u64".into()))
        }),
    }
}

/// Counts `(a, b, c, d)` with `ad - bc = 1` by bucketing the products `bc`.
pub fn sl2_order_enumerate(ring: &Ring, guard: usize) -> Result<u64> {
    let n = ring.size();
    if n > guard {
        return Err(Error::ScaleGuard { what: "SL2 enumeration", size: n, max: guard });
    }
    let mut products = vec![0u64; n];
    for b in ring.elements() {
        for c in ring.elements() {
            products[ring.mul(b, c).index()] += 1;
        }
    }
    let one = ring.one();
    let mut count = 0;
    for a in ring.elements() {
        for d in ring.elements() {
            count += products[ring.sub(ring.mul(a, d), one).index()];
        }
    }
    Ok(count)
}

/// All matrices with entries drawn from `entries` and determinant one.
pub fn sl2_with_entries(ring: &Ring, entries: &[Elem]) -> Vec<Mat2> {
    let one = ring.one();
    let mut out = Vec::new();
    for &a in entries {
        for &b in entries {
            for &c in entries {
                for &d in entries {
                    let m = Mat2::new(a, b, c, d);
                    if m.det(ring) == one {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n % d == 0 {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Irreducibility over `Z/p` by trial division with every monic polynomial
/// of degree at most half the modulus degree.
pub(crate) fn is_irreducible_poly(p: u64, modulus: &[u64]) -> bool {
    let d = modulus.len() - 1;
    for k in 1..=d / 2 {
        let count = p.pow(k as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            if poly_rem_is_zero(p, modulus, &g) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, f: &[u64], g: &[u64]) -> bool {
    let mut r = f.to_vec();
    let k = g.len() - 1;
    for top in (k..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &gi) in g.iter().enumerate() {
            let idx = top - k + i;
            r[idx] = (r[idx] + (p - (c * gi) % p)) % p;
        }
    }
    r.iter().all(|&c| c == 0)
}
