//! Finite commutative unitary rings: `Z/NZ`, quotients `(Z/pZ)[x]/(f)` and
//! finite products of those.
//!
//! Elements are dense indices `0..size` with a fixed mixed-radix encoding:
//!
//! * `Z/N`: the residue itself.
//! * `Z/p[x]/(f)`: the coefficient vector read in base `p`, constant term least
//!   significant (so `x` is index `p` and `x + 1` is index `p + 1`).
//! * products: mixed radix over the factors in declaration order, first factor
//!   most significant. Index order is therefore lexicographic order on the
//!   component tuples.
//!
//! Index `0` is always zero and the index of one is `1` for the two atomic
//! kinds; for a product it is the encoding of `(1|1|…|1)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A ring element, as its index in the ring's dense encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Constructor description of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    ZMod(u64),
    /// `modulus` holds the coefficients of a monic polynomial over `Z/p`,
    /// constant term first; its length is `degree + 1`.
    Quotient { p: u64, modulus: Vec<u64> },
    /// Always flat and nonempty when built through [`RingSpec::product`].
    Product(Vec<RingSpec>),
}

impl RingSpec {
    pub fn zmod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!("Z/{n}: N must be at least 2")));
        }
        Ok(RingSpec::ZMod(n))
    }

    /// Coefficients are given constant term first and reduced modulo `p`.
    pub fn quotient(p: u64, coeffs: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!(
                "quotients are only supported over Z/p with p prime, got p = {p}"
            )));
        }
        let mut modulus: Vec<u64> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidSpec(
                "the modulus must have degree at least 1".into(),
            ));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidSpec(format!(
                "the modulus {} is not monic",
                format_poly(&modulus)
            )));
        }
        Ok(RingSpec::Quotient { p, modulus })
    }

    /// Builds a product, flattening nested products.
    pub fn product(factors: Vec<RingSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("a product needs at least one factor".into()));
        }
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f {
                RingSpec::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            return Ok(flat.pop().unwrap());
        }
        Ok(RingSpec::Product(flat))
    }

    /// Number of elements, or `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        match self {
            RingSpec::ZMod(n) => Some(*n as u128),
            RingSpec::Quotient { p, modulus } => {
                let d = u32::try_from(modulus.len() - 1).ok()?;
                (*p as u128).checked_pow(d)
            }
            RingSpec::Product(fs) => fs
                .iter()
                .try_fold(1u128, |acc, f| acc.checked_mul(f.size()?)),
        }
    }

    /// The factors of a product, or the spec itself for an atom.
    pub fn factors(&self) -> &[RingSpec] {
        match self {
            RingSpec::Product(fs) => fs,
            other => std::slice::from_ref(other),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::ZMod(n) => write!(f, "Z/{n}"),
            RingSpec::Quotient { p, modulus } => write!(f, "Z/{p}[x]/({})", format_poly(modulus)),
            RingSpec::Product(fs) => {
                for (i, factor) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    match factor {
                        RingSpec::Product(_) => write!(f, "({factor})")?,
                        _ => write!(f, "{factor}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ring_spec(s)
    }
}

/// Parses the ring grammar:
///
/// ```text
/// spec    := product
/// product := atom { "x" atom }
/// atom    := "Z/" int | "Z/" int "[x]/(" poly ")" | "(" spec ")"
/// ```
///
/// Whitespace is ignored everywhere.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    let mut cur = Cursor::new(text);
    let spec = cur.product()?;
    if !cur.eof() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(spec)
}

struct Cursor {
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            end: text.len(),
        }
    }

    fn eof(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(i, _)| i)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.offset(), msg: msg.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        for c in lit.chars() {
            if !self.eat(c) {
                return Err(self.error(format!("expected `{lit}`")));
            }
        }
        Ok(())
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as u64))
                .ok_or_else(|| self.error("integer too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        Ok(value)
    }

    fn product(&mut self) -> Result<RingSpec> {
        let mut atoms = vec![self.atom()?];
        while self.eat('x') {
            atoms.push(self.atom()?);
        }
        RingSpec::product(atoms)
    }

    fn atom(&mut self) -> Result<RingSpec> {
        if self.eat('(') {
            let inner = self.product()?;
            self.expect(")")?;
            return Ok(inner);
        }
        self.expect("Z/")?;
        let n = self.uint()?;
        if self.peek() == Some('[') {
            self.expect("[x]/(")?;
            let coeffs = self.poly()?;
            self.expect(")")?;
            return RingSpec::quotient(n, &coeffs);
        }
        RingSpec::zmod(n)
    }

    /// Integer-coefficient polynomial in `x`, constant term first.
    fn poly(&mut self) -> Result<Vec<i64>> {
        let mut coeffs: Vec<i64> = Vec::new();
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else {
                if !first && !self.eat('+') {
                    break;
                }
                if first {
                    self.eat('+');
                }
                false
            };
            first = false;
            let (coef, deg) = self.term()?;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            let coef = i64::try_from(coef).map_err(|_| self.error("coefficient too large"))?;
            let signed = if negative { -coef } else { coef };
            coeffs[deg] = coeffs[deg]
                .checked_add(signed)
                .ok_or_else(|| self.error("coefficient overflow"))?;
        }
        if coeffs.is_empty() {
            return Err(self.error("expected a polynomial"));
        }
        Ok(coeffs)
    }

    fn term(&mut self) -> Result<(u64, usize)> {
        let has_coef = matches!(self.peek(), Some(c) if c.is_ascii_digit());
        let coef = if has_coef { self.uint()? } else { 1 };
        if has_coef {
            self.eat('*');
        }
        if self.eat('x') || self.eat('X') {
            let deg = if self.eat('^') { self.uint()? } else { 1 };
            if deg > 64 {
                return Err(self.error("exponent too large"));
            }
            Ok((coef, deg as usize))
        } else if has_coef {
            Ok((coef, 0))
        } else {
            Err(self.error("expected a term"))
        }
    }
}

/// Tunables for ring construction.
#[derive(Clone, Debug)]
pub struct RingConfig {
    /// Rings with at most this many elements get precomputed operation tables.
    pub table_threshold: usize,
    /// Construction fails above this many elements.
    pub max_size: usize,
}

impl Default for RingConfig {
    fn default() -> Self {
        RingConfig { table_threshold: 4096, max_size: 1 << 20 }
    }
}

#[derive(Clone)]
enum Arith {
    ZMod { n: u32 },
    /// `low` holds `c_0..c_{d-1}` of the monic modulus `x^d + …`.
    Quotient { p: u32, low: Vec<u32> },
    /// `weights[i]` is the product of the sizes of the factors after `i`.
    Product { factors: Vec<Ring>, weights: Vec<u32> },
}

#[derive(Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

/// A realized finite commutative unitary ring. Immutable once built.
#[derive(Clone)]
pub struct Ring {
    spec: RingSpec,
    size: usize,
    one: Elem,
    minus_one: Elem,
    characteristic: u64,
    arith: Arith,
    tables: Option<Tables>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("spec", &self.spec.to_string())
            .field("size", &self.size)
            .finish()
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Ring {}

/// Builds a ring with the default configuration.
pub fn build_ring(spec: &RingSpec) -> Result<Arc<Ring>> {
    Ring::build(spec, &RingConfig::default()).map(Arc::new)
}

/// Parses and builds in one step.
pub fn ring_from_str(text: &str) -> Result<Arc<Ring>> {
    build_ring(&parse_ring_spec(text)?)
}

impl Ring {
    pub fn build(spec: &RingSpec, config: &RingConfig) -> Result<Ring> {
        let size = spec
            .size()
            .ok_or(Error::RingTooLarge { size: u128::MAX, max: config.max_size })?;
        if size > config.max_size as u128 || size > u32::MAX as u128 {
            return Err(Error::RingTooLarge { size, max: config.max_size });
        }
        let size = size as usize;
        let (arith, one) = match spec {
            RingSpec::ZMod(n) => (Arith::ZMod { n: *n as u32 }, Elem(1)),
            RingSpec::Quotient { p, modulus } => {
                let low = modulus[..modulus.len() - 1].iter().map(|&c| c as u32).collect();
                (Arith::Quotient { p: *p as u32, low }, Elem(1))
            }
            RingSpec::Product(fs) => {
                let factors = fs
                    .iter()
                    .map(|f| Ring::build(f, config))
                    .collect::<Result<Vec<_>>>()?;
                let mut weights = vec![1u32; factors.len()];
                for i in (0..factors.len().saturating_sub(1)).rev() {
                    weights[i] = weights[i + 1] * factors[i + 1].size as u32;
                }
                let one = factors
                    .iter()
                    .zip(&weights)
                    .map(|(f, w)| f.one.0 * w)
                    .sum();
                (Arith::Product { factors, weights }, Elem(one))
            }
        };
        let mut ring = Ring {
            spec: spec.clone(),
            size,
            one,
            minus_one: Elem(0),
            characteristic: 0,
            arith,
            tables: None,
        };
        if size <= config.table_threshold {
            ring.tables = Some(ring.compute_tables());
        }
        ring.minus_one = ring.neg(one);
        ring.characteristic = ring.additive_order(one);
        Ok(ring)
    }

    fn compute_tables(&self) -> Tables {
        let n = self.size as u32;
        let mut add = Vec::with_capacity(self.size * self.size);
        let mut mul = Vec::with_capacity(self.size * self.size);
        for a in 0..n {
            for b in 0..n {
                add.push(self.arith.add(a, b));
                mul.push(self.arith.mul(a, b));
            }
        }
        let neg = (0..n).map(|a| self.arith.neg(a)).collect();
        Tables { add, mul, neg }
    }

    fn additive_order(&self, x: Elem) -> u64 {
        let mut acc = x;
        let mut k = 1;
        while acc != Elem::ZERO {
            acc = self.add(acc, x);
            k += 1;
        }
        k
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn minus_one(&self) -> Elem {
        self.minus_one
    }

    /// Smallest `m >= 1` with `m * 1 = 0`.
    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size as u32).map(Elem)
    }

    pub fn contains(&self, e: Elem) -> bool {
        e.index() < self.size
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.add[a.index() * self.size + b.index()]),
            None => Elem(self.arith.add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.mul[a.index() * self.size + b.index()]),
            None => Elem(self.arith.mul(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.neg[a.index()]),
            None => Elem(self.arith.neg(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `k * 1_A`.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(self.arith.from_int(k))
    }

    pub fn is_unit_sign(&self, e: Elem) -> bool {
        e == self.one || e == self.minus_one
    }

    /// Canonical literal of an element; [`Ring::parse_elem`] inverts it.
    pub fn format(&self, e: Elem) -> String {
        self.arith.format(e.0)
    }

    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let trimmed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || Error::ElementNotInRing(text.trim().to_string());
        if let Some(rest) = trimmed.strip_prefix('-') {
            if !rest.starts_with('-') {
                return self.arith.parse(rest).map(|v| self.neg(Elem(v))).ok_or_else(err);
            }
        }
        self.arith.parse(&trimmed).map(Elem).ok_or_else(err)
    }

    /// Formats as `[e1,e2,…]`.
    pub fn format_tuple(&self, entries: &[Elem]) -> String {
        let parts: Vec<String> = entries.iter().map(|&e| self.format(e)).collect();
        format!("[{}]", parts.join(","))
    }

    /// Parses `[e1, e2, …]`; product literals `(a|b)` may contain no commas,
    /// so splitting happens at top-level commas only.
    pub fn parse_tuple(&self, text: &str) -> Result<Vec<Elem>> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Syntax { pos: 0, msg: "tuple literals look like [a,b,…]".into() })?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        split_top_level(inner, ',')
            .into_iter()
            .map(|part| self.parse_elem(part))
            .collect()
    }

    /// Parses a comma separated element list without brackets.
    pub fn parse_elem_list(&self, text: &str) -> Result<Vec<Elem>> {
        split_top_level(text, ',')
            .into_iter()
            .filter(|s| !s.trim().is_empty())
            .map(|part| self.parse_elem(part))
            .collect()
    }
}

fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

impl Arith {
    fn add(&self, a: u32, b: u32) -> u32 {
        match self {
            Arith::ZMod { n } => ((a as u64 + b as u64) % *n as u64) as u32,
            Arith::Quotient { p, low } => {
                let (mut x, mut y, mut out, mut w) = (a, b, 0u32, 1u32);
                for _ in 0..low.len() {
                    out += ((x % p + y % p) % p) * w;
                    x /= p;
                    y /= p;
                    w = w.wrapping_mul(*p);
                }
                out
            }
            Arith::Product { factors, weights } => {
                Self::componentwise(factors, weights, a, b, |f, x, y| f.arith.add(x, y))
            }
        }
    }

    fn neg(&self, a: u32) -> u32 {
        match self {
            Arith::ZMod { n } => (n - a) % n,
            Arith::Quotient { p, low } => {
                let (mut x, mut out, mut w) = (a, 0u32, 1u32);
                for _ in 0..low.len() {
                    out += ((p - x % p) % p) * w;
                    x /= p;
                    w = w.wrapping_mul(*p);
                }
                out
            }
            Arith::Product { factors, weights } => {
                Self::componentwise(factors, weights, a, 0, |f, x, _| f.arith.neg(x))
            }
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            Arith::ZMod { n } => ((a as u64 * b as u64) % *n as u64) as u32,
            Arith::Quotient { p, low } => {
                let d = low.len();
                let p64 = *p as u64;
                let xa = decode_digits(a, *p, d);
                let xb = decode_digits(b, *p, d);
                let mut prod = vec![0u64; 2 * d];
                for (i, &u) in xa.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (j, &v) in xb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p64;
                    }
                }
                // x^d = -(c_0 + … + c_{d-1} x^{d-1})
                for k in (d..2 * d).rev() {
                    let top = prod[k];
                    if top == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, &c) in low.iter().enumerate() {
                        let t = k - d + i;
                        prod[t] = (prod[t] + (p64 - c as u64) * top) % p64;
                    }
                }
                encode_digits(&prod[..d], *p)
            }
            Arith::Product { factors, weights } => {
                Self::componentwise(factors, weights, a, b, |f, x, y| f.arith.mul(x, y))
            }
        }
    }

    fn componentwise(
        factors: &[Ring],
        weights: &[u32],
        a: u32,
        b: u32,
        op: impl Fn(&Ring, u32, u32) -> u32,
    ) -> u32 {
        factors
            .iter()
            .zip(weights)
            .map(|(f, &w)| {
                let s = f.size as u32;
                op(f, (a / w) % s, (b / w) % s) * w
            })
            .sum()
    }

    fn from_int(&self, k: i64) -> u32 {
        match self {
            Arith::ZMod { n } => k.rem_euclid(*n as i64) as u32,
            Arith::Quotient { p, .. } => k.rem_euclid(*p as i64) as u32,
            Arith::Product { factors, weights } => factors
                .iter()
                .zip(weights)
                .map(|(f, &w)| f.arith.from_int(k) * w)
                .sum(),
        }
    }

    fn format(&self, a: u32) -> String {
        match self {
            Arith::ZMod { .. } => a.to_string(),
            Arith::Quotient { p, low } => {
                let digits: Vec<u64> = decode_digits(a, *p, low.len()).into_iter().map(u64::from).collect();
                format_poly(&digits)
            }
            Arith::Product { factors, weights } => {
                let parts: Vec<String> = factors
                    .iter()
                    .zip(weights)
                    .map(|(f, &w)| f.arith.format((a / w) % f.size as u32))
                    .collect();
                format!("({})", parts.join("|"))
            }
        }
    }

    fn parse(&self, text: &str) -> Option<u32> {
        match self {
            Arith::ZMod { n } => {
                if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                let v: u64 = text.parse().ok()?;
                (v < *n as u64).then_some(v as u32)
            }
            Arith::Quotient { p, low } => {
                let mut cur = Cursor::new(text);
                if cur.peek() == Some('-') {
                    return None;
                }
                let coeffs = cur.poly().ok()?;
                if !cur.eof() || coeffs.len() > low.len() {
                    return None;
                }
                if coeffs.iter().any(|&c| c < 0 || c >= *p as i64) {
                    return None;
                }
                let digits: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
                Some(encode_digits(&digits, *p))
            }
            Arith::Product { factors, weights } => {
                let inner = text.strip_prefix('(')?.strip_suffix(')')?;
                let parts: Vec<&str> = inner.split('|').collect();
                if parts.len() != factors.len() {
                    return None;
                }
                let mut out = 0u32;
                for ((f, &w), part) in factors.iter().zip(weights).zip(parts) {
                    let v = match part.strip_prefix('-') {
                        Some(rest) => f.arith.neg(f.arith.parse(rest)?),
                        None => f.arith.parse(part)?,
                    };
                    out += v * w;
                }
                Some(out)
            }
        }
    }
}

fn decode_digits(mut a: u32, p: u32, d: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        out.push(a % p);
        a /= p;
    }
    out
}

fn encode_digits(digits: &[u64], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &c| acc * p + c as u32)
}

/// Formats coefficients (constant term first) as `x^2+x+1`.
pub(crate) fn format_poly(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && deg > 0 { String::new() } else { c.to_string() };
        let term = match deg {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{deg}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A nonempty subset of a ring closed under addition.
#[derive(Clone, Debug)]
pub struct SubsetR {
    ring: Arc<Ring>,
    mask: Vec<bool>,
    members: Vec<Elem>,
}

/// Checks closure under addition and returns the subset, or the first pair
/// whose sum escapes it.
pub fn validate_submagma(ring: &Arc<Ring>, members: &[Elem]) -> Result<SubsetR> {
    if members.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut mask = vec![false; ring.size()];
    for &m in members {
        if !ring.contains(m) {
            return Err(Error::ElementNotInRing(m.0.to_string()));
        }
        mask[m.index()] = true;
    }
    let sorted: Vec<Elem> = ring.elements().filter(|e| mask[e.index()]).collect();
    for &a in &sorted {
        for &b in &sorted {
            let s = ring.add(a, b);
            if !mask[s.index()] {
                return Err(Error::ClosureViolation {
                    a: ring.format(a),
                    b: ring.format(b),
                    sum: ring.format(s),
                });
            }
        }
    }
    // closure plus finiteness: char(A) copies of any member sum to zero
    debug_assert!(mask[0]);
    Ok(SubsetR { ring: ring.clone(), mask, members: sorted })
}

impl SubsetR {
    /// The whole ring viewed as a submagma.
    pub fn full(ring: &Arc<Ring>) -> SubsetR {
        SubsetR {
            ring: ring.clone(),
            mask: vec![true; ring.size()],
            members: ring.elements().collect(),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.mask.get(e.index()).copied().unwrap_or(false)
    }

    /// Members in index order.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.ring.size()
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|&e| self.ring.format(e)).collect();
        format!("{{{}}}", parts.join(","))
    }
}
