//! Exhaustive search for λ-quiddities and irreducible λ-quiddities, plus the
//! bounds that make a finite search conclusive.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::irreducible::{build_coset_system, is_irreducible, reduction_window_unchecked, CosetKind};
use crate::mat2::{sl2_order_auto, Mat2, Sl2Method};
use crate::quiddity::{dihedral_images, normal_form, sign_of, QTuple};
use crate::ring::{Elem, Ring, SubsetR};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Largest `|SL_2|` for which [`count_quiddities`] runs its matrix DP.
pub const COUNT_STATE_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub sl2_order: u64,
    pub sl2_method: Sl2Method,
    pub theta: u64,
    pub coset_bound: Option<u64>,
    pub lower: u64,
}

impl BoundsReport {
    /// The better of the two proven upper bounds.
    pub fn best_upper(&self) -> u64 {
        self.coset_bound.map_or(self.theta, |c| c.min(self.theta))
    }
}

pub fn bounds_report(ring: &Arc<Ring>) -> Result<BoundsReport> {
    let (sl2, method) = sl2_order_auto(ring)?;
    let p = ring.characteristic();
    Ok(BoundsReport {
        sl2_order: sl2,
        sl2_method: method,
        theta: theta_from(sl2, ring),
        coset_bound: coset_refined_bound(ring)?,
        lower: p.max(4),
    })
}

fn theta_from(sl2: u64, ring: &Ring) -> u64 {
    let size = ring.size() as u64;
    if ring.characteristic() == 2 {
        sl2 / size + 2
    } else {
        sl2 / (2 * size) + 2
    }
}

pub fn theta_bound(ring: &Ring) -> Result<u64> {
    let (sl2, _) = sl2_order_auto(ring)?;
    Ok(theta_from(sl2, ring))
}

/// `max(4, index + 2)` for the prime-subring coset system, when the ring has
/// characteristic 2 or 3 and is strictly larger than its prime subring.
pub fn coset_refined_bound(ring: &Arc<Ring>) -> Result<Option<u64>> {
    let p = ring.characteristic();
    if !(p == 2 || p == 3) || ring.size() as u64 == p {
        return Ok(None);
    }
    let cs = build_coset_system(ring, CosetKind::PrimeSubring)?;
    Ok(Some((cs.index() + 2).max(4)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Theta,
    CosetBound,
    /// `|SL_2(A)|`, the bound for a proper submagma.
    SubsetSl2,
}

/// The upper bound a search over `subset` (or the whole ring) must reach to
/// be conclusive.
pub fn applicable_bound(ring: &Arc<Ring>, subset: Option<&SubsetR>) -> Result<(u64, BoundSource)> {
    let b = bounds_report(ring)?;
    if subset.is_some_and(|s| !s.is_full()) {
        return Ok((b.sl2_order, BoundSource::SubsetSl2));
    }
    Ok(match b.coset_bound {
        Some(c) if c < b.theta => (c, BoundSource::CosetBound),
        _ => (b.theta, BoundSource::Theta),
    })
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// DFS nodes allowed per size.
    pub budget: u64,
    pub workers: usize,
    /// Cut branches whose prefix already holds a reducing window.
    pub prune: bool,
    /// Normal forms per size kept in serialized reports.
    pub sample_limit: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            prune: true,
            sample_limit: 16,
        }
    }
}

/// Result of one enumeration at a fixed size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub n: usize,
    /// Sorted; dihedral normal forms when those were requested.
    pub tuples: Vec<Vec<Elem>>,
    /// Number of raw tuples represented by `tuples`.
    pub raw_count: u128,
    pub nodes: u64,
    /// False when the node budget ran out; `tuples` is then a lower bound.
    pub complete: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Raw,
    NormalForms,
    Irreducible,
}

struct Shared<'a> {
    ring: &'a Ring,
    n: usize,
    pool: &'a [Elem],
    subset: Option<&'a SubsetR>,
    mode: Mode,
    prune: bool,
    budget: u64,
    spent: AtomicU64,
    aborted: AtomicBool,
}

const FLUSH_EVERY: u64 = 1024;

struct Worker<'s, 'a> {
    sh: &'s Shared<'a>,
    entries: Vec<Elem>,
    /// `mats[k] = M_k(a_1..a_k)`.
    mats: Vec<Mat2>,
    /// `wins[k][L] = K(a_{k-L+1..k})`, for `L <= min(k, n-3)`.
    wins: Vec<Vec<Elem>>,
    max_win: usize,
    nodes: u64,
    unflushed: u64,
    out: Vec<Vec<Elem>>,
    raw: u128,
    /// Set when this worker gave up because the budget ran out.
    cut: bool,
}

impl<'s, 'a> Worker<'s, 'a> {
    fn new(sh: &'s Shared<'a>) -> Self {
        let n = sh.n;
        let max_win = n.saturating_sub(3);
        Worker {
            sh,
            entries: Vec::with_capacity(n),
            mats: vec![Mat2::identity(sh.ring); n + 1],
            wins: vec![vec![sh.ring.zero(); max_win + 1]; n + 1],
            max_win,
            nodes: 0,
            unflushed: 0,
            out: Vec::new(),
            raw: 0,
            cut: false,
        }
    }

    fn flush(&mut self) {
        let total = self.sh.spent.fetch_add(self.unflushed, Ordering::Relaxed) + self.unflushed;
        self.unflushed = 0;
        if total > self.sh.budget {
            self.sh.aborted.store(true, Ordering::Relaxed);
        }
    }

    fn stopped(&mut self) -> bool {
        if self.unflushed >= FLUSH_EVERY {
            self.flush();
        }
        if self.sh.aborted.load(Ordering::Relaxed) {
            self.cut = true;
        }
        self.cut
    }

    /// Fixes the next entry; returns false if the branch is dead. Always
    /// pair with [`Worker::pop`].
    fn push(&mut self, a: Elem) -> bool {
        let r = self.sh.ring;
        self.nodes += 1;
        self.unflushed += 1;
        let k = self.entries.len() + 1;
        self.entries.push(a);
        if self.sh.mode != Mode::Raw && a < self.entries[0] {
            // the first entry of a normal form is its minimum
            return false;
        }
        self.mats[k] = self.mats[k - 1].push_entry(r, a);
        if self.sh.mode != Mode::Irreducible {
            return true;
        }
        let (one, minus_one) = (r.one(), r.minus_one());
        let top = k.min(self.max_win);
        for l in 1..=top {
            let p1 = if l == 1 { one } else { self.wins[k - 1][l - 1] };
            let p2 = match l {
                1 => r.zero(),
                2 => one,
                _ => self.wins[k - 2][l - 2],
            };
            self.wins[k][l] = r.sub(r.mul(a, p1), p2);
        }
        if !self.sh.prune {
            return true;
        }
        match self.sh.subset {
            None => !(1..=top).any(|l| {
                let w = self.wins[k][l];
                w == one || w == minus_one
            }),
            Some(s) => !self.subset_window_closes(s, k),
        }
    }

    /// Over a submagma: a window ending at `k-1` whose two neighbours are
    /// fixed and whose forced entries are all members.
    fn subset_window_closes(&self, s: &SubsetR, k: usize) -> bool {
        let r = self.sh.ring;
        if k < 3 {
            return false;
        }
        let top = (k - 2).min(self.max_win);
        for l in 1..=top {
            let eps_val = self.wins[k - 1][l];
            let eps = if eps_val == r.one() {
                false
            } else if eps_val == r.minus_one() {
                true
            } else {
                continue;
            };
            let signed = |e: Elem| if eps { r.neg(e) } else { e };
            let inner = |row: usize| if l == 1 { r.one() } else { self.wins[row][l - 1] };
            let c1 = signed(inner(k - 1));
            let cl = signed(inner(k - 2));
            let after = self.entries[k - 1];
            let before = self.entries[k - l - 2];
            if s.contains(c1) && s.contains(cl) && s.contains(r.sub(after, cl)) && s.contains(r.sub(before, c1)) {
                return true;
            }
        }
        false
    }

    fn pop(&mut self) {
        self.entries.pop();
    }

    fn dfs(&mut self) {
        if self.stopped() {
            return;
        }
        if self.entries.len() + 1 == self.sh.n {
            self.emit();
            return;
        }
        for &a in self.sh.pool {
            if self.push(a) {
                self.dfs();
            }
            self.pop();
        }
    }

    fn emit(&mut self) {
        let r = self.sh.ring;
        let n = self.sh.n;
        let m = self.mats[n - 1];
        let mut signs = vec![r.one()];
        if r.minus_one() != r.one() {
            signs.push(r.minus_one());
        }
        for eps in signs {
            if m.a11 != r.zero() || m.a12 != eps || m.a21 != r.neg(eps) {
                continue;
            }
            let last = r.mul(eps, m.a22);
            if self.sh.subset.is_some_and(|s| !s.contains(last)) {
                continue;
            }
            if self.sh.mode != Mode::Raw && !self.entries.is_empty() && last < self.entries[0] {
                continue;
            }
            let mut t = self.entries.clone();
            t.push(last);
            if self.sh.mode == Mode::Irreducible && reduction_window_unchecked(r, &t, self.sh.subset).is_some() {
                continue;
            }
            if self.sh.mode == Mode::Raw {
                self.raw += 1;
            } else {
                if normal_form(&t) != t {
                    continue;
                }
                self.raw += dihedral_images(&t).len() as u128;
            }
            self.out.push(t);
        }
    }

    fn run_prefix(&mut self, prefix: &[Elem]) {
        let mut alive = true;
        for &a in prefix {
            if !self.push(a) {
                alive = false;
                break;
            }
        }
        if alive {
            self.dfs();
        }
        self.flush();
        self.entries.clear();
    }
}

fn run_enumeration(
    ring: &Arc<Ring>,
    n: usize,
    subset: Option<&SubsetR>,
    mode: Mode,
    opts: &SearchOptions,
) -> Result<Enumeration> {
    if n == 0 {
        return Err(Error::TooShort { op: "enumeration", min: 1, got: 0 });
    }
    if let Some(s) = subset {
        if **s.ring() != **ring {
            return Err(Error::RingMismatch(s.ring().spec().to_string(), ring.spec().to_string()));
        }
    }
    let pool: Vec<Elem> = match subset {
        Some(s) => s.members().to_vec(),
        None => ring.elements().collect(),
    };
    let sh = Shared {
        ring,
        n,
        pool: &pool,
        subset,
        mode,
        prune: opts.prune,
        budget: opts.budget,
        spent: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    // partition by the first two entries (fewer when n is tiny)
    let depth = (n - 1).min(2);
    let mut prefixes: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..depth {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| pool.iter().map(move |&a| [p.clone(), vec![a]].concat()))
            .collect();
    }
    let run = |prefix: &Vec<Elem>| {
        let mut w = Worker::new(&sh);
        w.run_prefix(prefix);
        (w.out, w.raw, w.nodes, w.cut)
    };
    let threads = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<_> = threads.install(|| prefixes.par_iter().map(run).collect());
    let mut tuples = Vec::new();
    let (mut raw_count, mut nodes, mut complete) = (0u128, 0u64, true);
    for (out, raw, k, cut) in parts {
        tuples.extend(out);
        raw_count += raw;
        nodes += k;
        complete &= !cut;
    }
    tuples.sort();
    Ok(Enumeration { n, tuples, raw_count, nodes, complete })
}

/// All λ-quiddities of size `n` over the ring (or a submagma). With
/// `normal_forms_only` each dihedral class is reported once by its normal
/// form; `raw_count` still counts raw tuples.
pub fn enumerate_quiddities(
    ring: &Arc<Ring>,
    n: usize,
    subset: Option<&SubsetR>,
    normal_forms_only: bool,
    opts: &SearchOptions,
) -> Result<Enumeration> {
    let mode = if normal_forms_only { Mode::NormalForms } else { Mode::Raw };
    run_enumeration(ring, n, subset, mode, opts)
}

/// Dihedral normal forms of the irreducible λ-quiddities of size `n`.
pub fn enumerate_irreducible(
    ring: &Arc<Ring>,
    n: usize,
    subset: Option<&SubsetR>,
    opts: &SearchOptions,
) -> Result<Enumeration> {
    if n <= 2 {
        return Ok(Enumeration { n, tuples: Vec::new(), raw_count: 0, nodes: 0, complete: true });
    }
    run_enumeration(ring, n, subset, Mode::Irreducible, opts)
}

/// Every rotation and reflection of the given normal forms, sorted.
pub fn expand_raw(forms: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = forms.iter().flat_map(|f| dihedral_images(f)).collect();
    out.sort();
    out.dedup();
    out
}

/// Number of λ-quiddities of size `n`, by dynamic programming over `SL_2`.
pub fn count_quiddities(ring: &Ring, n: usize, subset: Option<&SubsetR>) -> Result<u128> {
    let (sl2, _) = sl2_order_auto(ring)?;
    if sl2 > COUNT_STATE_LIMIT {
        return Err(Error::ScaleGuard {
            what: "quiddity count (SL2 states)",
            size: sl2 as usize,
            max: COUNT_STATE_LIMIT as usize,
        });
    }
    let pool: Vec<Elem> = match subset {
        Some(s) => s.members().to_vec(),
        None => ring.elements().collect(),
    };
    let mut layer: HashMap<Mat2, u128> = HashMap::from([(Mat2::identity(ring), 1)]);
    for _ in 0..n {
        let mut next: HashMap<Mat2, u128> = HashMap::with_capacity(layer.len());
        for (m, c) in &layer {
            for &a in &pool {
                let slot = next.entry(m.push_entry(ring, a)).or_insert(0);
                *slot = slot.checked_add(*c).ok_or(Error::CountOverflow(n))?;
            }
        }
        layer = next;
    }
    let id = Mat2::identity(ring);
    let neg = Mat2::neg_identity(ring);
    let mut total = layer.get(&id).copied().unwrap_or(0);
    if neg != id {
        total = total
            .checked_add(layer.get(&neg).copied().unwrap_or(0))
            .ok_or(Error::CountOverflow(n))?;
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeReport {
    pub n: usize,
    /// `None` when the ring is too large for the counting DP or the count
    /// overflows.
    pub quiddity_count: Option<u128>,
    pub irreducible_count: u128,
    pub irreducible_class_count: usize,
    pub sample_normal_forms: Vec<String>,
    pub nodes: u64,
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub ring: String,
    pub subset: Option<String>,
    pub sizes_scanned: [usize; 2],
    pub upper_bound: u64,
    pub upper_bound_source: BoundSource,
    pub per_size: Vec<SizeReport>,
    pub max_irreducible_found: usize,
    pub verified_up_to: usize,
    pub certified_complete: bool,
    /// All irreducible normal forms found, by size.
    #[serde(skip)]
    pub classes: BTreeMap<usize, Vec<Vec<Elem>>>,
}

impl SearchReport {
    pub fn is_partial(&self) -> bool {
        self.per_size.iter().any(|s| !s.complete)
    }
}

/// Scans sizes `3..=max_n` for irreducible λ-quiddities. Stops at the first
/// size whose budget runs out. Finding one above the proven bound is an error.
pub fn ell_search(ring: &Arc<Ring>, max_n: usize, subset: Option<&SubsetR>, opts: &SearchOptions) -> Result<SearchReport> {
    if max_n < 4 {
        return Err(Error::TooShort { op: "ell search (max size)", min: 4, got: max_n });
    }
    let (bound, source) = applicable_bound(ring, subset)?;
    let mut report = SearchReport {
        ring: ring.spec().to_string(),
        subset: subset.map(|s| s.format()),
        sizes_scanned: [3, max_n],
        upper_bound: bound,
        upper_bound_source: source,
        per_size: Vec::new(),
        max_irreducible_found: 0,
        verified_up_to: 2,
        certified_complete: false,
        classes: BTreeMap::new(),
    };
    for n in 3..=max_n {
        let e = enumerate_irreducible(ring, n, subset, opts)?;
        if !e.tuples.is_empty() {
            if n as u64 > bound {
                return Err(Error::BoundViolation { n, bound: bound as usize });
            }
            report.max_irreducible_found = n;
        }
        let quiddity_count = match count_quiddities(ring, n, subset) {
            Ok(c) => Some(c),
            Err(Error::ScaleGuard { .. } | Error::CountOverflow(_)) => None,
            Err(err) => return Err(err),
        };
        report.per_size.push(SizeReport {
            n,
            quiddity_count,
            irreducible_count: e.raw_count,
            irreducible_class_count: e.tuples.len(),
            sample_normal_forms: e.tuples.iter().take(opts.sample_limit).map(|t| ring.format_tuple(t)).collect(),
            nodes: e.nodes,
            complete: e.complete,
        });
        report.classes.insert(n, e.tuples);
        if !e.complete {
            break;
        }
        report.verified_up_to = n;
    }
    report.certified_complete = report.verified_up_to as u64 >= bound;
    Ok(report)
}

/// `(2, …, 2)` of length `car(A)`, checked to be an irreducible λ-quiddity
/// with sign `+1` only. `None` when `car(A) <= 3` or the checks fail.
pub fn certificate_two_tuple(ring: &Arc<Ring>) -> Option<QTuple> {
    let p = ring.characteristic();
    if p <= 3 {
        return None;
    }
    let t = QTuple::new(ring, vec![ring.from_int(2); p as usize]).ok()?;
    let sign = sign_of(ring, t.entries())?;
    if !sign.plus || sign.minus || !is_irreducible(&t, None).ok()? {
        return None;
    }
    Some(t)
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSummary {
    pub ring: String,
    pub max_irreducible_found: usize,
    pub verified_up_to: usize,
    pub upper_bound: u64,
    pub certified_complete: bool,
}

impl From<&SearchReport> for SearchSummary {
    fn from(r: &SearchReport) -> Self {
        SearchSummary {
            ring: r.ring.clone(),
            max_irreducible_found: r.max_irreducible_found,
            verified_up_to: r.verified_up_to,
            upper_bound: r.upper_bound,
            certified_complete: r.certified_complete,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotonicityVerdict {
    /// Both searches certified and `ℓ_sub <= ℓ_super`.
    Holds,
    /// At least one side is uncertified; only bounds were compared.
    BoundOnly,
    Violated,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub embedding: &'static str,
    pub sub: SearchSummary,
    #[serde(rename = "super")]
    pub sup: SearchSummary,
    /// The largest irreducibles of the sub ring stay irreducible after embedding.
    pub embedded_irreducible: bool,
    pub verdict: MonotonicityVerdict,
}

/// Compares `ℓ` of a ring and of a ring containing it. The only embedding
/// supported is the canonical unitary one `Z/N -> B` with `N = car(B)`.
pub fn monotonicity_check(sub: &Arc<Ring>, sup: &Arc<Ring>, opts: &SearchOptions) -> Result<MonotonicityReport> {
    let n = match sub.spec() {
        crate::ring::RingSpec::ZMod(n) => *n,
        _ => 0,
    };
    if n == 0 || n != sup.characteristic() {
        return Err(Error::Unsupported(format!(
            "no unitary embedding {} -> {}: only Z/N into a ring of characteristic N is supported \
             (a factor map x -> (x,0) sends 1 to a non-identity idempotent)",
            sub.spec(),
            sup.spec()
        )));
    }
    let search = |r: &Arc<Ring>| -> Result<SearchReport> {
        let (bound, _) = applicable_bound(r, None)?;
        ell_search(r, (bound as usize).max(4), None, opts)
    };
    let a = search(sub)?;
    let b = search(sup)?;
    let embed = |t: &Vec<Elem>| -> Vec<Elem> { t.iter().map(|e| sup.from_int(e.0 as i64)).collect() };
    let top = a.classes.get(&a.max_irreducible_found).cloned().unwrap_or_default();
    let embedded_irreducible = top
        .iter()
        .all(|t| reduction_window_unchecked(sup, &embed(t), None).is_none() && sign_of(sup, &embed(t)).is_some());
    let verdict = if a.certified_complete && b.certified_complete {
        if a.max_irreducible_found <= b.max_irreducible_found {
            MonotonicityVerdict::Holds
        } else {
            MonotonicityVerdict::Violated
        }
    } else if (a.max_irreducible_found as u64) <= b.upper_bound && embedded_irreducible {
        MonotonicityVerdict::BoundOnly
    } else {
        MonotonicityVerdict::Violated
    };
    Ok(MonotonicityReport {
        embedding: "prime_subring",
        sub: SearchSummary::from(&a),
        sup: SearchSummary::from(&b),
        embedded_irreducible,
        verdict,
    })
}
