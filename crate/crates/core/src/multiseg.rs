//! Multisegment combinatorics for nilpotent representations of linear and
//! cyclic quivers.
//!
//! A multisegment is a finite multiset of integer intervals `[i,j]`; it labels
//! an isomorphism class of nilpotent representations of the linear quiver
//! `... -> i -> i+1 -> ...`. An `m`-periodic multisegment is invariant under
//! translation by `m` and labels a nilpotent representation of the cyclic
//! quiver with `m` vertices; we store one representative per translation
//! class, normalized so the left endpoint lies in `[0, m)`.
//!
//! The module also provides the translation-equivalence machinery for
//! periodic pairs: spectral labels, the canonical representative of an
//! equivalence class, and the graded-dimension consistency check.

use crate::scan::Scanner;
use crate::{Error, Result};
use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Number of integers `t` in `[a, b]` with `t ≡ v (mod m)`.
pub(crate) fn count_congruent(a: i64, b: i64, v: i64, m: i64) -> u64 {
    if a > b {
        return 0;
    }
    debug_assert!(m >= 1);
    // first t >= a with t ≡ v (mod m)
    let r = (v - a).rem_euclid(m);
    let first = a + r;
    if first > b {
        0
    } else {
        ((b - first) / m + 1) as u64
    }
}

/// Closed integer interval used to truncate computations on the linear quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Parse(format!("window [{lo},{hi}] has lo > hi")));
        }
        Ok(Window { lo, hi })
    }

    pub fn width(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }

    pub fn contains(&self, t: i64) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// Wider window for stability checks: the span is added on both sides.
    pub fn doubled(&self) -> Window {
        let span = self.hi - self.lo + 1;
        Window {
            lo: self.lo - span,
            hi: self.hi + span,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// A segment `[i, j]` with `i ≤ j`; its length is `j - i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    i: i64,
    j: i64,
}

impl Segment {
    pub fn new(i: i64, j: i64) -> Result<Self> {
        if i > j {
            return Err(Error::Parse(format!("segment [{i},{j}] has i > j")));
        }
        Ok(Segment { i, j })
    }

    pub fn left(&self) -> i64 {
        self.i
    }

    pub fn right(&self) -> i64 {
        self.j
    }

    pub fn len(&self) -> u64 {
        (self.j - self.i + 1) as u64
    }

    /// `σ[n]` shifts indices: the segment `[i,j]` becomes `[i-n, j-n]`.
    pub fn shifted(&self, n: i64) -> Segment {
        Segment {
            i: self.i - n,
            j: self.j - n,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.i, self.j)
    }
}

fn fmt_counts(f: &mut fmt::Formatter<'_>, counts: &BTreeMap<Segment, u64>) -> fmt::Result {
    write!(f, "{{")?;
    for (idx, (seg, mult)) in counts.iter().enumerate() {
        if idx > 0 {
            write!(f, ";")?;
        }
        write!(f, "{seg}:{mult}")?;
    }
    write!(f, "}}")
}

fn scan_counts(sc: &mut Scanner<'_>) -> Result<BTreeMap<Segment, u64>> {
    let mut counts: BTreeMap<Segment, u64> = BTreeMap::new();
    sc.expect('{')?;
    if sc.eat('}') {
        return Ok(counts);
    }
    loop {
        sc.expect('[')?;
        let i = sc.int()?;
        sc.expect(',')?;
        let j = sc.int()?;
        sc.expect(']')?;
        sc.expect(':')?;
        let mult = sc.uint()?;
        if mult == 0 {
            return Err(Error::Parse("segment multiplicity must be positive".to_owned()));
        }
        let seg = Segment::new(i, j)?;
        *counts.entry(seg).or_insert(0) += mult;
        if sc.eat('}') {
            return Ok(counts);
        }
        sc.expect(';')?;
    }
}

/// A finite multiset of segments: a label for an isomorphism class of
/// nilpotent representations of the linear quiver.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Multisegment {
    counts: BTreeMap<Segment, u64>,
}

impl Multisegment {
    pub fn new() -> Self {
        Multisegment::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Segment, u64)>>(pairs: I) -> Self {
        let mut counts = BTreeMap::new();
        for (seg, mult) in pairs {
            if mult > 0 {
                *counts.entry(seg).or_insert(0) += mult;
            }
        }
        Multisegment { counts }
    }

    pub fn add(&mut self, seg: Segment, mult: u64) {
        if mult > 0 {
            *self.counts.entry(seg).or_insert(0) += mult;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Segment, &u64)> {
        self.counts.iter()
    }

    /// Total order: sum of multiplicity times length.
    pub fn order(&self) -> u64 {
        self.counts.iter().map(|(s, m)| m * s.len()).sum()
    }

    /// Finitely supported graded dimension vector.
    pub fn dimension_vector(&self) -> BTreeMap<i64, u64> {
        let mut dv = BTreeMap::new();
        for (seg, mult) in &self.counts {
            for t in seg.i..=seg.j {
                *dv.entry(t).or_insert(0) += mult;
            }
        }
        dv
    }

    /// Smallest and largest vertex touched, if any segment exists.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.counts.keys().map(|s| s.i).min()?;
        let hi = self.counts.keys().map(|s| s.j).max()?;
        Some((lo, hi))
    }

    pub fn fits(&self, window: Window) -> bool {
        match self.support() {
            None => true,
            Some((lo, hi)) => window.lo <= lo && hi <= window.hi,
        }
    }

    /// `σ[n]`: every segment `[i,j]` becomes `[i-n, j-n]`.
    pub fn shift(&self, n: i64) -> Multisegment {
        Multisegment {
            counts: self
                .counts
                .iter()
                .map(|(s, m)| (s.shifted(n), *m))
                .collect(),
        }
    }

    /// Reduction modulo translation by `m`: counts of segments in the same
    /// translation class are summed.
    pub fn fold(&self, m: u32) -> PeriodicMultisegment {
        let mut folded = PeriodicMultisegment::new(m);
        for (seg, mult) in &self.counts {
            folded.add(*seg, *mult);
        }
        folded
    }

    /// Rank of the length-`l` arrow path starting at vertex `v`.
    pub fn path_rank(&self, v: i64, l: u64) -> u64 {
        let l = l as i64;
        self.counts
            .iter()
            .filter(|(s, _)| v >= s.i && v + l <= s.j)
            .map(|(_, m)| *m)
            .sum()
    }

    /// All path ranks `(ℓ, v)` for `ℓ = 1..=cutoff` over `vertices`, in a
    /// fixed order; used both for the degeneration order and as a sort key.
    pub fn rank_vector(&self, vertices: impl Iterator<Item = i64> + Clone, cutoff: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for l in 1..=cutoff {
            for v in vertices.clone() {
                out.push(self.path_rank(v, l));
            }
        }
        out
    }

    /// Degeneration order: `self ≤ other` when the orbit of `self` lies in
    /// the closure of the orbit of `other`.
    pub fn degeneration_leq(&self, other: &Multisegment) -> Result<bool> {
        if self.dimension_vector() != other.dimension_vector() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compare {self} and {other}"
            )));
        }
        let d = self.order();
        let (lo, hi) = match self.support() {
            None => return Ok(true),
            Some(s) => s,
        };
        for l in 1..=d {
            for v in lo..=hi {
                if self.path_rank(v, l) > other.path_rank(v, l) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_counts(f, &self.counts)
    }
}

impl FromStr for Multisegment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sc = Scanner::new(s);
        let counts = scan_counts(&mut sc)?;
        sc.finish()?;
        Ok(Multisegment { counts })
    }
}

/// An `m`-periodic multisegment, stored as one representative per
/// translation class with left endpoint in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PeriodicMultisegment {
    m: u32,
    counts: BTreeMap<Segment, u64>,
}

impl PeriodicMultisegment {
    pub fn new(m: u32) -> Self {
        assert!(m >= 1, "period must be positive");
        PeriodicMultisegment {
            m,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Segment, u64)>>(m: u32, pairs: I) -> Self {
        let mut out = PeriodicMultisegment::new(m);
        for (seg, mult) in pairs {
            out.add(seg, mult);
        }
        out
    }

    /// Adds `mult` copies of the translation class of `seg`.
    pub fn add(&mut self, seg: Segment, mult: u64) {
        if mult == 0 {
            return;
        }
        let m = self.m as i64;
        let shift = seg.i - seg.i.rem_euclid(m);
        let rep = Segment {
            i: seg.i - shift,
            j: seg.j - shift,
        };
        *self.counts.entry(rep).or_insert(0) += mult;
    }

    pub fn period(&self) -> u32 {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Segment, &u64)> {
        self.counts.iter()
    }

    /// Total order over one period window; equals the module dimension.
    pub fn order(&self) -> u64 {
        self.counts.iter().map(|(s, m)| m * s.len()).sum()
    }

    /// Dimension vector over `Z/m`.
    pub fn dimension_vector(&self) -> Vec<u64> {
        let m = self.m as i64;
        let mut dv = vec![0; self.m as usize];
        for (seg, mult) in &self.counts {
            for (v, slot) in dv.iter_mut().enumerate() {
                *slot += mult * count_congruent(seg.i, seg.j, v as i64, m);
            }
        }
        dv
    }

    /// `σ[n]` followed by re-normalization into the representative window.
    pub fn shift(&self, n: i64) -> PeriodicMultisegment {
        let mut out = PeriodicMultisegment::new(self.m);
        for (seg, mult) in &self.counts {
            out.add(seg.shifted(n), *mult);
        }
        out
    }

    /// Rank of the length-`l` arrow path starting at vertex `v ∈ Z/m`.
    pub fn path_rank(&self, v: i64, l: u64) -> u64 {
        let m = self.m as i64;
        let l = l as i64;
        self.counts
            .iter()
            .map(|(s, mult)| mult * count_congruent(s.i, s.j - l, v, m))
            .sum()
    }

    pub fn rank_vector(&self, cutoff: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for l in 1..=cutoff {
            for v in 0..self.m as i64 {
                out.push(self.path_rank(v, l));
            }
        }
        out
    }

    pub fn degeneration_leq(&self, other: &PeriodicMultisegment) -> Result<bool> {
        if self.m != other.m || self.dimension_vector() != other.dimension_vector() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compare {self} and {other}"
            )));
        }
        let d = self.order();
        for l in 1..=d {
            for v in 0..self.m as i64 {
                if self.path_rank(v, l) > other.path_rank(v, l) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All multisegments that fold to `self` with every segment inside
    /// `window`. Returns an empty list when some translation class has no
    /// admissible translate.
    pub fn unfold_fiber(&self, window: Window) -> Vec<Multisegment> {
        let mut result = vec![Multisegment::new()];
        for (seg, mult) in &self.counts {
            let translates = self.translates_in(seg, window);
            if translates.is_empty() {
                return Vec::new();
            }
            // all multisets of size `mult` drawn from the translates
            let distributions = compositions(*mult, translates.len());
            let mut next = Vec::with_capacity(result.len() * distributions.len());
            for base in &result {
                for dist in &distributions {
                    let mut ms = base.clone();
                    for (seg, count) in translates.iter().zip(dist) {
                        ms.add(*seg, *count);
                    }
                    next.push(ms);
                }
            }
            result = next;
        }
        result.sort();
        result
    }

    /// Number of elements `unfold_fiber` will return, without building them;
    /// saturates at `u64::MAX`.
    pub fn unfold_fiber_size(&self, window: Window) -> u64 {
        let mut total: u64 = 1;
        for (seg, mult) in &self.counts {
            let w = self.translates_in(seg, window).len() as u64;
            total = total.saturating_mul(multiset_count(w, *mult));
        }
        total
    }

    /// `unfold_fiber` guarded by a cap on the fiber size.
    pub fn unfold_fiber_bounded(&self, window: Window, cap: u64) -> Result<Vec<Multisegment>> {
        let size = self.unfold_fiber_size(window);
        if size > cap {
            return Err(Error::SizeLimit(format!(
                "fiber of {self} over {window} has {size} elements, cap {cap}"
            )));
        }
        Ok(self.unfold_fiber(window))
    }

    fn translates_in(&self, seg: &Segment, window: Window) -> Vec<Segment> {
        let m = self.m as i64;
        // lo <= i + t*m  and  j + t*m <= hi
        let t_min = (window.lo - seg.i).div_euclid(m)
            + if (window.lo - seg.i).rem_euclid(m) == 0 {
                0
            } else {
                1
            };
        let t_max = (window.hi - seg.j).div_euclid(m);
        (t_min..=t_max)
            .map(|t| Segment {
                i: seg.i + t * m,
                j: seg.j + t * m,
            })
            .collect()
    }
}

impl fmt::Display for PeriodicMultisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "per({})", self.m)?;
        fmt_counts(f, &self.counts)
    }
}

impl FromStr for PeriodicMultisegment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sc = Scanner::new(s);
        sc.expect_str("per")?;
        sc.expect('(')?;
        let m = sc.uint()?;
        if m == 0 {
            return Err(Error::Parse("period must be positive".to_owned()));
        }
        sc.expect(')')?;
        let counts = scan_counts(&mut sc)?;
        sc.finish()?;
        let mut out = PeriodicMultisegment::new(m as u32);
        for (seg, mult) in counts {
            out.add(seg, mult);
        }
        Ok(out)
    }
}

/// `C(w + c - 1, c)`: multisets of size `c` from `w` options; saturates at
/// `u64::MAX`.
pub fn multiset_count(w: u64, c: u64) -> u64 {
    if w == 0 {
        return if c == 0 { 1 } else { 0 };
    }
    binomial(w + c - 1, c)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc.saturating_mul((n - t) as u128) / (t + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative terms.
fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; parts];
    fn rec(idx: usize, rest: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if idx + 1 == current.len() {
            current[idx] = rest;
            out.push(current.clone());
            return;
        }
        for take in 0..=rest {
            current[idx] = take;
            rec(idx + 1, rest - take, current, out);
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, total, &mut current, &mut out);
    out
}

/// Enumerates every multisegment with the given finitely supported dimension
/// vector, in lexicographic order.
pub fn multisegments_with_dim(dv: &BTreeMap<i64, u64>) -> Vec<Multisegment> {
    let dv: BTreeMap<i64, u64> = dv.iter().filter(|(_, d)| **d > 0).map(|(v, d)| (*v, *d)).collect();
    if dv.is_empty() {
        return vec![Multisegment::new()];
    }
    let lo = *dv.keys().min().unwrap();
    let hi = *dv.keys().max().unwrap();
    let segments: Vec<Segment> = (lo..=hi)
        .flat_map(|i| (i..=hi).map(move |j| Segment { i, j }))
        .filter(|s| (s.i..=s.j).all(|t| dv.get(&t).copied().unwrap_or(0) > 0))
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<(Segment, u64)> = Vec::new();
    let mut budget = dv.clone();
    enumerate_rec(&segments, 0, &mut budget, &mut chosen, &mut out, &seg_cover_finite);
    out.sort();
    out
}

/// Enumerates every `m`-periodic multisegment with the given `Z/m`-graded
/// dimension vector.
pub fn periodic_with_dim(m: u32, dv: &[u64]) -> Vec<PeriodicMultisegment> {
    assert_eq!(dv.len(), m as usize);
    let total: u64 = dv.iter().sum();
    if total == 0 {
        return vec![PeriodicMultisegment::new(m)];
    }
    let mi = m as i64;
    let segments: Vec<Segment> = (0..mi)
        .flat_map(|i| (1..=total as i64).map(move |len| Segment { i, j: i + len - 1 }))
        .collect();
    let budget_map: BTreeMap<i64, u64> = dv.iter().enumerate().map(|(v, d)| (v as i64, *d)).collect();
    let cover = move |seg: &Segment| -> BTreeMap<i64, u64> {
        (0..mi)
            .map(|v| (v, count_congruent(seg.i, seg.j, v, mi)))
            .filter(|(_, c)| *c > 0)
            .collect()
    };
    let mut out = Vec::new();
    let mut chosen: Vec<(Segment, u64)> = Vec::new();
    let mut budget = budget_map;
    enumerate_rec(&segments, 0, &mut budget, &mut chosen, &mut out, &cover);
    let mut out: Vec<PeriodicMultisegment> = out
        .into_iter()
        .map(|ms| {
            let mut p = PeriodicMultisegment::new(m);
            for (seg, mult) in ms.iter() {
                p.add(*seg, *mult);
            }
            p
        })
        .collect();
    out.sort();
    out
}

fn seg_cover_finite(seg: &Segment) -> BTreeMap<i64, u64> {
    (seg.i..=seg.j).map(|t| (t, 1)).collect()
}

fn enumerate_rec<F>(
    segments: &[Segment],
    idx: usize,
    budget: &mut BTreeMap<i64, u64>,
    chosen: &mut Vec<(Segment, u64)>,
    out: &mut Vec<Multisegment>,
    cover: &F,
) where
    F: Fn(&Segment) -> BTreeMap<i64, u64>,
{
    if budget.values().all(|d| *d == 0) {
        out.push(Multisegment::from_pairs(chosen.iter().copied()));
        return;
    }
    if idx == segments.len() {
        return;
    }
    let seg = segments[idx];
    let contrib = cover(&seg);
    let max_mult = contrib
        .iter()
        .map(|(v, c)| budget.get(v).copied().unwrap_or(0) / c)
        .min()
        .unwrap_or(0);
    for mult in (0..=max_mult).rev() {
        if mult > 0 {
            for (v, c) in &contrib {
                *budget.get_mut(v).unwrap() -= c * mult;
            }
            chosen.push((seg, mult));
        }
        enumerate_rec(segments, idx + 1, budget, chosen, out, cover);
        if mult > 0 {
            chosen.pop();
            for (v, c) in &contrib {
                *budget.get_mut(v).unwrap() += c * mult;
            }
        }
    }
}

/// Spectral label of a periodic-pair component: an opaque family name
/// identifying the translation class of `z` together with the exponent
/// numerator `n`, meaning `z = w_family · τ^{n/m}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpectralLabel {
    pub family: String,
    pub exponent_num: i64,
}

/// One component `(σ_a, z_a)` of a periodic pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairComponent {
    pub sigma: PeriodicMultisegment,
    pub z: SpectralLabel,
}

/// An `m`-periodic pair: periodic multisegments with pairwise inequivalent
/// spectral labels, considered up to permutation and the two translation
/// moves. `k` is the fixed integer with `ζ = τ^{k/m}` and `gcd(m, k) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPair {
    k: i64,
    components: Vec<PairComponent>,
}

impl PeriodicPair {
    pub fn new(k: i64, components: Vec<PairComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parse("periodic pair needs at least one component".to_owned()));
        }
        let m = components[0].sigma.period();
        if components.iter().any(|c| c.sigma.period() != m) {
            return Err(Error::DimensionMismatch(
                "pair components have different periods".to_owned(),
            ));
        }
        if k == 0 || gcd(k.unsigned_abs(), m as u64) != 1 {
            return Err(Error::GcdViolation {
                k,
                h: m as i64,
            });
        }
        for (a, ca) in components.iter().enumerate() {
            for cb in components.iter().skip(a + 1) {
                if ca.z.family == cb.z.family {
                    return Err(Error::SpectralClash);
                }
            }
        }
        Ok(PeriodicPair { k, components })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn period(&self) -> u32 {
        self.components[0].sigma.period()
    }

    pub fn components(&self) -> &[PairComponent] {
        &self.components
    }

    /// Sum of the orders of the components.
    pub fn order(&self) -> u64 {
        self.components.iter().map(|c| c.sigma.order()).sum()
    }

    /// Translation `z_a ↦ z_a τ^n` on component `a`.
    pub fn apply_tau(&self, a: usize, n: i64) -> PeriodicPair {
        let mut out = self.clone();
        out.components[a].z.exponent_num += n * self.period() as i64;
        out
    }

    /// Simultaneous translation `(σ_a, z_a) ↦ (σ_a[-n], z_a ζ^n)`.
    pub fn apply_zeta(&self, a: usize, n: i64) -> PeriodicPair {
        let mut out = self.clone();
        out.components[a].sigma = out.components[a].sigma.shift(-n);
        out.components[a].z.exponent_num += n * self.k;
        out
    }

    pub fn swap(&self, a: usize, b: usize) -> PeriodicPair {
        let mut out = self.clone();
        out.components.swap(a, b);
        out
    }

    /// The canonical representative of the equivalence class.
    ///
    /// Since `gcd(m, k) = 1` the translation lattice acts transitively on the
    /// exponent classes, so every component can be moved to exponent 0 by a
    /// unique `ζ`-translation modulo `m` (with the paired shift applied) plus
    /// a `τ`-translation. Components are then sorted by
    /// `(order, segment list, family)`.
    pub fn canonical(&self) -> PeriodicPair {
        let m = self.period() as i64;
        let kinv = mod_inverse(self.k.rem_euclid(m), m);
        let mut components: Vec<PairComponent> = self
            .components
            .iter()
            .map(|c| {
                // choose n in [0, m) with exponent_num + n*k ≡ 0 (mod m)
                let n = ((-c.z.exponent_num).rem_euclid(m) * kinv).rem_euclid(m);
                PairComponent {
                    sigma: c.sigma.shift(-n),
                    z: SpectralLabel {
                        family: c.z.family.clone(),
                        exponent_num: 0,
                    },
                }
            })
            .collect();
        components.sort_by(|a, b| {
            (a.sigma.order(), &a.sigma, &a.z.family).cmp(&(b.sigma.order(), &b.sigma, &b.z.family))
        });
        PeriodicPair {
            k: self.k,
            components,
        }
    }
}

impl fmt::Display for PeriodicPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair({})", self.k)?;
        write!(f, "{{")?;
        for (idx, c) in self.components.iter().enumerate() {
            if idx > 0 {
                write!(f, ";")?;
            }
            write!(f, "({},{},{})", c.sigma, c.z.family, c.z.exponent_num)?;
        }
        write!(f, "}}")
    }
}

impl FromStr for PeriodicPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sc = Scanner::new(s);
        sc.expect_str("pair")?;
        sc.expect('(')?;
        let k = sc.int()?;
        sc.expect(')')?;
        sc.expect('{')?;
        let mut components = Vec::new();
        loop {
            sc.expect('(')?;
            sc.expect_str("per")?;
            sc.expect('(')?;
            let m = sc.uint()?;
            if m == 0 {
                return Err(Error::Parse("period must be positive".to_owned()));
            }
            sc.expect(')')?;
            let counts = scan_counts(&mut sc)?;
            let mut sigma = PeriodicMultisegment::new(m as u32);
            for (seg, mult) in counts {
                sigma.add(seg, mult);
            }
            sc.expect(',')?;
            let family = sc.ident()?;
            sc.expect(',')?;
            let exponent_num = sc.int()?;
            sc.expect(')')?;
            components.push(PairComponent {
                sigma,
                z: SpectralLabel {
                    family,
                    exponent_num,
                },
            });
            if sc.eat('}') {
                break;
            }
            sc.expect(';')?;
        }
        sc.finish()?;
        PeriodicPair::new(k, components)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, for `gcd(a, m) = 1` and `m ≥ 1`.
fn mod_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(m)
}

/// A truncation of a `Z`-graded dimension series: coefficients on a closed
/// exponent window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesWindow {
    pub window: Window,
    pub coeffs: BTreeMap<i64, u64>,
}

impl SeriesWindow {
    pub fn new(window: Window, coeffs: BTreeMap<i64, u64>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(e, c)| window.contains(*e) && *c > 0)
            .collect();
        SeriesWindow { window, coeffs }
    }
}

/// Checks the graded dimension series generated by `σ` against a claimed
/// truncation: every translate `[i+sm, j+sm]` of a class contributes
/// `t^{k(i+sm)} + t^{k(i+sm+1)} + ... + t^{k(j+sm)}`.
pub fn pair_consistency(sigma: &PeriodicMultisegment, claimed: &SeriesWindow, k: i64) -> bool {
    assert!(k != 0, "k must be nonzero");
    let m = sigma.period() as i64;
    let mut generated: BTreeMap<i64, u64> = BTreeMap::new();
    for e in claimed.window.lo..=claimed.window.hi {
        // exponent e receives contributions from positions t with k*t = e
        if e % k != 0 {
            continue;
        }
        let t = e / k;
        let mut total = 0u64;
        for (seg, mult) in sigma.iter() {
            // number of translates [i+sm, j+sm] containing t
            total += mult * count_congruent_translates(seg.i, seg.j, t, m);
        }
        if total > 0 {
            generated.insert(e, total);
        }
    }
    generated == claimed.coeffs
}

/// Number of `s ∈ Z` with `i + s·m ≤ t ≤ j + s·m`.
fn count_congruent_translates(i: i64, j: i64, t: i64, m: i64) -> u64 {
    // s ≥ (t - j)/m  and  s ≤ (t - i)/m
    let s_min = (t - j).div_euclid(m) + if (t - j).rem_euclid(m) == 0 { 0 } else { 1 };
    let s_max = (t - i).div_euclid(m);
    if s_min > s_max {
        0
    } else {
        (s_max - s_min + 1) as u64
    }
}
