//! Brute-force Hall-number oracle over small prime fields.
//!
//! Representations are realized explicitly: one basis chain per segment,
//! arrow matrices over `F_p`. Submodules are enumerated as arrow-stable
//! graded subspaces in reduced echelon form, classified exactly via path
//! ranks, and Hall polynomials are recovered by interpolating the counts
//! over enough primes, with one held-out prime as verification.

use crate::multiseg::{Multisegment, PeriodicMultisegment, Segment};
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Primes available as sample points. Enough for every degree bound that
/// passes the enumeration-work guard.
pub const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131,
];

/// Hard cap on the estimated number of subspaces a single enumeration sweep
/// may visit.
pub const ENUMERATION_WORK_CAP: u128 = 200_000_000;

// ---------------------------------------------------------------------------
// prime-field matrices

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p is prime and a != 0 mod p
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// Dense row-major matrix over `F_p`. Entries are kept reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    data: Vec<u64>,
}

impl FpMat {
    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        FpMat {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = FpMat::zero(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!(self.p, other.p);
        let mut out = FpMat::zero(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + a * other.get(k, j)) % self.p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let p = m.p;
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            let pivot = (row..m.rows).find(|&r| m.get(r, col) != 0);
            let Some(pr) = pivot else { continue };
            m.data.swap_rows(pr, row, m.cols);
            let inv = inv_mod(m.get(row, col), p);
            for c in col..m.cols {
                let v = m.get(row, c) * inv % p;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && m.get(r, col) != 0 {
                    let f = m.get(r, col);
                    for c in col..m.cols {
                        let v = (m.get(r, c) + (p - f) * m.get(row, c)) % p;
                        m.set(r, c, v);
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == m.rows {
                break;
            }
        }
        rank
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Rows of `other` reduced against the row space of `self` (assumed in
    /// reduced echelon form with known pivot columns). Returns true when all
    /// rows reduce to zero, i.e. row space containment.
    fn contains_rows(&self, pivots: &[usize], other: &FpMat) -> bool {
        let p = self.p;
        for r in 0..other.rows {
            let mut row: Vec<u64> = (0..other.cols).map(|c| other.get(r, c)).collect();
            for (er, &pc) in pivots.iter().enumerate() {
                let f = row[pc] % p;
                if f != 0 {
                    for c in 0..self.cols {
                        row[c] = (row[c] + (p - f) * self.get(er, c)) % p;
                    }
                }
            }
            if row.iter().any(|&v| v != 0) {
                return false;
            }
        }
        true
    }

    /// Solves `self_rows · X = target_rows` where the rows of `self` are an
    /// echelon basis; panics if insoluble (callers check containment first).
    fn coordinates_of(&self, pivots: &[usize], row: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut rem: Vec<u64> = row.to_vec();
        let mut coords = vec![0u64; self.rows];
        for (er, &pc) in pivots.iter().enumerate() {
            let f = rem[pc] % p;
            coords[er] = f;
            if f != 0 {
                for c in 0..self.cols {
                    rem[c] = (rem[c] + (p - f) * self.get(er, c)) % p;
                }
            }
        }
        debug_assert!(rem.iter().all(|&v| v == 0), "vector not in span");
        coords
    }
}

trait SwapRows {
    fn swap_rows(&mut self, a: usize, b: usize, cols: usize);
}

impl SwapRows for Vec<u64> {
    fn swap_rows(&mut self, a: usize, b: usize, cols: usize) {
        if a == b {
            return;
        }
        for c in 0..cols {
            self.swap(a * cols + c, b * cols + c);
        }
    }
}

// ---------------------------------------------------------------------------
// representations

/// Vertex topology of a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepShape {
    /// Cyclic quiver with `m` vertices; arrows `v -> v+1 mod m`.
    Cyclic { m: usize },
    /// Linear quiver on vertices `lo..lo+n`; arrows `v -> v+1`.
    Linear { lo: i64 },
}

/// Explicit nilpotent representation over a prime field: per-vertex
/// dimensions and one arrow matrix per arrow, mapping coordinates at the
/// source vertex to the target vertex (`arrows[v]: dims[v] -> dims[succ v]`).
#[derive(Debug, Clone)]
pub struct FFRep {
    pub p: u64,
    pub shape: RepShape,
    pub dims: Vec<u64>,
    pub arrows: Vec<FpMat>,
}

impl FFRep {
    fn vertex_count(&self) -> usize {
        self.dims.len()
    }

    fn arrow_from(&self, v: usize) -> Option<&FpMat> {
        match self.shape {
            RepShape::Cyclic { .. } => Some(&self.arrows[v]),
            RepShape::Linear { .. } => {
                if v + 1 < self.dims.len() {
                    Some(&self.arrows[v])
                } else {
                    None
                }
            }
        }
    }

    pub fn total_dim(&self) -> u64 {
        self.dims.iter().sum()
    }

    /// The composite of `d` full cycles must vanish (cyclic shape only;
    /// linear representations are nilpotent for free).
    pub fn is_nilpotent(&self) -> bool {
        match self.shape {
            RepShape::Linear { .. } => true,
            RepShape::Cyclic { m } => {
                let d = self.total_dim();
                if d == 0 {
                    return true;
                }
                let mut cycle = FpMat::identity(self.dims[0] as usize, self.p);
                for _ in 0..d {
                    for v in 0..m {
                        cycle = self.arrows[v].mul(&cycle);
                    }
                }
                cycle.is_zero()
            }
        }
    }

    /// Rank of the composite of `l` arrows starting at vertex `v`.
    pub fn path_rank(&self, v: usize, l: u64) -> u64 {
        if l == 0 {
            return self.dims[v];
        }
        let n = self.vertex_count();
        let mut acc = FpMat::identity(self.dims[v] as usize, self.p);
        let mut at = v;
        for _ in 0..l {
            let Some(a) = self.arrow_from(at) else {
                return 0;
            };
            acc = a.mul(&acc);
            at = match self.shape {
                RepShape::Cyclic { m } => (at + 1) % m,
                RepShape::Linear { .. } => at + 1,
            };
            let _ = n;
        }
        acc.rank() as u64
    }
}

/// Builds the block representation of a periodic multisegment: one basis
/// chain per segment copy.
pub fn rep_of_periodic(x: &PeriodicMultisegment, p: u64) -> FFRep {
    let m = x.period() as usize;
    let dims = x.dimension_vector();
    build_rep(
        RepShape::Cyclic { m },
        &dims,
        p,
        x.iter().map(|(s, c)| (*s, *c)),
        |t| (t.rem_euclid(m as i64)) as usize,
    )
}

/// Builds the block representation of a finite multisegment on the vertex
/// range of its support (callers may rebase via `lo`).
pub fn rep_of_finite(x: &Multisegment, p: u64) -> FFRep {
    let (lo, hi) = x.support().unwrap_or((0, -1));
    let n = if hi < lo { 0 } else { (hi - lo + 1) as usize };
    let dv = x.dimension_vector();
    let dims: Vec<u64> = (0..n)
        .map(|v| dv.get(&(lo + v as i64)).copied().unwrap_or(0))
        .collect();
    build_rep(
        RepShape::Linear { lo },
        &dims,
        p,
        x.iter().map(|(s, c)| (*s, *c)),
        move |t| (t - lo) as usize,
    )
}

fn build_rep(
    shape: RepShape,
    dims: &[u64],
    p: u64,
    segments: impl Iterator<Item = (Segment, u64)>,
    vertex_of: impl Fn(i64) -> usize,
) -> FFRep {
    let n = dims.len();
    let arrow_count = match shape {
        RepShape::Cyclic { m } => m,
        RepShape::Linear { .. } => n.saturating_sub(1),
    };
    let mut arrows: Vec<FpMat> = (0..arrow_count)
        .map(|v| {
            let src = dims[v] as usize;
            let tgt = match shape {
                RepShape::Cyclic { m } => dims[(v + 1) % m] as usize,
                RepShape::Linear { .. } => dims[v + 1] as usize,
            };
            FpMat::zero(tgt, src, p)
        })
        .collect();
    // next free coordinate at each vertex
    let mut next_slot = vec![0usize; n];
    for (seg, mult) in segments {
        for _ in 0..mult {
            // allocate the chain e_i, ..., e_j
            let slots: Vec<(usize, usize)> = (seg.left()..=seg.right())
                .map(|t| {
                    let v = vertex_of(t);
                    let s = next_slot[v];
                    next_slot[v] += 1;
                    (v, s)
                })
                .collect();
            for w in slots.windows(2) {
                let (v, s) = w[0];
                let (_, s2) = w[1];
                arrows[v].set(s2, s, 1);
            }
        }
    }
    FFRep {
        p,
        shape,
        dims: dims.to_vec(),
        arrows,
    }
}

/// Full table of path ranks `r[v][l]`, `l = 0..=d`.
fn rank_table(rep: &FFRep) -> Vec<Vec<u64>> {
    let d = rep.total_dim();
    (0..rep.vertex_count())
        .map(|v| (0..=d).map(|l| rep.path_rank(v, l)).collect())
        .collect()
}

/// Multiplicity of the chain starting at vertex index `a` of length `l`,
/// recovered from the rank table: `c(a,l) = s(a,l) - s(a-1, l+1)` with
/// `s(v,l) = r(v,l-1) - r(v,l)` (vertex arithmetic follows the shape).
fn chain_multiplicities(rep: &FFRep, ranks: &[Vec<u64>]) -> BTreeMap<(usize, u64), u64> {
    let d = rep.total_dim();
    let n = rep.vertex_count();
    let s = |v: i64, l: u64| -> i64 {
        if l == 0 || l > d {
            return 0;
        }
        let v = match rep.shape {
            RepShape::Cyclic { m } => v.rem_euclid(m as i64) as usize,
            RepShape::Linear { .. } => {
                if v < 0 || v >= n as i64 {
                    return 0;
                }
                v as usize
            }
        };
        ranks[v][(l - 1) as usize] as i64 - ranks[v][l as usize] as i64
    };
    let mut out = BTreeMap::new();
    for a in 0..n {
        for l in 1..=d {
            let c = s(a as i64, l) - s(a as i64 - 1, l + 1);
            debug_assert!(c >= 0, "negative chain multiplicity");
            if c > 0 {
                out.insert((a, l), c as u64);
            }
        }
    }
    out
}

/// Isomorphism class of a nilpotent cyclic-quiver representation.
pub fn iso_periodic(rep: &FFRep) -> Result<PeriodicMultisegment> {
    let RepShape::Cyclic { m } = rep.shape else {
        return Err(Error::InvariantViolation("expected cyclic shape".to_string()));
    };
    if !rep.is_nilpotent() {
        return Err(Error::NonNilpotent);
    }
    let ranks = rank_table(rep);
    let mut x = PeriodicMultisegment::new(m as u32);
    for ((a, l), c) in chain_multiplicities(rep, &ranks) {
        x.add(Segment::new(a as i64, a as i64 + l as i64 - 1).unwrap(), c);
    }
    Ok(x)
}

/// Isomorphism class of a linear-quiver representation.
pub fn iso_finite(rep: &FFRep) -> Result<Multisegment> {
    let RepShape::Linear { lo } = rep.shape else {
        return Err(Error::InvariantViolation("expected linear shape".to_string()));
    };
    let ranks = rank_table(rep);
    let mut x = Multisegment::new();
    for ((a, l), c) in chain_multiplicities(rep, &ranks) {
        let i = lo + a as i64;
        x.add(Segment::new(i, i + l as i64 - 1).unwrap(), c);
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// subspace enumeration

/// Iterator over all reduced-echelon bases of `k`-dimensional subspaces of
/// `F_p^n`. Rows are echelon-basis vectors.
struct SubspaceIter {
    n: usize,
    k: usize,
    p: u64,
    pivots: Option<Vec<usize>>,
    free_state: Vec<u64>,
    free_total: u64,
    exhausted: bool,
}

impl SubspaceIter {
    fn new(n: usize, k: usize, p: u64) -> Self {
        let pivots = if k <= n { Some((0..k).collect()) } else { None };
        let mut it = SubspaceIter {
            n,
            k,
            p,
            pivots,
            free_state: Vec::new(),
            free_total: 0,
            exhausted: false,
        };
        it.reset_free();
        it
    }

    fn free_positions(pivots: &[usize], n: usize, k: usize) -> Vec<(usize, usize)> {
        // free entries: (row, col) with col > pivot[row] and col not a pivot
        let mut out = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in (pc + 1)..n {
                if !pivots.contains(&c) {
                    out.push((r, c));
                }
            }
        }
        let _ = k;
        out
    }

    fn reset_free(&mut self) {
        if let Some(p) = &self.pivots {
            let free = Self::free_positions(p, self.n, self.k);
            self.free_state = vec![0; free.len()];
            self.free_total = 0;
        }
    }

    fn current(&self) -> FpMat {
        let pivots = self.pivots.as_ref().unwrap();
        let free = Self::free_positions(pivots, self.n, self.k);
        let mut mat = FpMat::zero(self.k, self.n, self.p);
        for (r, &pc) in pivots.iter().enumerate() {
            mat.set(r, pc, 1);
        }
        for (&(r, c), &v) in free.iter().zip(&self.free_state) {
            mat.set(r, c, v);
        }
        mat
    }

    fn advance(&mut self) {
        // next free assignment, else next pivot set
        for slot in self.free_state.iter_mut() {
            *slot += 1;
            if *slot < self.p {
                return;
            }
            *slot = 0;
        }
        // pivot sets in lexicographic order
        let Some(pivots) = &mut self.pivots else {
            self.exhausted = true;
            return;
        };
        let n = self.n;
        let k = self.k;
        let mut i = k;
        loop {
            if i == 0 {
                self.pivots = None;
                self.exhausted = true;
                return;
            }
            i -= 1;
            if pivots[i] + 1 <= n - (k - i) {
                pivots[i] += 1;
                for j in (i + 1)..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        self.reset_free();
    }
}

impl Iterator for SubspaceIter {
    type Item = (FpMat, Vec<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.exhausted || self.pivots.is_none() {
            return None;
        }
        let item = (self.current(), self.pivots.clone().unwrap());
        self.advance();
        Some(item)
    }
}

/// Gaussian binomial `[n, k]_q` as an exact integer.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    // [n,k]_q = [n-1,k-1]_q + q^k [n-1,k]_q
    let n = n as usize;
    let k = k as usize;
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        let upto = k.min(i);
        for j in (1..=upto).rev() {
            let qj = (q as u128).pow(j as u32);
            row[j] = if j == i { 1 } else { row[j - 1] + qj * row[j] };
        }
    }
    row[k]
}

/// Exact number of graded subspaces of dimension `e`.
fn graded_subspace_count(dims: &[u64], e: &[u64], p: u64) -> u128 {
    let mut total: u128 = 1;
    for (d, k) in dims.iter().zip(e) {
        total = total
            .checked_mul(gaussian_binomial(*d, *k, p))
            .expect("graded subspace count overflows u128");
    }
    total
}

/// Estimated number of graded subspaces visited by one sweep.
fn sweep_work(dims: &[u64], e: &[u64], p: u64) -> u128 {
    let mut total: u128 = 1;
    for (d, k) in dims.iter().zip(e) {
        total = total.saturating_mul(gaussian_binomial(*d, *k, p));
        if total > ENUMERATION_WORK_CAP {
            return total;
        }
    }
    total
}

/// One enumeration sweep: every arrow-stable graded subspace of `M` with
/// per-vertex dimensions `e`, classified as `(class of X, class of M/X)`.
///
/// `classify` maps a representation to its label; sub and quotient
/// representations inherit `M.shape`.
pub fn count_all_submodules<L: Ord>(
    m_rep: &FFRep,
    e: &[u64],
    classify: &dyn Fn(&FFRep) -> Result<L>,
) -> Result<BTreeMap<(L, L), u128>> {
    let p = m_rep.p;
    debug_assert_eq!(e.len(), m_rep.vertex_count());
    if e.iter().zip(&m_rep.dims).any(|(k, d)| k > d) {
        return Ok(BTreeMap::new());
    }

    // semisimple fast path: every graded subspace is stable, subs and
    // quotients are semisimple, so only the count depends on p
    if m_rep.arrows.iter().all(|a| a.is_zero()) {
        let count = graded_subspace_count(&m_rep.dims, e, p);
        let quot_dims: Vec<u64> = m_rep.dims.iter().zip(e).map(|(d, k)| d - k).collect();
        let sub = classify(&zero_rep(m_rep, e))?;
        let quot = classify(&zero_rep(m_rep, &quot_dims))?;
        let mut out = BTreeMap::new();
        if count > 0 {
            out.insert((sub, quot), count);
        }
        return Ok(out);
    }

    if sweep_work(&m_rep.dims, e, p) > ENUMERATION_WORK_CAP {
        return Err(Error::SizeLimit(format!(
            "subspace enumeration would visit > {ENUMERATION_WORK_CAP} candidates"
        )));
    }

    let mut out: BTreeMap<(L, L), u128> = BTreeMap::new();
    let mut bases: Vec<(FpMat, Vec<usize>)> = Vec::with_capacity(e.len());
    enumerate_stable(m_rep, e, 0, &mut bases, &mut |bases| {
        let (sub, quot) = sub_quotient(m_rep, bases);
        let key = (classify(&sub)?, classify(&quot)?);
        *out.entry(key).or_insert(0) += 1;
        Ok(())
    })?;
    Ok(out)
}

fn zero_rep(like: &FFRep, dims: &[u64]) -> FFRep {
    let arrow_count = like.arrows.len();
    let arrows = (0..arrow_count)
        .map(|v| {
            let src = dims[v] as usize;
            let tgt = match like.shape {
                RepShape::Cyclic { m } => dims[(v + 1) % m] as usize,
                RepShape::Linear { .. } => dims[v + 1] as usize,
            };
            FpMat::zero(tgt, src, like.p)
        })
        .collect();
    FFRep {
        p: like.p,
        shape: like.shape,
        dims: dims.to_vec(),
        arrows,
    }
}

/// Depth-first enumeration of stable graded subspaces, vertex by vertex,
/// pruning as soon as an arrow between two chosen vertices breaks stability.
fn enumerate_stable(
    m_rep: &FFRep,
    e: &[u64],
    v: usize,
    bases: &mut Vec<(FpMat, Vec<usize>)>,
    visit: &mut dyn FnMut(&[(FpMat, Vec<usize>)]) -> Result<()>,
) -> Result<()> {
    let n = m_rep.vertex_count();
    if v == n {
        // wrap-around arrow for the cyclic shape
        if let RepShape::Cyclic { m } = m_rep.shape {
            if m > 0 {
                let (last_basis, _) = &bases[m - 1];
                let image = last_basis.mul_transposed(&m_rep.arrows[m - 1]);
                let (b0, piv0) = &bases[0];
                if !b0.contains_rows(piv0, &image) {
                    return Ok(());
                }
            }
        }
        return visit(bases);
    }
    let iter = SubspaceIter::new(m_rep.dims[v] as usize, e[v] as usize, m_rep.p);
    for (basis, pivots) in iter {
        // check the arrow from the previous vertex into v (linear and cyclic
        // both have succ(v-1) = v here)
        if v > 0 {
            if let Some(arrow) = m_rep.arrow_from(v - 1) {
                let image = bases[v - 1].0.mul_transposed(arrow);
                if !basis.contains_rows(&pivots, &image) {
                    continue;
                }
            }
        }
        bases.push((basis, pivots));
        enumerate_stable(m_rep, e, v + 1, bases, visit)?;
        bases.pop();
    }
    Ok(())
}

impl FpMat {
    /// Rows of `self` pushed through `arrow` (i.e. `self · arrowᵀ`): the
    /// images of basis rows under the arrow, as rows in the target space.
    fn mul_transposed(&self, arrow: &FpMat) -> FpMat {
        // self: k x src ; arrow: tgt x src ; out: k x tgt
        debug_assert_eq!(self.cols, arrow.cols);
        let mut out = FpMat::zero(self.rows, arrow.rows, self.p);
        for i in 0..self.rows {
            for j in 0..arrow.rows {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = (acc + self.get(i, c) * arrow.get(j, c)) % self.p;
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

/// Induced representations on a stable graded subspace and its quotient.
fn sub_quotient(m_rep: &FFRep, bases: &[(FpMat, Vec<usize>)]) -> (FFRep, FFRep) {
    let p = m_rep.p;
    let sub_dims: Vec<u64> = bases.iter().map(|(b, _)| b.rows as u64).collect();
    let quot_dims: Vec<u64> = m_rep
        .dims
        .iter()
        .zip(&sub_dims)
        .map(|(d, k)| d - k)
        .collect();

    // complement coordinates: non-pivot columns index the quotient basis
    let complements: Vec<Vec<usize>> = bases
        .iter()
        .enumerate()
        .map(|(v, (_, pivots))| {
            (0..m_rep.dims[v] as usize)
                .filter(|c| !pivots.contains(c))
                .collect()
        })
        .collect();

    let mut sub = zero_rep(m_rep, &sub_dims);
    let mut quot = zero_rep(m_rep, &quot_dims);
    for (a_idx, arrow) in m_rep.arrows.iter().enumerate() {
        let src = a_idx;
        let tgt = match m_rep.shape {
            RepShape::Cyclic { m } => (a_idx + 1) % m,
            RepShape::Linear { .. } => a_idx + 1,
        };
        let (src_basis, _) = &bases[src];
        let (tgt_basis, tgt_pivots) = &bases[tgt];

        // sub arrow: coordinates of arrow(row_r) in the target basis
        let image = src_basis.mul_transposed(arrow);
        let mut sub_arrow = FpMat::zero(sub_dims[tgt] as usize, sub_dims[src] as usize, p);
        for r in 0..image.rows {
            let row: Vec<u64> = (0..image.cols).map(|c| image.get(r, c)).collect();
            let coords = tgt_basis.coordinates_of(tgt_pivots, &row);
            for (tr, val) in coords.iter().enumerate() {
                sub_arrow.set(tr, r, *val);
            }
        }
        sub.arrows[a_idx] = sub_arrow;

        // quotient arrow in complement coordinates: reduce the image of each
        // complement vector modulo the subspace, then read off complement
        // coordinates
        let mut quot_arrow = FpMat::zero(quot_dims[tgt] as usize, quot_dims[src] as usize, p);
        for (qc, &src_coord) in complements[src].iter().enumerate() {
            // image of the src complement basis vector e_{src_coord}
            let mut vec_t: Vec<u64> = (0..arrow.rows).map(|r| arrow.get(r, src_coord)).collect();
            // reduce modulo the target subspace
            for (er, &pc) in tgt_pivots.iter().enumerate() {
                let f = vec_t[pc] % p;
                if f != 0 {
                    for c in 0..vec_t.len() {
                        vec_t[c] = (vec_t[c] + (p - f) * tgt_basis.get(er, c)) % p;
                    }
                }
            }
            for (qr, &tgt_coord) in complements[tgt].iter().enumerate() {
                quot_arrow.set(qr, qc, vec_t[tgt_coord]);
            }
            debug_assert!(
                {
                    let mut ok = true;
                    for (c, val) in vec_t.iter().enumerate() {
                        if *val != 0 && !complements[tgt].contains(&c) {
                            ok = false;
                        }
                    }
                    ok
                },
                "reduced vector has support outside the complement"
            );
        }
        quot.arrows[a_idx] = quot_arrow;
    }
    (sub, quot)
}

// ---------------------------------------------------------------------------
// polynomials in q and interpolation

/// Integer-coefficient polynomial in the field-size variable `q`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    /// Ascending coefficients; no trailing zeros.
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        QPoly::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_u64(&self, q: u64) -> BigInt {
        let q = BigInt::from(q);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &q + c;
        }
        acc
    }

    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*q")?,
                _ => write!(f, "{c}*q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for QPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sc = crate::scan::Scanner::new(s);
        let mut coeffs: Vec<BigInt> = Vec::new();
        loop {
            let c = sc.int()?;
            let mut power = 0usize;
            if sc.eat('*') {
                sc.expect('q')?;
                power = 1;
                if sc.eat('^') {
                    power = sc.uint()? as usize;
                }
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += BigInt::from(c);
            if !sc.eat('+') {
                break;
            }
        }
        sc.finish()?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}

/// Exact fraction over `BigInt`, just enough for Lagrange interpolation.
#[derive(Clone, Debug)]
struct Frac {
    num: BigInt,
    den: BigInt,
}

impl Frac {
    fn from_int(n: BigInt) -> Self {
        Frac {
            num: n,
            den: BigInt::one(),
        }
    }

    fn reduce(mut self) -> Self {
        if self.den.is_negative() {
            self.num = -self.num;
            self.den = -self.den;
        }
        let g = gcd_big(self.num.abs(), self.den.clone());
        if !g.is_zero() && !g.is_one() {
            self.num /= &g;
            self.den /= &g;
        }
        self
    }

    fn add(&self, other: &Frac) -> Frac {
        Frac {
            num: &self.num * &other.den + &other.num * &self.den,
            den: &self.den * &other.den,
        }
        .reduce()
    }

    fn mul(&self, other: &Frac) -> Frac {
        Frac {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
        .reduce()
    }

    fn as_integer(&self) -> Option<BigInt> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }
}

fn gcd_big(mut a: BigInt, mut b: BigInt) -> BigInt {
    while !b.is_zero() {
        let t = &a % &b;
        a = core::mem::replace(&mut b, t);
    }
    a
}

/// Lagrange interpolation through `(x_i, y_i)`; fails if the result is not
/// integral.
pub fn interpolate(points: &[(u64, BigInt)]) -> Result<QPoly> {
    let n = points.len();
    let mut coeffs: Vec<Frac> = vec![Frac::from_int(BigInt::zero()); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial Π_{j≠i} (q - x_j) / (x_i - x_j)
        let mut denom = BigInt::one();
        let mut basis: Vec<BigInt> = vec![BigInt::one()]; // ascending coeffs
        for (j, (xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            denom *= BigInt::from(*xi as i64 - *xj as i64);
            // basis *= (q - xj)
            let mut next = vec![BigInt::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigInt::from(*xj);
            }
            basis = next;
        }
        let scale = Frac {
            num: yi.clone(),
            den: denom,
        }
        .reduce();
        for (k, c) in basis.into_iter().enumerate() {
            coeffs[k] = coeffs[k].add(&scale.mul(&Frac::from_int(c)));
        }
    }
    let ints: Option<Vec<BigInt>> = coeffs.iter().map(|f| f.as_integer()).collect();
    match ints {
        Some(v) => Ok(QPoly::from_coeffs(v)),
        None => Err(Error::InterpolationMismatch(
            "interpolated polynomial is not integral".to_string(),
        )),
    }
}

// ---------------------------------------------------------------------------
// the oracle proper, generic over the label type

/// Labels usable by the oracle: they can build a representation, classify
/// one, and report their dimensions in a frame shared with an ambient label.
pub trait RepLabel: Ord + Clone + fmt::Display {
    fn build_rep(&self, p: u64) -> FFRep;
    fn classify_rep(rep: &FFRep) -> Result<Self>;
    /// Per-vertex dimensions in the vertex frame of `frame`'s representation.
    fn dims_in_frame_of(&self, frame: &Self) -> Option<Vec<u64>>;
    fn total_order(&self) -> u64;
    /// Optional sharper degree bound for the Hall polynomial
    /// `g^{self}_{sub, quot}`.
    fn degree_hint(&self, sub: &Self, quot: &Self) -> Option<u64>;
}

impl RepLabel for PeriodicMultisegment {
    fn build_rep(&self, p: u64) -> FFRep {
        rep_of_periodic(self, p)
    }

    fn classify_rep(rep: &FFRep) -> Result<Self> {
        iso_periodic(rep)
    }

    fn dims_in_frame_of(&self, frame: &Self) -> Option<Vec<u64>> {
        if self.period() != frame.period() {
            return None;
        }
        Some(self.dimension_vector())
    }

    fn total_order(&self) -> u64 {
        self.order()
    }

    fn degree_hint(&self, sub: &Self, quot: &Self) -> Option<u64> {
        if self.period() != 1 {
            return None;
        }
        // Jordan quiver: deg g^λ_{μν} ≤ n(λ) - n(μ) - n(ν)
        let d = n_stat(self) as i64 - n_stat(sub) as i64 - n_stat(quot) as i64;
        Some(d.max(0) as u64)
    }
}

/// `n(λ) = Σ (i-1) λ_i` for the partition of chain lengths (m = 1 only).
fn n_stat(x: &PeriodicMultisegment) -> u64 {
    let mut lens: Vec<u64> = x
        .iter()
        .flat_map(|(s, m)| core::iter::repeat(s.len()).take(*m as usize))
        .collect();
    lens.sort_unstable_by(|a, b| b.cmp(a));
    lens.iter()
        .enumerate()
        .map(|(i, l)| i as u64 * l)
        .sum()
}

impl RepLabel for Multisegment {
    fn build_rep(&self, p: u64) -> FFRep {
        rep_of_finite(self, p)
    }

    fn classify_rep(rep: &FFRep) -> Result<Self> {
        iso_finite(rep)
    }

    fn dims_in_frame_of(&self, frame: &Self) -> Option<Vec<u64>> {
        let (lo, hi) = frame.support()?;
        let dv = self.dimension_vector();
        if dv.keys().any(|v| *v < lo || *v > hi) {
            return None;
        }
        Some((lo..=hi).map(|v| dv.get(&v).copied().unwrap_or(0)).collect())
    }

    fn total_order(&self) -> u64 {
        self.order()
    }

    fn degree_hint(&self, _sub: &Self, _quot: &Self) -> Option<u64> {
        None
    }
}

/// One exact Hall-number evaluation: the count of submodules `X ⊆ M` with
/// `X ≅ sub` and `M/X ≅ quot` over the field with `q` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallNumber<L> {
    pub count: num_bigint::BigUint,
    pub m_label: L,
    pub sub: L,
    pub quot: L,
    pub q: u64,
}

/// In-memory store of enumeration sweeps and interpolated Hall polynomials.
#[derive(Debug, Default)]
pub struct HallTable<L: RepLabel> {
    /// `(M, e, p) -> (sub class, quot class) -> count`
    counts: BTreeMap<(L, Vec<u64>, u64), BTreeMap<(L, L), u128>>,
    /// `(M, N, P) -> Hall polynomial`
    polys: BTreeMap<(L, L, L), QPoly>,
}

impl<L: RepLabel> HallTable<L> {
    pub fn new() -> Self {
        HallTable {
            counts: BTreeMap::new(),
            polys: BTreeMap::new(),
        }
    }

    pub fn cached_polys(&self) -> impl Iterator<Item = (&(L, L, L), &QPoly)> {
        self.polys.iter()
    }

    pub fn insert_poly(&mut self, key: (L, L, L), poly: QPoly) {
        self.polys.insert(key, poly);
    }

    fn sweep(&mut self, m_label: &L, e: &[u64], p: u64) -> Result<&BTreeMap<(L, L), u128>> {
        let key = (m_label.clone(), e.to_vec(), p);
        if !self.counts.contains_key(&key) {
            let rep = m_label.build_rep(p);
            let counts = count_all_submodules(&rep, e, &|r| L::classify_rep(r))?;
            self.counts.insert(key.clone(), counts);
        }
        Ok(self.counts.get(&key).unwrap())
    }

    /// `count_submodules` packaged with its inputs.
    pub fn hall_number(&mut self, m_label: &L, p_label: &L, n_label: &L, q: u64) -> Result<HallNumber<L>> {
        let count = self.count_submodules(m_label, p_label, n_label, q)?;
        Ok(HallNumber {
            count: num_bigint::BigUint::from(count),
            m_label: m_label.clone(),
            sub: p_label.clone(),
            quot: n_label.clone(),
            q,
        })
    }

    /// Exact count of submodules `X ⊆ M` with `X ≅ P` and `M/X ≅ N` over
    /// `F_p`.
    pub fn count_submodules(&mut self, m_label: &L, p_label: &L, n_label: &L, p: u64) -> Result<u128> {
        let Some(e) = p_label.dims_in_frame_of(m_label) else {
            return Ok(0);
        };
        let Some(nd) = n_label.dims_in_frame_of(m_label) else {
            return Ok(0);
        };
        let md = m_label.dims_in_frame_of(m_label).unwrap();
        if e.iter().zip(&nd).zip(&md).any(|((a, b), c)| a + b != *c) {
            return Ok(0);
        }
        let counts = self.sweep(m_label, &e, p)?;
        Ok(counts
            .get(&(p_label.clone(), n_label.clone()))
            .copied()
            .unwrap_or(0))
    }

    /// The Hall polynomial `g^M_{P,N}(q)`: interpolated from counts at
    /// `D + 1` primes and verified at one held-out prime.
    pub fn hall_polynomial(&mut self, m_label: &L, n_label: &L, p_label: &L) -> Result<QPoly> {
        let key = (m_label.clone(), n_label.clone(), p_label.clone());
        if let Some(poly) = self.polys.get(&key) {
            return Ok(poly.clone());
        }
        let poly = self.compute_hall_polynomial(m_label, n_label, p_label)?;
        self.polys.insert(key, poly.clone());
        Ok(poly)
    }

    fn compute_hall_polynomial(&mut self, m_label: &L, n_label: &L, p_label: &L) -> Result<QPoly> {
        let md = m_label.dims_in_frame_of(m_label).unwrap_or_default();
        let (Some(e), Some(nd)) = (
            p_label.dims_in_frame_of(m_label),
            n_label.dims_in_frame_of(m_label),
        ) else {
            return Ok(QPoly::zero());
        };
        if e.iter().zip(&nd).zip(&md).any(|((a, b), c)| a + b != *c) {
            return Ok(QPoly::zero());
        }
        let d_total: u64 = md.iter().sum();
        // degree bound: the count is dominated by the number of graded
        // subspaces, a polynomial of degree Σ e_v (d_v - e_v); d² is a safe
        // fallback and the m = 1 statistic is sharper still
        let subspace_bound: u64 = e.iter().zip(&md).map(|(k, d)| k * (d - k)).sum();
        let mut degree = (d_total * d_total).min(subspace_bound);
        if let Some(hint) = m_label.degree_hint(p_label, n_label) {
            degree = degree.min(hint);
        }
        let needed = degree as usize + 2; // D+1 samples plus one verification
        if needed > PRIMES.len() {
            return Err(Error::SizeLimit(format!(
                "degree bound {degree} needs more than {} primes",
                PRIMES.len()
            )));
        }
        let mut points = Vec::with_capacity(needed - 1);
        for &p in &PRIMES[..needed - 1] {
            let count = self.count_submodules(m_label, p_label, n_label, p)?;
            points.push((p, BigInt::from(count)));
        }
        let poly = interpolate(&points)?;
        let check_prime = PRIMES[needed - 1];
        let direct = self.count_submodules(m_label, p_label, n_label, check_prime)?;
        if poly.eval_u64(check_prime) != BigInt::from(direct) {
            return Err(Error::InterpolationMismatch(format!(
                "g^{m_label}_{{{p_label},{n_label}}} fails at q = {check_prime}"
            )));
        }
        Ok(poly)
    }

}
