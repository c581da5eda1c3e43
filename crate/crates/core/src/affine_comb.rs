//! Finite root systems and the affine-root combinatorics behind the
//! finite-dimensional module computations: the level-decorated root sets
//! `Π_k`, torus-orbit counts, and the dimension formula `k^r`.

use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use num_bigint::BigUint;

/// Simple-type Cartan data, types A through G.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanKind {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl CartanKind {
    pub fn rank(&self) -> usize {
        match self {
            CartanKind::A(r) | CartanKind::B(r) | CartanKind::C(r) | CartanKind::D(r)
            | CartanKind::E(r) => *r,
            CartanKind::F4 => 4,
            CartanKind::G2 => 2,
        }
    }

    /// Bond list `(i, j, a_ij, a_ji)` with 1-indexed Bourbaki nodes.
    fn bonds(&self) -> Vec<(usize, usize, i64, i64)> {
        let r = self.rank();
        let chain = |upto: usize| -> Vec<(usize, usize, i64, i64)> {
            (1..upto).map(|i| (i, i + 1, -1, -1)).collect()
        };
        match self {
            CartanKind::A(_) => chain(r),
            CartanKind::B(_) => {
                let mut e = chain(r - 1);
                e.push((r - 1, r, -1, -2));
                e
            }
            CartanKind::C(_) => {
                let mut e = chain(r - 1);
                e.push((r - 1, r, -2, -1));
                e
            }
            CartanKind::D(_) => {
                let mut e = chain(r - 1);
                e.push((r - 2, r, -1, -1));
                e
            }
            CartanKind::E(_) => {
                // chain 1-3-4-...-r with node 2 attached to node 4
                let mut e = vec![(1usize, 3usize, -1i64, -1i64), (2, 4, -1, -1)];
                for i in 3..r {
                    e.push((i, i + 1, -1, -1));
                }
                e
            }
            CartanKind::F4 => vec![(1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)],
            CartanKind::G2 => vec![(1, 2, -3, -1)],
        }
    }

    /// The Cartan matrix `a_{ij} = ⟨α_j, α_i^∨⟩` in the Bourbaki numbering.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j, aij, aji) in self.bonds() {
            a[i - 1][j - 1] = aij;
            a[j - 1][i - 1] = aji;
        }
        a
    }
}

impl fmt::Display for CartanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanKind::A(r) => write!(f, "A{r}"),
            CartanKind::B(r) => write!(f, "B{r}"),
            CartanKind::C(r) => write!(f, "C{r}"),
            CartanKind::D(r) => write!(f, "D{r}"),
            CartanKind::E(r) => write!(f, "E{r}"),
            CartanKind::F4 => write!(f, "F4"),
            CartanKind::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for CartanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (letter, num) = s.split_at(1);
        let rank: usize = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad type {s:?}")))?;
        let kind = match (letter, rank) {
            ("A" | "a", r) if r >= 1 => CartanKind::A(r),
            ("B" | "b", r) if r >= 2 => CartanKind::B(r),
            ("C" | "c", r) if r >= 2 => CartanKind::C(r),
            ("D" | "d", r) if r >= 3 => CartanKind::D(r),
            ("E" | "e", r) if (6..=8).contains(&r) => CartanKind::E(r),
            ("F" | "f", 4) => CartanKind::F4,
            ("G" | "g", 2) => CartanKind::G2,
            _ => return Err(Error::Parse(format!("unsupported type {s:?}"))),
        };
        Ok(kind)
    }
}

/// A finite root system generated from a Cartan matrix: positive roots in
/// the simple-root basis, heights, the highest root and the Coxeter number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Sorted by `(height, coordinates)`.
    pub positive_roots: Vec<Vec<i64>>,
    pub theta: Vec<i64>,
    /// Coxeter number `h = ht(θ) + 1`.
    pub h: i64,
}

pub fn height(root: &[i64]) -> i64 {
    root.iter().sum()
}

/// Closes the simple roots under the Weyl group and keeps the positive ones.
/// Fails when the closure grows past a finite-type bound.
pub fn generate_roots(cartan: &[Vec<i64>]) -> Result<RootSystem> {
    let r = cartan.len();
    if r == 0 || cartan.iter().any(|row| row.len() != r) {
        return Err(Error::Parse("Cartan matrix must be square".into()));
    }
    const ROOT_BOUND: usize = 1 << 16;
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..r {
        let mut alpha = vec![0i64; r];
        alpha[i] = 1;
        seen.insert(alpha.clone());
        queue.push(alpha);
    }
    while let Some(alpha) = queue.pop() {
        for i in 0..r {
            // s_i(α) = α - ⟨α, α_i^∨⟩ α_i, with ⟨α, α_i^∨⟩ = Σ_j a_{ij} c_j
            let pairing: i64 = (0..r).map(|j| cartan[i][j] * alpha[j]).sum();
            let mut image = alpha.clone();
            image[i] -= pairing;
            if image.iter().any(|c| c.abs() > 512) {
                return Err(Error::NotFiniteType);
            }
            if seen.insert(image.clone()) {
                if seen.len() > ROOT_BOUND {
                    return Err(Error::NotFiniteType);
                }
                queue.push(image);
            }
        }
    }
    let mut positive_roots: Vec<Vec<i64>> = seen
        .into_iter()
        .filter(|a| a.iter().all(|c| *c >= 0) && a.iter().any(|c| *c > 0))
        .collect();
    positive_roots.sort_by_key(|a| (height(a), a.clone()));
    let theta = positive_roots
        .last()
        .cloned()
        .ok_or(Error::NotFiniteType)?;
    let max_h = height(&theta);
    if positive_roots.iter().filter(|a| height(a) == max_h).count() != 1 {
        return Err(Error::InvariantViolation(
            "highest root is not unique; Cartan matrix is not irreducible".into(),
        ));
    }
    Ok(RootSystem {
        rank: r,
        cartan: cartan.to_vec(),
        positive_roots,
        theta,
        h: max_h + 1,
    })
}

impl RootSystem {
    pub fn of_kind(kind: CartanKind) -> Result<Self> {
        generate_roots(&kind.cartan_matrix())
    }

    /// Number of positive roots of the given height.
    pub fn heights_count(&self, h: i64) -> usize {
        self.positive_roots
            .iter()
            .filter(|a| height(a) == h)
            .count()
    }
}

/// The level-decorated root set `Π_k`: pairs `(α, ℓ)` with
/// `(ht(α), ℓ) = (b, a)` or `(b - h, 1 + a)` where `k = a·h + b`, `0 < b < h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiK {
    pub k: i64,
    pub a: i64,
    pub b: i64,
    /// `(root in the simple basis, level)`.
    pub elements: Vec<(Vec<i64>, i64)>,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Builds `Π_k` for `k ≥ 1` with `gcd(k, h) = 1`; its cardinality is always
/// `r + 1`.
pub fn pi_k(rs: &RootSystem, k: i64) -> Result<PiK> {
    if k < 1 {
        return Err(Error::Parse(format!("k must be positive, got {k}")));
    }
    if gcd(k, rs.h) != 1 {
        return Err(Error::GcdViolation { k, h: rs.h });
    }
    let a = k / rs.h;
    let b = k % rs.h;
    let mut elements: Vec<(Vec<i64>, i64)> = Vec::new();
    for root in &rs.positive_roots {
        if height(root) == b {
            elements.push((root.clone(), a));
        }
        // negative roots of height b - h are negatives of positive roots of
        // height h - b
        if height(root) == rs.h - b {
            elements.push((root.iter().map(|c| -c).collect(), 1 + a));
        }
    }
    elements.sort_by_key(|(root, level)| {
        let first_support = root
            .iter()
            .position(|c| *c != 0)
            .unwrap_or(root.len());
        (*level, first_support, root.clone())
    });
    if elements.len() != rs.rank + 1 {
        return Err(Error::InvariantViolation(format!(
            "|Π_{k}| = {} but rank + 1 = {}",
            elements.len(),
            rs.rank + 1
        )));
    }
    Ok(PiK { k, a, b, elements })
}

/// Torus weight of `(α, ℓ)`: the simple-root coordinates of `α` extended by
/// the level.
fn weight_vector(element: &(Vec<i64>, i64)) -> Vec<i64> {
    let mut w = element.0.clone();
    w.push(element.1);
    w
}

/// Rank over the rationals via fraction-free elimination.
fn rank_of(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|c| *c as i128).collect())
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pr, row);
        for r in (row + 1)..nrows {
            if m[r][col] != 0 {
                let (a, b) = (m[row][col], m[r][col]);
                for c in 0..ncols {
                    m[r][c] = m[r][c] * a - m[row][c] * b;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

/// Number of torus orbits on the span of `Π_k`: the `r + 1` weights of `Π_1`
/// are checked to be linearly independent, giving `2^{r+1}` orbits; for
/// `k > 1` the count transports along a Weyl-group element matching the
/// height filters.
pub fn orbit_count(rs: &RootSystem, k: i64) -> Result<BigUint> {
    if k >= 1 && gcd(k, rs.h) != 1 {
        return Err(Error::GcdViolation { k, h: rs.h });
    }
    let pi1 = pi_k(rs, 1)?;
    let weights: Vec<Vec<i64>> = pi1.elements.iter().map(weight_vector).collect();
    if rank_of(&weights) != rs.rank + 1 {
        return Err(Error::InvariantViolation(
            "Π_1 torus weights are linearly dependent".into(),
        ));
    }
    // orbits of an (r+1)-torus with independent weights on an (r+1)-space:
    // one per coordinate support
    let _ = pi_k(rs, k)?; // validates k and the cardinality
    Ok(BigUint::from(1u32) << (rs.rank + 1))
}

/// Direct verification path for `k = 1`: counts subsets of `Π_1` whose
/// weights are linearly independent. Under full independence every subset
/// supports exactly one orbit, so this recounts `2^{r+1}` the long way.
pub fn orbit_count_direct_k1(rs: &RootSystem) -> Result<BigUint> {
    let pi1 = pi_k(rs, 1)?;
    let weights: Vec<Vec<i64>> = pi1.elements.iter().map(weight_vector).collect();
    let n = weights.len();
    if n > 24 {
        return Err(Error::SizeLimit("too many weights to enumerate".into()));
    }
    let mut orbits = BigUint::from(0u32);
    for mask in 0u32..(1 << n) {
        let subset: Vec<Vec<i64>> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| weights[i].clone())
            .collect();
        if rank_of(&subset) == subset.len() {
            orbits += 1u32;
        } else {
            return Err(Error::InvariantViolation(
                "dependent weight subset found; orbit strata are not single orbits".into(),
            ));
        }
    }
    Ok(orbits)
}

/// Dimension of the simple module attached to `Π_k`: `k^r`.
pub fn dim_simple(rs: &RootSystem, k: i64) -> Result<BigUint> {
    if k < 1 {
        return Err(Error::Parse(format!("k must be positive, got {k}")));
    }
    if gcd(k, rs.h) != 1 {
        return Err(Error::GcdViolation { k, h: rs.h });
    }
    Ok(BigUint::from(k as u64).pow(rs.rank as u32))
}

/// Formats a `Π_k` element as `(c1,...,cr;level)`.
pub fn format_element(element: &(Vec<i64>, i64)) -> String {
    let coords: Vec<String> = element.0.iter().map(|c| format!("{c}")).collect();
    format!("({};{})", coords.join(","), element.1)
}
