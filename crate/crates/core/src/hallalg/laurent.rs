//! Laurent polynomials in one variable `v` with big-integer coefficients.

use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};
use core::str::FromStr;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Finitely supported map exponent → coefficient; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct LaurentInt {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        LaurentInt::default()
    }

    pub fn one() -> Self {
        LaurentInt::v_pow(0)
    }

    /// The monomial `v^k`.
    pub fn v_pow(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, BigInt::one());
        LaurentInt { terms }
    }

    pub fn from_bigint(c: BigInt) -> Self {
        let mut out = LaurentInt::zero();
        if !c.is_zero() {
            out.terms.insert(0, c);
        }
        out
    }

    pub fn from_i64(c: i64) -> Self {
        LaurentInt::from_bigint(BigInt::from(c))
    }

    pub fn term(exp: i64, coeff: i64) -> Self {
        let mut out = LaurentInt::zero();
        out.add_term(exp, BigInt::from(coeff));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplication by `v^k`.
    pub fn shifted(&self, k: i64) -> LaurentInt {
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The bar involution `v ↦ v^{-1}`.
    pub fn bar(&self) -> LaurentInt {
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Evaluation at `v = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// True when every exponent is ≥ 1, i.e. the element lies in `vZ[v]`.
    pub fn in_v_zv(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 1)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Splits an antisymmetric element `r` (with `bar(r) = -r`) into its
    /// positive-exponent half `p ∈ vZ[v]`, so that `p - bar(p) = r`. Fails if
    /// `r` is not antisymmetric.
    pub fn positive_half(&self) -> Result<LaurentInt> {
        if (self.bar() + self.clone()) != LaurentInt::zero() {
            return Err(Error::InvariantViolation(
                "bar correction term is not antisymmetric".to_string(),
            ));
        }
        let mut out = LaurentInt::zero();
        for (e, c) in &self.terms {
            if *e > 0 {
                out.add_term(*e, c.clone());
            }
        }
        Ok(out)
    }

    /// Substitutes `q = v^step` into an integer polynomial in `q`.
    pub fn from_qpoly(poly: &crate::hallcount::QPoly, step: i64) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (k, c) in poly.coeffs().iter().enumerate() {
            out.add_term(step * k as i64, c.clone());
        }
        out
    }
}

impl Add for LaurentInt {
    type Output = LaurentInt;
    fn add(mut self, rhs: LaurentInt) -> LaurentInt {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl AddAssign for LaurentInt {
    fn add_assign(&mut self, rhs: LaurentInt) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl Sub for LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: LaurentInt) -> LaurentInt {
        self + (-rhs)
    }
}

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: LaurentInt) -> LaurentInt {
        (&self).mul(&rhs)
    }
}

/// Serialized as ascending `(exponent:coefficient)` pairs; the zero element
/// is the empty string.
impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in &self.terms {
            write!(f, "({e}:{c})")?;
        }
        Ok(())
    }
}

impl FromStr for LaurentInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sc = crate::scan::Scanner::new(s);
        let mut out = LaurentInt::zero();
        while sc.peek() == Some('(') {
            sc.expect('(')?;
            let e = sc.int()?;
            sc.expect(':')?;
            let c = scan_bigint(&mut sc)?;
            sc.expect(')')?;
            out.add_term(e, c);
        }
        sc.finish()?;
        Ok(out)
    }
}

fn scan_bigint(sc: &mut crate::scan::Scanner<'_>) -> Result<BigInt> {
    // reuse the i64 scanner; coefficients beyond i64 are reassembled from
    // digits below
    let mut digits = Vec::new();
    let neg = sc.eat('-');
    loop {
        match sc.peek() {
            Some(ch) if ch.is_ascii_digit() => {
                sc.expect(ch)?;
                digits.push(ch as u8 - b'0');
            }
            _ => break,
        }
    }
    if digits.is_empty() {
        return Err(Error::Parse("expected integer coefficient".to_string()));
    }
    let mut acc = BigInt::zero();
    for d in digits {
        acc = acc * 10 + d;
    }
    Ok(if neg { -acc } else { acc })
}
