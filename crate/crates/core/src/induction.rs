//! The folding coproduct and Jordan-Hölder multiplicities of induced
//! modules.
//!
//! Folding γ sends a multisegment to its class modulo translation by `m`;
//! dually, the coproduct Δ sends the normalized class `f_x` of the cyclic
//! quiver to the sum of `f̲_x̲` over the fiber of γ, truncated to a window.
//! The multiplicity `m_{x,x̲}` is the coefficient of `b̲_x̲` in `Δ(b_x)` at
//! `v = 1`; it equals the Jordan-Hölder multiplicity of the simple module
//! labelled `x` in the module induced from the simple labelled `x̲`.

use crate::hallalg::{
    CyclicQuiver, HallAlgebra, HallQuiver, LaurentInt, LinearQuiver, Limits,
};
use crate::multiseg::{Multisegment, PeriodicMultisegment, Window};
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Largest fiber the coproduct is willing to materialize.
const FIBER_CAP: u64 = 1_000_000;

/// Report for a fixed periodic class `x`: the coefficient of `b̲_x̲` in
/// `Δ(b_x)` for every `x̲` inside the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub x: PeriodicMultisegment,
    pub entries: BTreeMap<Multisegment, u64>,
    pub window: Window,
    /// True only if a doubled window reproduced every entry.
    pub stable: bool,
}

/// Report for a fixed simple `x̲`: the Jordan-Hölder profile of the induced
/// module, i.e. `m_{x,x̲}` over all periodic `x` of the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedReport {
    pub xbar: Multisegment,
    pub m: u32,
    pub entries: BTreeMap<PeriodicMultisegment, u64>,
    pub window: Window,
    pub stable: bool,
}

/// Hall polynomials of the linear quiver carried between windows and runs;
/// they do not depend on the truncation.
pub type LinearPolySeed = Vec<((Multisegment, Multisegment, Multisegment), crate::hallcount::QPoly)>;

/// Shared state for induction computations: the cyclic Hall algebra and one
/// linear Hall algebra per truncation window.
pub struct Inducer {
    pub cyclic: HallAlgebra<CyclicQuiver>,
    linear: BTreeMap<Window, HallAlgebra<LinearQuiver>>,
    linear_seed: LinearPolySeed,
    limits: Limits,
}

impl Inducer {
    pub fn new(m: u32) -> Self {
        Self::with_limits(m, Limits::default())
    }

    pub fn with_limits(m: u32, limits: Limits) -> Self {
        Inducer {
            cyclic: HallAlgebra::with_limits(CyclicQuiver { m }, limits),
            linear: BTreeMap::new(),
            linear_seed: Vec::new(),
            limits,
        }
    }

    pub fn period(&self) -> u32 {
        self.cyclic.quiver.m
    }

    /// Preloads Hall polynomials into every linear algebra created later.
    pub fn set_linear_poly_seed(&mut self, seed: LinearPolySeed) {
        self.linear_seed = seed;
    }

    /// Union of the Hall polynomials cached by all linear algebras so far.
    pub fn harvest_linear_polys(&self) -> LinearPolySeed {
        let mut out: BTreeMap<(Multisegment, Multisegment, Multisegment), crate::hallcount::QPoly> =
            BTreeMap::new();
        for alg in self.linear.values() {
            for (key, poly) in alg.table.cached_polys() {
                out.insert(key.clone(), poly.clone());
            }
        }
        out.into_iter().collect()
    }

    pub fn linear_algebra(&mut self, window: Window) -> &mut HallAlgebra<LinearQuiver> {
        if !self.linear.contains_key(&window) {
            let mut alg = HallAlgebra::with_limits(LinearQuiver { window }, self.limits);
            for ((m_l, n_l, p_l), poly) in &self.linear_seed {
                alg.table
                    .insert_poly((m_l.clone(), n_l.clone(), p_l.clone()), poly.clone());
            }
            // later windows inherit what earlier ones computed
            let inherited: LinearPolySeed = self.harvest_linear_polys();
            for ((m_l, n_l, p_l), poly) in inherited {
                alg.table.insert_poly((m_l, n_l, p_l), poly);
            }
            self.linear.insert(window, alg);
        }
        self.linear.get_mut(&window).unwrap()
    }

    /// Windows and algebras created so far, for cache harvesting.
    pub fn linear_algebras(&self) -> impl Iterator<Item = (&Window, &HallAlgebra<LinearQuiver>)> {
        self.linear.iter()
    }

    /// Default truncation window: the support of `x̲` extended by
    /// `m · order` in both directions.
    pub fn default_window(&self, xbar: &Multisegment) -> Window {
        let margin = (self.period() as i64) * (xbar.order() as i64).max(1);
        let (lo, hi) = xbar.support().unwrap_or((0, 0));
        Window::new(lo - margin, hi + margin).unwrap()
    }

    /// The coproduct of an element given by its `F`-basis coefficients at
    /// `v = 1`: termwise unfolding into the window.
    pub fn coproduct(
        &self,
        at_v1: &BTreeMap<PeriodicMultisegment, BigInt>,
        window: Window,
    ) -> Result<BTreeMap<Multisegment, BigInt>> {
        let mut out: BTreeMap<Multisegment, BigInt> = BTreeMap::new();
        for (y, c) in at_v1 {
            if c.is_zero() {
                continue;
            }
            let fiber = y.unfold_fiber_bounded(window, FIBER_CAP)?;
            if fiber.is_empty() && !y.is_empty() {
                return Err(Error::WindowTooSmall(format!(
                    "window {window} contains no lift of {y}"
                )));
            }
            for z in fiber {
                let entry = out.entry(z).or_insert_with(BigInt::zero);
                *entry += c;
                if entry.is_zero() {
                    // keep the map free of zeros
                    out.retain(|_, v| !v.is_zero());
                }
            }
        }
        Ok(out)
    }

    /// `Δ(f_x)` truncated to the window, at `v = 1`.
    pub fn delta_f(
        &self,
        x: &PeriodicMultisegment,
        window: Window,
    ) -> Result<BTreeMap<Multisegment, BigInt>> {
        let mut input = BTreeMap::new();
        input.insert(x.clone(), BigInt::from(1));
        self.coproduct(&input, window)
    }

    /// `b_x` expanded in the `F` basis and specialized at `v = 1`.
    fn b_at_v1(&mut self, x: &PeriodicMultisegment) -> Result<BTreeMap<PeriodicMultisegment, BigInt>> {
        let dv = x.dimension_vector();
        let conv = self.cyclic.canonical_basis(&dv)?;
        let b = conv.b_element(x).ok_or_else(|| {
            Error::InvariantViolation(format!("{x} missing from its graded piece"))
        })?;
        Ok(b.specialize_v1())
    }

    /// The coefficient of `b̲_xbar` in `Δ(b_x)`, computed inside `window`.
    fn multiplicity_at(
        &mut self,
        x: &PeriodicMultisegment,
        xbar: &Multisegment,
        window: Window,
    ) -> Result<BigInt> {
        if !xbar.fits(window) {
            return Err(Error::WindowTooSmall(format!(
                "{xbar} does not fit window {window}"
            )));
        }
        let b_coeffs = self.b_at_v1(x)?;
        let delta = self.coproduct(&b_coeffs, window)?;
        // only the graded piece of xbar matters
        let lin = self.linear_algebra(window);
        let target_dv = lin
            .quiver
            .dim_of(xbar)
            .ok_or_else(|| Error::WindowTooSmall(format!("{xbar} outside window {window}")))?;
        let conv = lin.canonical_basis(&target_dv)?;
        let mut f_coords = vec![LaurentInt::zero(); conv.labels.len()];
        for (z, c) in &delta {
            if lin.quiver.dim_of(z).as_ref() == Some(&target_dv) {
                let idx = conv.index_of(z).ok_or_else(|| {
                    Error::InvariantViolation(format!("{z} missing from linear piece"))
                })?;
                f_coords[idx] = LaurentInt::from_bigint(c.clone());
            }
        }
        let b_coords = conv.f_to_b_coords(&f_coords);
        let idx = conv
            .index_of(xbar)
            .ok_or_else(|| Error::InvariantViolation(format!("{xbar} missing from piece")))?;
        Ok(b_coords[idx].eval_one())
    }

    /// The Jordan-Hölder multiplicity `m_{x,x̲}`, verified stable under
    /// window doubling.
    pub fn multiplicity(&mut self, x: &PeriodicMultisegment, xbar: &Multisegment) -> Result<u64> {
        if x.period() != self.period() {
            return Err(Error::DimensionMismatch(format!(
                "{x} has period {} but the inducer has period {}",
                x.period(),
                self.period()
            )));
        }
        if xbar.order() != x.order() {
            return Err(Error::DimensionMismatch(format!(
                "orders differ: {} vs {}",
                xbar.order(),
                x.order()
            )));
        }
        if xbar.fold(self.period()).dimension_vector() != x.dimension_vector() {
            return Ok(0);
        }
        let window = self.default_window(xbar);
        let value = self.multiplicity_at(x, xbar, window)?;
        let doubled = self.multiplicity_at(x, xbar, window.doubled())?;
        if value != doubled {
            return Err(Error::InvariantViolation(format!(
                "multiplicity of {x} in {xbar} unstable: {value} at {window}, {doubled} at {}",
                window.doubled()
            )));
        }
        if value.is_negative() {
            return Err(Error::InvariantViolation(format!(
                "negative multiplicity {value} for {x}, {xbar}"
            )));
        }
        value.to_u64().ok_or_else(|| {
            Error::InvariantViolation(format!("multiplicity {value} does not fit u64"))
        })
    }

    /// Jordan-Hölder profile of the module induced from the simple `x̲`:
    /// `m_{x,x̲}` over every periodic class `x` in the folded graded piece.
    pub fn induce_simple(&mut self, xbar: &Multisegment) -> Result<InducedReport> {
        let m = self.period();
        if xbar.order() > self.limits.max_order {
            return Err(Error::SizeLimit(format!(
                "order {} exceeds limit {}",
                xbar.order(),
                self.limits.max_order
            )));
        }
        let folded_dv = xbar.fold(m).dimension_vector();
        let window = self.default_window(xbar);
        let mut entries = BTreeMap::new();
        for x in crate::multiseg::periodic_with_dim(m, &folded_dv) {
            let value = self.multiplicity(&x, xbar)?;
            if value > 0 {
                entries.insert(x, value);
            }
        }
        Ok(InducedReport {
            xbar: xbar.clone(),
            m,
            entries,
            window,
            stable: true,
        })
    }

    /// The induced standard module: folding of the label.
    pub fn induce_standard(&self, xbar: &Multisegment) -> PeriodicMultisegment {
        xbar.fold(self.period())
    }

    /// All nonzero coefficients of `b̲_x̲` in `Δ(b_x)` for `x̲` inside the
    /// window, with the stability flag from a doubled-window re-run.
    pub fn simple_multiplicities(
        &mut self,
        x: &PeriodicMultisegment,
        window: Window,
    ) -> Result<MultiplicityReport> {
        let entries = self.simple_multiplicities_at(x, window)?;
        let wide = self.simple_multiplicities_at(x, window.doubled())?;
        let stable = entries.iter().all(|(xbar, v)| {
            wide.get(xbar).copied().unwrap_or(0) == *v
        }) && wide
            .iter()
            .filter(|(xbar, _)| xbar.fits(window))
            .all(|(xbar, v)| entries.get(xbar).copied().unwrap_or(0) == *v);
        Ok(MultiplicityReport {
            x: x.clone(),
            entries,
            window,
            stable,
        })
    }

    fn simple_multiplicities_at(
        &mut self,
        x: &PeriodicMultisegment,
        window: Window,
    ) -> Result<BTreeMap<Multisegment, u64>> {
        let b_coeffs = self.b_at_v1(x)?;
        let delta = self.coproduct(&b_coeffs, window)?;
        // group the unfolded terms by graded piece
        let mut by_piece: BTreeMap<Vec<u64>, Vec<(Multisegment, BigInt)>> = BTreeMap::new();
        {
            let lin = self.linear_algebra(window);
            for (z, c) in delta {
                let dv = lin.quiver.dim_of(&z).ok_or_else(|| {
                    Error::InvariantViolation(format!("unfolded label {z} outside window"))
                })?;
                by_piece.entry(dv).or_default().push((z, c));
            }
        }
        let mut entries = BTreeMap::new();
        for (dv, terms) in by_piece {
            let lin = self.linear_algebra(window);
            let conv = lin.canonical_basis(&dv)?;
            let mut f_coords = vec![LaurentInt::zero(); conv.labels.len()];
            for (z, c) in terms {
                let idx = conv.index_of(&z).ok_or_else(|| {
                    Error::InvariantViolation(format!("{z} missing from linear piece"))
                })?;
                f_coords[idx] = LaurentInt::from_bigint(c);
            }
            let b_coords = conv.f_to_b_coords(&f_coords);
            for (idx, coeff) in b_coords.iter().enumerate() {
                let value = coeff.eval_one();
                if value.is_zero() {
                    continue;
                }
                if value.is_negative() {
                    return Err(Error::InvariantViolation(format!(
                        "negative multiplicity at {}",
                        conv.labels[idx]
                    )));
                }
                let value = value.to_u64().ok_or_else(|| {
                    Error::InvariantViolation("multiplicity does not fit u64".into())
                })?;
                entries.insert(conv.labels[idx].clone(), value);
            }
        }
        Ok(entries)
    }
}

/// Decomposition matrix of a graded piece: rows expand the canonical basis
/// in `F` at `v = 1`, so the entry at row `y`, column `x` is the
/// Jordan-Hölder multiplicity `[M_x : L_y]`.
pub fn decomposition_matrix<Q: crate::hallalg::HallQuiver>(
    alg: &mut HallAlgebra<Q>,
    dv: &[u64],
) -> Result<(Vec<Q::Label>, Vec<Vec<BigInt>>)> {
    let conv = alg.canonical_basis(dv)?;
    let matrix = conv
        .f_to_b
        .iter()
        .map(|row| row.iter().map(|c| c.eval_one()).collect())
        .collect();
    Ok((conv.labels, matrix))
}
