//! Combinatorial kernel for Hall algebras of cyclic and linear quivers.
//!
//! The crate computes with isomorphism classes of nilpotent quiver
//! representations encoded as multisegments:
//!
//! - [`multiseg`]: segments, multisegments, periodic multisegments, folding,
//!   unfolding, path ranks, the degeneration order and periodic pairs.
//! - [`hallcount`]: a brute-force Hall-number oracle over small prime fields
//!   with exact polynomial interpolation in the field size.
//! - [`hallalg`]: generic Hall algebras over Laurent polynomials, the bar
//!   involution and the canonical basis.
//! - [`induction`]: the folding coproduct and Jordan-Hölder multiplicities of
//!   induced modules.
//! - [`affine_comb`]: finite root systems, the level-decorated root sets Π_k
//!   and torus-orbit counts.
//!
//! The crate is `no_std` (with `alloc`); all IO, caching to disk and the
//! command line live in the companion `cyclic-hall` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod affine_comb;
mod error;
pub mod hallalg;
pub mod hallcount;
pub mod induction;
pub mod multiseg;
mod scan;

pub use error::{Error, Result};
