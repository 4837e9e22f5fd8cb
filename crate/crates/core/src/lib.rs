//! Horofunction boundaries of finite-dimensional normed spaces.
//!
//! This crate computes with the ideal boundaries of `R^N` under the `lp`
//! norms (`1 <= p <= inf`), the variation seminorm `top(x) - bot(x)`, and
//! Hilbert's projective metric on the open positive cone. It provides:
//!
//! - closed-form evaluators for every horofunction family, together with the
//!   explicit escaping sequences that realize each boundary point;
//! - a classifier that recovers the limiting horofunction from finitely many
//!   samples of an escaping sequence;
//! - Hilbert-metric tools for positive matrices: horoball certificates, the
//!   invariant set, contraction checks and a Perron fixed-point solver.
//!
//! Everything is pure and allocation-light; the crate is `no_std` and only
//! needs `alloc`. File formats and the command-line front end live in the
//! companion `horo` crate.
//!
//! Points of the positive cone ([`PositiveVector`]) are stored by their
//! logarithms, so escaping sequences such as `(e^-n, e^n)` stay representable
//! for `n` far beyond the range of `f64::exp`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
mod extended;

pub mod classify;
pub mod hilbert;
pub mod horo;
pub mod space;

pub use error::{Error, Result, Violation};
pub use extended::ExtendedNonneg;
pub use hilbert::{HoroballCertificate, PerronResult, PositiveMatrix};
pub use horo::{
    Family, HilbertHoro, HorofunctionParam, L1Horo, LinfHoro, LpHoro, Sign, VarHoro,
};
pub use space::{NormKind, PExponent, PositiveVector, Vector};
