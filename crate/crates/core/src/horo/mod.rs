//! Horofunction parameters, validators, evaluators and the canonical escaping
//! sequences that realize them.
//!
//! | family  | parameter                          | `h(x)`                                         |
//! |---------|------------------------------------|------------------------------------------------|
//! | `l1`    | `I`, signs on `I`, offsets off `I` | `Σ_I ε_i x_i + Σ_{∉I} (|x_i - μ_i| - |μ_i|)`     |
//! | `lp`    | `μ` on the unit `q`-sphere          | `-<μ, x>`                                      |
//! | `linf`  | `μ̄, ν̄ ∈ [0, inf]^N`                | `top(x - μ̄, -x - ν̄)`                          |
//! | `var`   | disjoint `I, J`, offsets `μ, ν`     | `top(x_I - μ) - bot(x_J + ν)`                  |
//! | `hilbert` | `u, v >= 0`, disjoint supports   | `log top(u ⊙ x) + log top(v ⊙ x^-1)`           |
//!
//! Indices are zero-based. The generic entry points on
//! [`HorofunctionParam`] take plain [`Vector`]s; for the Hilbert family those
//! vectors are log-coordinates of points of the positive cone, which is
//! where `Log` makes the cone isometric to the variation seminorm.

mod hilbert;
mod l1;
mod linf;
mod lp;
mod var;

use alloc::vec::Vec;

pub use hilbert::HilbertHoro;
pub use l1::L1Horo;
pub use linf::LinfHoro;
pub use lp::LpHoro;
pub use var::{var_to_hilbert, VarHoro};

use crate::error::{Error, Result, Violation};
use crate::space::{tau, NormKind, PExponent, Vector};

/// Tolerance used by validators on real-valued side conditions.
pub const VALIDATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    /// Sign of a nonzero real; `None` for zero.
    pub fn of(v: f64) -> Option<Sign> {
        if v > 0.0 {
            Some(Sign::Plus)
        } else if v < 0.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

/// The five boundary families, and the metric each one lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    L1,
    Lp(PExponent),
    Linf,
    Var,
    Hilbert,
}

impl Family {
    /// The (semi)norm whose embedding this family compactifies. Hilbert points
    /// are handled in log-coordinates, where the metric is the variation seminorm.
    pub fn norm_kind(self) -> NormKind {
        match self {
            Family::L1 => NormKind::Lp(PExponent::ONE),
            Family::Lp(p) => NormKind::Lp(p),
            Family::Linf => NormKind::Lp(PExponent::INFINITY),
            Family::Var | Family::Hilbert => NormKind::Var,
        }
    }

    /// Distance from the base point; for Hilbert, `d_H(1, y)` with `y` in log-coordinates.
    pub fn norm(self, y: &Vector) -> f64 {
        self.norm_kind().norm(y)
    }

    /// `tau(y)(x)` in this family's metric.
    pub fn tau(self, y: &Vector, x: &Vector) -> Result<f64> {
        tau(y, self.norm_kind())(x)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::L1 => "l1",
            Family::Lp(_) => "lp",
            Family::Linf => "linf",
            Family::Var => "var",
            Family::Hilbert => "hilbert",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HorofunctionParam {
    L1(L1Horo),
    Lp(LpHoro),
    Linf(LinfHoro),
    Var(VarHoro),
    Hilbert(HilbertHoro),
}

impl HorofunctionParam {
    pub fn dim(&self) -> usize {
        match self {
            HorofunctionParam::L1(h) => h.dim,
            HorofunctionParam::Lp(h) => h.mu.dim(),
            HorofunctionParam::Linf(h) => h.mu_bar.len(),
            HorofunctionParam::Var(h) => h.dim,
            HorofunctionParam::Hilbert(h) => h.u.dim(),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            HorofunctionParam::L1(_) => Family::L1,
            HorofunctionParam::Lp(h) => Family::Lp(h.p),
            HorofunctionParam::Linf(_) => Family::Linf,
            HorofunctionParam::Var(_) => Family::Var,
            HorofunctionParam::Hilbert(_) => Family::Hilbert,
        }
    }

    /// Checks the side conditions of the active family, collecting every violation.
    pub fn validate(&self) -> core::result::Result<(), Vec<Violation>> {
        let violations = match self {
            HorofunctionParam::L1(h) => h.violations(),
            HorofunctionParam::Lp(h) => h.violations(),
            HorofunctionParam::Linf(h) => h.violations(),
            HorofunctionParam::Var(h) => h.violations(),
            HorofunctionParam::Hilbert(h) => h.violations(),
        };
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Evaluates the horofunction. Hilbert arguments are log-coordinates.
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        match self {
            HorofunctionParam::L1(h) => h.eval(x),
            HorofunctionParam::Lp(h) => h.eval(x),
            HorofunctionParam::Linf(h) => h.eval(x),
            HorofunctionParam::Var(h) => h.eval(x),
            HorofunctionParam::Hilbert(h) => h.eval_logs(x),
        }
    }

    /// The `n`-th point of the explicit escaping sequence whose embeddings
    /// converge to this horofunction. Hilbert points are returned in
    /// log-coordinates (see [`HilbertHoro::escape_point`] for the cone point).
    pub fn canonical_escape_sequence(&self, n: u64) -> Result<Vector> {
        match self {
            HorofunctionParam::L1(h) => h.escape_point(n),
            HorofunctionParam::Lp(h) => h.escape_point(n),
            HorofunctionParam::Linf(h) => h.escape_point(n),
            HorofunctionParam::Var(h) => h.escape_point(n),
            HorofunctionParam::Hilbert(h) => Ok(h.escape_point(n)?.logs().clone()),
        }
    }

    /// Parameter equality: index sets and signs exactly, reals within `tol`.
    pub fn approx_eq(&self, other: &HorofunctionParam, tol: f64) -> bool {
        use HorofunctionParam::*;
        match (self, other) {
            (L1(a), L1(b)) => a.approx_eq(b, tol),
            (Lp(a), Lp(b)) => a.approx_eq(b, tol),
            (Linf(a), Linf(b)) => a.approx_eq(b, tol),
            (Var(a), Var(b)) => a.approx_eq(b, tol),
            (Hilbert(a), Hilbert(b)) => a.approx_eq(b, tol),
            _ => false,
        }
    }
}

/// Free-function form of [`HorofunctionParam::validate`].
pub fn validate(param: &HorofunctionParam) -> core::result::Result<(), Vec<Violation>> {
    param.validate()
}

pub(crate) fn ensure_valid(violations: Vec<Violation>) -> Result<()> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParam(violations))
    }
}

pub(crate) fn check_arg_dim(dim: usize, x: &Vector) -> Result<()> {
    crate::space::check_dims(dim, x.dim())
}

// n as a real; exact for every n below 2^53.
pub(crate) fn steps(n: u64) -> f64 {
    n as f64
}
