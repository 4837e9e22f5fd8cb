use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{check_arg_dim, ensure_valid, VarHoro, VALIDATION_TOL};
use crate::error::{Result, Violation};
use crate::space::{top, PositiveVector, Vector};

/// Horofunction of Hilbert's projective metric on the positive cone:
/// `x -> log top(u ⊙ x) + log top(v ⊙ x^-1)` with `u, v >= 0`,
/// `top(u) = top(v) = 1` and `u ⊙ v = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertHoro {
    pub u: Vector,
    pub v: Vector,
}

impl HilbertHoro {
    pub fn new(u: Vector, v: Vector) -> Result<Self> {
        let h = HilbertHoro { u, v };
        ensure_valid(h.violations())?;
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let dim = self.u.dim();
        if self.v.dim() != dim {
            out.push(Violation::LengthMismatch { field: "v", len: self.v.dim(), dim });
            return out;
        }
        for (field, w) in [("u", &self.u), ("v", &self.v)] {
            for (index, &value) in w.iter().enumerate() {
                if value < 0.0 {
                    out.push(Violation::Negative { field, index, value });
                }
            }
            let t = top(w);
            if (t - 1.0).abs() > VALIDATION_TOL {
                out.push(Violation::TopNotOne { field, top: t });
            }
        }
        for index in 0..dim {
            if self.u[index] * self.v[index] != 0.0 {
                out.push(Violation::SupportsOverlap { index });
            }
        }
        out
    }

    pub fn eval(&self, x: &PositiveVector) -> Result<f64> {
        self.eval_logs(x.logs())
    }

    /// Evaluation at the cone point with log-coordinates `logs`.
    pub fn eval_logs(&self, logs: &Vector) -> Result<f64> {
        ensure_valid(self.violations())?;
        check_arg_dim(self.dim(), logs)?;
        Ok(log_top_weighted(&self.u, logs, 1.0) + log_top_weighted(&self.v, logs, -1.0))
    }

    /// The variation-seminorm parameter conjugate to this one under `Log`:
    /// `I = supp(u)`, `mu_i = -log u_i`, and likewise for `v`.
    pub fn to_var(&self) -> Result<VarHoro> {
        ensure_valid(self.violations())?;
        let side = |w: &Vector| -> BTreeMap<usize, f64> {
            w.iter()
                .enumerate()
                .filter(|(_, &x)| x > 0.0)
                // top(w) = 1 up to the validation tolerance; clamp the offset at 0
                .map(|(i, &x)| (i, (-libm::log(x)).max(0.0)))
                .collect()
        };
        Ok(VarHoro { dim: self.dim(), mu: side(&self.u), nu: side(&self.v) })
    }

    /// The escaping point `Exp(y^n)` with `y^n` the variation-seminorm
    /// sequence of [`to_var`](HilbertHoro::to_var).
    pub fn escape_point(&self, n: u64) -> Result<PositiveVector> {
        Ok(PositiveVector::from_logs(self.to_var()?.escape_point(n)?))
    }

    pub fn approx_eq(&self, other: &HilbertHoro, tol: f64) -> bool {
        let close = |a: &Vector, b: &Vector| {
            a.dim() == b.dim()
                && a.iter().zip(b.iter()).all(|(x, y)| (x == &0.0) == (y == &0.0) && (x - y).abs() <= tol)
        };
        close(&self.u, &other.u) && close(&self.v, &other.v)
    }
}

// log top(w ⊙ Exp(sign * logs)), skipping the zero weights.
fn log_top_weighted(w: &Vector, logs: &Vector, sign: f64) -> f64 {
    w.iter()
        .zip(logs.iter())
        .filter(|(&wi, _)| wi > 0.0)
        .map(|(&wi, &l)| libm::log(wi) + sign * l)
        .fold(f64::NEG_INFINITY, f64::max)
}
