use alloc::vec::Vec;

use super::{check_arg_dim, ensure_valid, steps, VALIDATION_TOL};
use crate::error::{Result, Violation};
use crate::space::{lp_norm, signed_pow, PExponent, Vector};

/// Horofunction of `lp`, `1 < p < inf`: the linear functional `x -> -<mu, x>`
/// with `||mu||_q = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpHoro {
    pub p: PExponent,
    pub mu: Vector,
}

impl LpHoro {
    pub fn new(p: PExponent, mu: Vector) -> Result<Self> {
        let h = LpHoro { p, mu };
        ensure_valid(h.violations())?;
        Ok(h)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.p.is_strictly_convex() {
            out.push(Violation::ExponentOutOfRange { p: self.p.value() });
            return out;
        }
        let norm = lp_norm(&self.mu, self.p.dual());
        if (norm - 1.0).abs() > VALIDATION_TOL {
            out.push(Violation::DualNormNotOne { norm });
        }
        out
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        ensure_valid(self.violations())?;
        check_arg_dim(self.mu.dim(), x)?;
        Ok(-self.mu.dot(x)?)
    }

    /// The unit vector `w` of `lp` with `<mu, w> = 1`:
    /// `w_i = sign(mu_i) |mu_i|^(q-1)`.
    pub fn dual_witness(&self) -> Result<Vector> {
        ensure_valid(self.violations())?;
        let q = self.p.dual().value();
        Ok(self.mu.map(|m| signed_pow(m, q - 1.0)))
    }

    /// `y = n w` with `w` the dual witness.
    pub fn escape_point(&self, n: u64) -> Result<Vector> {
        Ok(self.dual_witness()?.scale(steps(n)))
    }

    pub fn approx_eq(&self, other: &LpHoro, tol: f64) -> bool {
        (self.p.value() - other.p.value()).abs() <= tol
            && self.mu.dim() == other.mu.dim()
            && self.mu.iter().zip(other.mu.iter()).all(|(a, b)| (a - b).abs() <= tol)
    }
}
