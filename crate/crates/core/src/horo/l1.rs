use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{check_arg_dim, ensure_valid, steps, Sign};
use crate::error::{Result, Violation};
use crate::space::{l1_offset, Vector};

/// Horofunction of `l1`: coordinates in `I` (the keys of `eps`) escape with
/// sign `-eps_i`, the others converge to `mu_i`.
///
/// For `dim = 1` this is the two-point boundary `x -> ±x`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Horo {
    pub dim: usize,
    pub eps: BTreeMap<usize, Sign>,
    pub mu: BTreeMap<usize, f64>,
}

impl L1Horo {
    pub fn new(
        dim: usize,
        eps: impl IntoIterator<Item = (usize, Sign)>,
        mu: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let h = L1Horo { dim, eps: eps.into_iter().collect(), mu: mu.into_iter().collect() };
        ensure_valid(h.violations())?;
        Ok(h)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.dim == 0 {
            out.push(Violation::ZeroDimension);
        }
        if self.eps.is_empty() {
            out.push(Violation::EmptyI);
        }
        for &i in self.eps.keys().chain(self.mu.keys()) {
            if i >= self.dim {
                out.push(Violation::IndexOutOfRange { index: i, dim: self.dim });
            }
        }
        for i in 0..self.dim {
            match (self.eps.contains_key(&i), self.mu.contains_key(&i)) {
                (true, true) => out.push(Violation::DoublyCovered { index: i }),
                (false, false) => out.push(Violation::Uncovered { index: i }),
                _ => {}
            }
        }
        for (&i, v) in &self.mu {
            if !v.is_finite() {
                out.push(Violation::NonFinite { field: "mu", index: i });
            }
        }
        out
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        ensure_valid(self.violations())?;
        check_arg_dim(self.dim, x)?;
        // Summed in coordinate order, matching the l1 embedding term by term.
        Ok((0..self.dim)
            .map(|i| match self.eps.get(&i) {
                Some(s) => s.value() * x[i],
                None => l1_offset(x[i], self.mu[&i]),
            })
            .sum())
    }

    /// `y_i = -eps_i n` on `I`, `y_i = mu_i` elsewhere.
    pub fn escape_point(&self, n: u64) -> Result<Vector> {
        ensure_valid(self.violations())?;
        let n = steps(n);
        Ok(Vector::from_raw(
            (0..self.dim)
                .map(|i| match self.eps.get(&i) {
                    Some(s) => -s.value() * n,
                    None => self.mu[&i],
                })
                .collect(),
        ))
    }

    pub fn approx_eq(&self, other: &L1Horo, tol: f64) -> bool {
        self.dim == other.dim
            && self.eps == other.eps
            && self.mu.len() == other.mu.len()
            && self
                .mu
                .iter()
                .zip(other.mu.iter())
                .all(|((i, a), (j, b))| i == j && (a - b).abs() <= tol)
    }
}
