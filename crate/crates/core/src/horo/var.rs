use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{check_arg_dim, ensure_valid, steps, HilbertHoro, VALIDATION_TOL};
use crate::error::{Result, Violation};
use crate::space::Vector;

/// Horofunction of the variation seminorm:
/// `x -> top(x_I - mu) - bot(x_J + nu)`, with `I` the keys of `mu` and `J`
/// the keys of `nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarHoro {
    pub dim: usize,
    pub mu: BTreeMap<usize, f64>,
    pub nu: BTreeMap<usize, f64>,
}

impl VarHoro {
    pub fn new(
        dim: usize,
        mu: impl IntoIterator<Item = (usize, f64)>,
        nu: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let h = VarHoro { dim, mu: mu.into_iter().collect(), nu: nu.into_iter().collect() };
        ensure_valid(h.violations())?;
        Ok(h)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.dim < 2 {
            out.push(Violation::DimensionTooSmall { dim: self.dim, min: 2 });
        }
        if self.mu.is_empty() {
            out.push(Violation::EmptyI);
        }
        if self.nu.is_empty() {
            out.push(Violation::EmptyJ);
        }
        if self.dim > 0 && self.mu.len() >= self.dim {
            out.push(Violation::FullI);
        }
        if self.dim > 0 && self.nu.len() >= self.dim {
            out.push(Violation::FullJ);
        }
        for &i in self.mu.keys() {
            if self.nu.contains_key(&i) {
                out.push(Violation::Overlap { index: i });
            }
        }
        for (field, side) in [("mu", &self.mu), ("nu", &self.nu)] {
            for (&index, &value) in side {
                if index >= self.dim {
                    out.push(Violation::IndexOutOfRange { index, dim: self.dim });
                }
                if !value.is_finite() {
                    out.push(Violation::NonFinite { field, index });
                } else if value < 0.0 {
                    out.push(Violation::Negative { field, index, value });
                }
            }
            if !side.is_empty() {
                let min = side.values().copied().fold(f64::INFINITY, f64::min);
                if min.is_finite() && min.abs() > VALIDATION_TOL {
                    out.push(Violation::MinNotZero { field, min });
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        ensure_valid(self.violations())?;
        check_arg_dim(self.dim, x)?;
        let top = self.mu.iter().map(|(&i, m)| x[i] - m).fold(f64::NEG_INFINITY, f64::max);
        let bot = self.nu.iter().map(|(&j, n)| x[j] + n).fold(f64::INFINITY, f64::min);
        Ok(top - bot)
    }

    /// `y_i = -n + mu_i` on `I`, `n - nu_i` on `J`, `0` elsewhere.
    pub fn escape_point(&self, n: u64) -> Result<Vector> {
        ensure_valid(self.violations())?;
        let n = steps(n);
        Ok(Vector::from_raw(
            (0..self.dim)
                .map(|i| match (self.mu.get(&i), self.nu.get(&i)) {
                    (Some(m), _) => -n + m,
                    (None, Some(v)) => n - v,
                    (None, None) => 0.0,
                })
                .collect(),
        ))
    }

    pub fn to_hilbert(&self) -> Result<HilbertHoro> {
        var_to_hilbert(self)
    }

    pub fn approx_eq(&self, other: &VarHoro, tol: f64) -> bool {
        let side_eq = |a: &BTreeMap<usize, f64>, b: &BTreeMap<usize, f64>| {
            a.len() == b.len()
                && a.iter().zip(b.iter()).all(|((i, x), (j, y))| i == j && (x - y).abs() <= tol)
        };
        self.dim == other.dim && side_eq(&self.mu, &other.mu) && side_eq(&self.nu, &other.nu)
    }
}

/// `u_i = exp(-mu_i)` on `I`, `v_j = exp(-nu_j)` on `J`, zero elsewhere.
///
/// The result satisfies `h_{u,v}(x) = h_var(Log x)` for every positive `x`.
pub fn var_to_hilbert(h: &VarHoro) -> Result<HilbertHoro> {
    ensure_valid(h.violations())?;
    let spread = |side: &BTreeMap<usize, f64>| {
        let mut out = alloc::vec![0.0; h.dim];
        for (&i, &m) in side {
            out[i] = libm::exp(-m);
        }
        Vector::from_raw(out)
    };
    Ok(HilbertHoro { u: spread(&h.mu), v: spread(&h.nu) })
}
