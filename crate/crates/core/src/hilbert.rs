//! Hilbert's projective metric on the open positive cone and the Perron
//! fixed-point problem for positive matrices.
//!
//! All quantities are computed from log-coordinates: `d_H(x, y)` is the
//! variation seminorm of `Log x - Log y`, and `T x` is evaluated after
//! factoring out `top(x)`, so no step overflows however far the iterates
//! sit in the cone.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::horo::HilbertHoro;
use crate::space::{check_dims, var_seminorm, PositiveVector, Vector};

/// Slack allowed in horoball and invariant-set membership tests.
pub const CONTAINMENT_TOL: f64 = 1e-12;

/// `contraction_check` rejects pairs closer than this.
pub const PROJECTIVE_EQ_TOL: f64 = 1e-12;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Number of successive-residual ratios kept in [`PerronResult`].
const RATIO_SAMPLES: usize = 64;

/// `d_H(x, y) = log(top(x ⊙ y^-1) / bot(x ⊙ y^-1))`.
pub fn hilbert_distance(x: &PositiveVector, y: &PositiveVector) -> Result<f64> {
    Ok(var_seminorm(&x.logs().sub(y.logs())?))
}

/// The embedding `tau(y)(x) = d_H(x, y) - d_H(1, y)` with base point `1`.
pub fn tau_hilbert(y: &PositiveVector) -> impl Fn(&PositiveVector) -> Result<f64> + '_ {
    let anchor = var_seminorm(&y.logs().neg());
    move |x: &PositiveVector| Ok(hilbert_distance(x, y)? - anchor)
}

/// An `N x N` matrix with every entry strictly positive, `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl PositiveMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim < 2 {
            return Err(Error::MatrixTooSmall { dim });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, row, len: r.len() });
            }
            for (col, value) in r.into_iter().enumerate() {
                if !(value > 0.0 && value.is_finite()) {
                    return Err(Error::NonPositiveMatrixEntry { row, col, value });
                }
                entries.push(value);
            }
        }
        Ok(PositiveMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.dim)
    }

    pub fn row_top(&self, i: usize) -> f64 {
        self.row(i).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn row_bot(&self, i: usize) -> f64 {
        self.row(i).iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `T x`, computed as `top(x) * T (x / top(x))` in log-coordinates.
    pub fn apply(&self, x: &PositiveVector) -> Result<PositiveVector> {
        check_dims(self.dim, x.dim())?;
        let shift = x.log_top();
        let scaled: Vec<f64> = x.logs().iter().map(|&l| libm::exp(l - shift)).collect();
        // Every row sum contains T_ik * 1 for the top coordinate, so it is positive.
        let logs = self
            .rows()
            .map(|r| libm::log(r.iter().zip(&scaled).map(|(t, s)| t * s).sum::<f64>()) + shift)
            .collect();
        Ok(PositiveVector::from_logs(Vector::from_raw(logs)))
    }

    /// `log(top(T_i.) / bot(T_j.))`, the bound on `log(x_i / x_j)` over `T`'s image.
    fn log_row_ratio(&self, i: usize, j: usize) -> f64 {
        libm::log(self.row_top(i)) - libm::log(self.row_bot(j))
    }
}

/// `r_{u,v} = log max_{i,j} u_i v_j top(T_i.) / bot(T_j.)`.
///
/// Every `T x` with `x` positive lies in the horoball `{h_{u,v} <= r_{u,v}}`.
pub fn horoball_radius(t: &PositiveMatrix, h: &HilbertHoro) -> Result<f64> {
    crate::horo::ensure_valid(h.violations())?;
    check_dims(t.dim(), h.dim())?;
    let mut best = f64::NEG_INFINITY;
    for i in (0..t.dim()).filter(|&i| h.u[i] > 0.0) {
        for j in (0..t.dim()).filter(|&j| h.v[j] > 0.0) {
            let r = libm::log(h.u[i]) + libm::log(h.v[j]) + t.log_row_ratio(i, j);
            best = best.max(r);
        }
    }
    Ok(best)
}

/// A horofunction together with the radius of a horoball containing the
/// forward orbit of every positive vector under the generating matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HoroballCertificate {
    pub h: HilbertHoro,
    pub radius: f64,
}

impl HoroballCertificate {
    pub fn new(t: &PositiveMatrix, h: HilbertHoro) -> Result<Self> {
        let radius = horoball_radius(t, &h)?;
        Ok(HoroballCertificate { h, radius })
    }

    /// Whether `x` lies in the horoball, up to [`CONTAINMENT_TOL`].
    pub fn contains(&self, x: &PositiveVector) -> Result<bool> {
        Ok(self.h.eval(x)? <= self.radius + CONTAINMENT_TOL)
    }
}

/// The `N(N-1)` extreme certificates `u = e_i`, `v = e_j`, `i != j`, ordered
/// by `(i, j)`. Their horoballs intersect exactly in the invariant set.
pub fn perron_certificates(t: &PositiveMatrix) -> Vec<HoroballCertificate> {
    let n = t.dim();
    let unit = |k: usize| {
        let mut e = alloc::vec![0.0; n];
        e[k] = 1.0;
        Vector::from_raw(e)
    };
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            out.push(HoroballCertificate {
                h: HilbertHoro { u: unit(i), v: unit(j) },
                radius: t.log_row_ratio(i, j),
            });
        }
    }
    out
}

/// Membership in the intersection `C` of all horoballs `{h_{u,v} <= r_{u,v}}`.
///
/// Decided by the pairwise criterion `x_i / x_j <= top(T_i.) / bot(T_j.)`
/// for all `i != j`, which is the intersection over the extreme certificates
/// of [`perron_certificates`]; every other certificate's horoball contains it.
pub fn invariant_set_contains(t: &PositiveMatrix, x: &PositiveVector) -> Result<bool> {
    check_dims(t.dim(), x.dim())?;
    let l = x.logs();
    for i in 0..t.dim() {
        for j in (0..t.dim()).filter(|&j| j != i) {
            if l[i] - l[j] > t.log_row_ratio(i, j) + CONTAINMENT_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `d_H(T x, T y) / d_H(x, y)`; strictly below `1` for projectively distinct inputs.
pub fn contraction_check(t: &PositiveMatrix, x: &PositiveVector, y: &PositiveVector) -> Result<f64> {
    let d = hilbert_distance(x, y)?;
    if d <= PROJECTIVE_EQ_TOL {
        return Err(Error::ProjectivelyEqual { distance: d });
    }
    Ok(hilbert_distance(&t.apply(x)?, &t.apply(y)?)? / d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerronResult {
    /// The fixed ray, normalized to `top(x*) = 1`.
    pub x_star: PositiveVector,
    /// `d_H(T x*, x*)`.
    pub residual: f64,
    /// Number of applications of `T`.
    pub iterations: usize,
    /// Ratios of successive residuals over the first iterations.
    pub contraction_ratios: Vec<f64>,
    /// `top(T x*) / top(x*)`, the Perron eigenvalue estimate.
    pub eigenvalue: f64,
}

/// Iterates `x <- normalize(T x)` until `d_H(T x, x) <= tol`.
///
/// The start (default `1`) is first mapped by `T` into the invariant set.
/// On running out of iterations, returns [`Error::MaxIterExceeded`] holding
/// the iterate with the smallest residual.
pub fn perron_solve(
    t: &PositiveMatrix,
    x0: Option<&PositiveVector>,
    tol: f64,
    max_iter: usize,
) -> Result<PerronResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance { tol });
    }
    let start = match x0 {
        Some(x) => x.clone(),
        None => PositiveVector::ones(t.dim()),
    };
    let mut x = t.apply(&start)?.normalized();
    let mut iterations = 1;
    let mut ratios = Vec::new();
    let mut prev_residual = f64::NAN;
    let mut best: Option<(f64, PositiveVector, PositiveVector)> = None;

    loop {
        let tx = t.apply(&x)?;
        let residual = hilbert_distance(&tx, &x)?;
        if ratios.len() < RATIO_SAMPLES && prev_residual > 0.0 {
            ratios.push(residual / prev_residual);
        }
        if residual <= tol {
            return Ok(finish(x, &tx, residual, iterations, ratios));
        }
        if best.as_ref().is_none_or(|(r, _, _)| residual < *r) {
            best = Some((residual, x.clone(), tx.clone()));
        }
        if iterations >= max_iter {
            let (r, bx, btx) = best.expect("at least one iterate");
            return Err(Error::MaxIterExceeded(alloc::boxed::Box::new(finish(
                bx, &btx, r, iterations, ratios,
            ))));
        }
        prev_residual = residual;
        x = tx.normalized();
        iterations += 1;
    }
}

fn finish(
    x: PositiveVector,
    tx: &PositiveVector,
    residual: f64,
    iterations: usize,
    contraction_ratios: Vec<f64>,
) -> PerronResult {
    let eigenvalue = libm::exp(tx.log_top() - x.log_top());
    PerronResult { x_star: x, residual, iterations, contraction_ratios, eigenvalue }
}
