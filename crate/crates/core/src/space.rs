//! Vectors over `{0, .., N-1}`, the `lp` norms, the variation seminorm and
//! the `Exp`/`Log` calculus on the positive cone.

use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};

/// Largest argument for which `exp` stays finite.
pub const LN_MAX: f64 = 709.782_712_893_384;

/// Tolerance on `||w||_p = 1` accepted by [`duality_map`].
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// A point of `R^N` with finite entries and `N >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Vector(entries))
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    // Callers guarantee finiteness and a nonzero length.
    pub(crate) fn from_raw(entries: Vec<f64>) -> Self {
        debug_assert!(!entries.is_empty());
        Vector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(alloc::vec![0.0; dim.max(1)])
    }

    /// The all-ones vector.
    pub fn ones(dim: usize) -> Self {
        Self::from_raw(alloc::vec![1.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub(crate) fn check_dim(&self, other: &Vector) -> Result<()> {
        check_dims(self.dim(), other.dim())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Vector {
        self.map(|a| -a)
    }

    pub fn scale(&self, alpha: f64) -> Vector {
        self.map(|a| alpha * a)
    }

    /// `x + lambda * 1`.
    pub fn shift(&self, lambda: f64) -> Vector {
        self.map(|a| a + lambda)
    }

    pub fn dot(&self, other: &Vector) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.iter().zip(other.iter()).map(|(a, b)| a * b).sum())
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector::from_raw(self.0.iter().map(|&a| f(a)).collect())
    }

    fn zip_with(&self, other: &Vector, f: impl Fn(f64, f64) -> f64) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(Vector::from_raw(
            self.iter().zip(other.iter()).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(entries: Vec<f64>) -> Result<Self> {
        Vector::new(entries)
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A point of the open positive cone, stored by the logarithms of its
/// entries.
///
/// Multiplicative operations (Hadamard products, inverses, rescaling) are
/// additions on the stored logarithms and never overflow. [`entries`]
/// returns the linear values and may produce `inf`/`0` for points far out in
/// the cone.
///
/// [`entries`]: PositiveVector::entries
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveVector {
    logs: Vector,
}

impl PositiveVector {
    /// Builds a point from linear entries, each finite and `> 0`.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, &value) in entries.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value <= 0.0 {
                return Err(Error::NonPositive { index, value });
            }
        }
        Ok(PositiveVector {
            logs: Vector::from_raw(entries.into_iter().map(libm::log).collect()),
        })
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    /// The point `Exp(logs)`; exact, with no range restriction.
    pub fn from_logs(logs: Vector) -> Self {
        PositiveVector { logs }
    }

    pub fn ones(dim: usize) -> Self {
        Self::from_logs(Vector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.logs.dim()
    }

    pub fn logs(&self) -> &Vector {
        &self.logs
    }

    /// Linear entries; may overflow to `inf` or underflow to `0`.
    pub fn entries(&self) -> Vec<f64> {
        self.logs.iter().map(|&l| libm::exp(l)).collect()
    }

    /// Linear entries as a [`Vector`], failing if any entry overflows.
    pub fn to_vector(&self) -> Result<Vector> {
        if let Some(index) = self.logs.iter().position(|&l| l > LN_MAX) {
            return Err(Error::Overflow { index, value: self.logs[index] });
        }
        Ok(Vector::from_raw(self.entries()))
    }

    /// `x^{-1}`, the entrywise reciprocal.
    pub fn recip(&self) -> PositiveVector {
        PositiveVector { logs: self.logs.neg() }
    }

    pub fn hadamard(&self, other: &PositiveVector) -> Result<PositiveVector> {
        Ok(PositiveVector { logs: self.logs.add(&other.logs)? })
    }

    /// `alpha * x` for `alpha > 0`.
    pub fn scale(&self, alpha: f64) -> Result<PositiveVector> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::NonPositive { index: 0, value: alpha });
        }
        Ok(self.scale_log(libm::log(alpha)))
    }

    /// `e^s * x`.
    pub fn scale_log(&self, s: f64) -> PositiveVector {
        PositiveVector { logs: self.logs.shift(s) }
    }

    /// The projective representative with `top(x) = 1`.
    pub fn normalized(&self) -> PositiveVector {
        self.scale_log(-top(&self.logs))
    }

    /// `log top(x)`.
    pub fn log_top(&self) -> f64 {
        top(&self.logs)
    }

    /// `log bot(x)`.
    pub fn log_bot(&self) -> f64 {
        bot(&self.logs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Exponent {
    Finite(f64),
    Infinite,
}

/// An exponent `p` in `[1, inf]`.
///
/// Exponents in `(1, 1 + 1e-9)` are rejected: their duals exceed `1e9`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent(Exponent);

impl PExponent {
    pub const ONE: PExponent = PExponent(Exponent::Finite(1.0));
    pub const TWO: PExponent = PExponent(Exponent::Finite(2.0));
    pub const INFINITY: PExponent = PExponent(Exponent::Infinite);

    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            return Ok(Self::INFINITY);
        }
        if !p.is_finite() || p < 1.0 || (p > 1.0 && p < 1.0 + 1e-9) {
            return Err(Error::InvalidExponent { p });
        }
        Ok(PExponent(Exponent::Finite(p)))
    }

    /// `p` as an `f64`, with `f64::INFINITY` for `p = inf`.
    pub fn value(self) -> f64 {
        match self.0 {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self.0 {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinite => None,
        }
    }

    pub fn is_one(self) -> bool {
        self.0 == Exponent::Finite(1.0)
    }

    pub fn is_infinite(self) -> bool {
        self.0 == Exponent::Infinite
    }

    /// True for `1 < p < inf`, where the unit sphere is smooth and strictly convex.
    pub fn is_strictly_convex(self) -> bool {
        !self.is_one() && !self.is_infinite()
    }

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn dual(self) -> PExponent {
        match self.0 {
            Exponent::Infinite => Self::ONE,
            Exponent::Finite(1.0) => Self::INFINITY,
            Exponent::Finite(p) => PExponent(Exponent::Finite(p / (p - 1.0))),
        }
    }
}

/// The (semi)norms the embedding `tau` is defined for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    Lp(PExponent),
    Var,
}

impl NormKind {
    pub fn norm(self, x: &Vector) -> f64 {
        match self {
            NormKind::Lp(p) => lp_norm(x, p),
            NormKind::Var => var_seminorm(x),
        }
    }

    pub fn distance(self, x: &Vector, y: &Vector) -> Result<f64> {
        Ok(self.norm(&x.sub(y)?))
    }
}

/// `max_i x_i`.
pub fn top(x: &Vector) -> f64 {
    x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `min_i x_i`.
pub fn bot(x: &Vector) -> f64 {
    x.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Index of the maximal entry; the lowest index wins ties.
pub fn argtop(x: &Vector) -> usize {
    let mut best = 0;
    for (i, &v) in x.iter().enumerate() {
        if v > x[best] {
            best = i;
        }
    }
    best
}

/// Index of the minimal entry; the lowest index wins ties.
pub fn argbot(x: &Vector) -> usize {
    let mut best = 0;
    for (i, &v) in x.iter().enumerate() {
        if v < x[best] {
            best = i;
        }
    }
    best
}

pub fn lp_norm(x: &Vector, p: PExponent) -> f64 {
    let p = match p.finite() {
        None => return x.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
        Some(p) => p,
    };
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    // Scale by the largest magnitude so the powers neither overflow nor underflow.
    let scale = x.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = x.iter().map(|v| (v / scale) * (v / scale)).sum();
        return scale * libm::sqrt(s);
    }
    let s: f64 = x.iter().map(|v| libm::pow(v.abs() / scale, p)).sum();
    scale * libm::pow(s, 1.0 / p)
}

/// `top(x) - bot(x)`.
pub fn var_seminorm(x: &Vector) -> f64 {
    top(x) - bot(x)
}

/// Entrywise product.
pub fn hadamard(x: &Vector, y: &Vector) -> Result<Vector> {
    x.zip_with(y, |a, b| a * b)
}

/// Entrywise exponential. Fails if an entry exceeds `ln(f64::MAX)` in
/// magnitude; use [`PositiveVector::from_logs`] for unrestricted points.
pub fn exp_map(x: &Vector) -> Result<PositiveVector> {
    if let Some(index) = x.iter().position(|v| v.abs() > LN_MAX) {
        return Err(Error::Overflow { index, value: x[index] });
    }
    Ok(PositiveVector::from_logs(x.clone()))
}

/// Entrywise logarithm.
pub fn log_map(u: &PositiveVector) -> Vector {
    u.logs().clone()
}

/// The unique `mu` with `||mu||_q = 1` and `<mu, w> = 1` for a unit vector
/// `w` of `lp`, `1 < p < inf`: `mu_i = sign(w_i) |w_i|^(p-1)`.
pub fn duality_map(w: &Vector, p: PExponent) -> Result<Vector> {
    let p = match p.finite() {
        Some(p) if p > 1.0 => p,
        _ => return Err(Error::DualityNotSingleValued),
    };
    let norm = lp_norm(w, PExponent(Exponent::Finite(p)));
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NotUnitNorm { norm });
    }
    Ok(w.map(|v| signed_pow(v, p - 1.0)))
}

/// `sign(v) |v|^e`, with `0` mapped to `0`.
pub(crate) fn signed_pow(v: f64, e: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else if e == 1.0 {
        v
    } else {
        libm::copysign(libm::pow(v.abs(), e), v)
    }
}

/// `|x - c| - |c|` without cancellation: for `|c|` much larger than `|x|`
/// the result is exactly `-sign(c) x`.
pub(crate) fn l1_offset(x: f64, c: f64) -> f64 {
    if c >= 0.0 {
        if x <= c {
            -x
        } else {
            x - 2.0 * c
        }
    } else if x >= c {
        x
    } else {
        2.0 * c - x
    }
}

/// The embedding `tau(y)(x) = d(x, y) - d(0, y)` with base point `0`.
///
/// The returned function is 1-Lipschitz, vanishes at `0` and is bounded
/// below by `-||y||`.
pub fn tau(y: &Vector, kind: NormKind) -> impl Fn(&Vector) -> Result<f64> + '_ {
    let anchor = kind.norm(y);
    move |x: &Vector| {
        y.check_dim(x)?;
        match kind {
            NormKind::Lp(p) if p.is_one() => Ok(x
                .iter()
                .zip(y.iter())
                .map(|(&xi, &yi)| l1_offset(xi, yi))
                .sum()),
            _ => Ok(kind.distance(x, y)? - anchor),
        }
    }
}
