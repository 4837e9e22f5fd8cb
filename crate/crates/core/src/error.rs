use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::hilbert::PerronResult;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// A broken side condition of a horofunction parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ZeroDimension,
    DimensionTooSmall { dim: usize, min: usize },
    IndexOutOfRange { index: usize, dim: usize },
    /// The set of unbounded coordinates `I` is empty.
    EmptyI,
    /// The set `J` of the variation family is empty.
    EmptyJ,
    /// `I` covers every coordinate (variation family only).
    FullI,
    FullJ,
    /// `I` and `J` share a coordinate.
    Overlap { index: usize },
    /// A coordinate is neither in `I` nor given an offset.
    Uncovered { index: usize },
    /// A coordinate carries both a sign and an offset.
    DoublyCovered { index: usize },
    NonFinite { field: &'static str, index: usize },
    Negative { field: &'static str, index: usize, value: f64 },
    /// The minimum over a field (or pair of fields) is not zero.
    MinNotZero { field: &'static str, min: f64 },
    ExponentOutOfRange { p: f64 },
    DualNormNotOne { norm: f64 },
    LengthMismatch { field: &'static str, len: usize, dim: usize },
    /// Both `mu_bar[i]` and `nu_bar[i]` are finite.
    BothFinite { index: usize },
    /// Every `mu_bar`/`nu_bar` entry is infinite.
    AllInfinite,
    TopNotOne { field: &'static str, top: f64 },
    /// `u[i] * v[i] != 0`.
    SupportsOverlap { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension => write!(f, "dimension is zero"),
            Violation::DimensionTooSmall { dim, min } => {
                write!(f, "dimension {dim} below the minimum {min}")
            }
            Violation::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} out of range for dimension {dim}")
            }
            Violation::EmptyI => write!(f, "I empty"),
            Violation::EmptyJ => write!(f, "J empty"),
            Violation::FullI => write!(f, "I covers every coordinate"),
            Violation::FullJ => write!(f, "J covers every coordinate"),
            Violation::Overlap { index } => write!(f, "I∩J ≠ ∅ (index {index})"),
            Violation::Uncovered { index } => {
                write!(f, "coordinate {index} has neither a sign nor an offset")
            }
            Violation::DoublyCovered { index } => {
                write!(f, "coordinate {index} has both a sign and an offset")
            }
            Violation::NonFinite { field, index } => write!(f, "{field}[{index}] is not finite"),
            Violation::Negative { field, index, value } => {
                write!(f, "{field}[{index}] = {value} is negative")
            }
            Violation::MinNotZero { field, min } => write!(f, "min of {field} is {min}, not 0"),
            Violation::ExponentOutOfRange { p } => write!(f, "exponent p = {p} not in (1, inf)"),
            Violation::DualNormNotOne { norm } => write!(f, "dual norm of mu is {norm}, not 1"),
            Violation::LengthMismatch { field, len, dim } => {
                write!(f, "{field} has length {len}, expected {dim}")
            }
            Violation::BothFinite { index } => {
                write!(f, "mu_bar[{index}] and nu_bar[{index}] are both finite")
            }
            Violation::AllInfinite => write!(f, "every mu_bar/nu_bar entry is infinite"),
            Violation::TopNotOne { field, top } => write!(f, "top({field}) = {top}, not 1"),
            Violation::SupportsOverlap { index } => write!(f, "u[{index}] * v[{index}] != 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyVector,
    NonFinite { index: usize },
    NonPositive { index: usize, value: f64 },
    DimensionMismatch { expected: usize, found: usize },
    InvalidExponent { p: f64 },
    /// The duality map is only single-valued for `1 < p < inf`.
    DualityNotSingleValued,
    NotUnitNorm { norm: f64 },
    /// `exp` of an entry would leave the range of `f64`.
    Overflow { index: usize, value: f64 },
    InvalidParam(Vec<Violation>),
    /// The final sample has not escaped far enough.
    NotEscaping { norm: f64, threshold: f64 },
    /// An unbounded coordinate changed sign between the last two samples.
    SignFlip { index: usize },
    /// The normalized direction moved more than the tolerance between the last two samples.
    DirectionUnstable { drift: f64, tol: f64 },
    InvariantRepair { violation: f64, tol: f64 },
    NonPositiveSample { sample: usize, index: usize },
    InvalidSamples(&'static str),
    WrongFamily,
    ProjectivelyEqual { distance: f64 },
    NotSquare { rows: usize, row: usize, len: usize },
    MatrixTooSmall { dim: usize },
    NonPositiveMatrixEntry { row: usize, col: usize, value: f64 },
    InvalidTolerance { tol: f64 },
    /// The solver ran out of iterations; carries the best iterate seen.
    MaxIterExceeded(Box<PerronResult>),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyVector => write!(f, "vector has no entries"),
            Error::NonFinite { index } => write!(f, "entry {index} is not finite"),
            Error::NonPositive { index, value } => {
                write!(f, "entry {index} = {value} is not strictly positive")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidExponent { p } => write!(f, "invalid exponent p = {p}"),
            Error::DualityNotSingleValued => {
                write!(f, "duality map is not single-valued for p = 1 or p = inf")
            }
            Error::NotUnitNorm { norm } => write!(f, "vector has norm {norm}, expected 1"),
            Error::Overflow { index, value } => {
                write!(f, "exp of entry {index} = {value} overflows")
            }
            Error::InvalidParam(violations) => {
                write!(f, "invalid horofunction parameter:")?;
                for v in violations {
                    write!(f, " {v};")?;
                }
                Ok(())
            }
            Error::NotEscaping { norm, threshold } => {
                write!(f, "sequence not escaping: final norm {norm} below {threshold}")
            }
            Error::SignFlip { index } => {
                write!(f, "unbounded coordinate {index} changed sign between the last two samples")
            }
            Error::DirectionUnstable { drift, tol } => {
                write!(f, "normalized direction moved by {drift} (tolerance {tol})")
            }
            Error::InvariantRepair { violation, tol } => {
                write!(f, "estimates violate the zero-minimum condition by {violation} (tolerance {tol})")
            }
            Error::NonPositiveSample { sample, index } => {
                write!(f, "sample {sample} has a non-positive entry at {index}")
            }
            Error::InvalidSamples(why) => write!(f, "invalid samples: {why}"),
            Error::WrongFamily => write!(f, "parameter belongs to a different family"),
            Error::ProjectivelyEqual { distance } => {
                write!(f, "inputs are projectively equal (d_H = {distance})")
            }
            Error::NotSquare { rows, row, len } => {
                write!(f, "matrix with {rows} rows has row {row} of length {len}")
            }
            Error::MatrixTooSmall { dim } => write!(f, "matrix dimension {dim} is below 2"),
            Error::NonPositiveMatrixEntry { row, col, value } => {
                write!(f, "matrix entry ({row}, {col}) = {value} is not strictly positive")
            }
            Error::InvalidTolerance { tol } => write!(f, "tolerance {tol} must be positive"),
            Error::MaxIterExceeded(best) => write!(
                f,
                "no convergence after {} iterations (best residual {})",
                best.iterations, best.residual
            ),
        }
    }
}

impl core::error::Error for Error {}
