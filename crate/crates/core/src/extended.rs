use core::cmp::Ordering;
use core::fmt;

/// A value in `[0, inf]`.
///
/// Subtracting an infinite value from a real gives `-inf`, which is modelled
/// by [`ExtendedNonneg::subtract_from`] returning `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedNonneg {
    Finite(f64),
    Infinite,
}

impl ExtendedNonneg {
    pub const ZERO: ExtendedNonneg = ExtendedNonneg::Finite(0.0);

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedNonneg::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedNonneg::Finite(v) => Some(v),
            ExtendedNonneg::Infinite => None,
        }
    }

    /// `t - self`, or `None` for `t - inf = -inf`.
    pub fn subtract_from(self, t: f64) -> Option<f64> {
        self.finite().map(|v| t - v)
    }

    pub fn approx_eq(self, other: ExtendedNonneg, tol: f64) -> bool {
        match (self, other) {
            (ExtendedNonneg::Infinite, ExtendedNonneg::Infinite) => true,
            (ExtendedNonneg::Finite(a), ExtendedNonneg::Finite(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }
}

impl PartialOrd for ExtendedNonneg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedNonneg::*;
        match (self, other) {
            (Infinite, Infinite) => Some(Ordering::Equal),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Finite(_), Infinite) => Some(Ordering::Less),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl From<f64> for ExtendedNonneg {
    /// `f64::INFINITY` maps to [`ExtendedNonneg::Infinite`].
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtendedNonneg::Infinite
        } else {
            ExtendedNonneg::Finite(v)
        }
    }
}

impl fmt::Display for ExtendedNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNonneg::Finite(v) => write!(f, "{v}"),
            ExtendedNonneg::Infinite => write!(f, "inf"),
        }
    }
}
