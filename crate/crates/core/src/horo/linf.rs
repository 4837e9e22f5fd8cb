use alloc::vec::Vec;

use super::{check_arg_dim, ensure_valid, steps, VALIDATION_TOL};
use crate::error::{Result, Violation};
use crate::extended::ExtendedNonneg;
use crate::space::Vector;

/// Horofunction of `l_inf`: `x -> top(x - mu_bar, -x - nu_bar)` over the
/// extended reals, with `t - inf = -inf`.
///
/// Valid parameters have, per coordinate, at least one of `mu_bar[i]`,
/// `nu_bar[i]` infinite, and a global minimum of `0` over all `2N` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LinfHoro {
    pub mu_bar: Vec<ExtendedNonneg>,
    pub nu_bar: Vec<ExtendedNonneg>,
}

impl LinfHoro {
    pub fn new(mu_bar: Vec<ExtendedNonneg>, nu_bar: Vec<ExtendedNonneg>) -> Result<Self> {
        let h = LinfHoro { mu_bar, nu_bar };
        ensure_valid(h.violations())?;
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.mu_bar.len()
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let dim = self.mu_bar.len();
        if dim == 0 {
            out.push(Violation::ZeroDimension);
        }
        if self.nu_bar.len() != dim {
            out.push(Violation::LengthMismatch { field: "nu_bar", len: self.nu_bar.len(), dim });
            return out;
        }
        for (field, values) in [("mu_bar", &self.mu_bar), ("nu_bar", &self.nu_bar)] {
            for (index, e) in values.iter().enumerate() {
                if let ExtendedNonneg::Finite(value) = *e {
                    if !value.is_finite() {
                        out.push(Violation::NonFinite { field, index });
                    } else if value < 0.0 {
                        out.push(Violation::Negative { field, index, value });
                    }
                }
            }
        }
        for index in 0..dim {
            if !self.mu_bar[index].is_infinite() && !self.nu_bar[index].is_infinite() {
                out.push(Violation::BothFinite { index });
            }
        }
        let min = self
            .mu_bar
            .iter()
            .chain(self.nu_bar.iter())
            .filter_map(|e| e.finite())
            .fold(f64::INFINITY, f64::min);
        if min == f64::INFINITY {
            if dim > 0 {
                out.push(Violation::AllInfinite);
            }
        } else if min.abs() > VALIDATION_TOL {
            out.push(Violation::MinNotZero { field: "(mu_bar, nu_bar)", min });
        }
        out
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        ensure_valid(self.violations())?;
        check_arg_dim(self.dim(), x)?;
        let branches = x.iter().enumerate().flat_map(|(i, &xi)| {
            [self.mu_bar[i].subtract_from(xi), self.nu_bar[i].subtract_from(-xi)]
        });
        // Validity guarantees at least one finite branch.
        Ok(branches.flatten().fold(f64::NEG_INFINITY, f64::max))
    }

    /// `y_i = -n + mu_bar_i` where `mu_bar_i < inf`, `n - nu_bar_i` where
    /// `nu_bar_i < inf`, and `0` where both are infinite.
    pub fn escape_point(&self, n: u64) -> Result<Vector> {
        ensure_valid(self.violations())?;
        let n = steps(n);
        Ok(Vector::from_raw(
            (0..self.dim())
                .map(|i| match (self.mu_bar[i].finite(), self.nu_bar[i].finite()) {
                    (Some(m), _) => -n + m,
                    (None, Some(v)) => n - v,
                    (None, None) => 0.0,
                })
                .collect(),
        ))
    }

    /// The point `x^k` with `h(x^k) = 0` for every `k`: `mu_bar_i`,
    /// `-nu_bar_i` on finite coordinates and `-k` elsewhere. No embedding
    /// `tau(z)` vanishes along it when some coordinate is doubly infinite.
    pub fn level_zero_point(&self, k: u64) -> Result<Vector> {
        ensure_valid(self.violations())?;
        Ok(Vector::from_raw(
            (0..self.dim())
                .map(|i| match (self.mu_bar[i].finite(), self.nu_bar[i].finite()) {
                    (Some(m), _) => m,
                    (None, Some(v)) => -v,
                    (None, None) => -steps(k),
                })
                .collect(),
        ))
    }

    pub fn approx_eq(&self, other: &LinfHoro, tol: f64) -> bool {
        self.mu_bar.len() == other.mu_bar.len()
            && self.nu_bar.len() == other.nu_bar.len()
            && self.mu_bar.iter().zip(&other.mu_bar).all(|(a, b)| a.approx_eq(*b, tol))
            && self.nu_bar.iter().zip(&other.nu_bar).all(|(a, b)| a.approx_eq(*b, tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horo::testing::random_linf;
    use crate::horo::Family;
    use crate::space::{lp_norm, PExponent};
    use ExtendedNonneg::{Finite as F, Infinite as Inf};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(e: &[f64]) -> Vector {
        Vector::from_slice(e).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(LinfHoro::new(alloc::vec![F(0.0), Inf], alloc::vec![Inf, F(0.0)]).is_ok());
        let both = LinfHoro { mu_bar: alloc::vec![F(0.0), F(1.0)], nu_bar: alloc::vec![Inf, F(2.0)] };
        assert_eq!(both.violations(), [Violation::BothFinite { index: 1 }]);
        let shifted = LinfHoro { mu_bar: alloc::vec![F(1.0), Inf], nu_bar: alloc::vec![Inf, Inf] };
        assert!(matches!(shifted.violations()[0], Violation::MinNotZero { .. }));
        let none = LinfHoro { mu_bar: alloc::vec![Inf], nu_bar: alloc::vec![Inf] };
        assert_eq!(none.violations(), [Violation::AllInfinite]);
        let neg = LinfHoro { mu_bar: alloc::vec![F(-1.0), F(0.0)], nu_bar: alloc::vec![Inf, Inf] };
        assert!(neg.violations().iter().any(|v| matches!(v, Violation::Negative { .. })));
    }

    #[test]
    fn eval_examples() {
        let h = LinfHoro::new(alloc::vec![F(0.0), Inf], alloc::vec![Inf, F(0.0)]).unwrap();
        assert_eq!(h.eval(&v(&[1.0, 2.0])).unwrap(), 1.0);
        assert_eq!(h.eval(&v(&[0.0, 0.0])).unwrap(), 0.0);
        for n in [3.0, 10.0, 1e6] {
            assert_eq!(Family::Linf.tau(&v(&[-n, n]), &v(&[1.0, 2.0])).unwrap(), 1.0);
        }
        let single = LinfHoro::new(alloc::vec![F(0.0), Inf], alloc::vec![Inf, Inf]).unwrap();
        assert_eq!(single.eval(&v(&[2.5, -7.0])).unwrap(), 2.5);
    }

    #[test]
    fn escape_uses_zero_for_doubly_infinite() {
        let h = LinfHoro::new(alloc::vec![F(2.0), Inf, Inf], alloc::vec![Inf, F(0.0), Inf]).unwrap();
        assert_eq!(h.escape_point(10).unwrap(), v(&[-8.0, 10.0, 0.0]));
        assert_eq!(h.level_zero_point(4).unwrap(), v(&[2.0, 0.0, -4.0]));
        assert_eq!(h.eval(&h.level_zero_point(4).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn realization_is_exact_for_dyadic_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let dim = rng.gen_range(1..=6);
            let h = random_linf(&mut rng, dim);
            let probes: Vec<Vector> = (0..50)
                .map(|_| {
                    Vector::new((0..dim).map(|_| (rng.gen_range(-5.0..5.0) * 1024.0f64).round() / 1024.0).collect())
                        .unwrap()
                })
                .collect();
            for n in [100u64, 10_000, 1_000_000] {
                let y = h.escape_point(n).unwrap();
                for x in &probes {
                    assert_eq!(Family::Linf.tau(&y, x).unwrap(), h.eval(x).unwrap());
                }
                assert_eq!(h.eval(&y).unwrap(), -(n as f64));
            }
            assert_eq!(h.eval(&Vector::zeros(dim)).unwrap(), 0.0);
            for w in probes.windows(2) {
                let d = lp_norm(&w[0].sub(&w[1]).unwrap(), PExponent::INFINITY);
                assert!((h.eval(&w[0]).unwrap() - h.eval(&w[1]).unwrap()).abs() <= d + 1e-12);
            }
        }
    }
}
