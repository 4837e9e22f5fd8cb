//! Random generators and independent reference computations for the
//! integration tests. Nothing here calls into the library's numerics.
#![allow(dead_code)]

use horo_core::{
    ExtendedNonneg, HilbertHoro, L1Horo, LinfHoro, LpHoro, PExponent, PositiveMatrix, Sign, Vector, VarHoro,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dyadic(x: f64) -> f64 {
    (x * 1024.0).round() / 1024.0
}

pub fn uniform(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(lo..hi)).collect()
}

pub fn vector(e: Vec<f64>) -> Vector {
    Vector::new(e).unwrap()
}

pub fn random_l1(rng: &mut ChaCha8Rng, dim: usize) -> L1Horo {
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(1..=dim);
    let eps: Vec<(usize, Sign)> =
        idx[..k].iter().map(|&i| (i, if rng.gen() { Sign::Plus } else { Sign::Minus })).collect();
    let mu: Vec<(usize, f64)> = idx[k..].iter().map(|&i| (i, rng.gen_range(-5.0..5.0))).collect();
    L1Horo::new(dim, eps, mu).unwrap()
}

pub fn random_lp(rng: &mut ChaCha8Rng, dim: usize, p: f64) -> LpHoro {
    let q = p / (p - 1.0);
    loop {
        let raw = uniform(rng, dim, -1.0, 1.0);
        let norm = raw.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q);
        if norm > 1e-3 {
            let mu = vector(raw.iter().map(|x| x / norm).collect());
            return LpHoro::new(PExponent::new(p).unwrap(), mu).unwrap();
        }
    }
}

/// Random `l_inf` parameter; `double_infinite` forces coordinate 0 to drop out.
pub fn random_linf(rng: &mut ChaCha8Rng, dim: usize, exact: bool, double_infinite: bool) -> LinfHoro {
    let value = |rng: &mut ChaCha8Rng| {
        let x = rng.gen_range(0.0..5.0);
        if exact {
            dyadic(x)
        } else {
            x
        }
    };
    loop {
        let mut kinds: Vec<u8> = (0..dim).map(|_| rng.gen_range(0..3)).collect();
        if double_infinite {
            kinds[0] = 2;
        }
        if kinds.iter().all(|&k| k == 2) {
            continue;
        }
        let mut mu_bar = Vec::new();
        let mut nu_bar = Vec::new();
        for &k in &kinds {
            let (m, n) = match k {
                0 => (Some(value(rng)), None),
                1 => (None, Some(value(rng))),
                _ => (None, None),
            };
            mu_bar.push(m);
            nu_bar.push(n);
        }
        let min = mu_bar.iter().chain(&nu_bar).flatten().fold(f64::INFINITY, |a, &b| a.min(b));
        let wrap = |e: &Option<f64>| match e {
            Some(x) => ExtendedNonneg::Finite(x - min),
            None => ExtendedNonneg::Infinite,
        };
        return LinfHoro::new(mu_bar.iter().map(wrap).collect(), nu_bar.iter().map(wrap).collect()).unwrap();
    }
}

pub fn random_var(rng: &mut ChaCha8Rng, dim: usize, exact: bool) -> VarHoro {
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.shuffle(rng);
    let ni = rng.gen_range(1..dim);
    let nj = rng.gen_range(1..=dim - ni);
    let mut side = |ids: &[usize]| {
        let raw: Vec<f64> = ids
            .iter()
            .map(|_| {
                let x = rng.gen_range(0.0..5.0);
                if exact {
                    dyadic(x)
                } else {
                    x
                }
            })
            .collect();
        let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
        ids.iter().zip(raw).map(|(&i, x)| (i, x - min)).collect::<Vec<_>>()
    };
    let mu = side(&idx[..ni]);
    let nu = side(&idx[ni..ni + nj]);
    VarHoro::new(dim, mu, nu).unwrap()
}

/// Random valid `(u, v)`: supports of random sizes, weights `exp(-offset)`.
pub fn random_hilbert(rng: &mut ChaCha8Rng, dim: usize) -> HilbertHoro {
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.shuffle(rng);
    let ni = rng.gen_range(1..dim);
    let nj = rng.gen_range(1..=dim - ni);
    let mut side = |ids: &[usize]| {
        let mut w = vec![0.0; dim];
        for &i in ids {
            w[i] = (-rng.gen_range(0.0..5.0f64)).exp();
        }
        let top = w.iter().copied().fold(0.0, f64::max);
        vector(w.iter().map(|x| x / top).collect())
    };
    let u = side(&idx[..ni]);
    let v = side(&idx[ni..ni + nj]);
    HilbertHoro::new(u, v).unwrap()
}

pub fn random_rows(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| uniform(rng, n, 0.1, 10.0)).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> (PositiveMatrix, Vec<Vec<f64>>) {
    let rows = random_rows(rng, n);
    (PositiveMatrix::new(rows.clone()).unwrap(), rows)
}

// Reference computations.

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| if v.abs() > m { v.abs() } else { m })
}

pub fn p_norm(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

pub fn spread(x: &[f64]) -> f64 {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for &v in x {
        hi = hi.max(v);
        lo = lo.min(v);
    }
    hi - lo
}

/// `log(max(x_i / y_i) / min(x_i / y_i))` straight from the definition.
pub fn hilbert_linear(x: &[f64], y: &[f64]) -> f64 {
    let ratios: Vec<f64> = x.iter().zip(y).map(|(a, b)| a / b).collect();
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    (hi / lo).ln()
}

pub fn mat_vec(rows: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Classical power iteration with sum normalization.
pub fn power_iteration(rows: &[Vec<f64>], steps: usize) -> Vec<f64> {
    let n = rows.len();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..steps {
        let y = mat_vec(rows, &x);
        let s: f64 = y.iter().sum();
        x = y.iter().map(|v| v / s).collect();
    }
    x
}

/// Closed-form horofunctions, written out from the boundary descriptions.
pub fn l1_closed_form(h: &L1Horo, x: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        s += match (h.eps.get(&i), h.mu.get(&i)) {
            (Some(e), _) => e.value() * xi,
            (None, Some(&m)) => (xi - m).abs() - m.abs(),
            _ => unreachable!(),
        };
    }
    s
}

pub fn lp_closed_form(h: &LpHoro, x: &[f64]) -> f64 {
    -h.mu.iter().zip(x).map(|(m, v)| m * v).sum::<f64>()
}

pub fn linf_closed_form(h: &LinfHoro, x: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for (i, &xi) in x.iter().enumerate() {
        if let Some(m) = h.mu_bar[i].finite() {
            best = best.max(xi - m);
        }
        if let Some(n) = h.nu_bar[i].finite() {
            best = best.max(-xi - n);
        }
    }
    best
}

pub fn var_closed_form(h: &VarHoro, x: &[f64]) -> f64 {
    let top = h.mu.iter().map(|(&i, m)| x[i] - m).fold(f64::NEG_INFINITY, f64::max);
    let bot = h.nu.iter().map(|(&j, n)| x[j] + n).fold(f64::INFINITY, f64::min);
    top - bot
}

pub fn hilbert_closed_form(h: &HilbertHoro, x: &[f64]) -> f64 {
    let a = h.u.iter().zip(x).map(|(u, v)| u * v).fold(0.0, f64::max);
    let b = h.v.iter().zip(x).map(|(w, v)| w / v).fold(0.0, f64::max);
    a.ln() + b.ln()
}
