//! Recovery of a limiting horofunction from finitely many samples of an
//! escaping sequence.
//!
//! Each classifier reads off the parameters of the limit the way the
//! boundary is described in closed form: which coordinates escape, in which
//! direction, and what offsets the bounded ones settle to. A coordinate's
//! tracked quantity counts as unbounded when, at the last sample, it exceeds
//! `sqrt(||y||)` and has at least doubled since the previous sample.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extended::ExtendedNonneg;
use crate::horo::{Family, HilbertHoro, HorofunctionParam, L1Horo, LinfHoro, LpHoro, Sign, VarHoro};
use crate::space::{bot, duality_map, lp_norm, top, PExponent, PositiveVector, Vector};

pub const DEFAULT_PROBE_COUNT: usize = 20;
pub const DEFAULT_PROBE_SEED: u64 = 0;
/// Probe entries are drawn from `[-PROBE_RANGE, PROBE_RANGE]`.
pub const PROBE_RANGE: f64 = 5.0;
/// Probe entries are rounded to multiples of `1 / PROBE_GRID`.
pub const PROBE_GRID: f64 = 1024.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    /// Minimum (semi)norm of the last sample.
    pub escape_threshold: f64,
    /// Largest violation of a zero-minimum condition that is repaired by shifting.
    pub repair_tol: f64,
    /// Largest allowed `lp` distance between the last two normalized samples.
    pub direction_tol: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { escape_threshold: 1e3, repair_tol: 1e-6, direction_tol: 1e-3 }
    }
}

/// Points at which a classification is checked against the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Probes {
    pub points: Vec<Vector>,
    /// The seed the points were drawn from, if they were generated.
    pub seed: Option<u64>,
}

impl Probes {
    /// [`DEFAULT_PROBE_COUNT`] points with entries uniform in `[-5, 5]`,
    /// quantized to a grid of `1/1024`.
    ///
    /// For the Hilbert family these are log-coordinates, i.e. the cone points
    /// are `exp` of the entries.
    pub fn seeded(dim: usize, seed: u64) -> Probes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..DEFAULT_PROBE_COUNT)
            .map(|_| {
                Vector::from_raw(
                    (0..dim)
                        .map(|_| {
                            let x: f64 = rng.gen_range(-PROBE_RANGE..=PROBE_RANGE);
                            libm::round(x * PROBE_GRID) / PROBE_GRID
                        })
                        .collect(),
                )
            })
            .collect();
        Probes { points, seed: Some(seed) }
    }

    pub fn explicit(points: Vec<Vector>) -> Probes {
        Probes { points, seed: None }
    }
}

/// Samples `(n_k, y^{n_k})` of an escaping sequence in one family's space.
///
/// Hilbert samples are stored in log-coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSamples {
    family: Family,
    samples: Vec<(u64, Vector)>,
    probes: Probes,
}

impl SequenceSamples {
    /// Checks the sample list: at least three samples of one dimension with
    /// strictly increasing indices and strictly increasing norms. Probes
    /// default to [`Probes::seeded`] with [`DEFAULT_PROBE_SEED`].
    pub fn new(family: Family, samples: Vec<(u64, Vector)>, probes: Option<Probes>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidSamples("at least 3 samples are required"));
        }
        let dim = samples[0].1.dim();
        for (_, y) in &samples {
            crate::space::check_dims(dim, y.dim())?;
        }
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidSamples("sample indices must be strictly increasing"));
        }
        if samples.windows(2).any(|w| family.norm(&w[0].1) >= family.norm(&w[1].1)) {
            return Err(Error::InvalidSamples("sample norms must be strictly increasing"));
        }
        let probes = probes.unwrap_or_else(|| Probes::seeded(dim, DEFAULT_PROBE_SEED));
        for x in &probes.points {
            crate::space::check_dims(dim, x.dim())?;
        }
        Ok(SequenceSamples { family, samples, probes })
    }

    /// Hilbert samples given as cone points.
    pub fn from_cone(samples: Vec<(u64, PositiveVector)>, probes: Option<Probes>) -> Result<Self> {
        let logs = samples.into_iter().map(|(n, y)| (n, y.logs().clone())).collect();
        SequenceSamples::new(Family::Hilbert, logs, probes)
    }

    /// Hilbert samples given as raw linear entries, which must be positive.
    pub fn from_cone_entries(samples: Vec<(u64, Vec<f64>)>, probes: Option<Probes>) -> Result<Self> {
        let mut cone = Vec::with_capacity(samples.len());
        for (k, (n, y)) in samples.into_iter().enumerate() {
            if let Some(index) = y.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
                return Err(Error::NonPositiveSample { sample: k, index });
            }
            cone.push((n, PositiveVector::new(y)?));
        }
        SequenceSamples::from_cone(cone, probes)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.samples[0].1.dim()
    }

    pub fn samples(&self) -> &[(u64, Vector)] {
        &self.samples
    }

    pub fn probes(&self) -> &Probes {
        &self.probes
    }

    pub fn last(&self) -> &Vector {
        &self.samples[self.samples.len() - 1].1
    }

    fn prev(&self) -> &Vector {
        &self.samples[self.samples.len() - 2].1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub param: HorofunctionParam,
    /// `sup` over the probes of `|tau(y_last)(x) - h(x)|`.
    pub residual: f64,
    pub notes: Vec<String>,
    /// Seed of the probes used for the residual, if they were generated.
    pub seed: Option<u64>,
    pub config: ClassifierConfig,
}

/// `sup_x |tau(y)(x) - h(x)|` over the probes, in `h`'s family metric.
///
/// Hilbert points and probes are log-coordinates.
pub fn residual(param: &HorofunctionParam, y: &Vector, probes: &[Vector]) -> Result<f64> {
    let family = param.family();
    let mut sup: f64 = 0.0;
    for x in probes {
        sup = sup.max((family.tau(y, x)? - param.eval(x)?).abs());
    }
    Ok(sup)
}

/// Dispatches on the samples' family.
pub fn classify(s: &SequenceSamples, config: &ClassifierConfig) -> Result<ClassificationResult> {
    match s.family {
        Family::L1 => classify_l1(s, config),
        Family::Lp(_) => classify_lp(s, config),
        Family::Linf => classify_linf(s, config),
        Family::Var => classify_var(s, config),
        Family::Hilbert => classify_hilbert(s, config),
    }
}

/// `I` = unbounded coordinates, `eps_i = -sign(y_i)`, `mu` = bounded values at the last sample.
pub fn classify_l1(s: &SequenceSamples, config: &ClassifierConfig) -> Result<ClassificationResult> {
    expect_family(s, |f| f == Family::L1)?;
    let norm = check_escape(s, config)?;
    let (last, prev) = (s.last(), s.prev());
    let mut notes = Vec::new();
    let mut test = GrowthTest::new(norm);
    let mut unbounded: Vec<bool> = (0..s.dim())
        .map(|i| test.check(&mut notes, format!("|y[{i}]|"), last[i].abs(), prev[i].abs()))
        .collect();
    if !unbounded.contains(&true) {
        let k = crate::space::argtop(&last.map(f64::abs));
        notes.push(format!("no coordinate passed the growth test; treating the largest, {k}, as unbounded"));
        unbounded[k] = true;
    }
    let mut eps = BTreeMap::new();
    let mut mu = BTreeMap::new();
    for (i, &u) in unbounded.iter().enumerate() {
        if u {
            let sign = Sign::of(last[i]).ok_or(Error::SignFlip { index: i })?;
            if Sign::of(prev[i]) != Some(sign) {
                return Err(Error::SignFlip { index: i });
            }
            eps.insert(i, sign.flip());
        } else {
            mu.insert(i, last[i]);
        }
    }
    let h = L1Horo::new(s.dim(), eps, mu)?;
    finish(s, config, HorofunctionParam::L1(h), notes)
}

/// `mu = J_p(y_last / ||y_last||_p)`, after checking the direction has settled.
pub fn classify_lp(s: &SequenceSamples, config: &ClassifierConfig) -> Result<ClassificationResult> {
    let p = match s.family {
        Family::Lp(p) if p.is_strictly_convex() => p,
        Family::Lp(p) => return Err(Error::InvalidExponent { p: p.value() }),
        _ => return Err(Error::WrongFamily),
    };
    let norm = check_escape(s, config)?;
    let w = s.last().scale(1.0 / norm);
    let w_prev = s.prev().scale(1.0 / lp_norm(s.prev(), p));
    let drift = lp_norm(&w.sub(&w_prev)?, p);
    if drift > config.direction_tol {
        return Err(Error::DirectionUnstable { drift, tol: config.direction_tol });
    }
    let mut notes = Vec::new();
    if drift > 0.9 * config.direction_tol {
        notes.push(format!("direction drift {drift:e} is within 10% of the tolerance"));
    }
    let w = w.scale(1.0 / lp_norm(&w, p));
    let h = LpHoro::new(p, duality_map(&w, p)?)?;
    finish(s, config, HorofunctionParam::Lp(h), notes)
}

/// `mu_bar_i ~ ||y|| + y_i` and `nu_bar_i ~ ||y|| - y_i`, set to `inf` when unbounded.
pub fn classify_linf(s: &SequenceSamples, config: &ClassifierConfig) -> Result<ClassificationResult> {
    expect_family(s, |f| f == Family::Linf)?;
    let norm = check_escape(s, config)?;
    let prev_norm = lp_norm(s.prev(), PExponent::INFINITY);
    let (last, prev) = (s.last(), s.prev());
    let mut notes = Vec::new();
    let mut test = GrowthTest::new(norm);
    let mut mu_bar = Vec::with_capacity(s.dim());
    let mut nu_bar = Vec::with_capacity(s.dim());
    for i in 0..s.dim() {
        let m = norm + last[i];
        let v = norm - last[i];
        let mut m_inf = test.check(&mut notes, format!("mu_bar[{i}]"), m, prev_norm + prev[i]);
        let mut v_inf = test.check(&mut notes, format!("nu_bar[{i}]"), v, prev_norm - prev[i]);
        if !m_inf && !v_inf {
            notes.push(format!("coordinate {i} bounded on both sides; sending the larger side to inf"));
            if m >= v {
                m_inf = true;
            } else {
                v_inf = true;
            }
        }
        mu_bar.push(if m_inf { ExtendedNonneg::Infinite } else { ExtendedNonneg::Finite(m) });
        nu_bar.push(if v_inf { ExtendedNonneg::Infinite } else { ExtendedNonneg::Finite(v) });
    }
    let min = mu_bar.iter().chain(&nu_bar).filter_map(|e| e.finite()).fold(f64::INFINITY, f64::min);
    if min == f64::INFINITY {
        return Err(Error::InvariantRepair { violation: f64::INFINITY, tol: config.repair_tol });
    }
    let shift = repair_shift(min, config, &mut notes)?;
    let shifted = |e: &ExtendedNonneg| match e.finite() {
        Some(x) => ExtendedNonneg::Finite(x - shift),
        None => ExtendedNonneg::Infinite,
    };
    let h = LinfHoro::new(
        mu_bar.iter().map(shifted).collect(),
        nu_bar.iter().map(shifted).collect(),
    )?;
    finish(s, config, HorofunctionParam::Linf(h), notes)
}

/// `I`: coordinates with `y_i - bot(y)` bounded, `mu_i` its value; `J`:
/// coordinates with `top(y) - y_j` bounded, `nu_j` its value.
pub fn classify_var(s: &SequenceSamples, config: &ClassifierConfig) -> Result<ClassificationResult> {
    expect_family(s, |f| f == Family::Var)?;
    let (mu, nu, notes) = var_offsets(s, config)?;
    let h = VarHoro::new(s.dim(), mu, nu)?;
    finish(s, config, HorofunctionParam::Var(h), notes)
}

/// Classifies the log-samples under the variation seminorm, then maps the
/// result to the cone with `u_i = exp(-mu_i)`, `v_j = exp(-nu_j)`.
pub fn classify_hilbert(s: &SequenceSamples, config: &ClassifierConfig) -> Result<ClassificationResult> {
    expect_family(s, |f| f == Family::Hilbert)?;
    let (mu, nu, notes) = var_offsets(s, config)?;
    let h: HilbertHoro = VarHoro::new(s.dim(), mu, nu)?.to_hilbert()?;
    finish(s, config, HorofunctionParam::Hilbert(h), notes)
}

type Offsets = BTreeMap<usize, f64>;

fn var_offsets(s: &SequenceSamples, config: &ClassifierConfig) -> Result<(Offsets, Offsets, Vec<String>)> {
    if s.dim() < 2 {
        return Err(Error::InvalidSamples("the variation seminorm needs dimension at least 2"));
    }
    let norm = check_escape(s, config)?;
    let (last, prev) = (s.last(), s.prev());
    let (lo, hi, plo, phi) = (bot(last), top(last), bot(prev), top(prev));
    let mut notes = Vec::new();
    let mut test = GrowthTest::new(norm);
    let mut mu = BTreeMap::new();
    let mut nu = BTreeMap::new();
    for i in 0..s.dim() {
        let m = last[i] - lo;
        let v = hi - last[i];
        let mut in_i = !test.check(&mut notes, format!("y[{i}] - bot(y)"), m, prev[i] - plo);
        let mut in_j = !test.check(&mut notes, format!("top(y) - y[{i}]"), v, phi - prev[i]);
        if in_i && in_j {
            notes.push(format!("coordinate {i} bounded on both sides; dropping it from the farther side"));
            if m >= v {
                in_i = false;
            } else {
                in_j = false;
            }
        }
        if in_i {
            mu.insert(i, m);
        }
        if in_j {
            nu.insert(i, v);
        }
    }
    for side in [&mut mu, &mut nu] {
        // Both sides contain an exact zero (the argmin, resp. argmax), so this
        // only guards against the conflict rule having removed it.
        let min = side.values().copied().fold(f64::INFINITY, f64::min);
        if min.is_finite() {
            let shift = repair_shift(min, config, &mut notes)?;
            side.values_mut().for_each(|x| *x -= shift);
        }
    }
    Ok((mu, nu, notes))
}

fn expect_family(s: &SequenceSamples, ok: impl Fn(Family) -> bool) -> Result<()> {
    if ok(s.family) {
        Ok(())
    } else {
        Err(Error::WrongFamily)
    }
}

fn check_escape(s: &SequenceSamples, config: &ClassifierConfig) -> Result<f64> {
    let norm = s.family.norm(s.last());
    if norm.is_nan() || norm < config.escape_threshold {
        return Err(Error::NotEscaping { norm, threshold: config.escape_threshold });
    }
    Ok(norm)
}

fn repair_shift(min: f64, config: &ClassifierConfig, notes: &mut Vec<String>) -> Result<f64> {
    if min.abs() > config.repair_tol {
        return Err(Error::InvariantRepair { violation: min.abs(), tol: config.repair_tol });
    }
    if min != 0.0 {
        notes.push(format!("shifted offsets by {min:e} to restore a zero minimum"));
    }
    Ok(min)
}

struct GrowthTest {
    threshold: f64,
}

impl GrowthTest {
    fn new(norm: f64) -> Self {
        GrowthTest { threshold: libm::sqrt(norm) }
    }

    fn check(&mut self, notes: &mut Vec<String>, what: String, last: f64, prev: f64) -> bool {
        if (last - self.threshold).abs() <= 0.1 * self.threshold {
            notes.push(format!(
                "{what} = {last:e} is within 10% of the unbounded threshold {:e}",
                self.threshold
            ));
        }
        last > self.threshold && last >= 2.0 * prev
    }
}

fn finish(
    s: &SequenceSamples,
    config: &ClassifierConfig,
    param: HorofunctionParam,
    notes: Vec<String>,
) -> Result<ClassificationResult> {
    let residual = residual(&param, s.last(), &s.probes.points)?;
    Ok(ClassificationResult { param, residual, notes, seed: s.probes.seed, config: *config })
}
