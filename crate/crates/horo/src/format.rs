//! On-disk formats.
//!
//! Parameters are JSON objects tagged by `"family"`, with zero-based indices
//! and the string `"inf"` for infinite entries:
//!
//! ```text
//! {"family":"l1","dim":2,"eps":[[0,1]],"mu":[[1,0.0]]}
//! {"family":"lp","p":2.0,"mu":[0.6,0.8]}
//! {"family":"linf","mu_bar":[0.0,"inf"],"nu_bar":["inf",0.0]}
//! {"family":"var","dim":2,"mu":[[0,0.0]],"nu":[[1,0.0]]}
//! {"family":"hilbert","u":[1.0,0.0],"v":[0.0,1.0]}
//! ```
//!
//! Vectors are a JSON array or whitespace-separated numbers. Matrices are
//! plain text (`N`, then `N` rows) or a JSON array of rows. Samples are
//! `{"samples":[{"n":10,"y":[...]}, ...]}`; Hilbert samples may give
//! `"log_y"` instead of `"y"`.

use std::fmt;
use std::fs;
use std::path::Path;

use horo_core::classify::Probes;
use horo_core::{
    ExtendedNonneg, HilbertHoro, HorofunctionParam, L1Horo, LinfHoro, LpHoro, PExponent, PositiveMatrix,
    PositiveVector, Sign, VarHoro, Vector,
};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Core(#[from] horo_core::Error),
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

fn parse_err(path: &Path, message: impl fmt::Display) -> FormatError {
    FormatError::Parse { path: path.display().to_string(), message: message.to_string() }
}

/// An entry of `[0, inf]`, written as a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extended(pub ExtendedNonneg);

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            ExtendedNonneg::Finite(x) => s.serialize_f64(x),
            ExtendedNonneg::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Extended(ExtendedNonneg::Finite(x))),
            Raw::Word(w) if w == "inf" => Ok(Extended(ExtendedNonneg::Infinite)),
            Raw::Word(w) => Err(de::Error::custom(format!("expected a number or \"inf\", found {w:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ParamFile {
    L1 { dim: usize, eps: Vec<(usize, i8)>, mu: Vec<(usize, f64)> },
    Lp { p: f64, mu: Vec<f64> },
    Linf { mu_bar: Vec<Extended>, nu_bar: Vec<Extended> },
    Var { dim: usize, mu: Vec<(usize, f64)>, nu: Vec<(usize, f64)> },
    Hilbert { u: Vec<f64>, v: Vec<f64> },
}

impl ParamFile {
    pub fn from_param(param: &HorofunctionParam) -> ParamFile {
        match param {
            HorofunctionParam::L1(h) => ParamFile::L1 {
                dim: h.dim,
                eps: h.eps.iter().map(|(&i, s)| (i, s.value() as i8)).collect(),
                mu: h.mu.iter().map(|(&i, &m)| (i, m)).collect(),
            },
            HorofunctionParam::Lp(h) => ParamFile::Lp { p: h.p.value(), mu: h.mu.as_slice().to_vec() },
            HorofunctionParam::Linf(h) => ParamFile::Linf {
                mu_bar: h.mu_bar.iter().map(|&e| Extended(e)).collect(),
                nu_bar: h.nu_bar.iter().map(|&e| Extended(e)).collect(),
            },
            HorofunctionParam::Var(h) => ParamFile::Var {
                dim: h.dim,
                mu: h.mu.iter().map(|(&i, &m)| (i, m)).collect(),
                nu: h.nu.iter().map(|(&i, &m)| (i, m)).collect(),
            },
            HorofunctionParam::Hilbert(h) => {
                ParamFile::Hilbert { u: h.u.as_slice().to_vec(), v: h.v.as_slice().to_vec() }
            }
        }
    }

    /// Builds and validates the parameter.
    pub fn into_param(self) -> Result<HorofunctionParam> {
        let bad = |message: String| FormatError::Parse { path: "param".into(), message };
        Ok(match self {
            ParamFile::L1 { dim, eps, mu } => {
                let eps = eps
                    .into_iter()
                    .map(|(i, s)| match s {
                        1 => Ok((i, Sign::Plus)),
                        -1 => Ok((i, Sign::Minus)),
                        other => Err(bad(format!("eps[{i}] = {other}, expected 1 or -1"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                HorofunctionParam::L1(L1Horo::new(dim, eps, mu)?)
            }
            ParamFile::Lp { p, mu } => HorofunctionParam::Lp(LpHoro::new(PExponent::new(p)?, Vector::new(mu)?)?),
            ParamFile::Linf { mu_bar, nu_bar } => HorofunctionParam::Linf(LinfHoro::new(
                mu_bar.into_iter().map(|e| e.0).collect(),
                nu_bar.into_iter().map(|e| e.0).collect(),
            )?),
            ParamFile::Var { dim, mu, nu } => HorofunctionParam::Var(VarHoro::new(dim, mu, nu)?),
            ParamFile::Hilbert { u, v } => HorofunctionParam::Hilbert(HilbertHoro::new(Vector::new(u)?, Vector::new(v)?)?),
        })
    }
}

pub fn param_to_json(param: &HorofunctionParam) -> serde_json::Value {
    serde_json::to_value(ParamFile::from_param(param)).expect("parameters serialize")
}

pub fn parse_param(text: &str) -> Result<HorofunctionParam> {
    let file: ParamFile = serde_json::from_str(text).map_err(|e| parse_err(Path::new("param"), e))?;
    file.into_param()
}

pub fn read_param(path: &Path) -> Result<HorofunctionParam> {
    let file: ParamFile = serde_json::from_str(&read(path)?).map_err(|e| parse_err(path, e))?;
    file.into_param()
}

/// Numbers from a JSON array or from whitespace-separated text.
pub fn parse_numbers(text: &str) -> std::result::Result<Vec<f64>, String> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| e.to_string())
    } else {
        text.split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
            .collect()
    }
}

pub fn read_vector(path: &Path) -> Result<Vector> {
    let values = parse_numbers(&read(path)?).map_err(|m| parse_err(path, m))?;
    Ok(Vector::new(values)?)
}

pub fn read_positive(path: &Path) -> Result<PositiveVector> {
    let values = parse_numbers(&read(path)?).map_err(|m| parse_err(path, m))?;
    Ok(PositiveVector::new(values)?)
}

pub fn read_matrix(path: &Path) -> Result<PositiveMatrix> {
    let text = read(path)?;
    let rows: Vec<Vec<f64>> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| parse_err(path, e))?
    } else {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(path, "expected the dimension N on the first line"))?;
        let values: Vec<f64> = tokens
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(path, format!("not a number: {t:?}"))))
            .collect::<Result<_>>()?;
        if values.len() != n * n {
            return Err(parse_err(path, format!("expected {} entries, found {}", n * n, values.len())));
        }
        values.chunks(n.max(1)).map(|r| r.to_vec()).collect()
    };
    Ok(PositiveMatrix::new(rows)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SamplesFile {
    samples: Vec<SampleEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleEntry {
    n: u64,
    #[serde(default)]
    y: Option<Vec<f64>>,
    #[serde(default)]
    log_y: Option<Vec<f64>>,
}

/// Sample points `(n, y)`. Hilbert points are returned in log-coordinates;
/// linear `"y"` entries must then be strictly positive.
pub fn read_samples(path: &Path, hilbert: bool) -> Result<Vec<(u64, Vector)>> {
    let file: SamplesFile = serde_json::from_str(&read(path)?).map_err(|e| parse_err(path, e))?;
    let mut out = Vec::with_capacity(file.samples.len());
    for (k, s) in file.samples.into_iter().enumerate() {
        let y = match (s.y, s.log_y) {
            (Some(y), None) if hilbert => {
                if let Some(index) = y.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
                    return Err(horo_core::Error::NonPositiveSample { sample: k, index }.into());
                }
                PositiveVector::new(y)?.logs().clone()
            }
            (Some(y), None) => Vector::new(y)?,
            (None, Some(l)) if hilbert => Vector::new(l)?,
            (None, Some(_)) => return Err(parse_err(path, "\"log_y\" is only meaningful for hilbert samples")),
            _ => return Err(parse_err(path, format!("sample {k} needs exactly one of \"y\" or \"log_y\""))),
        };
        out.push((s.n, y));
    }
    Ok(out)
}

/// A JSON array of points. Hilbert probes are cone points, converted to logs.
pub fn read_probes(path: &Path, hilbert: bool) -> Result<Probes> {
    let points: Vec<Vec<f64>> = serde_json::from_str(&read(path)?).map_err(|e| parse_err(path, e))?;
    let points = points
        .into_iter()
        .map(|p| if hilbert { Ok(PositiveVector::new(p)?.logs().clone()) } else { Vector::new(p) })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Probes::explicit(points))
}

/// `lo:hi:steps`, with `steps >= 2` points per axis including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let h = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(move |k| if k + 1 == self.steps { self.hi } else { self.lo + k as f64 * h })
    }
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts[..] else {
            return Err("expected lo:hi:steps".into());
        };
        let lo: f64 = lo.parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
        let hi: f64 = hi.parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
        let steps: usize = steps.parse().map_err(|_| format!("bad step count {steps:?}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err("need finite bounds with lo < hi".into());
        }
        if steps < 2 {
            return Err("need at least 2 steps".into());
        }
        Ok(Grid { lo, hi, steps })
    }
}

/// A number with 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
