//! The `horo` command line.
//!
//! Exit codes: `0` success, `1` invalid input or failed classification,
//! `2` solver non-convergence, `64` usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use horo_core::classify::{classify, ClassifierConfig, Probes, SequenceSamples};
use horo_core::hilbert::{
    hilbert_distance, invariant_set_contains, perron_certificates, perron_solve, PerronResult, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};
use horo_core::{Error as CoreError, Family, HorofunctionParam, NormKind, PExponent, PositiveVector, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::format::{self, num, FormatError, Grid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const ORBIT_STARTS: usize = 10;
const ORBIT_STEPS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "horo", version, about = "Horofunctions of lp spaces and Hilbert's projective metric")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the (semi)norm of a vector.
    Norm {
        /// l1, lp:<p>, linf or var.
        #[arg(long, value_parser = parse_norm_kind)]
        kind: NormKind,
        #[arg(long, value_parser = existing_file)]
        vec: PathBuf,
    },
    /// Evaluate a horofunction at a point (a cone point for hilbert).
    HoroEval {
        #[arg(long, value_parser = existing_file)]
        param: PathBuf,
        #[arg(long, value_parser = existing_file)]
        vec: PathBuf,
    },
    /// Recover the limiting horofunction of an escaping sequence.
    HoroClassify {
        /// l1, lp:<p>, linf, var or hilbert.
        #[arg(long, value_parser = parse_family)]
        kind: Family,
        #[arg(long, value_parser = existing_file)]
        samples: PathBuf,
        #[arg(long, value_parser = existing_file)]
        probes: Option<PathBuf>,
        /// Seed for the default probes.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write h on a grid as CSV (N = 3: slice at fixed third coordinate).
    HoroSample {
        #[arg(long, value_parser = existing_file)]
        param: PathBuf,
        /// lo:hi:steps, steps >= 2 points per axis including both ends.
        #[arg(long, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long)]
        out: PathBuf,
        /// Third coordinate for N = 3 (default 0, or 1 for hilbert).
        #[arg(long, allow_hyphen_values = true)]
        slice: Option<f64>,
    },
    /// Print Hilbert's projective distance between two positive vectors.
    HilbertDist {
        #[arg(long, value_parser = existing_file)]
        x: PathBuf,
        #[arg(long, value_parser = existing_file)]
        y: PathBuf,
    },
    /// Solve for the Perron ray of a positive matrix.
    Perron {
        #[arg(long, value_parser = existing_file)]
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long, value_parser = existing_file)]
        x0: Option<PathBuf>,
    },
    /// Print the extreme horoball certificates and check random orbits against them.
    Certify {
        #[arg(long, value_parser = existing_file)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn existing_file(s: &str) -> Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.is_file() {
        Ok(p)
    } else {
        Err(format!("no such file: {s}"))
    }
}

fn parse_norm_kind(s: &str) -> Result<NormKind, String> {
    match s {
        "l1" => Ok(NormKind::Lp(PExponent::ONE)),
        "linf" => Ok(NormKind::Lp(PExponent::INFINITY)),
        "var" => Ok(NormKind::Var),
        _ => match s.strip_prefix("lp:") {
            Some("inf") => Ok(NormKind::Lp(PExponent::INFINITY)),
            Some(p) => {
                let p: f64 = p.parse().map_err(|_| format!("bad exponent {p:?}"))?;
                PExponent::new(p).map(NormKind::Lp).map_err(|e| e.to_string())
            }
            None => Err(format!("unknown norm {s:?}; expected l1, lp:<p>, linf or var")),
        },
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "l1" => Ok(Family::L1),
        "linf" => Ok(Family::Linf),
        "var" => Ok(Family::Var),
        "hilbert" => Ok(Family::Hilbert),
        _ => match s.strip_prefix("lp:") {
            Some(p) => {
                let p: f64 = p.parse().map_err(|_| format!("bad exponent {p:?}"))?;
                let p = PExponent::new(p).map_err(|e| e.to_string())?;
                if p.is_strictly_convex() {
                    Ok(Family::Lp(p))
                } else {
                    Err("lp classification needs 1 < p < inf; use l1 or linf".into())
                }
            }
            None => Err(format!("unknown family {s:?}; expected l1, lp:<p>, linf, var or hilbert")),
        },
    }
}

/// One printed value; rendered as `key: value` lines or as a JSON object.
enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Nums(Vec<f64>),
    /// Rendered verbatim (compact JSON) in text mode.
    Json(Value),
    /// One line per entry in text mode.
    Lines(Vec<String>),
    /// One line per record in text mode, `k=v` pairs.
    Records(Vec<Vec<(&'static str, Field)>>),
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Num(x) => num(*x),
            Field::Int(n) => n.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
            Field::Nums(v) => format!("[{}]", v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")),
            Field::Json(v) => v.to_string(),
            Field::Lines(_) | Field::Records(_) => unreachable!("rendered line by line"),
        }
    }

    fn json(&self) -> Value {
        let number = |x: f64| serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| num(x).into());
        match self {
            Field::Num(x) => number(*x),
            Field::Int(n) => (*n).into(),
            Field::Bool(b) => (*b).into(),
            Field::Text(s) => s.clone().into(),
            Field::Nums(v) => v.iter().map(|&x| number(x)).collect(),
            Field::Json(v) => v.clone(),
            Field::Lines(v) => v.clone().into(),
            Field::Records(rs) => rs
                .iter()
                .map(|r| r.iter().map(|(k, f)| (k.to_string(), f.json())).collect::<Map<_, _>>())
                .map(Value::Object)
                .collect(),
        }
    }
}

#[derive(Default)]
struct Report(Vec<(&'static str, Field)>);

impl Report {
    fn push(&mut self, key: &'static str, field: Field) -> &mut Self {
        self.0.push((key, field));
        self
    }

    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let map: Map<String, Value> = self.0.iter().map(|(k, f)| (k.to_string(), f.json())).collect();
                format!("{}\n", Value::Object(map))
            }
            OutputFormat::Text => {
                let mut out = String::new();
                for (key, field) in &self.0 {
                    match field {
                        Field::Lines(lines) => {
                            for l in lines {
                                out.push_str(&format!("{key}: {l}\n"));
                            }
                        }
                        Field::Records(records) => {
                            for r in records {
                                let parts: Vec<String> = r.iter().map(|(k, f)| format!("{k}={}", f.text())).collect();
                                out.push_str(&format!("{key}: {}\n", parts.join(" ")));
                            }
                        }
                        f => out.push_str(&format!("{key}: {}\n", f.text())),
                    }
                }
                out
            }
        }
    }
}

enum Failure {
    Invalid(String),
    NoConvergence(Report, String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs the command, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.format).as_bytes());
            EXIT_OK
        }
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::NoConvergence(report, msg)) => {
            let _ = out.write_all(report.render(cli.format).as_bytes());
            let _ = writeln!(err, "error: {msg}");
            EXIT_NO_CONVERGENCE
        }
    }
}

fn execute(command: Command) -> Result<Report, Failure> {
    let mut r = Report::default();
    match command {
        Command::Norm { kind, vec } => {
            let x = format::read_vector(&vec)?;
            r.push("value", Field::Num(kind.norm(&x)));
        }
        Command::HoroEval { param, vec } => {
            let param = format::read_param(&param)?;
            let value = match &param {
                HorofunctionParam::Hilbert(h) => h.eval(&format::read_positive(&vec)?)?,
                p => p.eval(&format::read_vector(&vec)?)?,
            };
            r.push("family", Field::Text(param.family().name().into())).push("value", Field::Num(value));
        }
        Command::HoroClassify { kind, samples, probes, seed } => {
            let hilbert = kind == Family::Hilbert;
            let points = format::read_samples(&samples, hilbert)?;
            let probes = match probes {
                Some(p) => format::read_probes(&p, hilbert)?,
                None => {
                    let dim = points.first().map_or(0, |(_, y)| y.dim());
                    Probes::seeded(dim, seed)
                }
            };
            let s = SequenceSamples::new(kind, points, Some(probes))?;
            let config = ClassifierConfig::default();
            let result = classify(&s, &config)?;
            r.push("family", Field::Text(kind.name().into()))
                .push("param", Field::Json(format::param_to_json(&result.param)))
                .push("residual", Field::Num(result.residual))
                .push("seed", result.seed.map_or(Field::Text("none".into()), Field::Int))
                .push("escape_threshold", Field::Num(config.escape_threshold))
                .push("repair_tol", Field::Num(config.repair_tol))
                .push("direction_tol", Field::Num(config.direction_tol))
                .push("notes", Field::Lines(result.notes));
        }
        Command::HoroSample { param, grid, out, slice } => {
            let param = format::read_param(&param)?;
            let rows = write_grid(&param, grid, slice, &out)?;
            r.push("out", Field::Text(out.display().to_string())).push("rows", Field::Int(rows as u64));
        }
        Command::HilbertDist { x, y } => {
            let d = hilbert_distance(&format::read_positive(&x)?, &format::read_positive(&y)?)?;
            r.push("value", Field::Num(d));
        }
        Command::Perron { matrix, tol, max_iter, x0 } => {
            let t = format::read_matrix(&matrix)?;
            let x0 = x0.map(|p| format::read_positive(&p)).transpose()?;
            match perron_solve(&t, x0.as_ref(), tol, max_iter) {
                Ok(result) => perron_report(&mut r, &result, true),
                Err(CoreError::MaxIterExceeded(best)) => {
                    let msg = CoreError::MaxIterExceeded(best.clone()).to_string();
                    perron_report(&mut r, &best, false);
                    return Err(Failure::NoConvergence(r, msg));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Certify { matrix, seed } => {
            let t = format::read_matrix(&matrix)?;
            let certs = perron_certificates(&t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut contained = true;
            for _ in 0..ORBIT_STARTS {
                let logs: Vec<f64> = (0..t.dim()).map(|_| rng.gen_range(-5.0..5.0)).collect();
                let mut x = PositiveVector::from_logs(Vector::new(logs)?);
                for _ in 0..ORBIT_STEPS {
                    x = t.apply(&x)?;
                    for c in &certs {
                        contained &= c.contains(&x)?;
                    }
                    contained &= invariant_set_contains(&t, &x)?;
                }
            }
            let records = certs
                .iter()
                .map(|c| {
                    let support = |w: &Vector| w.iter().position(|&v| v > 0.0).unwrap_or(0) as u64;
                    vec![
                        ("i", Field::Int(support(&c.h.u))),
                        ("j", Field::Int(support(&c.h.v))),
                        ("u", Field::Nums(c.h.u.as_slice().to_vec())),
                        ("v", Field::Nums(c.h.v.as_slice().to_vec())),
                        ("r", Field::Num(c.radius)),
                    ]
                })
                .collect();
            r.push("certificates", Field::Records(records))
                .push("orbit_starts", Field::Int(ORBIT_STARTS as u64))
                .push("orbit_steps", Field::Int(ORBIT_STEPS as u64))
                .push("seed", Field::Int(seed))
                .push("contained", Field::Bool(contained));
            if !contained {
                return Err(Failure::Invalid("an orbit point left a certified horoball".into()));
            }
        }
    }
    Ok(r)
}

fn perron_report(r: &mut Report, p: &PerronResult, converged: bool) {
    r.push("converged", Field::Bool(converged))
        .push("x_star", Field::Nums(p.x_star.entries()))
        .push("residual", Field::Num(p.residual))
        .push("iterations", Field::Int(p.iterations as u64))
        .push("eigenvalue", Field::Num(p.eigenvalue))
        .push("contraction_ratios", Field::Nums(p.contraction_ratios.clone()));
}

fn write_grid(param: &HorofunctionParam, grid: Grid, slice: Option<f64>, out: &Path) -> Result<usize, Failure> {
    let dim = param.dim();
    if !(dim == 2 || dim == 3) {
        return Err(Failure::Invalid(format!("grid sampling needs dimension 2 or 3, found {dim}")));
    }
    let hilbert = matches!(param, HorofunctionParam::Hilbert(_));
    let slice = slice.unwrap_or(if hilbert { 1.0 } else { 0.0 });
    if hilbert && !(grid.lo > 0.0 && slice > 0.0) {
        return Err(Failure::Invalid("hilbert grids must lie in the open positive cone".into()));
    }
    let eval = |x: Vec<f64>| -> Result<f64, Failure> {
        Ok(match param {
            HorofunctionParam::Hilbert(h) => h.eval(&PositiveVector::new(x)?)?,
            p => p.eval(&Vector::new(x)?)?,
        })
    };
    let io = |e: std::io::Error| Failure::Invalid(format!("{}: {e}", out.display()));
    let mut w = BufWriter::new(File::create(out).map_err(io)?);
    writeln!(w, "{}", if dim == 2 { "x1,x2,h" } else { "x1,x2,x3,h" }).map_err(io)?;
    let mut rows = 0;
    for a in grid.points() {
        for b in grid.points() {
            let mut x = vec![a, b];
            if dim == 3 {
                x.push(slice);
            }
            let h = eval(x.clone())?;
            let cells: Vec<String> = x.into_iter().chain([h]).map(num).collect();
            writeln!(w, "{}", cells.join(",")).map_err(io)?;
            rows += 1;
        }
    }
    w.flush().map_err(io)?;
    Ok(rows)
}
