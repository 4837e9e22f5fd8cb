//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use horo_core::classify::{classify, ClassifierConfig, SequenceSamples};
use horo_core::hilbert::{
    contraction_check, hilbert_distance, horoball_radius, invariant_set_contains, perron_certificates,
    perron_solve, HoroballCertificate, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use horo_core::space::{exp_map, log_map, lp_norm, top, var_seminorm};
use horo_core::{Family, HorofunctionParam, PExponent, PositiveMatrix, PositiveVector, Vector};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn linf_identity() -> Outcome {
    let mut rng = rng(1);
    let mut mismatches = 0;
    for k in 0..1000 {
        let dim = 1 + k % 8;
        let x = vector(uniform(&mut rng, dim, -100.0, 100.0));
        let lhs = lp_norm(&x, PExponent::INFINITY);
        let rhs = top(&x).max(-horo_core::space::bot(&x));
        if lhs != rhs || lhs != max_abs(x.as_slice()) {
            mismatches += 1;
        }
    }
    check(mismatches == 0, format!("{mismatches} mismatches in 1000 vectors"))
}

fn exp_log_identities() -> Outcome {
    let mut rng = rng(2);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let dim = 1 + k % 8;
        let x = uniform(&mut rng, dim, -20.0, 20.0);
        let y = uniform(&mut rng, dim, -20.0, 20.0);
        let prod = exp_map(&vector(x.clone())).unwrap().hadamard(&exp_map(&vector(y.clone())).unwrap()).unwrap();
        let lhs = prod.entries().into_iter().fold(0.0, f64::max);
        let rhs = x.iter().zip(&y).map(|(a, b)| a + b).fold(f64::NEG_INFINITY, f64::max).exp();
        let linear = x.iter().zip(&y).map(|(a, b)| a.exp() * b.exp()).fold(0.0, f64::max);
        worst = worst.max(((lhs - rhs) / rhs).abs()).max(((linear - rhs) / rhs).abs());

        let a: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let b: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let (pa, pb) = (PositiveVector::new(a.clone()).unwrap(), PositiveVector::new(b.clone()).unwrap());
        let lhs = top(&log_map(&pa).sub(&log_map(&pb)).unwrap());
        let rhs = a.iter().zip(&b).map(|(p, q)| p / q).fold(0.0, f64::max).ln();
        worst = worst.max(((lhs - rhs) / rhs.abs().max(1.0)).abs());
    }
    check(worst <= 1e-12, format!("max relative error {worst:.3e} (tolerance 1e-12)"))
}

fn log_isometry() -> Outcome {
    let mut rng = rng(3);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let dim = 1 + k % 8;
        let x: Vec<f64> = uniform(&mut rng, dim, -10.0, 10.0).iter().map(|v| v.exp()).collect();
        let y: Vec<f64> = uniform(&mut rng, dim, -10.0, 10.0).iter().map(|v| v.exp()).collect();
        let d = hilbert_distance(&PositiveVector::new(x.clone()).unwrap(), &PositiveVector::new(y.clone()).unwrap())
            .unwrap();
        let logs: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.ln() - b.ln()).collect();
        worst = worst.max((d - spread(&logs)).abs()).max((d - hilbert_linear(&x, &y)).abs());
    }
    check(worst <= 1e-12, format!("max |d_H - ||log x - log y||_var| = {worst:.3e} (tolerance 1e-12)"))
}

fn probe_set(rng: &mut rand_chacha::ChaCha8Rng, dim: usize, range: f64, exact: bool) -> Vec<Vector> {
    (0..50)
        .map(|_| {
            let e = uniform(rng, dim, -range, range);
            vector(if exact { e.into_iter().map(dyadic).collect() } else { e })
        })
        .collect()
}

fn sup_residual(param: &HorofunctionParam, y: &Vector, probes: &[Vector]) -> f64 {
    let family = param.family();
    probes
        .iter()
        .map(|x| (family.tau(y, x).unwrap() - param.eval(x).unwrap()).abs())
        .fold(0.0, f64::max)
}

fn closed_form(param: &HorofunctionParam, x: &[f64]) -> f64 {
    match param {
        HorofunctionParam::L1(h) => l1_closed_form(h, x),
        HorofunctionParam::Lp(h) => lp_closed_form(h, x),
        HorofunctionParam::Linf(h) => linf_closed_form(h, x),
        HorofunctionParam::Var(h) => var_closed_form(h, x),
        HorofunctionParam::Hilbert(h) => {
            hilbert_closed_form(h, &x.iter().map(|v| v.exp()).collect::<Vec<_>>())
        }
    }
}

fn realization() -> Outcome {
    let mut rng = rng(4);
    let mut report = Vec::new();
    let mut ok = true;
    let mut evaluator_gap: f64 = 0.0;
    for family in ["l1", "linf", "var"] {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let dim = rng.gen_range(if family == "var" { 2 } else { 1 }..=8);
            let param = match family {
                "l1" => HorofunctionParam::L1(random_l1(&mut rng, dim)),
                "linf" => HorofunctionParam::Linf(random_linf(&mut rng, dim, true, false)),
                _ => HorofunctionParam::Var(random_var(&mut rng, dim, true)),
            };
            let probes = probe_set(&mut rng, param.dim(), 5.0, true);
            for x in &probes {
                evaluator_gap = evaluator_gap.max((param.eval(x).unwrap() - closed_form(&param, x.as_slice())).abs());
            }
            for n in [100u64, 10_000, 1_000_000] {
                let y = param.canonical_escape_sequence(n).unwrap();
                worst = worst.max(sup_residual(&param, &y, &probes));
            }
        }
        ok &= worst == 0.0;
        report.push(format!("{family} {worst:.1e}"));
    }
    for p in [1.5, 2.0, 3.0] {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let dim = rng.gen_range(1..=8);
            let param = HorofunctionParam::Lp(random_lp(&mut rng, dim, p));
            let probes = probe_set(&mut rng, param.dim(), 1.0, false);
            for x in &probes {
                evaluator_gap = evaluator_gap.max((param.eval(x).unwrap() - closed_form(&param, x.as_slice())).abs());
            }
            let y = param.canonical_escape_sequence(1_000_000).unwrap();
            worst = worst.max(sup_residual(&param, &y, &probes));
        }
        ok &= worst <= 1e-5;
        report.push(format!("lp(p={p}) {worst:.2e}"));
    }
    ok &= evaluator_gap <= 1e-12;
    report.push(format!("evaluator vs closed form {evaluator_gap:.1e}"));
    check(ok, format!("max residuals: {} (exact families must be 0, lp <= 1e-5)", report.join(", ")))
}

fn not_in_image() -> Outcome {
    let mut rng = rng(5);
    let n = 10_000_000u64;
    let mut highest = f64::NEG_INFINITY;
    for _ in 0..20 {
        let dim = rng.gen_range(2..=8);
        let params = [
            HorofunctionParam::L1(random_l1(&mut rng, dim)),
            HorofunctionParam::Lp(random_lp(&mut rng, dim, 1.5)),
            HorofunctionParam::Lp(random_lp(&mut rng, dim, 2.0)),
            HorofunctionParam::Lp(random_lp(&mut rng, dim, 3.0)),
            HorofunctionParam::Var(random_var(&mut rng, dim, false)),
        ];
        for param in &params {
            let y = param.canonical_escape_sequence(n).unwrap();
            highest = highest.max(param.eval(&y).unwrap());
        }
    }
    // l_inf: h(x^k) = 0 along the level-zero sequence, but no tau(z) follows it.
    let mut linf_ok = true;
    let mut smallest_gap = f64::INFINITY;
    for _ in 0..20 {
        let dim = rng.gen_range(2..=8);
        let h = random_linf(&mut rng, dim, false, true);
        let param = HorofunctionParam::Linf(h.clone());
        for _ in 0..5 {
            let z = vector(uniform(&mut rng, h.dim(), -5.0, 5.0));
            let mut gaps = Vec::new();
            for k in [1_000u64, 1_000_000, 1_000_000_000] {
                let x = h.level_zero_point(k).unwrap();
                linf_ok &= param.eval(&x).unwrap() == 0.0;
                gaps.push((Family::Linf.tau(&z, &x).unwrap() - param.eval(&x).unwrap()).abs());
            }
            linf_ok &= gaps.windows(2).all(|w| w[1] > w[0]);
            smallest_gap = smallest_gap.min(gaps[2]);
        }
    }
    linf_ok &= smallest_gap > 1.0;
    check(
        highest < -1e6 && linf_ok,
        format!(
            "max h(y^n) at n=1e7 over l1/lp/var: {highest:.3e}; linf level-zero points: h = 0, \
             |tau(z) - h| grows to >= {smallest_gap:.3e}"
        ),
    )
}

fn classifier_round_trip() -> Outcome {
    let mut rng = rng(6);
    let config = ClassifierConfig::default();
    let mut report = Vec::new();
    let mut ok = true;
    for family in ["l1", "lp", "linf", "var", "hilbert"] {
        let mut hits = 0;
        for k in 0..200 {
            let dim = if matches!(family, "var" | "hilbert") { rng.gen_range(2..=8) } else { rng.gen_range(1..=8) };
            let param = match family {
                "l1" => HorofunctionParam::L1(random_l1(&mut rng, dim)),
                "lp" => HorofunctionParam::Lp(random_lp(&mut rng, dim, [1.5, 2.0, 3.0][k % 3])),
                "linf" => HorofunctionParam::Linf(random_linf(&mut rng, dim, false, false)),
                "var" => HorofunctionParam::Var(random_var(&mut rng, dim, false)),
                _ => HorofunctionParam::Hilbert(random_hilbert(&mut rng, dim)),
            };
            let samples = [100u64, 10_000, 1_000_000]
                .iter()
                .map(|&n| (n, param.canonical_escape_sequence(n).unwrap()))
                .collect();
            let recovered = SequenceSamples::new(param.family(), samples, None)
                .and_then(|s| classify(&s, &config))
                .map(|r| r.param);
            if matches!(&recovered, Ok(r) if r.validate().is_ok() && r.approx_eq(&param, 1e-6)) {
                hits += 1;
            }
        }
        ok &= hits == 200;
        report.push(format!("{family} {hits}/200"));
    }
    check(ok, report.join(", "))
}

fn random_pair(rng: &mut rand_chacha::ChaCha8Rng, dim: usize) -> (PositiveVector, PositiveVector) {
    loop {
        let x = PositiveVector::from_logs(vector(uniform(rng, dim, -5.0, 5.0)));
        let y = PositiveVector::from_logs(vector(uniform(rng, dim, -5.0, 5.0)));
        if hilbert_distance(&x, &y).unwrap() >= 1e-6 {
            return (x, y);
        }
    }
}

fn contraction() -> Outcome {
    let mut rng = rng(7);
    let mut worst: f64 = 0.0;
    let mut birkhoff_violations = 0;
    for _ in 0..1000 {
        let dim = rng.gen_range(2..=8);
        let (t, rows) = random_matrix(&mut rng, dim);
        let (x, y) = random_pair(&mut rng, dim);
        let ratio = contraction_check(&t, &x, &y).unwrap();
        worst = worst.max(ratio);
        // Birkhoff's bound tanh(diam / 4), from the cross-ratios of T.
        let mut diam: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        diam = diam.max((rows[i][k] * rows[j][l] / (rows[j][k] * rows[i][l])).ln());
                    }
                }
            }
        }
        if ratio > (diam / 4.0).tanh() + 1e-6 {
            birkhoff_violations += 1;
        }
    }
    check(
        worst < 1.0 && birkhoff_violations == 0,
        format!("max ratio {worst:.6} over 1000 triples; {birkhoff_violations} above the Birkhoff bound"),
    )
}

fn horoball_containment() -> Outcome {
    let mut rng = rng(8);
    let mut worst = f64::NEG_INFINITY;
    let mut checks = 0usize;
    for _ in 0..20 {
        let dim = rng.gen_range(2..=8);
        let (t, _) = random_matrix(&mut rng, dim);
        let certs: Vec<HoroballCertificate> =
            (0..200).map(|_| HoroballCertificate::new(&t, random_hilbert(&mut rng, dim)).unwrap()).collect();
        for _ in 0..50 {
            let mut x = PositiveVector::from_logs(vector(uniform(&mut rng, dim, -10.0, 10.0)));
            for _ in 1..=20 {
                x = t.apply(&x).unwrap();
                for c in &certs {
                    worst = worst.max(c.h.eval(&x).unwrap() - c.radius);
                    checks += 1;
                }
            }
        }
    }
    check(worst <= 1e-12, format!("max h(T^k x) - r = {worst:.3e} over {checks} checks (tolerance 1e-12)"))
}

fn invariant_set_oracle() -> Outcome {
    let mut rng = rng(9);
    let mut disagreements = 0;
    let mut inside = 0;
    for _ in 0..20 {
        let dim = rng.gen_range(2..=8);
        let (t, rows) = random_matrix(&mut rng, dim);
        let mut certs = perron_certificates(&t);
        while certs.len() < 500 {
            certs.push(HoroballCertificate::new(&t, random_hilbert(&mut rng, dim)).unwrap());
        }
        for k in 0..1000 {
            let x = match k % 3 {
                0 => mat_vec(&rows, &uniform(&mut rng, dim, 0.01, 10.0)),
                1 => mat_vec(&rows, &uniform(&mut rng, dim, 0.01, 10.0))
                    .into_iter()
                    .map(|v| v * rng.gen_range(-0.3..0.3f64).exp())
                    .collect(),
                _ => uniform(&mut rng, dim, -3.0, 3.0).iter().map(|v| v.exp()).collect(),
            };
            let x = PositiveVector::new(x).unwrap();
            let pairwise = invariant_set_contains(&t, &x).unwrap();
            let sampled = certs.iter().all(|c| {
                let h = &c.h;
                let r = horoball_radius(&t, h).unwrap();
                closed_form(&HorofunctionParam::Hilbert(h.clone()), x.logs().as_slice()) <= r + 1e-12
            });
            if pairwise != sampled {
                disagreements += 1;
            }
            inside += pairwise as usize;
        }
    }
    check(
        disagreements == 0,
        format!("{disagreements} disagreements on 20000 points ({inside} inside C)"),
    )
}

fn perron() -> Outcome {
    let mut rng = rng(10);
    let mut worst_residual: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let mut worst_starts: f64 = 0.0;
    let mut max_iters = 0;
    let mut failures = 0;
    for k in 0..100 {
        let dim = 2 + k % 7;
        let (t, rows) = random_matrix(&mut rng, dim);
        let x0 = PositiveVector::new(uniform(&mut rng, dim, 0.01, 100.0)).unwrap();
        match (
            perron_solve(&t, None, DEFAULT_TOL, DEFAULT_MAX_ITER),
            perron_solve(&t, Some(&x0), DEFAULT_TOL, DEFAULT_MAX_ITER),
        ) {
            (Ok(a), Ok(b)) => {
                let oracle = power_iteration(&rows, 10_000);
                worst_residual = worst_residual.max(a.residual).max(b.residual);
                worst_oracle = worst_oracle.max(hilbert_linear(&a.x_star.entries(), &oracle));
                worst_starts = worst_starts.max(hilbert_distance(&a.x_star, &b.x_star).unwrap());
                max_iters = max_iters.max(a.iterations).max(b.iterations);
            }
            _ => failures += 1,
        }
    }
    let t = PositiveMatrix::new(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    let hand = perron_solve(&t, None, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    let hand_gap = hilbert_linear(&hand.x_star.entries(), &[1.0, (3.0 + 33f64.sqrt()) / 4.0]);
    check(
        failures == 0 && worst_residual <= 1e-12 && worst_oracle <= 1e-8 && worst_starts <= 2e-12 && hand_gap <= 1e-8,
        format!(
            "{failures} non-converged; max residual {worst_residual:.2e}; max d_H to power iteration \
             {worst_oracle:.2e}; max d_H between starts {worst_starts:.2e}; max iterations {max_iters}; \
             [[1,2],[3,4]] off by {hand_gap:.2e}"
        ),
    )
}

fn metric_axioms() -> Outcome {
    let mut rng = rng(11);
    let mut asym = 0;
    let mut triangle: f64 = f64::NEG_INFINITY;
    let mut scale = 0;
    for k in 0..1000 {
        let dim = 1 + k % 8;
        let mut point = || {
            PositiveVector::from_logs(vector(uniform(&mut rng, dim, -10.0, 10.0).into_iter().map(dyadic).collect()))
        };
        let (x, y, z) = (point(), point(), point());
        let dxy = hilbert_distance(&x, &y).unwrap();
        if dxy != hilbert_distance(&y, &x).unwrap() {
            asym += 1;
        }
        triangle = triangle.max(dxy - hilbert_distance(&x, &z).unwrap() - hilbert_distance(&z, &y).unwrap());
        let (a, b) = (dyadic(rng.gen_range(-50.0..50.0)), dyadic(rng.gen_range(-50.0..50.0)));
        if hilbert_distance(&x.scale_log(a), &y.scale_log(b)).unwrap() != dxy {
            scale += 1;
        }
        let lin = var_seminorm(&x.logs().sub(y.logs()).unwrap());
        if lin != dxy {
            scale += 1;
        }
    }
    check(
        asym == 0 && triangle <= 1e-12 && scale == 0,
        format!("{asym} asymmetric; max triangle excess {triangle:.3e}; {scale} scale-invariance failures"),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "l_inf norm identity", linf_identity),
        (2, "Exp/Log identities", exp_log_identities),
        (3, "Log isometry", log_isometry),
        (4, "horofunction realization", realization),
        (5, "escape sequences leave the image", not_in_image),
        (6, "classifier round-trip", classifier_round_trip),
        (7, "strict contraction", contraction),
        (8, "horoball containment", horoball_containment),
        (9, "invariant-set pairwise criterion vs sampled certificates", invariant_set_oracle),
        (10, "Perron solver", perron),
        (11, "Hilbert metric axioms", metric_axioms),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
