//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use hrtlab_core::exact::QuadSurd;
use hrtlab_core::flow::{matrix_coefficient, product_trace, DiagonalFlow, ProductClass};
use hrtlab_core::operators::{apply_tf_shift, gram_matrix, independence_sweep, min_singular};
use hrtlab_core::relations::{detect_relations, group_closure};
use hrtlab_core::torus::{
    self, eval_p2, exact_period, orbit_log_product, propagate_f, recurrence_probe, Term,
    TorusPoint, TrigPolynomial2,
};
use hrtlab_core::zak::{
    check_zak_identity, synthesize_orbit_image, zak_equation_residual_on, zak_transform,
    ZakIdentity,
};
use hrtlab_core::{make_window, Configuration, Rational, Real, SampledWindow, TFPoint, WindowKind};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn criterion_zak_identities() -> Outcome {
    let start = Instant::now();
    let windows = [
        (
            "gaussian",
            make_window(WindowKind::Gaussian, 1.0 / 64.0, 8).unwrap(),
        ),
        ("box", make_window(WindowKind::Box, 1.0 / 64.0, 2).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for (_, w) in &windows {
        for (alpha, beta) in [(0.25, 0.5), (3.0 / 64.0, -5.0 / 64.0)] {
            for id in ZakIdentity::all(alpha, beta) {
                let e = check_zak_identity(id, w, 64).unwrap();
                match id {
                    ZakIdentity::QuasiPeriodT | ZakIdentity::PeriodOmega => exact &= e == 0.0,
                    _ => worst = worst.max(e),
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-8 && exact && secs < 5.0,
        format!("max error {worst:.3e}, periodicity identities exact: {exact}, {secs:.2} s"),
    )
}

fn criterion_zak_unitarity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let samples: Vec<Complex64> = (0..2 * 8 * 64)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let w = SampledWindow::custom(64, 8, samples.clone()).unwrap();
        let z = zak_transform(&w, 64).unwrap();
        // independent reference: plain sum of squares times the step
        let direct: f64 = samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / 64.0;
        worst = worst.max((z.energy() - direct).abs() / direct);
    }
    outcome(
        worst <= 1e-9,
        format!("max relative energy defect {worst:.3e} over 10 windows"),
    )
}

fn random_polynomial(rng: &mut ChaCha8Rng, integer_freqs: bool) -> TrigPolynomial2 {
    let n = rng.gen_range(1..=5);
    let mut terms: Vec<Term> = Vec::new();
    while terms.len() < n {
        let (y, x) = if integer_freqs {
            (rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64)
        } else {
            (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
        };
        if terms.iter().any(|t| t.y == y && t.x == x) {
            continue;
        }
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        terms.push(Term { c, y, x });
    }
    TrigPolynomial2::new(terms).unwrap()
}

fn criterion_recurrence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_ledger: f64 = 0.0;
    let mut worst_step: f64 = 0.0;
    for _ in 0..20 {
        let p = random_polynomial(&mut rng, false);
        let gamma = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let z = TorusPoint::new(rng.gen(), rng.gen());
        let seed = rng.gen_range(0.1..10.0);
        let f = propagate_f(seed, &p, gamma, &z, 1000);
        let ledger = orbit_log_product(&p, &z, gamma, 1000, 1e-14);
        let want = ledger.last().exp() * seed;
        worst_ledger = worst_ledger.max((f[1000] - want).abs() / want);
        for j in 0..1000 {
            let zj = TorusPoint::new(z.t + j as f64 * gamma.0, z.omega + j as f64 * gamma.1);
            let step = eval_p2(&p, &zj).norm() * f[j];
            worst_step = worst_step.max((f[j + 1] - step).abs() / step);
        }
    }
    let mut worst_eq: f64 = 0.0;
    for _ in 0..5 {
        let p = random_polynomial(&mut rng, true);
        let (a, b) = (
            rng.gen_range(1..64) as f64 / 64.0,
            rng.gen_range(1..64) as f64 / 64.0,
        );
        let (img, pts) = synthesize_orbit_image(
            64,
            &p,
            a,
            b,
            (rng.gen_range(0..64), rng.gen_range(0..64)),
            200,
        )
        .unwrap();
        worst_eq = worst_eq.max(zak_equation_residual_on(&img, &p, a, b, &pts).unwrap());
    }
    outcome(
        worst_ledger <= 1e-10 && worst_step <= 1e-12 && worst_eq <= 1e-9,
        format!(
            "ledger {worst_ledger:.3e}, one-step {worst_step:.3e}, Zak equation {worst_eq:.3e}"
        ),
    )
}

fn criterion_equidistribution() -> Outcome {
    let gamma = (2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0);
    let pts = torus::orbit(&TorusPoint::new(0.0, 0.0), gamma, 10_000);
    let d = torus::discrepancy(&pts, 64);
    let exact = exact_period(
        (Rational::new(1, 5), Rational::new(2, 7)),
        (Rational::new(1, 3), Rational::new(1, 2)),
        100,
    );
    let float = recurrence_probe(&TorusPoint::new(0.2, 0.7), (1.0 / 3.0, 0.5), 1e-9, 100);
    outcome(
        d <= 0.05 && exact == Some(6) && float == Some(6),
        format!("discrepancy {d:.4e}, exact period {exact:?}, float recurrence {float:?}"),
    )
}

fn criterion_relations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut recovered = 0;
    for _ in 0..100 {
        let m = rng.gen_range(1..=3);
        let deps = rng.gen_range(1..=3);
        let basis: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
        let mut values = basis.clone();
        let mut planted = Vec::new();
        for _ in 0..deps {
            let den = rng.gen_range(1..=32i64);
            let u = Rational::new(rng.gen_range(-32..=32), den);
            let d: Vec<Rational> = (0..m)
                .map(|_| Rational::new(rng.gen_range(-32..=32), den))
                .collect();
            let x = *u.numer() as f64 / *u.denom() as f64
                + d.iter()
                    .zip(&basis)
                    .map(|(c, b)| *c.numer() as f64 / *c.denom() as f64 * b)
                    .sum::<f64>();
            values.push(x);
            planted.push((u, d));
        }
        let reals: Vec<Real> = values.iter().map(|&v| Real::float(v).unwrap()).collect();
        let Ok(rb) = detect_relations(&reals, 64, 1e-12) else {
            continue;
        };
        let ok = rb.basis_indices == (0..m).collect::<Vec<_>>()
            && rb.relations.len() == deps
            && rb
                .relations
                .iter()
                .zip(&planted)
                .all(|(r, (u, d))| r.u == *u && r.d == *d);
        recovered += usize::from(ok);
    }

    let exprs = ["sqrt(2)", "1+sqrt(2)", "1/3", "3/4 - 5*sqrt(2)/7"];
    let exact: Vec<Real> = exprs.iter().map(|s| Real::parse(s).unwrap()).collect();
    let rb = detect_relations(&exact, 64, 1e-12).unwrap();
    let symbolic_zero = rb.relations.iter().all(|r| {
        let mut acc = QuadSurd::from_rational(r.u);
        for (d, &b) in r.d.iter().zip(&rb.basis_indices) {
            let term = exact[b]
                .exact_form()
                .unwrap()
                .checked_mul(&QuadSurd::from_rational(*d))
                .unwrap();
            acc = acc.checked_add(&term).unwrap();
        }
        acc == *exact[r.j].exact_form().unwrap()
    });

    let closure_in: Vec<Real> = ["sqrt(2)", "1+2*sqrt(2)", "1/3"]
        .iter()
        .map(|s| Real::parse(s).unwrap())
        .collect();
    let g = group_closure(&detect_relations(&closure_in, 64, 1e-12).unwrap());
    outcome(
        recovered == 100 && symbolic_zero && g.torus_dimension == 1 && g.component_count == 3,
        format!(
            "planted {recovered}/100, exact residual zero: {symbolic_zero}, closure m={} L={}",
            g.torus_dimension, g.component_count
        ),
    )
}

fn criterion_independence() -> Outcome {
    let start = Instant::now();
    let w = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8).unwrap();
    let base = Configuration::from_coords(&[(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]).unwrap();
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 * 0.1).collect();
    let rows = independence_sweep(&w, &base, &grid, &grid).unwrap();
    let min = rows
        .iter()
        .map(|r| r.report.min_singular)
        .fold(f64::INFINITY, f64::min);
    let leak = rows.iter().map(|r| r.report.leakage).fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        rows.len() == 441 && min > 1e-4 && leak < 1e-8 && secs < 60.0,
        format!(
            "{} points, min singular {min:.4e}, max leakage {leak:.3e}, {secs:.2} s",
            rows.len()
        ),
    )
}

fn criterion_flow() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let two = DiagonalFlow::from_reals(&[0.0], &[2.0]).unwrap();
    let cos = DiagonalFlow::from_reals(&[0.0, 2f64.sqrt()], &[0.5, 0.5]).unwrap();
    let mut wrong = 0;
    let mut worst_drift: f64 = 0.0;
    for _ in 0..100 {
        let xi: f64 = rng.gen_range(-10.0..10.0);
        if product_trace(&two, xi, 100).classification() != ProductClass::DivergesToInfinity {
            wrong += 1;
        }
        let uni = DiagonalFlow::from_reals(&[rng.gen_range(-5.0..5.0)], &[1.0]).unwrap();
        if product_trace(&uni, xi, 100).classification() != ProductClass::Converges {
            wrong += 1;
        }
        let t = product_trace(&cos, xi, 10_000);
        worst_drift = worst_drift.max((t.forward_logs[10_000] / 1e4 + 2f64.ln()).abs());
        if t.classification() != ProductClass::DivergesToZero {
            wrong += 1;
        }
    }
    outcome(
        wrong == 0 && worst_drift <= 0.02,
        format!(
            "{wrong} misclassifications over 300 traces, worst |drift + ln 2| {worst_drift:.3e}"
        ),
    )
}

fn synthesis_min_singular(windows: &[SampledWindow]) -> f64 {
    let rows = windows[0].len();
    let h = windows[0].step();
    // real embedding [[Re, -Im], [Im, Re]] repeats each singular value twice
    let m = DMatrix::<f64>::from_fn(2 * rows, 2 * windows.len(), |r, c| {
        let v = windows[c % windows.len()].samples()[r % rows] * h.sqrt();
        match (r < rows, c < windows.len()) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    });
    m.singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

fn criterion_cross_module() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_coeff: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let xs: Vec<f64> = (0..n).map(|k| k as f64 + rng.gen_range(0.0..0.9)).collect();
        let cs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
        let flow = DiagonalFlow::from_reals(&xs, &cs).unwrap();
        let terms = xs
            .iter()
            .zip(&cs)
            .map(|(&x, &c)| Term {
                c: Complex64::new(c, 0.0),
                y: 0.0,
                x,
            })
            .collect();
        let p = TrigPolynomial2::new(terms).unwrap();
        let xi: f64 = rng.gen();
        let a = matrix_coefficient(&flow, xi);
        let b = eval_p2(&p, &TorusPoint::new(rng.gen(), xi));
        let b_axis = eval_p2(&p, &TorusPoint::new(0.0, xi));
        // y = 0, so the t coordinate must not matter
        worst_coeff = worst_coeff.max((a - b).norm()).max((a - b_axis).norm());
    }

    let w = make_window(WindowKind::Gaussian, 1.0 / 16.0, 4).unwrap();
    let mut worst_sv: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(2..=5);
        let shifted: Vec<SampledWindow> = (0..n)
            .map(|_| {
                let pt = TFPoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                apply_tf_shift(&w, &pt).unwrap()
            })
            .collect();
        let g = gram_matrix(&shifted).unwrap();
        worst_sv = worst_sv.max((min_singular(&g) - synthesis_min_singular(&shifted)).abs());
    }
    outcome(
        worst_coeff <= 1e-13 && worst_sv <= 1e-8,
        format!("matrix coefficient vs evaluator {worst_coeff:.3e}, singular value routes {worst_sv:.3e}"),
    )
}

fn run_cli(dir: &Path, threads: &str, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_hrtlab"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env("HRTLAB_THREADS", threads)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn criterion_determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        tmp.path().join("a"),
        tmp.path().join("b"),
        tmp.path().join("c"),
    );
    let sweep = [
        "independence",
        "--window",
        "gaussian",
        "--base",
        "[[0,0],[0,1],[1,0]]",
        "--alpha",
        "0:2:0.1",
        "--beta",
        "0:2:0.1",
    ];
    let manifest = a.join("independence.manifest.json");
    let ran = run_cli(&a, "4", &sweep)
        && run_cli(&b, "1", &["replay", manifest.to_str().unwrap()])
        && run_cli(&c, "3", &["replay", manifest.to_str().unwrap()]);
    if !ran {
        return outcome(false, "a CLI run failed");
    }
    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap_or_default();
    let same = ["independence.csv", "independence.pgm"].iter().all(|f| {
        !read(&a, f).is_empty() && read(&a, f) == read(&b, f) && read(&a, f) == read(&c, f)
    });
    let rows = String::from_utf8(read(&a, "independence.csv"))
        .unwrap()
        .lines()
        .count()
        - 1;
    outcome(
        same,
        format!("{rows}-row sweep byte-identical across 3 runs with 4, 1 and 3 threads: {same}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("Zak identity suite", criterion_zak_identities),
        ("Zak unitarity", criterion_zak_unitarity),
        ("recurrence engine", criterion_recurrence),
        ("equidistribution", criterion_equidistribution),
        ("rational relations", criterion_relations),
        ("independence margins", criterion_independence),
        ("flow classifier", criterion_flow),
        ("cross-module consistency", criterion_cross_module),
        ("determinism", criterion_determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let r = f();
        let tag = if r.ok { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", k + 1, r.detail);
        failed += usize::from(!r.ok);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
