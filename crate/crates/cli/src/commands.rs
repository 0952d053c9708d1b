//! Subcommand implementations. Each returns the files it wants written and
//! the text for stdout; `main` does all file I/O.

use crate::args::*;
use crate::error::CliError;
use crate::parse;
use hrtlab_core::flow::{self, DiagonalFlow};
use hrtlab_core::operators::{fmt17, independence_sweep, IndependenceReport};
use hrtlab_core::relations::{
    detect_relations, group_closure, is_rationally_independent, IndependenceCertificate,
};
use hrtlab_core::torus::{self, TorusPoint};
use hrtlab_core::zak::{self, check_zak_identity, zak_transform, ZakIdentity};
use hrtlab_core::{
    classify_configuration, make_window, normalize_configuration, CoefficientVector, Configuration,
    SampledWindow, WindowKind,
};
use num_complex::Complex64;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Default)]
pub struct Outcome {
    /// File name (relative to the output directory) and contents, in write order.
    pub files: Vec<(String, Vec<u8>)>,
    pub stdout: String,
    /// Input files read, for the manifest.
    pub inputs: Vec<PathBuf>,
}

impl Outcome {
    fn file(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    fn json_file(&mut self, name: &str, v: &serde_json::Value) {
        let mut text = serde_json::to_string_pretty(v).expect("json serializes");
        text.push('\n');
        self.file(name, text.into_bytes());
    }
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Classify(a) => classify(a),
        Command::Normalize(a) => normalize(a),
        Command::ZakCheck(a) => zak_check(a),
        Command::Orbit(a) => orbit(a),
        Command::Product(a) => product(a),
        Command::Line(a) => line(a),
        Command::Relations(a) => relations(a),
        Command::Independence(a) => independence(a),
        Command::Flow(a) => flow_cmd(a),
        Command::Replay(_) => unreachable!("replay is resolved before dispatch"),
    }
}

fn load_configuration(a: &PointsArgs, out: &mut Outcome) -> Result<Configuration, CliError> {
    match (&a.points, &a.input) {
        (Some(text), _) => Ok(Configuration::from_points_json(text, a.distinguished)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            out.inputs.push(path.clone());
            let cfg = Configuration::from_json(&text)?;
            match a.distinguished {
                Some(d) => Ok(Configuration::new(cfg.points().to_vec(), Some(d))?),
                None => Ok(cfg),
            }
        }
        (None, None) => Err(CliError::Usage(
            "one of --points or --input is required".into(),
        )),
    }
}

fn classify(a: &PointsArgs) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let cfg = load_configuration(a, &mut out)?;
    let class = classify_configuration(&cfg);
    out.stdout = format!("{class}\n");
    out.json_file(
        "classify.json",
        &json!({
            "configuration": serde_json::from_str::<serde_json::Value>(&cfg.to_json()).unwrap(),
            "class": class.label(),
            "summary": class.to_string(),
        }),
    );
    Ok(out)
}

fn normalize(a: &PointsArgs) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let cfg = load_configuration(a, &mut out)?;
    let (normal, map, area) = normalize_configuration(&cfg)?;
    let v = json!({
        "configuration": serde_json::from_str::<serde_json::Value>(&normal.to_json()).unwrap(),
        "matrix": map.matrix,
        "translation": [map.translation.0, map.translation.1],
        "a": area,
    });
    out.stdout = format!("{}\n", serde_json::to_string_pretty(&v).unwrap());
    out.json_file("normalize.json", &v);
    Ok(out)
}

fn window(a: &WindowArgs, default_h: f64) -> Result<SampledWindow, CliError> {
    let kind = WindowKind::parse(&a.window)?;
    let h = match &a.h {
        Some(h) => parse::float(h)?,
        None => default_h,
    };
    Ok(make_window(kind, h, a.k)?)
}

fn zak_check(a: &ZakCheckArgs) -> Result<Outcome, CliError> {
    if a.q == 0 {
        return Err(CliError::Usage("--q must be positive".into()));
    }
    let w = window(&a.window, 1.0 / a.q as f64)?;
    let (alpha, beta) = (parse::float(&a.alpha)?, parse::float(&a.beta)?);
    let mut out = Outcome::default();
    let mut csv = String::from("identity,max_error\n");
    for id in ZakIdentity::all(alpha, beta) {
        let err = check_zak_identity(id, &w, a.q)?;
        writeln!(out.stdout, "{} {}", id.name(), fmt17(err)).unwrap();
        writeln!(csv, "{},{}", id.name(), fmt17(err)).unwrap();
    }
    out.file("zak-check.csv", csv.into_bytes());
    if a.image {
        let z = zak_transform(&w, a.q)?;
        let mut bytes = Vec::new();
        z.write_csv(&mut bytes)?;
        out.file("zak.csv", bytes);
        let mut bytes = Vec::new();
        z.write_pgm(&mut bytes)?;
        out.file("zak.pgm", bytes);
    }
    Ok(out)
}

fn orbit(a: &OrbitArgs) -> Result<Outcome, CliError> {
    if a.n == 0 || a.grid_res < 2 {
        return Err(CliError::Usage(
            "--n must be positive and --grid-res at least 2".into(),
        ));
    }
    if a.eps.is_nan() || a.eps <= 0.0 {
        return Err(CliError::Usage("--eps must be positive".into()));
    }
    let gamma = parse::pair(&a.gamma)?;
    let (t, w) = parse::pair(&a.z)?;
    let z = TorusPoint::new(t, w);
    let pts = torus::orbit(&z, gamma, a.n);
    let disc = torus::discrepancy(&pts, a.grid_res);
    let rec = torus::recurrence_probe(&z, gamma, a.eps, a.max_n.unwrap_or(a.n).max(1));
    let mut csv = String::from("n,t,omega\n");
    for (k, p) in pts.iter().enumerate() {
        writeln!(csv, "{k},{},{}", fmt17(p.t), fmt17(p.omega)).unwrap();
    }
    let mut out = Outcome::default();
    out.file("orbit.csv", csv.into_bytes());
    let summary = json!({ "n": a.n, "discrepancy": disc, "grid_res": a.grid_res, "recurrence": rec, "eps": a.eps });
    out.json_file("orbit.json", &summary);
    writeln!(out.stdout, "discrepancy {}", fmt17(disc)).unwrap();
    match rec {
        Some(n) => writeln!(out.stdout, "recurrence {n}").unwrap(),
        None => writeln!(out.stdout, "recurrence none").unwrap(),
    }
    Ok(out)
}

fn diagonal_flow(xs: &str, cs: &str) -> Result<DiagonalFlow, CliError> {
    let xs = parse::float_list(xs)?;
    let cs: Vec<Complex64> = parse::float_list(cs)?
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    Ok(DiagonalFlow::new(xs, CoefficientVector::new(cs)?)?)
}

fn product(a: &ProductArgs) -> Result<Outcome, CliError> {
    if a.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let mut out = Outcome::default();
    let mut bytes = Vec::new();
    if let Some(p) = &a.p {
        let p = parse::polynomial(p)?;
        let gamma = parse::pair(
            a.gamma
                .as_deref()
                .ok_or_else(|| CliError::Usage("--gamma is required with --p".into()))?,
        )?;
        let (t, w) = parse::pair(&a.z)?;
        let ledger = torus::orbit_log_product(&p, &TorusPoint::new(t, w), gamma, a.n, a.zero_eps);
        ledger.write_csv(&mut bytes)?;
        writeln!(out.stdout, "s_n {}", fmt17(ledger.last())).unwrap();
        writeln!(out.stdout, "zero_hits {}", ledger.zero_hits.len()).unwrap();
    } else {
        let (xs, cs) = (
            a.xs.as_deref().unwrap_or_default(),
            a.cs.as_deref().unwrap_or_default(),
        );
        let f = diagonal_flow(xs, cs)?;
        let xi = parse::float(a.xi.as_deref().unwrap_or("0"))?;
        let trace = flow::product_trace(&f, xi, a.n);
        trace.write_csv(&mut bytes)?;
        writeln!(
            out.stdout,
            "{}",
            serde_json::to_string(&trace.summary_json()).unwrap()
        )
        .unwrap();
    }
    out.file("product.csv", bytes);
    Ok(out)
}

fn line(a: &LineArgs) -> Result<Outcome, CliError> {
    let (t, w) = parse::pair(&a.lambda)?;
    let gamma = parse::pair(&a.gamma)?;
    let l = torus::toral_line(&TorusPoint::new(t, w), gamma, a.max_segments)?;
    let mut bytes = Vec::new();
    l.write_csv(&mut bytes)?;
    let mut out = Outcome::default();
    out.file("line.csv", bytes);
    let mut summary = json!({
        "closed": l.closed,
        "winding": l.winding.map(|(u, v)| [u, v]),
        "segments": l.segments.len(),
    });
    writeln!(out.stdout, "closed {}", l.closed).unwrap();
    if let Some((u, v)) = l.winding {
        writeln!(out.stdout, "winding {u} {v}").unwrap();
    }
    writeln!(out.stdout, "segments {}", l.segments.len()).unwrap();
    if let Some(p) = &a.p {
        if a.samples < 2 {
            return Err(CliError::Usage("--samples must be at least 2".into()));
        }
        let p = parse::polynomial(p)?;
        let (var, mean) = torus::p_constancy_on_line(&p, &l, a.samples);
        summary["max_variation"] = json!(var);
        summary["mean_modulus"] = json!(mean);
        writeln!(out.stdout, "max_variation {}", fmt17(var)).unwrap();
        writeln!(out.stdout, "mean_modulus {}", fmt17(mean)).unwrap();
    }
    out.json_file("line.json", &summary);
    Ok(out)
}

fn relations(a: &RelationsArgs) -> Result<Outcome, CliError> {
    let values = parse::value_list(&a.values)?;
    let rb = detect_relations(&values, a.max_den, a.tol)?;
    let closure = group_closure(&rb);
    let cert = is_rationally_independent(&values, a.max_den, a.tol)?;
    let mut v = rb.to_json();
    v["independent"] = json!(cert.is_independent());
    match cert {
        IndependenceCertificate::Independent { bound } => v["search_bound"] = json!(bound),
        IndependenceCertificate::Dependent { relation } => v["integer_relation"] = json!(relation),
    }
    v["closure"] = json!({
        "torus_dimension": closure.torus_dimension,
        "component_count": closure.component_count,
        "exponents": closure.exponents,
    });
    let mut out = Outcome {
        stdout: format!("{}\n", serde_json::to_string_pretty(&v).unwrap()),
        ..Default::default()
    };
    out.json_file("relations.json", &v);
    Ok(out)
}

fn independence(a: &IndependenceArgs) -> Result<Outcome, CliError> {
    let w = window(&a.window, 1.0 / 64.0)?;
    let base = Configuration::from_points_json(&a.base, None)?;
    let alphas = parse::range(&a.alpha)?;
    let betas = parse::range(&a.beta)?;
    let rows = independence_sweep(&w, &base, &alphas, &betas)?;
    let mut csv = String::from(IndependenceReport::CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.report.csv_row(r.alpha, r.beta));
        csv.push('\n');
    }
    let margins: Vec<f64> = rows.iter().map(|r| r.report.min_singular).collect();
    let mut pgm = Vec::new();
    zak::write_pgm(&mut pgm, alphas.len(), betas.len(), &margins)?;
    let min = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let leak = rows.iter().map(|r| r.report.leakage).fold(0.0, f64::max);
    let mut out = Outcome::default();
    out.file("independence.csv", csv.into_bytes());
    out.file("independence.pgm", pgm);
    writeln!(out.stdout, "rows {}", rows.len()).unwrap();
    writeln!(out.stdout, "min_singular {}", fmt17(min)).unwrap();
    writeln!(out.stdout, "max_leakage {}", fmt17(leak)).unwrap();
    Ok(out)
}

fn flow_cmd(a: &FlowArgs) -> Result<Outcome, CliError> {
    if a.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let f = diagonal_flow(&a.xs, &a.cs)?;
    let xi = parse::float(&a.xi)?;
    let trace = flow::product_trace(&f, xi, a.n);
    let probe = flow::summability_probe(&f, xi, a.amplitude, a.n)?;
    let mut out = Outcome::default();
    let mut bytes = Vec::new();
    trace.write_csv(&mut bytes)?;
    out.file("flow.csv", bytes);
    let mut bytes = Vec::new();
    probe.write_csv(&mut bytes)?;
    out.file("flow-summability.csv", bytes);
    let mut summary = trace.summary_json();
    summary["summability"] = json!({
        "forward": probe.forward.last().copied().map(fmt17),
        "backward": probe.backward.last().copied().map(fmt17),
        "forward_overflow": probe.forward_overflow,
        "backward_overflow": probe.backward_overflow,
    });
    if let Some(kind) = &a.fourier_window {
        let w = make_window(
            WindowKind::parse(kind)?,
            parse::float(&a.fourier_h)?,
            a.fourier_k,
        )?;
        let r = flow::fourier_relation_residual(&w, &f)?;
        summary["fourier"] = json!({
            "residual": r.residual,
            "bins": r.bins,
            "spacing": r.spacing,
            "edge_ratio": r.edge_ratio,
        });
    }
    out.stdout = format!("{}\n", serde_json::to_string_pretty(&summary).unwrap());
    out.json_file("flow.json", &summary);
    Ok(out)
}

/// Map of output names to digests, in write order.
pub fn output_digests(files: &[(String, Vec<u8>)]) -> BTreeMap<String, String> {
    files
        .iter()
        .map(|(n, b)| (n.clone(), crate::manifest::sha256_hex(b)))
        .collect()
}
