//! Diagonal flows for `(1,N)`-configurations: the matrix coefficient
//! `p(ξ) = Σ c_k e^{-2πi x_k ξ}`, its forward and backward product traces,
//! summability probes and the Fourier-side relation `p(ξ)F(ξ) = F(ξ+1)`.

use crate::error::{Error, Result};
use crate::operators::fmt17;
use crate::sum::{compensated_sum_complex, NeumaierSum};
use crate::tf::{CoefficientVector, SampledWindow};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde_json::json;
use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

/// Threshold below which `|p|` counts as a zero factor.
pub const ZERO_EPS: f64 = 1e-14;
/// Default slope threshold per step for the trend classifier.
pub const DEFAULT_DELTA: f64 = 1e-3;
/// Largest spread of the log trace over its last half still read as bounded.
pub const OSCILLATION_BOUND: f64 = 5.0;
/// Log-magnitude beyond which a summability term is reported as infinite.
pub const LOG_OVERFLOW: f64 = 700.0;

/// `D = diag(−2πi x_k)` with coefficient vector `c`; `v` is all ones.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalFlow {
    xs: Vec<f64>,
    cs: CoefficientVector,
}

impl DiagonalFlow {
    pub fn new(xs: Vec<f64>, cs: CoefficientVector) -> Result<Self> {
        if xs.len() != cs.len() {
            return Err(Error::InvalidInput(format!(
                "{} translations but {} coefficients",
                xs.len(),
                cs.len()
            )));
        }
        if xs.is_empty() {
            return Err(Error::InvalidInput("flow needs at least one term".into()));
        }
        if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite translation {x}")));
        }
        for i in 0..xs.len() {
            for j in 0..i {
                if xs[i] == xs[j] {
                    return Err(Error::DuplicatePoints(j, i));
                }
            }
        }
        Ok(Self { xs, cs })
    }

    /// Real coefficients.
    pub fn from_reals(xs: &[f64], cs: &[f64]) -> Result<Self> {
        Self::new(xs.to_vec(), CoefficientVector::from_reals(cs)?)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn cs(&self) -> &CoefficientVector {
        &self.cs
    }

    /// The flow with `x_k ↦ −x_k`.
    pub fn reversed(&self) -> Self {
        Self {
            xs: self.xs.iter().map(|x| -x).collect(),
            cs: self.cs.clone(),
        }
    }
}

/// `p(ξ) = ⟨e^{ξD}c, v⟩ = Σ c_k e^{−2πi x_k ξ}`.
pub fn matrix_coefficient(flow: &DiagonalFlow, xi: f64) -> Complex64 {
    compensated_sum_complex(flow.xs.iter().zip(flow.cs.values()).map(|(&x, &c)| {
        let (s, co) = (-2.0 * PI * (x * xi).rem_euclid(1.0)).sin_cos();
        c * Complex64::new(co, s)
    }))
}

/// Trend label of a log trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductClass {
    Converges,
    DivergesToZero,
    DivergesToInfinity,
    Indeterminate,
}

impl ProductClass {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Converges => "converges",
            Self::DivergesToZero => "diverges-to-zero",
            Self::DivergesToInfinity => "diverges-to-infinity",
            Self::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for ProductClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Least-squares slope and spread over the last half of a log trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendSummary {
    pub slope: f64,
    pub oscillation: f64,
    pub class: ProductClass,
}

/// Classifies `logs[n]` (the log of a product after `n` factors).
pub fn classify_trend(logs: &[f64], delta: f64) -> TrendSummary {
    let n = logs.len().saturating_sub(1);
    let start = n / 2;
    let tail = &logs[start..];
    let (slope, oscillation) = if tail.len() < 2 {
        (0.0, 0.0)
    } else {
        let m = tail.len() as f64;
        let xbar = (m - 1.0) / 2.0;
        let ybar = tail.iter().sum::<f64>() / m;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (k, y) in tail.iter().enumerate() {
            let dx = k as f64 - xbar;
            sxy += dx * (y - ybar);
            sxx += dx * dx;
        }
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (sxy / sxx, hi - lo)
    };
    let class = if slope < -delta {
        ProductClass::DivergesToZero
    } else if slope > delta {
        ProductClass::DivergesToInfinity
    } else if oscillation <= OSCILLATION_BOUND {
        ProductClass::Converges
    } else {
        ProductClass::Indeterminate
    };
    TrendSummary {
        slope,
        oscillation,
        class,
    }
}

/// Forward and backward log products of `p` along `ξ + ℤ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTrace {
    pub xi: f64,
    /// `s⁺_n = Σ_{j<n} ln|p(ξ+j)|`, `n = 0..=N`.
    pub forward_logs: Vec<f64>,
    /// `s⁻_n = Σ_{j=1..n} ln|p(ξ−j)|`, `n = 0..=N`.
    pub backward_logs: Vec<f64>,
    /// `j` with `|p(ξ+j)| < ZERO_EPS`, left out of `s⁺`.
    pub forward_zero_hits: Vec<usize>,
    /// `j ≥ 1` with `|p(ξ−j)| < ZERO_EPS`, left out of `s⁻`.
    pub backward_zero_hits: Vec<usize>,
    /// Trend of `s⁺`, i.e. of `ln|F(ξ+n)/F(ξ)|`.
    pub forward: TrendSummary,
    /// Trend of `−s⁻`, i.e. of `ln|F(ξ−n)/F(ξ)|`.
    pub backward: TrendSummary,
    pub delta: f64,
}

impl ProductTrace {
    pub fn len(&self) -> usize {
        self.forward_logs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Overall label: the forward trend.
    pub fn classification(&self) -> ProductClass {
        self.forward.class
    }

    /// `|F|` decays in both directions, which is incompatible with `F`
    /// solving the relation with a nonzero `L²` solution.
    pub fn both_sides_to_zero(&self) -> bool {
        self.forward.class == ProductClass::DivergesToZero
            && self.backward.class == ProductClass::DivergesToZero
    }

    /// CSV `n,s_plus,s_minus,zero_flag`; the flag marks that step `n` hit a
    /// zero factor on either side.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,s_plus,s_minus,zero_flag")?;
        for n in 0..self.forward_logs.len() {
            let hit = n > 0
                && (self.forward_zero_hits.binary_search(&(n - 1)).is_ok()
                    || self.backward_zero_hits.binary_search(&n).is_ok());
            writeln!(
                out,
                "{n},{},{},{}",
                fmt17(self.forward_logs[n]),
                fmt17(self.backward_logs[n]),
                u8::from(hit)
            )?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let side = |t: &TrendSummary, hits: usize| {
            json!({
                "slope": t.slope,
                "oscillation": t.oscillation,
                "class": t.class.label(),
                "zero_hits": hits,
            })
        };
        json!({
            "xi": self.xi,
            "n": self.len(),
            "delta": self.delta,
            "classification": self.classification().label(),
            "both_sides_to_zero": self.both_sides_to_zero(),
            "forward": side(&self.forward, self.forward_zero_hits.len()),
            "backward": side(&self.backward, self.backward_zero_hits.len()),
        })
    }
}

pub fn product_trace(flow: &DiagonalFlow, xi: f64, n: usize) -> ProductTrace {
    product_trace_with(flow, xi, n, DEFAULT_DELTA)
}

pub fn product_trace_with(flow: &DiagonalFlow, xi: f64, n: usize, delta: f64) -> ProductTrace {
    let accumulate = |offsets: &mut dyn Iterator<Item = (usize, f64)>| {
        let mut acc = NeumaierSum::new();
        let mut logs = vec![0.0];
        let mut hits = Vec::new();
        for (j, x) in offsets {
            let v = matrix_coefficient(flow, x).norm();
            if v < ZERO_EPS {
                hits.push(j);
            } else {
                acc += v.ln();
            }
            logs.push(acc.sum());
        }
        (logs, hits)
    };
    let (forward_logs, forward_zero_hits) = accumulate(&mut (0..n).map(|j| (j, xi + j as f64)));
    let (backward_logs, backward_zero_hits) = accumulate(&mut (1..=n).map(|j| (j, xi - j as f64)));
    let forward = classify_trend(&forward_logs, delta);
    let neg: Vec<f64> = backward_logs.iter().map(|s| -s).collect();
    let backward = classify_trend(&neg, delta);
    ProductTrace {
        xi,
        forward_logs,
        backward_logs,
        forward_zero_hits,
        backward_zero_hits,
        forward,
        backward,
        delta,
    }
}

/// Traces for many `ξ`, in input order.
pub fn product_traces(flow: &DiagonalFlow, xis: &[f64], n: usize) -> Vec<ProductTrace> {
    xis.par_iter()
        .map(|&xi| product_trace(flow, xi, n))
        .collect()
}

/// Running sums of `|F(ξ+k)|²` built from a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityProbe {
    /// `Σ_{k=0..=K} seed²·e^{2s⁺_k}`.
    pub forward: Vec<f64>,
    /// `Σ_{k=1..=K} seed²·e^{−2s⁻_k}` (0 at `K = 0`).
    pub backward: Vec<f64>,
    /// `Σ_{k=−K..=K}`.
    pub total: Vec<f64>,
    pub forward_overflow: bool,
    pub backward_overflow: bool,
}

impl SummabilityProbe {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,forward,backward,total")?;
        for n in 0..self.total.len() {
            writeln!(
                out,
                "{n},{},{},{}",
                fmt17(self.forward[n]),
                fmt17(self.backward[n]),
                fmt17(self.total[n])
            )?;
        }
        Ok(())
    }
}

fn running_sums(logs: impl Iterator<Item = f64>, seed_log: f64) -> (Vec<f64>, bool) {
    let mut acc = NeumaierSum::new();
    let mut overflow = false;
    let mut out = Vec::new();
    for l in logs {
        let l = l + seed_log;
        if overflow || l > LOG_OVERFLOW {
            overflow = true;
            out.push(f64::INFINITY);
        } else {
            acc += l.exp();
            out.push(acc.sum());
        }
    }
    (out, overflow)
}

pub fn summability_probe(
    flow: &DiagonalFlow,
    xi: f64,
    seed: f64,
    n: usize,
) -> Result<SummabilityProbe> {
    if seed.is_nan() || seed <= 0.0 || !seed.is_finite() {
        return Err(Error::InvalidInput(format!(
            "seed must be positive, got {seed}"
        )));
    }
    let trace = product_trace(flow, xi, n);
    let seed_log = 2.0 * seed.ln();
    let (forward, forward_overflow) =
        running_sums(trace.forward_logs.iter().map(|s| 2.0 * s), seed_log);
    let (mut backward, backward_overflow) =
        running_sums(trace.backward_logs[1..].iter().map(|s| -2.0 * s), seed_log);
    backward.insert(0, 0.0);
    let total = forward.iter().zip(&backward).map(|(a, b)| a + b).collect();
    Ok(SummabilityProbe {
        forward,
        backward,
        total,
        forward_overflow,
        backward_overflow,
    })
}

/// Residual of `p(ξ)F(ξ) = F(ξ+1)` on the DFT grid of a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierResidual {
    /// `max |p(ξ)F(ξ) − F(ξ+1)| / ‖F‖∞` over interior bins.
    pub residual: f64,
    /// Number of bins `ξ` with both `ξ` and `ξ + 1` on the grid.
    pub bins: usize,
    /// Bin spacing `1/(2K)`.
    pub spacing: f64,
    /// `|F|` at the outermost bin relative to `‖F‖∞`, a proxy for aliasing.
    pub edge_ratio: f64,
}

/// `F(ξ_m) = h Σ_j f(t_j) e^{−2πi ξ_m t_j}` at `ξ_m = m/(2K)`,
/// `m ∈ [−Kq, Kq)`, returned in increasing `m`.
pub fn window_spectrum(w: &SampledWindow) -> Vec<Complex64> {
    let n = w.len();
    let mut buf: Vec<Complex64> = w.samples().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let h = w.step();
    let half = n / 2;
    (0..n)
        .map(|k| {
            // m = k − n/2; the grid starts at t = −K, so each bin picks up e^{iπm}
            let m = k as i64 - half as i64;
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[m.rem_euclid(n as i64) as usize] * (h * sign)
        })
        .collect()
}

pub fn fourier_relation_residual(
    w: &SampledWindow,
    flow: &DiagonalFlow,
) -> Result<FourierResidual> {
    let n = w.len();
    let shift = 2 * w.half_support();
    if w.steps_per_unit() < 2 || shift >= n {
        return Err(Error::GridMismatch(format!(
            "window grid (step 1/{}, half-support {}) has no bins with ξ+1 in range",
            w.steps_per_unit(),
            w.half_support()
        )));
    }
    let f = window_spectrum(w);
    let fmax = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let spacing = 1.0 / shift as f64;
    let half = (n / 2) as i64;
    let bins = n - shift;
    let residual = (0..bins)
        .into_par_iter()
        .map(|k| {
            let xi = (k as i64 - half) as f64 * spacing;
            (matrix_coefficient(flow, xi) * f[k] - f[k + shift]).norm()
        })
        .reduce(|| 0.0, f64::max)
        / fmax;
    let edge_ratio = f[0].norm().max(f[n - 1].norm()) / fmax;
    Ok(FourierResidual {
        residual,
        bins,
        spacing,
        edge_ratio,
    })
}
