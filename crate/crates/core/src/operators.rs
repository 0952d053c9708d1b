//! Time-frequency shifts of sampled windows, Gram matrices and numerical
//! independence margins of finite Gabor systems.

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::roots::cis_turns;
use crate::sum::compensated_sum_complex;
use crate::tf::{CoefficientVector, Configuration, SampledWindow, TFPoint};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// `e^{-2πi·y·n/q}`, exact root-of-unity lookup when `y` or `y·q` is an integer.
fn modulation_phase(y: f64, n: i64, q: usize) -> Complex64 {
    let q = q as i64;
    if y.fract() == 0.0 && y.abs() < 1e12 {
        return cis_turns((y as i64).wrapping_mul(n), q);
    }
    let yq = y * q as f64;
    if yq.fract() == 0.0 && yq.abs() < 1e9 && (n.abs() as i128) < (1i128 << 40) {
        return cis_turns(yq as i64 * n, q * q);
    }
    let frac = (y * n as f64 / q as f64).rem_euclid(1.0);
    let (s, c) = (-2.0 * PI * frac).sin_cos();
    Complex64::new(c, s)
}

/// Grid index offset of a translation, when `x` is a multiple of `h` within `1e-12`.
fn grid_offset(x: f64, q: usize) -> Option<i64> {
    let m = x * q as f64;
    let r = m.round();
    if (m - r).abs() <= 1e-12 * r.abs().max(1.0) {
        Some(r as i64)
    } else {
        None
    }
}

/// `M_y T_x w`, together with the fraction of `‖w‖²` pushed outside `[-K, K)`.
pub fn apply_tf_shift_with_leakage(
    w: &SampledWindow,
    pt: &TFPoint,
) -> Result<(SampledWindow, f64)> {
    let (x, y) = (pt.x(), pt.y());
    let q = w.steps_per_unit();
    let offset = (w.half_support() * q) as i64;
    let len = w.len() as i64;
    let norm_sqr = w.norm_sqr();

    let (translated, leakage): (Vec<Complex64>, f64) = match grid_offset(x, q) {
        Some(m) => {
            let shifted = (0..len).map(|j| w.sample(j - m)).collect();
            let lost: f64 = (0..len)
                .filter(|&i| i + m < 0 || i + m >= len)
                .map(|i| w.sample(i).norm_sqr())
                .sum::<f64>()
                * w.step();
            (shifted, lost / norm_sqr)
        }
        None => {
            if !w.is_analytic() {
                return Err(Error::OffGridShift(x));
            }
            let shifted: Vec<Complex64> = (0..w.len())
                .map(|j| w.eval(w.time(j) - x).expect("analytic window"))
                .collect();
            let kept: f64 = shifted.iter().map(|s| s.norm_sqr()).sum::<f64>() * w.step();
            (shifted, ((norm_sqr - kept) / norm_sqr).max(0.0))
        }
    };

    let samples = if y == 0.0 {
        translated
    } else {
        translated
            .into_iter()
            .enumerate()
            .map(|(j, s)| s * modulation_phase(y, j as i64 - offset, q))
            .collect()
    };
    let out = w.with_samples(samples).map_err(|_| {
        Error::InvalidInput(format!(
            "shift by ({x}, {y}) moves the whole window out of [-K, K)"
        ))
    })?;
    Ok((out, leakage))
}

/// `(M_y T_x w)(t_j) = e^{-2πi y t_j} w(t_j − x)`.
pub fn apply_tf_shift(w: &SampledWindow, pt: &TFPoint) -> Result<SampledWindow> {
    apply_tf_shift_with_leakage(w, pt).map(|(s, _)| s)
}

/// Riemann-sum inner product `h·Σ conj(a_j)·b_j`.
pub fn inner_product(a: &SampledWindow, b: &SampledWindow) -> Result<Complex64> {
    if !a.same_grid(b) {
        return Err(Error::GridMismatch(
            "windows live on different grids".into(),
        ));
    }
    let s = compensated_sum_complex(
        a.samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| x.conj() * y),
    );
    Ok(s * a.step())
}

/// Hermitian Gram matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl GramMatrix {
    /// Symmetrizes `entries` as `(G + Gᴴ)/2`.
    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut sym = entries.clone();
        for i in 0..n {
            sym[i * n + i] = Complex64::new(entries[i * n + i].re, 0.0);
            for j in i + 1..n {
                let v = (entries[i * n + j] + entries[j * n + i].conj()) * 0.5;
                sym[i * n + j] = v;
                sym[j * n + i] = v.conj();
            }
        }
        Ok(Self { n, entries: sym })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries, self.n)
    }
}

pub fn gram_matrix(windows: &[SampledWindow]) -> Result<GramMatrix> {
    let n = windows.len();
    if n == 0 {
        return Err(Error::InvalidInput("Gram matrix of an empty system".into()));
    }
    if windows.iter().any(|w| !w.same_grid(&windows[0])) {
        return Err(Error::GridMismatch(
            "windows must share step and half support".into(),
        ));
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product(&windows[i], &windows[j])?;
            entries[i * n + j] = v;
            entries[j * n + i] = v.conj();
        }
    }
    GramMatrix::from_entries(n, entries)
}

/// `sqrt(max(0, λ_min(G)))`.
pub fn min_singular(g: &GramMatrix) -> f64 {
    g.eigenvalues()[0].max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceReport {
    /// Smallest singular value of the synthesis map.
    pub min_singular: f64,
    /// Ratio of the extreme singular values; infinite when dependent.
    pub condition_number: f64,
    pub step: f64,
    pub half_support: usize,
    /// Largest fraction of a shifted window's mass lost outside `[-K, K)`.
    pub leakage: f64,
}

impl IndependenceReport {
    /// `alpha,beta,min_singular,condition_number,leakage` with 17 significant digits.
    pub fn csv_row(&self, alpha: f64, beta: f64) -> String {
        format!(
            "{},{},{},{},{}",
            fmt17(alpha),
            fmt17(beta),
            fmt17(self.min_singular),
            fmt17(self.condition_number),
            fmt17(self.leakage)
        )
    }

    pub const CSV_HEADER: &'static str = "alpha,beta,min_singular,condition_number,leakage";
}

/// Round-trip safe float formatting, 17 significant digits.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Margin of the Gabor system `{M_y T_x w : (x, y) ∈ cfg}` at this discretization.
///
/// A positive value is evidence of linear independence, not a proof.
pub fn independence_margin(w: &SampledWindow, cfg: &Configuration) -> Result<IndependenceReport> {
    let mut windows = Vec::with_capacity(cfg.len());
    let mut leakage: f64 = 0.0;
    for pt in cfg.points() {
        let (s, l) = apply_tf_shift_with_leakage(w, pt)?;
        leakage = leakage.max(l);
        windows.push(s);
    }
    let g = gram_matrix(&windows)?;
    let eig = g.eigenvalues();
    let lo = eig[0].max(0.0);
    let hi = eig[eig.len() - 1].max(0.0);
    let condition_number = if lo > 0.0 {
        (hi / lo).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(IndependenceReport {
        min_singular: lo.sqrt(),
        condition_number,
        step: w.step(),
        half_support: w.half_support(),
        leakage,
    })
}

/// One grid point of an `(α, β)` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub report: IndependenceReport,
}

/// Margins of `base ∪ {(β, α)}` (translation `β`, modulation `α`) over the
/// grid, row-major in `(alpha, beta)`. A grid point that coincides with a base
/// point contributes nothing new to the set.
pub fn independence_sweep(
    w: &SampledWindow,
    base: &Configuration,
    alphas: &[f64],
    betas: &[f64],
) -> Result<Vec<SweepRow>> {
    let grid: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
        .collect();
    grid.par_iter()
        .map(|&(alpha, beta)| {
            let cfg = base.union_with(TFPoint::new(beta, alpha));
            independence_margin(w, &cfg).map(|report| SweepRow {
                alpha,
                beta,
                report,
            })
        })
        .collect()
}

/// `‖Σ_k c_k M_{y_k}T_{x_k} w − M_α T_β w‖ / ‖w‖`, the sum running over the
/// non-distinguished points in order.
pub fn dependency_residual(
    w: &SampledWindow,
    cfg: &Configuration,
    c: &CoefficientVector,
) -> Result<f64> {
    let d = cfg.distinguished().ok_or(Error::NoDistinguishedPoint)?;
    if c.len() + 1 != cfg.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} coefficients, got {}",
            cfg.len() - 1,
            c.len()
        )));
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); w.len()];
    let others = cfg
        .points()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != d)
        .map(|(_, p)| p);
    for (pt, ck) in others.zip(c.values()) {
        let s = apply_tf_shift(w, pt)?;
        for (a, v) in acc.iter_mut().zip(s.samples()) {
            *a += ck * v;
        }
    }
    let rhs = apply_tf_shift(w, &cfg.points()[d])?;
    for (a, v) in acc.iter_mut().zip(rhs.samples()) {
        *a -= v;
    }
    let diff: f64 = crate::sum::compensated_sum(acc.iter().map(|z| z.norm_sqr())) * w.step();
    Ok(diff.sqrt() / w.norm())
}
