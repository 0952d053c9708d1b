//! Discrete Zak transform on the `q×q` torus grid and its operator identities.
//!
//! `Zf(i/q, l/q) = Σ_{k=-K}^{K-1} f(i/q + k)·e^{-2πikl/q}`. The grid is the
//! half-open square `[0,1)²`; arguments outside it are reduced with
//! quasi-periodicity in `t` and periodicity in `ω`.

use crate::error::{Error, Result};
use crate::operators::{apply_tf_shift, fmt17};
use crate::roots::{cis_turns, RootsOfUnity};
use crate::sum::{compensated_sum, compensated_sum_complex};
use crate::tf::{SampledWindow, TFPoint, WindowKind};
use crate::torus::{eval_p2, propagate_f, TorusPoint, TrigPolynomial2};
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::{self, Write};

#[derive(Debug, Clone, PartialEq)]
pub struct ZakImage {
    q: usize,
    half_support: usize,
    values: Vec<Complex64>,
    source_norm: f64,
    truncation_bound: f64,
}

impl ZakImage {
    /// Wraps raw values (row-major, `i` outer). The source norm is taken from
    /// discrete Parseval.
    pub fn from_values(q: usize, half_support: usize, values: Vec<Complex64>) -> Result<Self> {
        if q == 0 || values.len() != q * q {
            return Err(Error::GridMismatch(format!(
                "expected {} values for q={q}",
                q * q
            )));
        }
        let energy = compensated_sum(values.iter().map(|v| v.norm_sqr())) / (q * q) as f64;
        Ok(Self {
            q,
            half_support,
            values,
            source_norm: energy.sqrt(),
            truncation_bound: 0.0,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn half_support(&self) -> usize {
        self.half_support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn source_norm(&self) -> f64 {
        self.source_norm
    }

    /// Upper bound on the generator mass dropped by truncating the sum to `|k| ≤ K`.
    pub fn truncation_bound(&self) -> f64 {
        self.truncation_bound
    }

    /// Stored value at `(i/q, l/q)`, `0 ≤ i, l < q`.
    pub fn get(&self, i: usize, l: usize) -> Complex64 {
        self.values[i * self.q + l]
    }

    /// Value at `(i/q, l/q)` for any integers, via
    /// `Z(t + a, ω + b) = e^{2πiaω} Z(t, ω)`.
    pub fn at(&self, i: i64, l: i64) -> Complex64 {
        let q = self.q as i64;
        let a = i.div_euclid(q);
        let r = i.rem_euclid(q) as usize;
        let s = l.rem_euclid(q) as usize;
        let v = self.values[r * self.q + s];
        if a == 0 {
            v
        } else {
            cis_turns(-(a.rem_euclid(q)) * l.rem_euclid(q), q) * v
        }
    }

    /// Discrete energy `(1/q²)·Σ|Z|²`.
    pub fn energy(&self) -> f64 {
        compensated_sum(self.values.iter().map(|v| v.norm_sqr())) / (self.q * self.q) as f64
    }

    /// CSV rows `i,l,re,im`, `i` outer.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "i,l,re,im")?;
        for i in 0..self.q {
            for l in 0..self.q {
                let v = self.get(i, l);
                writeln!(out, "{i},{l},{},{}", fmt17(v.re), fmt17(v.im))?;
            }
        }
        Ok(())
    }

    /// Plain (P2) PGM magnitude heatmap, 16-bit, rows indexed by `i`.
    pub fn write_pgm<W: Write>(&self, out: W) -> io::Result<()> {
        let mags: Vec<f64> = self.values.iter().map(|v| v.norm()).collect();
        write_pgm(out, self.q, self.q, &mags)
    }
}

/// Writes `values` (row-major, `rows × cols`) as a P2 PGM scaled so the
/// maximum maps to 65535.
pub fn write_pgm<W: Write>(mut out: W, rows: usize, cols: usize, values: &[f64]) -> io::Result<()> {
    assert_eq!(values.len(), rows * cols);
    let max = values
        .iter()
        .cloned()
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    writeln!(out, "P2")?;
    writeln!(out, "{cols} {rows}")?;
    writeln!(out, "65535")?;
    for r in 0..rows {
        let line: Vec<String> = (0..cols)
            .map(|c| {
                let v = values[r * cols + c];
                let level = if max > 0.0 && v.is_finite() {
                    (v / max * 65535.0).round()
                } else {
                    0.0
                };
                (level.clamp(0.0, 65535.0) as u32).to_string()
            })
            .collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

fn truncation_bound(kind: WindowKind, half_support: usize) -> f64 {
    let k = half_support as f64;
    match kind {
        WindowKind::Box => 0.0,
        WindowKind::Custom => 0.0,
        WindowKind::TwoSidedExponential => 2.0 * (-k).exp() / (1.0 - (-1f64).exp()),
        _ => {
            // decreasing tails: 2·Σ_{m ≥ K} sup_{[m, m+1)} |g|
            (0..64)
                .map(|m| {
                    let t = k + m as f64;
                    let g = kind.generator(t).unwrap_or(0.0).abs();
                    let g1 = kind.generator(t + 1.0).unwrap_or(0.0).abs();
                    2.0 * g.max(g1)
                })
                .sum()
        }
    }
}

/// Discrete Zak transform on the `q×q` grid.
///
/// Grid-aligned windows (`h = 1/q`) are read from their samples; windows with
/// a generator on another grid are evaluated at `i/q + k` directly.
pub fn zak_transform(w: &SampledWindow, q: usize) -> Result<ZakImage> {
    if q == 0 {
        return Err(Error::GridMismatch("q must be positive".into()));
    }
    let kk = w.half_support() as i64;
    let aligned = w.steps_per_unit() == q;
    if !aligned && !w.is_analytic() {
        return Err(Error::GridMismatch(format!(
            "window step 1/{} does not match the Zak grid 1/{q}",
            w.steps_per_unit()
        )));
    }
    let roots = RootsOfUnity::new(q);
    let wq = w.steps_per_unit() as i64;
    let values: Vec<Complex64> = (0..q)
        .into_par_iter()
        .flat_map_iter(|i| {
            let column: Vec<Complex64> = (-kk..kk)
                .map(|k| {
                    if aligned {
                        w.sample(i as i64 + (k + kk) * wq)
                    } else {
                        w.eval(i as f64 / q as f64 + k as f64)
                            .expect("analytic window")
                    }
                })
                .collect();
            let roots = &roots;
            (0..q).map(move |l| {
                compensated_sum_complex(
                    column
                        .iter()
                        .zip(-kk..kk)
                        .map(|(f, k)| f * roots.get(k * l as i64)),
                )
            })
        })
        .collect();
    Ok(ZakImage {
        q,
        half_support: w.half_support(),
        values,
        source_norm: w.norm(),
        truncation_bound: truncation_bound(w.kind(), w.half_support()),
    })
}

/// `Zf(t, ω)` at an arbitrary point from the generator, `k ∈ [-K, K)` plus
/// the terms needed to cover `[-K, K)` after the shift of `t`.
fn zak_direct(w: &SampledWindow, t: f64, omega: f64) -> Complex64 {
    let kk = w.half_support() as i64;
    let t0 = t.floor() as i64;
    let terms = (-kk - t0 - 1..=kk - t0 + 1).map(|k| {
        let f = w.eval(t + k as f64).expect("analytic window");
        let frac = (k as f64 * omega).rem_euclid(1.0);
        let (s, c) = (-2.0 * std::f64::consts::PI * frac).sin_cos();
        f * Complex64::new(c, s)
    });
    compensated_sum_complex(terms)
}

/// Inverse transform: `f(i/q + k) = (1/q)·Σ_l Z[i][l]·e^{2πikl/q}`.
///
/// The output grid is `[-K, K)` with `K` the image's half support. When
/// `2K ≤ q` the `2K` integer offsets `k ∈ [-K, K)` are reconstructed; when
/// `2K > q` the `q` offsets starting at `-⌊q/2⌋` are, and the rest is zero.
pub fn inverse_zak(z: &ZakImage) -> Result<SampledWindow> {
    let q = z.q;
    let kk = z.half_support.max(1) as i64;
    let (k_lo, count) = if 2 * kk <= q as i64 {
        (-kk, 2 * kk)
    } else {
        (-(q as i64 / 2), q as i64)
    };
    let roots = RootsOfUnity::new(q);
    let mut samples = vec![Complex64::new(0.0, 0.0); 2 * kk as usize * q];
    for i in 0..q {
        for k in k_lo..k_lo + count {
            let v = compensated_sum_complex((0..q).map(|l| z.get(i, l) * roots.get(-k * l as i64)))
                / q as f64;
            samples[(i as i64 + (k + kk) * q as i64) as usize] = v;
        }
    }
    SampledWindow::custom(q, kk as usize, samples)
}

/// The operator identities of the Zak transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZakIdentity {
    /// `Z(T₁f) = e^{-2πiω} Zf`
    Translation,
    /// `Z(M₁f) = e^{-2πit} Zf`
    Modulation,
    /// `Z(M_α T_β f)(t, ω) = e^{-2πiαt} Zf(t − β, ω + α)`
    ModTrans { alpha: f64, beta: f64 },
    /// `Zf(t + j, ω) = e^{2πijω} Zf(t, ω)`
    QuasiPeriodT,
    /// `Zf(t, ω + j) = Zf(t, ω)`
    PeriodOmega,
}

impl ZakIdentity {
    pub fn name(&self) -> &'static str {
        match self {
            ZakIdentity::Translation => "translation",
            ZakIdentity::Modulation => "modulation",
            ZakIdentity::ModTrans { .. } => "modtrans",
            ZakIdentity::QuasiPeriodT => "quasiperiod_t",
            ZakIdentity::PeriodOmega => "period_omega",
        }
    }

    /// All five, with the given `(α, β)` for the mixed identity.
    pub fn all(alpha: f64, beta: f64) -> [ZakIdentity; 5] {
        [
            ZakIdentity::Translation,
            ZakIdentity::Modulation,
            ZakIdentity::ModTrans { alpha, beta },
            ZakIdentity::QuasiPeriodT,
            ZakIdentity::PeriodOmega,
        ]
    }
}

fn grid_multiple(v: f64, q: usize) -> Option<i64> {
    let m = v * q as f64;
    let r = m.round();
    ((m - r).abs() <= 1e-12 * r.abs().max(1.0)).then_some(r as i64)
}

fn max_abs_diff(a: &ZakImage, b: impl Fn(usize, usize) -> Complex64) -> f64 {
    let q = a.q;
    (0..q)
        .flat_map(|i| (0..q).map(move |l| (i, l)))
        .map(|(i, l)| (a.get(i, l) - b(i, l)).norm())
        .fold(0.0, f64::max)
}

/// Max over the grid of `|LHS − RHS|` for one identity; the left side applies
/// the operator before transforming, the right side applies the phase rule to
/// the transformed window.
pub fn check_zak_identity(id: ZakIdentity, w: &SampledWindow, q: usize) -> Result<f64> {
    let z = zak_transform(w, q)?;
    let qi = q as i64;
    match id {
        ZakIdentity::Translation => {
            let lhs = zak_transform(&apply_tf_shift(w, &TFPoint::new(1.0, 0.0))?, q)?;
            Ok(max_abs_diff(&lhs, |i, l| {
                cis_turns(l as i64, qi) * z.get(i, l)
            }))
        }
        ZakIdentity::Modulation => {
            let lhs = zak_transform(&apply_tf_shift(w, &TFPoint::new(0.0, 1.0))?, q)?;
            Ok(max_abs_diff(&lhs, |i, l| {
                cis_turns(i as i64, qi) * z.get(i, l)
            }))
        }
        ZakIdentity::ModTrans { alpha, beta } => {
            let shifted = TFPoint::new(beta, alpha);
            match (grid_multiple(alpha, q), grid_multiple(beta, q)) {
                (Some(a), Some(b)) if w.steps_per_unit() == q || w.is_analytic() => {
                    let lhs = zak_transform(&apply_tf_shift(w, &shifted)?, q)?;
                    Ok(max_abs_diff(&lhs, |i, l| {
                        cis_turns(a * i as i64, qi * qi) * z.at(i as i64 - b, l as i64 + a)
                    }))
                }
                _ if w.is_analytic() => {
                    let lhs = zak_transform(&apply_tf_shift(w, &shifted)?, q)?;
                    Ok(max_abs_diff(&lhs, |i, l| {
                        let t = i as f64 / q as f64;
                        let omega = l as f64 / q as f64;
                        let frac = (alpha * t).rem_euclid(1.0);
                        let (s, c) = (-2.0 * std::f64::consts::PI * frac).sin_cos();
                        Complex64::new(c, s) * zak_direct(w, t - beta, omega + alpha)
                    }))
                }
                _ => Err(Error::UnsupportedShift(format!(
                    "(alpha, beta) = ({alpha}, {beta}) is off the 1/{q} grid and the window has no generator"
                ))),
            }
        }
        ZakIdentity::QuasiPeriodT => {
            let mut err: f64 = 0.0;
            for j in [-2i64, -1, 1, 2] {
                for i in 0..q {
                    for l in 0..q {
                        let lhs = z.at(i as i64 + j * qi, l as i64);
                        let rhs = cis_turns(-j * l as i64, qi) * z.get(i, l);
                        err = err.max((lhs - rhs).norm());
                    }
                }
            }
            Ok(err)
        }
        ZakIdentity::PeriodOmega => {
            let mut err: f64 = 0.0;
            for j in [-2i64, -1, 1, 2] {
                err = err.max(max_abs_diff(&z, |i, l| z.at(i as i64, l as i64 + j * qi)));
            }
            Ok(err)
        }
    }
}

/// Max of `|p(z)F(z) − e^{-2πiαt}F(t − β, ω + α)|` over the listed grid points.
pub fn zak_equation_residual_on(
    f: &ZakImage,
    p: &TrigPolynomial2,
    alpha: f64,
    beta: f64,
    points: &[(usize, usize)],
) -> Result<f64> {
    let q = f.q;
    let (a, b) = match (grid_multiple(alpha, q), grid_multiple(beta, q)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::GridMismatch(format!(
                "(alpha, beta) = ({alpha}, {beta}) must be multiples of 1/{q}"
            )))
        }
    };
    let qi = q as i64;
    let mut worst: f64 = 0.0;
    for &(i, l) in points {
        if i >= q || l >= q {
            return Err(Error::GridMismatch(format!(
                "point ({i}, {l}) outside the {q}x{q} grid"
            )));
        }
        let z = TorusPoint::new(i as f64 / q as f64, l as f64 / q as f64);
        let lhs = eval_p2(p, &z) * f.get(i, l);
        let rhs = cis_turns(a * i as i64, qi * qi) * f.at(i as i64 - b, l as i64 + a);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Residual of `p·F = e^{-2πiαt}F(t − β, ω + α)` over the whole grid.
pub fn zak_equation_residual(
    f: &ZakImage,
    p: &TrigPolynomial2,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    let q = f.q;
    let all: Vec<(usize, usize)> = (0..q).flat_map(|i| (0..q).map(move |l| (i, l))).collect();
    zak_equation_residual_on(f, p, alpha, beta, &all)
}

/// Builds a Zak image that satisfies the dependency equation along one orbit
/// of the rotation by `γ = (−β, α)` starting at grid point `start`.
///
/// Moduli come from [`propagate_f`], phases from the equation itself; the
/// seed is scaled so that `max |F| = 1` along the orbit. The orbit stops early
/// if it closes up. Returns the image and the points at which the equation is
/// fully determined (every orbit point but the last).
pub fn synthesize_orbit_image(
    q: usize,
    p: &TrigPolynomial2,
    alpha: f64,
    beta: f64,
    start: (usize, usize),
    n: usize,
) -> Result<(ZakImage, Vec<(usize, usize)>)> {
    let (a, b) = match (grid_multiple(alpha, q), grid_multiple(beta, q)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::GridMismatch(format!(
                "(alpha, beta) must be multiples of 1/{q}"
            )))
        }
    };
    if start.0 >= q || start.1 >= q || n == 0 {
        return Err(Error::InvalidInput(
            "start must be a grid point and n >= 1".into(),
        ));
    }
    let qi = q as i64;
    let mut orbit = vec![start];
    while orbit.len() < n {
        let (i, l) = *orbit.last().unwrap();
        let next = (
            (i as i64 - b).rem_euclid(qi) as usize,
            (l as i64 + a).rem_euclid(qi) as usize,
        );
        if orbit.contains(&next) {
            break;
        }
        orbit.push(next);
    }
    let z0 = TorusPoint::new(start.0 as f64 / q as f64, start.1 as f64 / q as f64);
    let moduli = propagate_f(1.0, p, (-beta, alpha), &z0, orbit.len() - 1);
    let top = moduli.iter().cloned().fold(0.0, f64::max);
    if !top.is_finite() || top <= 0.0 {
        return Err(Error::InvalidInput(
            "orbit moduli vanish or overflow".into(),
        ));
    }

    let mut values = vec![Complex64::new(0.0, 0.0); q * q];
    values[start.0 * q + start.1] = Complex64::new(moduli[0] / top, 0.0);
    for j in 0..orbit.len() - 1 {
        let (i, l) = orbit[j];
        let z = TorusPoint::new(i as f64 / q as f64, l as f64 / q as f64);
        let fz = values[i * q + l];
        // at(i − b, l + a) = e^{2πi·A·(l+a)/q}·F[next] with A = ⌊(i − b)/q⌋
        let wrap = (i as i64 - b).div_euclid(qi);
        let lifted = eval_p2(p, &z) * fz / cis_turns(a * i as i64, qi * qi);
        let direction =
            lifted / cis_turns(-(wrap.rem_euclid(qi)) * (l as i64 + a).rem_euclid(qi), qi);
        let modulus = moduli[j + 1] / top;
        let (ni, nl) = orbit[j + 1];
        values[ni * q + nl] = if direction.norm() > 0.0 {
            direction / direction.norm() * modulus
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let image = ZakImage::from_values(q, q / 2, values)?;
    let checked = orbit[..orbit.len() - 1].to_vec();
    Ok((image, checked))
}
