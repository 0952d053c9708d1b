//! Rotations of the 2-torus, orbit products of trigonometric polynomials,
//! toral lines, recurrence and equidistribution probes.

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::exact::Real;
use crate::operators::fmt17;
use crate::relations::detect_relations;
use crate::sum::{compensated_sum_complex, NeumaierSum};
use num_complex::Complex64;
use num_traits::Zero;
use std::f64::consts::PI;
use std::io::{self, Write};

/// Default threshold below which `|p|` counts as a zero factor.
pub const DEFAULT_ZERO_EPS: f64 = 1e-14;

/// Largest denominator accepted when deciding whether a direction is rational.
pub const LINE_MAX_DEN: i64 = 10_000;

#[inline]
fn reduce(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid of a tiny negative number rounds up to 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A point of `[0,1)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub t: f64,
    pub omega: f64,
}

impl TorusPoint {
    /// Reduces both coordinates mod 1.
    pub fn new(t: f64, omega: f64) -> Self {
        Self {
            t: reduce(t),
            omega: reduce(omega),
        }
    }

    /// Max of the wrapped coordinate distances.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        let wrap = |a: f64, b: f64| {
            let d = (a - b).abs();
            d.min(1.0 - d)
        };
        wrap(self.t, other.t).max(wrap(self.omega, other.omega))
    }
}

/// One term `c·e^{-2πi(y·t + x·ω)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub c: Complex64,
    pub y: f64,
    pub x: f64,
}

/// `p(t, ω) = Σ c_k e^{-2πi(y_k t + x_k ω)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial2 {
    terms: Vec<Term>,
}

impl TrigPolynomial2 {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput(
                "polynomial needs at least one term".into(),
            ));
        }
        for (i, a) in terms.iter().enumerate() {
            if !a.c.is_finite() || a.c.norm() == 0.0 || !a.x.is_finite() || !a.y.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "term {i} must have a finite nonzero coefficient"
                )));
            }
            if terms[..i].iter().any(|b| b.x == a.x && b.y == a.y) {
                return Err(Error::InvalidInput(format!(
                    "term {i} repeats frequency ({}, {})",
                    a.y, a.x
                )));
            }
        }
        Ok(Self { terms })
    }

    /// Terms given as `(c, y, x)` with real coefficients.
    pub fn from_real_terms(terms: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            terms
                .iter()
                .map(|&(c, y, x)| Term {
                    c: Complex64::new(c, 0.0),
                    y,
                    x,
                })
                .collect(),
        )
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![Term { c, y: 0.0, x: 0.0 }]).expect("nonzero constant")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, z: &TorusPoint) -> Complex64 {
        eval_p2(self, z)
    }

    /// Evaluation at an unreduced point of the plane.
    pub fn eval_plane(&self, t: f64, omega: f64) -> Complex64 {
        compensated_sum_complex(self.terms.iter().map(|term| {
            let frac = (term.y * t).rem_euclid(1.0) + (term.x * omega).rem_euclid(1.0);
            let (s, c) = (-2.0 * PI * frac).sin_cos();
            term.c * Complex64::new(c, s)
        }))
    }
}

pub fn eval_p2(p: &TrigPolynomial2, z: &TorusPoint) -> Complex64 {
    p.eval_plane(z.t, z.omega)
}

/// `σ(z) = (z + γ) mod 1`.
pub fn sigma_step(z: &TorusPoint, gamma: (f64, f64)) -> TorusPoint {
    TorusPoint::new(z.t + gamma.0, z.omega + gamma.1)
}

/// `σⁿ(z)`, computed as `(z + n·γ) mod 1` so errors do not compound.
pub fn sigma_power(z: &TorusPoint, gamma: (f64, f64), n: u64) -> TorusPoint {
    let n = n as f64;
    TorusPoint::new(z.t + n * gamma.0, z.omega + n * gamma.1)
}

/// `[z, σz, …, σ^{n-1}z]`.
pub fn orbit(z: &TorusPoint, gamma: (f64, f64), n: usize) -> Vec<TorusPoint> {
    (0..n as u64).map(|j| sigma_power(z, gamma, j)).collect()
}

/// Exact rotation of a rational point.
pub fn sigma_step_exact(
    z: (Rational, Rational),
    gamma: (Rational, Rational),
) -> (Rational, Rational) {
    let frac = |r: Rational| r - r.floor();
    (frac(z.0 + gamma.0), frac(z.1 + gamma.1))
}

/// Smallest `n ≥ 1` with `σⁿz = z` exactly, searching up to `max_n`.
pub fn exact_period(
    z: (Rational, Rational),
    gamma: (Rational, Rational),
    max_n: usize,
) -> Option<usize> {
    let start = sigma_step_exact(z, (Rational::zero(), Rational::zero()));
    let mut cur = start;
    for n in 1..=max_n {
        cur = sigma_step_exact(cur, gamma);
        if cur == start {
            return Some(n);
        }
    }
    None
}

/// Log-domain partial sums `s_n = Σ_{j<n} ln|p(σʲz)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitProductLedger {
    pub gamma: (f64, f64),
    /// `s_0 = 0, s_1, …, s_n`.
    pub log_sums: Vec<f64>,
    /// Indices `j` with `|p(σʲz)| < ε_zero`; those factors are left out of the sums.
    pub zero_hits: Vec<usize>,
}

impl OrbitProductLedger {
    pub fn len(&self) -> usize {
        self.log_sums.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn last(&self) -> f64 {
        *self.log_sums.last().unwrap()
    }

    /// CSV `n,s_n,zero_hit_flag`; the flag marks that factor `n − 1` was a zero.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,s_n,zero_hit_flag")?;
        for (n, s) in self.log_sums.iter().enumerate() {
            let hit = n > 0 && self.zero_hits.binary_search(&(n - 1)).is_ok();
            writeln!(out, "{n},{},{}", fmt17(*s), u8::from(hit))?;
        }
        Ok(())
    }
}

pub fn orbit_log_product(
    p: &TrigPolynomial2,
    z: &TorusPoint,
    gamma: (f64, f64),
    n: usize,
    zero_eps: f64,
) -> OrbitProductLedger {
    let mut acc = NeumaierSum::new();
    let mut log_sums = Vec::with_capacity(n + 1);
    let mut zero_hits = Vec::new();
    log_sums.push(0.0);
    for j in 0..n {
        let v = eval_p2(p, &sigma_power(z, gamma, j as u64)).norm();
        if v < zero_eps {
            zero_hits.push(j);
        } else {
            acc += v.ln();
        }
        log_sums.push(acc.sum());
    }
    OrbitProductLedger {
        gamma,
        log_sums,
        zero_hits,
    }
}

/// `|F(z + jγ)| = seed·e^{s_j}` for `j = 0..=n`, the modulus chain forced by
/// `|F(z + γ)| = |p(z)|·|F(z)|`. Zero factors are skipped as in the ledger.
pub fn propagate_f(
    seed: f64,
    p: &TrigPolynomial2,
    gamma: (f64, f64),
    z: &TorusPoint,
    n: usize,
) -> Vec<f64> {
    assert!(seed > 0.0, "seed must be positive");
    orbit_log_product(p, z, gamma, n, DEFAULT_ZERO_EPS)
        .log_sums
        .iter()
        .map(|s| seed * s.exp())
        .collect()
}

/// Smallest `n ∈ [1, max_n]` with `d(σⁿz, z) < ε`.
pub fn recurrence_probe(
    z: &TorusPoint,
    gamma: (f64, f64),
    eps: f64,
    max_n: usize,
) -> Option<usize> {
    (1..=max_n).find(|&n| sigma_power(z, gamma, n as u64).distance(z) < eps)
}

/// Star-discrepancy estimate over anchored boxes `[0, a)×[0, b)` with corners
/// on the `1/grid_res` lattice.
pub fn discrepancy(points: &[TorusPoint], grid_res: usize) -> f64 {
    assert!(grid_res >= 2, "grid resolution must be at least 2");
    if points.is_empty() {
        return 0.0;
    }
    let g = grid_res;
    let mut counts = vec![0u64; g * g];
    for p in points {
        let a = ((p.t * g as f64) as usize).min(g - 1);
        let b = ((p.omega * g as f64) as usize).min(g - 1);
        counts[a * g + b] += 1;
    }
    // cumulative[a][b] = points in cells [0, a) × [0, b)
    let mut cum = vec![0u64; (g + 1) * (g + 1)];
    for a in 0..g {
        for b in 0..g {
            cum[(a + 1) * (g + 1) + (b + 1)] =
                counts[a * g + b] + cum[a * (g + 1) + (b + 1)] + cum[(a + 1) * (g + 1) + b]
                    - cum[a * (g + 1) + b];
        }
    }
    let n = points.len() as f64;
    let mut worst: f64 = 0.0;
    for a in 1..=g {
        for b in 1..=g {
            let frac = cum[a * (g + 1) + b] as f64 / n;
            let area = (a * b) as f64 / (g * g) as f64;
            worst = worst.max((frac - area).abs());
        }
    }
    worst
}

/// Straight piece of a toral line inside the closed unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub omega0: f64,
    pub t1: f64,
    pub omega1: f64,
}

/// The image of `{λ + s·γ}` in the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct ToralLine {
    pub anchor: TorusPoint,
    /// Integer winding vector when closed, otherwise `γ` itself.
    pub direction: (f64, f64),
    pub segments: Vec<Segment>,
    pub closed: bool,
    pub winding: Option<(i64, i64)>,
    /// Parameter length covered by `segments` along `direction`.
    pub span: f64,
}

impl ToralLine {
    /// Point at parameter `s` along the line.
    pub fn point_at(&self, s: f64) -> TorusPoint {
        TorusPoint::new(
            self.anchor.t + s * self.direction.0,
            self.anchor.omega + s * self.direction.1,
        )
    }

    /// CSV `segment_index,t0,ω0,t1,ω1`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "segment_index,t0,omega0,t1,omega1")?;
        for (k, s) in self.segments.iter().enumerate() {
            writeln!(
                out,
                "{k},{},{},{},{}",
                fmt17(s.t0),
                fmt17(s.omega0),
                fmt17(s.t1),
                fmt17(s.omega1)
            )?;
        }
        Ok(())
    }
}

const CROSSING_TOL: f64 = 1e-12;

/// Walks from `start` along `d`, cutting at the square's edges, until the
/// parameter budget or the segment budget runs out.
fn walk_segments(
    start: &TorusPoint,
    d: (f64, f64),
    budget: f64,
    max_segments: usize,
) -> (Vec<Segment>, f64) {
    // entry coordinate (0 is read as 1 when moving down) and parameter to the exit edge
    let to_edge = |x: f64, v: f64| -> (f64, f64) {
        if v > 0.0 {
            (x, (1.0 - x) / v)
        } else if v < 0.0 {
            let x = if x == 0.0 { 1.0 } else { x };
            (x, x / -v)
        } else {
            (x, f64::INFINITY)
        }
    };
    let edge = |v: f64| if v > 0.0 { 1.0 } else { 0.0 };
    let mut segments = Vec::new();
    let mut p = *start;
    let mut used = 0.0;
    while segments.len() < max_segments && budget - used > CROSSING_TOL {
        let (t0, st) = to_edge(p.t, d.0);
        let (w0, sw) = to_edge(p.omega, d.1);
        let left = budget - used;
        // simultaneous crossings within tolerance are one corner crossing
        let hit_t = st <= sw + CROSSING_TOL && st <= left + CROSSING_TOL;
        let hit_w = sw <= st + CROSSING_TOL && sw <= left + CROSSING_TOL;
        let s = match (hit_t, hit_w) {
            (true, true) => st.max(sw),
            (true, false) => st,
            (false, true) => sw,
            (false, false) => left,
        };
        let t1 = if hit_t {
            edge(d.0)
        } else {
            (t0 + s * d.0).clamp(0.0, 1.0)
        };
        let w1 = if hit_w {
            edge(d.1)
        } else {
            (w0 + s * d.1).clamp(0.0, 1.0)
        };
        segments.push(Segment {
            t0,
            omega0: w0,
            t1,
            omega1: w1,
        });
        used += s;
        p = TorusPoint::new(t1, w1);
    }
    (segments, used)
}

/// The toral line through `λ` with direction `γ`.
///
/// A direction whose slope is rational (denominator at most [`LINE_MAX_DEN`])
/// gives a closed geodesic with integer winding `(u, v) ∝ γ`, `gcd(u, v) = 1`;
/// otherwise the first `max_segments` pieces are returned.
pub fn toral_line(
    lambda: &TorusPoint,
    gamma: (f64, f64),
    max_segments: usize,
) -> Result<ToralLine> {
    if gamma.0 == 0.0 && gamma.1 == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let winding = rational_direction(gamma)?;
    match winding {
        Some((u, v)) => {
            let d = (u as f64, v as f64);
            let (segments, span) = walk_segments(lambda, d, 1.0, usize::MAX);
            Ok(ToralLine {
                anchor: *lambda,
                direction: d,
                segments,
                closed: true,
                winding,
                span,
            })
        }
        None => {
            let (segments, span) = walk_segments(lambda, gamma, f64::INFINITY, max_segments);
            Ok(ToralLine {
                anchor: *lambda,
                direction: gamma,
                segments,
                closed: false,
                winding: None,
                span,
            })
        }
    }
}

/// Integer vector `(u, v)` with `gcd = 1` and positive proportionality to `γ`,
/// when the slope is detected as rational.
fn rational_direction(gamma: (f64, f64)) -> Result<Option<(i64, i64)>> {
    let sign = |v: f64| if v > 0.0 { 1 } else { -1 };
    if gamma.0 == 0.0 {
        return Ok(Some((0, sign(gamma.1))));
    }
    if gamma.1 == 0.0 {
        return Ok(Some((sign(gamma.0), 0)));
    }
    let ratio = gamma.1 / gamma.0;
    let rb = detect_relations(&[Real::float(ratio)?], LINE_MAX_DEN, 1e-12)?;
    if !rb.basis_indices.is_empty() {
        return Ok(None);
    }
    let r = rb.relations[0].u;
    let (num, den) = (*r.numer(), *r.denom());
    let s = sign(gamma.0);
    Ok(Some((s * den, s * num)))
}

/// Samples `|p|` at `samples` equally spaced parameters along the line;
/// returns `(max − min, mean)`.
pub fn p_constancy_on_line(p: &TrigPolynomial2, line: &ToralLine, samples: usize) -> (f64, f64) {
    assert!(samples >= 2, "need at least two samples");
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = NeumaierSum::new();
    for k in 0..samples {
        let s = line.span * k as f64 / samples as f64;
        let v = eval_p2(p, &line.point_at(s)).norm();
        lo = lo.min(v);
        hi = hi.max(v);
        sum += v;
    }
    (hi - lo, sum.sum() / samples as f64)
}

/// Lattice period of a rational rotation `(a/b, c/d)`: `lcm(b, d)`.
pub fn rational_rotation_period(gamma: (Rational, Rational)) -> i64 {
    use num_integer::Integer;
    gamma.0.denom().lcm(gamma.1.denom())
}
