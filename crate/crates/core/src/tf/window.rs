use crate::error::{Error, Result};
use crate::sum::compensated_sum;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// `2^{1/4} e^{-πt²}`, unit L² norm.
    Gaussian,
    /// Indicator of `[0, 1)`.
    Box,
    /// `e^{-|t|}`.
    TwoSidedExponential,
    /// Hermite function of order `n` adapted to `e^{-πt²}`, unit L² norm.
    Hermite(u32),
    /// Samples only, no generator.
    Custom,
}

impl WindowKind {
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim().to_ascii_lowercase();
        match name.as_str() {
            "gaussian" => Ok(WindowKind::Gaussian),
            "box" => Ok(WindowKind::Box),
            "two-sided-exponential" | "exp" | "exponential" => Ok(WindowKind::TwoSidedExponential),
            _ => {
                if let Some(n) = name.strip_prefix("hermite-") {
                    let n = n
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad hermite order in {name:?}")))?;
                    Ok(WindowKind::Hermite(n))
                } else {
                    Err(Error::Parse(format!("unknown window kind {name:?}")))
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            WindowKind::Gaussian => "gaussian".into(),
            WindowKind::Box => "box".into(),
            WindowKind::TwoSidedExponential => "two-sided-exponential".into(),
            WindowKind::Hermite(n) => format!("hermite-{n}"),
            WindowKind::Custom => "custom".into(),
        }
    }

    /// Closed-form generator, `None` for custom windows.
    pub fn generator(&self, t: f64) -> Option<f64> {
        match *self {
            WindowKind::Gaussian => Some(2f64.powf(0.25) * (-PI * t * t).exp()),
            WindowKind::Box => Some(if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 }),
            WindowKind::TwoSidedExponential => Some((-t.abs()).exp()),
            WindowKind::Hermite(n) => Some(hermite_function(n, t)),
            WindowKind::Custom => None,
        }
    }
}

/// `(2π)^{1/4} ψ_n(√(2π) t)` with `ψ_n` the orthonormal Hermite functions,
/// by the three-term recurrence.
fn hermite_function(n: u32, t: f64) -> f64 {
    let x = (2.0 * PI).sqrt() * t;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * x * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (2.0 * PI).powf(0.25) * cur
}

/// A complex function sampled at `t_j = −K + j/q`, `j = 0..2Kq`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWindow {
    kind: WindowKind,
    q: usize,
    half_support: usize,
    samples: Vec<Complex64>,
}

/// `1/h` as an integer, or `BadStep`.
pub(crate) fn steps_per_unit(h: f64) -> Result<usize> {
    if h.is_nan() || h <= 0.0 || !h.is_finite() {
        return Err(Error::BadStep(h));
    }
    let inv = 1.0 / h;
    let q = inv.round();
    if (inv - q).abs() > 1e-12 || q < 1.0 {
        return Err(Error::BadStep(h));
    }
    Ok(q as usize)
}

/// Samples a preset window on `[-K, K)` with step `h = 1/q`.
pub fn make_window(kind: WindowKind, h: f64, half_support: usize) -> Result<SampledWindow> {
    let q = steps_per_unit(h)?;
    if half_support == 0 {
        return Err(Error::InvalidInput(
            "half support K must be at least 1".into(),
        ));
    }
    if kind == WindowKind::Custom {
        return Err(Error::InvalidInput(
            "custom windows are built from samples".into(),
        ));
    }
    let len = 2 * half_support * q;
    let samples = (0..len)
        .map(|j| {
            let t = grid_time(j, q, half_support);
            Complex64::new(kind.generator(t).expect("preset has a generator"), 0.0)
        })
        .collect();
    SampledWindow::from_parts(kind, q, half_support, samples)
}

#[inline]
pub(crate) fn grid_time(j: usize, q: usize, half_support: usize) -> f64 {
    (j as f64 - (half_support * q) as f64) / q as f64
}

impl SampledWindow {
    /// A window without generator.
    pub fn custom(q: usize, half_support: usize, samples: Vec<Complex64>) -> Result<Self> {
        Self::from_parts(WindowKind::Custom, q, half_support, samples)
    }

    fn from_parts(
        kind: WindowKind,
        q: usize,
        half_support: usize,
        samples: Vec<Complex64>,
    ) -> Result<Self> {
        if q == 0 || half_support == 0 {
            return Err(Error::InvalidInput("grid needs q >= 1 and K >= 1".into()));
        }
        if samples.len() != 2 * half_support * q {
            return Err(Error::GridMismatch(format!(
                "expected {} samples for q={q}, K={half_support}, got {}",
                2 * half_support * q,
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidInput("window samples must be finite".into()));
        }
        if samples.iter().all(|s| s.norm_sqr() == 0.0) {
            return Err(Error::InvalidInput("window must be nonzero".into()));
        }
        Ok(Self {
            kind,
            q,
            half_support,
            samples,
        })
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    /// Grid step `h = 1/q`.
    pub fn step(&self) -> f64 {
        1.0 / self.q as f64
    }

    pub fn steps_per_unit(&self) -> usize {
        self.q
    }

    pub fn half_support(&self) -> usize {
        self.half_support
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_analytic(&self) -> bool {
        self.kind != WindowKind::Custom
    }

    pub fn time(&self, j: usize) -> f64 {
        grid_time(j, self.q, self.half_support)
    }

    pub fn same_grid(&self, other: &SampledWindow) -> bool {
        self.q == other.q && self.half_support == other.half_support
    }

    /// `f(t)` from the generator, zero outside `[-K, K)`; `None` without generator.
    pub fn eval(&self, t: f64) -> Option<Complex64> {
        let k = self.half_support as f64;
        let g = self.kind.generator(t)?;
        Some(if t >= -k && t < k {
            Complex64::new(g, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        })
    }

    /// Sample at grid index `j`, zero outside the stored range.
    #[inline]
    pub fn sample(&self, j: i64) -> Complex64 {
        if j < 0 || j as usize >= self.samples.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.samples[j as usize]
        }
    }

    /// Discrete squared norm `h·Σ|f(t_j)|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.step() * compensated_sum(self.samples.iter().map(|s| s.norm_sqr()))
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> Result<SampledWindow> {
        Self::from_parts(
            WindowKind::Custom,
            self.q,
            self.half_support,
            self.samples.iter().map(|s| s * c).collect(),
        )
    }

    /// Same grid, new samples, no generator.
    pub(crate) fn with_samples(&self, samples: Vec<Complex64>) -> Result<SampledWindow> {
        Self::custom(self.q, self.half_support, samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_has_unit_norm() {
        let w = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8).unwrap();
        assert_eq!(w.len(), 1024);
        assert!((w.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn box_samples_exact() {
        let w = make_window(WindowKind::Box, 1.0 / 16.0, 2).unwrap();
        for (j, s) in w.samples().iter().enumerate() {
            let t = w.time(j);
            let want = if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 };
            assert_eq!(*s, Complex64::new(want, 0.0), "t = {t}");
        }
        assert_eq!(w.samples().iter().filter(|s| s.re == 1.0).count(), 16);
    }

    #[test]
    fn step_validation() {
        assert!(make_window(WindowKind::Gaussian, 1.0 / 3.0, 8).is_ok());
        assert_eq!(
            make_window(WindowKind::Gaussian, 0.3, 8).unwrap_err(),
            Error::BadStep(0.3)
        );
        assert!(make_window(WindowKind::Gaussian, 0.0, 8).is_err());
        assert!(make_window(WindowKind::Gaussian, 1.0 / 4.0, 0).is_err());
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let ws: Vec<_> = (0..4)
            .map(|n| make_window(WindowKind::Hermite(n), 1.0 / 64.0, 8).unwrap())
            .collect();
        for (a, wa) in ws.iter().enumerate() {
            for (b, wb) in ws.iter().enumerate() {
                let ip: f64 = wa
                    .samples()
                    .iter()
                    .zip(wb.samples())
                    .map(|(x, y)| (x.conj() * y).re)
                    .sum::<f64>()
                    / 64.0;
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-10, "<h{a}, h{b}> = {ip}");
            }
        }
        let g = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8).unwrap();
        for (x, y) in ws[0].samples().iter().zip(g.samples()) {
            assert!((x - y).norm() <= 1e-12 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn zero_window_rejected() {
        assert!(SampledWindow::custom(4, 1, vec![Complex64::new(0.0, 0.0); 8]).is_err());
        assert!(SampledWindow::custom(4, 1, vec![Complex64::new(1.0, 0.0); 7]).is_err());
    }

    #[test]
    fn samples_match_generator() {
        for kind in [
            WindowKind::Gaussian,
            WindowKind::TwoSidedExponential,
            WindowKind::Hermite(3),
        ] {
            let w = make_window(kind, 1.0 / 32.0, 4).unwrap();
            for (j, s) in w.samples().iter().enumerate() {
                let g = kind.generator(w.time(j)).unwrap();
                assert!((s.re - g).abs() <= 1e-14 * g.abs(), "{kind:?} at {j}");
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in [
            WindowKind::Gaussian,
            WindowKind::Box,
            WindowKind::TwoSidedExponential,
            WindowKind::Hermite(2),
        ] {
            assert_eq!(WindowKind::parse(&k.name()).unwrap(), k);
        }
        assert!(WindowKind::parse("triangle").is_err());
    }
}
