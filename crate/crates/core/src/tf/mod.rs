//! Time-frequency points, configurations and sampled windows.

mod classify;
mod normalize;
mod window;

pub use classify::{classify_configuration, AffineLine, ConfigClass, INTEGER_TOL};
pub use normalize::{normalize_configuration, AffineSymplecticMap};
pub use window::{make_window, SampledWindow, WindowKind};

use crate::error::{Error, Result};
use crate::exact::Real;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A point `(x, y)` of the time-frequency plane: translation `x`, modulation `y`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(from = "[Real; 2]", into = "[Real; 2]")]
pub struct TFPoint {
    x: Real,
    y: Real,
}

impl From<[Real; 2]> for TFPoint {
    fn from([x, y]: [Real; 2]) -> Self {
        Self { x, y }
    }
}

impl From<TFPoint> for [Real; 2] {
    fn from(p: TFPoint) -> Self {
        [p.x, p.y]
    }
}

impl TFPoint {
    /// # Panics
    /// If either coordinate is not finite.
    pub fn new(x: f64, y: f64) -> Self {
        Self::from_reals(
            Real::float(x).expect("finite x"),
            Real::float(y).expect("finite y"),
        )
    }

    pub fn from_reals(x: Real, y: Real) -> Self {
        Self { x, y }
    }

    pub fn x(&self) -> f64 {
        self.x.value()
    }

    pub fn y(&self) -> f64 {
        self.y.value()
    }

    pub fn x_real(&self) -> &Real {
        &self.x
    }

    pub fn y_real(&self) -> &Real {
        &self.y
    }

    /// The torus rotation vector `γ = (-translation, modulation)` attached to
    /// the shift `M_y T_x`.
    pub fn rotation_vector(&self) -> (f64, f64) {
        (-self.x(), self.y())
    }

    pub fn same_as(&self, other: &TFPoint) -> bool {
        self.x.same_as(&other.x) && self.y.same_as(&other.y)
    }

    pub fn is_lattice_point(&self) -> bool {
        self.x.is_integer(INTEGER_TOL) && self.y.is_integer(INTEGER_TOL)
    }
}

impl fmt::Display for TFPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A finite set of distinct time-frequency points, optionally marking the
/// "extra" point of a dependency hypothesis.
#[derive(Debug, Clone)]
pub struct Configuration {
    points: Vec<TFPoint>,
    distinguished: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct ConfigurationJson {
    points: Vec<TFPoint>,
    #[serde(default)]
    distinguished: Option<usize>,
}

impl Configuration {
    pub fn new(points: Vec<TFPoint>, distinguished: Option<usize>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput(
                "configuration needs at least one point".into(),
            ));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].same_as(&points[j]) {
                    return Err(Error::DuplicatePoints(i, j));
                }
            }
        }
        if let Some(d) = distinguished {
            if d >= points.len() {
                return Err(Error::InvalidInput(format!(
                    "distinguished index {d} out of range for {} points",
                    points.len()
                )));
            }
        }
        Ok(Self {
            points,
            distinguished,
        })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        for &(x, y) in coords {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite point ({x}, {y})")));
            }
        }
        Self::new(
            coords.iter().map(|&(x, y)| TFPoint::new(x, y)).collect(),
            None,
        )
    }

    /// Parses `{"points": [[x,y],...], "distinguished": i|null}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ConfigurationJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.points, raw.distinguished)
    }

    /// Parses a bare point list `[[x,y],...]`.
    pub fn from_points_json(text: &str, distinguished: Option<usize>) -> Result<Self> {
        let points: Vec<TFPoint> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(points, distinguished)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ConfigurationJson {
            points: self.points.clone(),
            distinguished: self.distinguished,
        })
        .expect("configuration serializes")
    }

    pub fn points(&self) -> &[TFPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    /// The configuration with `pt` added, unless an identical point is already present.
    pub fn union_with(&self, pt: TFPoint) -> Configuration {
        let mut points = self.points.clone();
        if !points.iter().any(|p| p.same_as(&pt)) {
            points.push(pt);
        }
        Configuration {
            points,
            distinguished: self.distinguished,
        }
    }
}

/// Nonzero complex coefficients `c_1..c_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(Vec<Complex64>);

impl CoefficientVector {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = values
            .iter()
            .position(|c| !c.is_finite() || c.norm() == 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "coefficient {i} must be nonzero and finite"
            )));
        }
        Ok(Self(values))
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
