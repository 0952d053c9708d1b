use super::{Configuration, TFPoint};
use crate::error::{Error, Result};

/// `p ↦ A·(p − v)` with `det A = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineSymplecticMap {
    pub matrix: [[f64; 2]; 2],
    pub translation: (f64, f64),
}

impl AffineSymplecticMap {
    pub fn identity() -> Self {
        Self {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
            translation: (0.0, 0.0),
        }
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        let m = &self.matrix;
        let (x, y) = (p.0 - self.translation.0, p.1 - self.translation.1);
        (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }

    pub fn apply_inverse(&self, p: (f64, f64)) -> (f64, f64) {
        // det = 1, so the inverse is the adjugate
        let m = &self.matrix;
        let x = m[1][1] * p.0 - m[0][1] * p.1;
        let y = -m[1][0] * p.0 + m[0][0] * p.1;
        (x + self.translation.0, y + self.translation.1)
    }
}

/// Moves a configuration by an affine symplectic map so that it contains
/// `(0,0)`, `(0,1)` and `(a,0)` with `a ≠ 0`.
///
/// The first point becomes the origin; the first later pair `(i, j)` that is
/// not collinear with it is sent to `(0,1)` and `(a,0)`. Those three images
/// are stored exactly; every other point is mapped in floating point.
pub fn normalize_configuration(
    cfg: &Configuration,
) -> Result<(Configuration, AffineSymplecticMap, f64)> {
    let pts = cfg.points();
    let n = pts.len();
    if n < 3 {
        return Err(Error::Collinear);
    }
    let p0 = (pts[0].x(), pts[0].y());
    let rel = |p: &TFPoint| (p.x() - p0.0, p.y() - p0.1);

    let mut pair = None;
    'search: for i in 1..n {
        for j in i + 1..n {
            let (u1, u2) = (rel(&pts[i]), rel(&pts[j]));
            let det = u1.0 * u2.1 - u2.0 * u1.1;
            let scale = u1.0.hypot(u1.1) * u2.0.hypot(u2.1);
            if det.abs() > 1e-12 * scale.max(1.0) {
                pair = Some((i, j, u1, u2, det));
                break 'search;
            }
        }
    }
    let (i, j, u1, u2, det) = pair.ok_or(Error::Collinear)?;

    // A·[u1 u2] = [[0, a], [1, 0]]  ⇒  a = −det[u1 u2], A = [[0, a], [1, 0]]·[u1 u2]⁻¹
    let a = -det;
    let inv = [[u2.1 / det, -u2.0 / det], [-u1.1 / det, u1.0 / det]];
    let matrix = [[a * inv[1][0], a * inv[1][1]], [inv[0][0], inv[0][1]]];
    let map = AffineSymplecticMap {
        matrix,
        translation: p0,
    };

    let mut out = Vec::with_capacity(n);
    for (k, p) in pts.iter().enumerate() {
        let image = if k == 0 {
            (0.0, 0.0)
        } else if k == i {
            (0.0, 1.0)
        } else if k == j {
            (a, 0.0)
        } else {
            map.apply((p.x(), p.y()))
        };
        out.push(TFPoint::new(image.0, image.1));
    }
    Ok((Configuration::new(out, cfg.distinguished())?, map, a))
}
