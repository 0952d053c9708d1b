use super::{Configuration, TFPoint};
use crate::exact::QuadSurd;
use std::fmt;

/// Integrality tolerance for coordinates without an exact form.
pub const INTEGER_TOL: f64 = 1e-9;
const COLLINEAR_TOL: f64 = 1e-9;

/// `{point + s·direction}`, direction of unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineLine {
    pub point: (f64, f64),
    pub direction: (f64, f64),
}

impl AffineLine {
    fn through(a: &TFPoint, b: &TFPoint) -> Self {
        let (dx, dy) = (b.x() - a.x(), b.y() - a.y());
        let n = dx.hypot(dy);
        Self {
            point: (a.x(), a.y()),
            direction: (dx / n, dy / n),
        }
    }
}

/// Configuration classes, in the priority order used by [`classify_configuration`].
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigClass {
    /// Every point has integer coordinates.
    Lattice,
    /// All points but `off` are lattice points.
    OneZ2 {
        off: usize,
    },
    /// All points but `off` lie on `line`; `off = None` means fully collinear.
    Collinear1N {
        line: AffineLine,
        off: Option<usize>,
    },
    /// Four points split two-and-two over two distinct parallel lines.
    TwoTwo {
        pairs: [[usize; 2]; 2],
    },
    General,
}

impl ConfigClass {
    pub fn label(&self) -> &'static str {
        match self {
            ConfigClass::Lattice => "Lattice",
            ConfigClass::OneZ2 { .. } => "OneZ2",
            ConfigClass::Collinear1N { .. } => "Collinear1N",
            ConfigClass::TwoTwo { .. } => "TwoTwo",
            ConfigClass::General => "General",
        }
    }

    pub fn is_fully_collinear(&self) -> bool {
        matches!(self, ConfigClass::Collinear1N { off: None, .. })
    }
}

impl fmt::Display for ConfigClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigClass::OneZ2 { off } => write!(f, "OneZ2 off={off}"),
            ConfigClass::Collinear1N { line, off: Some(k) } => write!(
                f,
                "Collinear1N off={k} line=({:?},{:?})+s({:?},{:?})",
                line.point.0, line.point.1, line.direction.0, line.direction.1
            ),
            ConfigClass::Collinear1N { line, off: None } => write!(
                f,
                "Collinear1N fully-collinear line=({:?},{:?})+s({:?},{:?})",
                line.point.0, line.point.1, line.direction.0, line.direction.1
            ),
            ConfigClass::TwoTwo { pairs } => write!(
                f,
                "TwoTwo pairs={{{},{}}}{{{},{}}}",
                pairs[0][0], pairs[0][1], pairs[1][0], pairs[1][1]
            ),
            other => f.write_str(other.label()),
        }
    }
}

fn exact_cross(a: &TFPoint, b: &TFPoint, c: &TFPoint) -> Option<QuadSurd> {
    let ax = a.x_real().exact_form()?;
    let ay = a.y_real().exact_form()?;
    let bx = b.x_real().exact_form()?;
    let by = b.y_real().exact_form()?;
    let cx = c.x_real().exact_form()?;
    let cy = c.y_real().exact_form()?;
    let ux = bx.checked_sub(ax)?;
    let uy = by.checked_sub(ay)?;
    let vx = cx.checked_sub(ax)?;
    let vy = cy.checked_sub(ay)?;
    ux.checked_mul(&vy)?.checked_sub(&uy.checked_mul(&vx)?)
}

/// Whether `(b - a)` and `(d - c)` are parallel; exact when all coordinates
/// share one quadratic field, otherwise relative tolerance `1e-9`.
fn parallel(a: &TFPoint, b: &TFPoint, c: &TFPoint, d: &TFPoint) -> bool {
    // translate (c, d) so that the test reduces to a cross product at a
    let shifted = |p: &TFPoint| -> Option<TFPoint> {
        let px = p
            .x_real()
            .exact_form()?
            .checked_sub(c.x_real().exact_form()?)?;
        let py = p
            .y_real()
            .exact_form()?
            .checked_sub(c.y_real().exact_form()?)?;
        let ax = a.x_real().exact_form()?.checked_add(&px)?;
        let ay = a.y_real().exact_form()?.checked_add(&py)?;
        Some(TFPoint::from_reals(ax.into(), ay.into()))
    };
    if let Some(d2) = shifted(d) {
        if let Some(cr) = exact_cross(a, b, &d2) {
            return cr.is_zero();
        }
    }
    let (ux, uy) = (b.x() - a.x(), b.y() - a.y());
    let (vx, vy) = (d.x() - c.x(), d.y() - c.y());
    let cross = ux * vy - uy * vx;
    cross.abs() <= COLLINEAR_TOL * ux.hypot(uy).max(1.0) * vx.hypot(vy).max(1.0)
}

fn collinear(a: &TFPoint, b: &TFPoint, c: &TFPoint) -> bool {
    parallel(a, b, a, c)
}

/// All of `idx` on one line (trivially true for fewer than three points).
fn all_collinear(points: &[TFPoint], idx: &[usize]) -> bool {
    if idx.len() < 3 {
        return true;
    }
    let (a, b) = (&points[idx[0]], &points[idx[1]]);
    idx[2..].iter().all(|&k| collinear(a, b, &points[k]))
}

fn line_of(points: &[TFPoint], idx: &[usize]) -> AffineLine {
    match idx {
        [] => AffineLine {
            point: (0.0, 0.0),
            direction: (1.0, 0.0),
        },
        [i] => AffineLine {
            point: (points[*i].x(), points[*i].y()),
            direction: (1.0, 0.0),
        },
        [i, j, ..] => AffineLine::through(&points[*i], &points[*j]),
    }
}

/// Returns the first matching class in the order
/// Lattice, OneZ2, Collinear1N, TwoTwo, General.
///
/// When several points could serve as the off-line point of a (1,N) split,
/// the distinguished point is preferred, then the highest index.
pub fn classify_configuration(cfg: &Configuration) -> ConfigClass {
    let pts = cfg.points();
    let n = pts.len();

    let off_lattice: Vec<usize> = (0..n).filter(|&i| !pts[i].is_lattice_point()).collect();
    if off_lattice.is_empty() {
        return ConfigClass::Lattice;
    }
    if off_lattice.len() == 1 {
        return ConfigClass::OneZ2 {
            off: off_lattice[0],
        };
    }

    let all: Vec<usize> = (0..n).collect();
    if all_collinear(pts, &all) {
        return ConfigClass::Collinear1N {
            line: line_of(pts, &all),
            off: None,
        };
    }
    let mut candidates: Vec<usize> = (0..n).rev().collect();
    if let Some(d) = cfg.distinguished() {
        candidates.retain(|&k| k != d);
        candidates.insert(0, d);
    }
    for k in candidates {
        let rest: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        if all_collinear(pts, &rest) {
            return ConfigClass::Collinear1N {
                line: line_of(pts, &rest),
                off: Some(k),
            };
        }
    }

    if n == 4 {
        for [[a, b], [c, d]] in [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]] {
            let (pa, pb, pc, pd) = (&pts[a], &pts[b], &pts[c], &pts[d]);
            // parallel and not the same line (the latter is excluded above anyway)
            if parallel(pa, pb, pc, pd) && !collinear(pa, pb, pc) {
                return ConfigClass::TwoTwo {
                    pairs: [[a, b], [c, d]],
                };
            }
        }
    }
    ConfigClass::General
}
