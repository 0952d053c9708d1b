//! Rational dependence among `{1, x₁, …, x_N}`: basis extraction, relation
//! coefficients, the common denominator `L`, and the closure of the diagonal
//! rotation group they describe.

use crate::error::{Error, Result};
use crate::exact::{lcm_of_denominators, QuadSurd, Real};
use crate::lll::lll_reduce;
use crate::sum::compensated_sum;
use num_traits::{Signed, Zero};
use serde_json::json;

pub use crate::exact::Rational;

/// Default verification tolerance of the float path.
pub const DEFAULT_TOL: f64 = 1e-12;

/// `x_j = u + Σ_l d[l]·x_{basis[l]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub j: usize,
    pub u: Rational,
    /// Coefficients aligned with [`RelationBasis::basis_indices`].
    pub d: Vec<Rational>,
}

/// Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationBasis {
    /// Inputs that together with 1 form a basis of the ℚ-span.
    pub basis_indices: Vec<usize>,
    /// One entry per non-basis input, in index order.
    pub relations: Vec<Relation>,
    /// LCM of the denominators of all `u` and `d` coefficients.
    pub l: i64,
}

fn ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl RelationBasis {
    /// Number of inputs described.
    pub fn len(&self) -> usize {
        self.basis_indices.len() + self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn relation_for(&self, j: usize) -> Option<&Relation> {
        self.relations.iter().find(|r| r.j == j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "basis": self.basis_indices,
            "relations": self.relations.iter().map(|r| json!({
                "j": r.j,
                "u": ratio_string(&r.u),
                "d": r.d.iter().map(ratio_string).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "L": self.l,
        })
    }

    /// Largest `|x_j − u − Σ d·x_b| ` over all relations, evaluated in floats.
    pub fn max_residual(&self, values: &[f64]) -> f64 {
        self.relations
            .iter()
            .map(|r| {
                let terms = std::iter::once(values[r.j])
                    .chain(std::iter::once(-crate::exact::ratio_to_f64(r.u)))
                    .chain(
                        r.d.iter()
                            .zip(&self.basis_indices)
                            .map(|(d, &b)| -crate::exact::ratio_to_f64(*d) * values[b]),
                    );
                compensated_sum(terms).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Finds a maximal rationally independent subset (greedy, lowest index first)
/// and expresses the remaining inputs over it.
///
/// When every input carries an exact form the computation is symbolic.
/// Otherwise integer relations with coefficients bounded by `max_den` are
/// searched by lattice reduction and verified to `tol`.
pub fn detect_relations(values: &[Real], max_den: i64, tol: f64) -> Result<RelationBasis> {
    if values.is_empty() {
        return Err(Error::InvalidInput("no values given".into()));
    }
    if max_den < 1 {
        return Err(Error::InvalidInput(format!(
            "max denominator must be at least 1, got {max_den}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let exact: Option<Vec<QuadSurd>> = values.iter().map(|v| v.exact_form().copied()).collect();
    let (basis_indices, relations) = match exact {
        Some(qs) => detect_exact(&qs)?,
        None => detect_float(
            &values.iter().map(Real::value).collect::<Vec<_>>(),
            max_den,
            tol,
        )?,
    };
    let l = lcm_of_denominators(
        relations
            .iter()
            .flat_map(|r| std::iter::once(&r.u).chain(&r.d)),
    );
    Ok(RelationBasis {
        basis_indices,
        relations,
        l,
    })
}

type Detected = (Vec<usize>, Vec<Relation>);

/// Coordinates over `{1, √r₁, √r₂, …}`; distinct squarefree radicands are
/// linearly independent over ℚ.
fn detect_exact(values: &[QuadSurd]) -> Result<Detected> {
    let mut radicands: Vec<u64> = values
        .iter()
        .filter(|q| !q.is_rational())
        .map(|q| q.radicand())
        .collect();
    radicands.sort_unstable();
    radicands.dedup();
    let dim = radicands.len() + 1;
    let coords = |q: &QuadSurd| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        v[0] = q.rational_part();
        if !q.is_rational() {
            let k = radicands.binary_search(&q.radicand()).unwrap();
            v[k + 1] = q.surd_coeff();
        }
        v
    };
    let one = {
        let mut v = vec![Rational::zero(); dim];
        v[0] = Rational::from_integer(1);
        v
    };
    let mut basis = Vec::new();
    let mut relations = Vec::new();
    for (j, q) in values.iter().enumerate() {
        let mut columns = vec![one.clone()];
        columns.extend(basis.iter().map(|&b: &usize| coords(&values[b])));
        match solve_rational(&columns, &coords(q))? {
            Some(sol) => relations.push(Relation {
                j,
                u: sol[0],
                d: sol[1..].to_vec(),
            }),
            None => basis.push(j),
        }
    }
    Ok((basis, relations))
}

/// Solves `Σ c_k·columns[k] = target` for independent columns; `None` when
/// the target is outside their span.
fn solve_rational(columns: &[Vec<Rational>], target: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let rows = target.len();
    let cols = columns.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[r]).collect();
            row.push(target[r]);
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][c].is_zero()) else {
            return Err(Error::InvalidInput("basis columns are dependent".into()));
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][c].recip();
        for v in m[pivot_row].iter_mut() {
            *v *= inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != pivot_row && !row[c].is_zero() {
                let f = row[c];
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= f * p;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    Ok(Some(pivots.iter().map(|&r| m[r][cols]).collect()))
}

/// Greedy float search: input `j` is tested against `(1, x_basis…, x_j)`.
fn detect_float(values: &[f64], max_den: i64, tol: f64) -> Result<Detected> {
    let mut basis = Vec::new();
    let mut relations = Vec::new();
    for j in 0..values.len() {
        let mut v = vec![1.0];
        v.extend(basis.iter().map(|&b: &usize| values[b]));
        v.push(values[j]);
        match find_relation(&v, max_den, tol)? {
            Some(q) => {
                let qj = Rational::from_integer(*q.last().unwrap() as i64);
                let coeff = |k: usize| -Rational::from_integer(q[k] as i64) / qj;
                relations.push(Relation {
                    j,
                    u: coeff(0),
                    d: (1..q.len() - 1).map(coeff).collect(),
                });
            }
            None => basis.push(j),
        }
    }
    Ok((basis, relations))
}

fn relation_residual(q: &[i128], v: &[f64]) -> f64 {
    compensated_sum(q.iter().zip(v).map(|(&a, &x)| a as f64 * x)).abs()
}

/// Integer vector `q` with `q·v ≈ 0`, `q_last ≠ 0` and `max|q| ≤ max_den`.
///
/// The residual is measured as `|q·v| / |q_last|`, the error of the implied
/// expression for the last entry. A best candidate that only passes at
/// `10·tol` raises [`Error::PrecisionExhausted`].
fn find_relation(v: &[f64], max_den: i64, tol: f64) -> Result<Option<Vec<i128>>> {
    let n = v.len();
    let scale = 1.0 / tol;
    let mut lattice: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row = vec![0i128; n + 1];
            row[i] = 1;
            row[n] = (scale * v[i]).round() as i128;
            row
        })
        .collect();
    lll_reduce(&mut lattice, 0.99);
    let mut best: Option<(f64, Vec<i128>)> = None;
    for row in &lattice {
        let q = &row[..n];
        let last = q[n - 1];
        if last == 0 || q.iter().any(|c| c.abs() > max_den as i128) {
            continue;
        }
        let mut q = q.to_vec();
        if last < 0 {
            q.iter_mut().for_each(|c| *c = -*c);
        }
        let res = relation_residual(&q, v) / q[n - 1] as f64;
        if best.as_ref().is_none_or(|(r, _)| res < *r) {
            best = Some((res, q));
        }
    }
    match best {
        Some((res, q)) if res <= tol => Ok(Some(q)),
        Some((res, _)) if res <= 10.0 * tol => {
            Err(Error::PrecisionExhausted { residual: res, tol })
        }
        _ => Ok(None),
    }
}

/// Outcome of an independence test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceCertificate {
    /// No integer relation with coefficients up to `bound` was found.
    Independent { bound: i64 },
    /// Integer coefficients `(r₀, r₁, …, r_N)` with `r₀ + Σ r_k x_k = 0`.
    Dependent { relation: Vec<i64> },
}

impl IndependenceCertificate {
    pub fn is_independent(&self) -> bool {
        matches!(self, Self::Independent { .. })
    }
}

/// Tests whether `{1, x₁, …, x_N}` is linearly independent over ℚ.
pub fn is_rationally_independent(
    values: &[Real],
    max_den: i64,
    tol: f64,
) -> Result<IndependenceCertificate> {
    let rb = detect_relations(values, max_den, tol)?;
    let Some(r) = rb.relations.first() else {
        return Ok(IndependenceCertificate::Independent { bound: max_den });
    };
    let den = lcm_of_denominators(std::iter::once(&r.u).chain(&r.d));
    let scale = |x: &Rational| *(x * Rational::from_integer(den)).numer();
    let mut relation = vec![0i64; values.len() + 1];
    relation[0] = scale(&r.u);
    for (d, &b) in r.d.iter().zip(&rb.basis_indices) {
        relation[b + 1] = scale(d);
    }
    relation[r.j + 1] = -den;
    // present with a positive leading nonzero entry
    if relation
        .iter()
        .find(|c| **c != 0)
        .is_some_and(|c| c.is_negative())
    {
        relation.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(IndependenceCertificate::Dependent { relation })
}

/// Shape of the closure of `{diag(e^{-2πi x_k j}) : j ∈ ℤ}`: a union of
/// `component_count` translates of an `torus_dimension`-dimensional torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupClosureDescriptor {
    pub torus_dimension: usize,
    pub component_count: i64,
    /// For entry `k`, the integer exponents of `z₁…z_m` in the `k`-th
    /// diagonal entry of `A^{L}` after substituting the basis.
    pub exponents: Vec<Vec<i64>>,
}

pub fn group_closure(rb: &RelationBasis) -> GroupClosureDescriptor {
    let m = rb.basis_indices.len();
    let l = Rational::from_integer(rb.l);
    let mut exponents = vec![Vec::new(); rb.len()];
    for (pos, &b) in rb.basis_indices.iter().enumerate() {
        let mut e = vec![0i64; m];
        e[pos] = rb.l;
        exponents[b] = e;
    }
    for r in &rb.relations {
        exponents[r.j] = r.d.iter().map(|d| (d * l).to_integer()).collect();
    }
    GroupClosureDescriptor {
        torus_dimension: m,
        component_count: rb.l,
        exponents,
    }
}
