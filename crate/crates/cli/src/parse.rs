//! Parsers for flag values: reals, pairs, lists, ranges and polynomials.

use crate::error::CliError;
use hrtlab_core::torus::{Term, TrigPolynomial2};
use hrtlab_core::Real;
use num_complex::Complex64;
use serde_json::Value;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn real(text: &str) -> Result<Real, CliError> {
    Real::parse(text).map_err(|e| usage(format!("bad number {text:?}: {e}")))
}

pub fn float(text: &str) -> Result<f64, CliError> {
    real(text).map(|r| r.value())
}

/// Comma-separated reals.
pub fn real_list(text: &str) -> Result<Vec<Real>, CliError> {
    text.split(',').map(|s| real(s.trim())).collect()
}

pub fn float_list(text: &str) -> Result<Vec<f64>, CliError> {
    real_list(text).map(|v| v.iter().map(Real::value).collect())
}

pub fn pair(text: &str) -> Result<(f64, f64), CliError> {
    match float_list(text)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(usage(format!(
            "expected two comma-separated numbers, got {text:?}"
        ))),
    }
}

/// Either a JSON array or a comma-separated list.
pub fn value_list(text: &str) -> Result<Vec<Real>, CliError> {
    let t = text.trim();
    if !t.starts_with('[') {
        return real_list(t);
    }
    let v: Value = serde_json::from_str(t).map_err(|e| usage(format!("bad JSON list: {e}")))?;
    let Value::Array(items) = v else {
        return Err(usage("expected a JSON list"));
    };
    items
        .iter()
        .map(|x| Real::from_json(x).map_err(|e| usage(e.to_string())))
        .collect()
}

/// `start:stop:step`, including `stop` when it is hit; a bare number is a
/// single point.
pub fn range(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![float(v)?]),
        [a, b, s] => {
            let (start, stop, step) = (float(a)?, float(b)?, float(s)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(usage(format!(
                    "range {text:?} needs step > 0 and stop >= start"
                )));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| start + k as f64 * step).collect())
        }
        _ => Err(usage(format!("expected start:stop:step, got {text:?}"))),
    }
}

fn complex(v: &Value) -> Result<Complex64, CliError> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let re = Real::from_json(&a[0]).map_err(|e| usage(e.to_string()))?;
            let im = Real::from_json(&a[1]).map_err(|e| usage(e.to_string()))?;
            Ok(Complex64::new(re.value(), im.value()))
        }
        other => Real::from_json(other)
            .map(|r| Complex64::new(r.value(), 0.0))
            .map_err(|e| usage(e.to_string())),
    }
}

/// `[[c, y, x], ...]` with `c` a number or `[re, im]`.
pub fn polynomial(text: &str) -> Result<TrigPolynomial2, CliError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| usage(format!("bad polynomial JSON: {e}")))?;
    let Value::Array(items) = v else {
        return Err(usage("polynomial must be a JSON list of [c, y, x]"));
    };
    let terms = items
        .iter()
        .map(|t| match t {
            Value::Array(a) if a.len() == 3 => {
                let num = |x: &Value| {
                    Real::from_json(x)
                        .map(|r| r.value())
                        .map_err(|e| usage(e.to_string()))
                };
                Ok(Term {
                    c: complex(&a[0])?,
                    y: num(&a[1])?,
                    x: num(&a[2])?,
                })
            }
            _ => Err(usage("each polynomial term must be [c, y, x]")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TrigPolynomial2::new(terms)?)
}
