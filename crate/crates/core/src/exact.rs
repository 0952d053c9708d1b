//! Exact scalars of the form `a/b + c/d·√n`.
//!
//! Configuration coordinates and relation-detector inputs may be given in this
//! restricted grammar. They are kept symbolically next to their `f64` value so
//! integrality, collinearity and rational dependence can be decided exactly.

use crate::error::{Error, Result};
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub type Rational = Rational64;

/// `rational + coeff·√radicand` with `radicand` squarefree.
///
/// Purely rational values are stored with `coeff = 0` and `radicand = 1`, so
/// structural equality is value equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    rational: Rational,
    coeff: Rational,
    radicand: u64,
}

/// Splits `n = s²·r` with `r` squarefree.
fn squarefree_split(n: u64) -> (u64, u64) {
    let mut r = n;
    let mut s = 1u64;
    let mut p = 2u64;
    while p * p <= r {
        while r.is_multiple_of(p * p) {
            r /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, r)
}

impl QuadSurd {
    pub fn from_rational(r: Rational) -> Self {
        Self {
            rational: r,
            coeff: Rational::zero(),
            radicand: 1,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    /// `rational + coeff·√n`, normalized.
    pub fn new(rational: Rational, coeff: Rational, n: u64) -> Self {
        if n == 0 || coeff.is_zero() {
            return Self::from_rational(rational);
        }
        let (s, r) = squarefree_split(n);
        let coeff = coeff * Rational::from_integer(s as i64);
        if r == 1 {
            Self::from_rational(rational + coeff)
        } else {
            Self {
                rational,
                coeff,
                radicand: r,
            }
        }
    }

    pub fn sqrt(n: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    pub fn rational_part(&self) -> Rational {
        self.rational
    }

    pub fn surd_coeff(&self) -> Rational {
        self.coeff
    }

    /// Squarefree radicand, `1` for rational values.
    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.rational.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.rational.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let r = ratio_to_f64(self.rational);
        if self.is_rational() {
            r
        } else {
            r + ratio_to_f64(self.coeff) * (self.radicand as f64).sqrt()
        }
    }

    fn common_radicand(&self, other: &Self) -> Option<u64> {
        match (self.radicand, other.radicand) {
            (1, r) | (r, 1) => Some(r),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let n = self.common_radicand(other)?;
        Some(Self::new(
            self.rational + other.rational,
            self.coeff + other.coeff,
            n,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&other.neg())
    }

    /// Product, defined when both factors live in the same field `ℚ(√n)`.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let n = self.common_radicand(other)?;
        let nr = Rational::from_integer(n as i64);
        let rational = self.rational * other.rational + self.coeff * other.coeff * nr;
        let coeff = self.rational * other.coeff + self.coeff * other.rational;
        Some(Self::new(rational, coeff, n))
    }

    pub fn div_rational(&self, d: Rational) -> Self {
        Self::new(self.rational / d, self.coeff / d, self.radicand)
    }

    pub fn neg(&self) -> Self {
        Self {
            rational: -self.rational,
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }

    /// Sign of the value, decided exactly.
    pub fn signum(&self) -> i32 {
        // a + b√n: compare a² against b²n when the signs differ
        let a = self.rational;
        let b = self.coeff;
        let sa = sign_of(a);
        let sb = sign_of(b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sb != 0 { sb } else { sa };
        }
        let lhs = a * a;
        let rhs = b * b * Rational::from_integer(self.radicand as i64);
        if lhs > rhs {
            sa
        } else if lhs < rhs {
            sb
        } else {
            0
        }
    }

    /// Parses the restricted grammar: sums and differences of terms, each
    /// term a product/quotient of integers and at most one `sqrt(n)`.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).expression()
    }
}

fn sign_of(r: Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn fmt_ratio(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_ratio(&self.rational));
        }
        let c = if self.coeff == Rational::one() {
            format!("sqrt({})", self.radicand)
        } else if self.coeff == -Rational::one() {
            format!("-sqrt({})", self.radicand)
        } else {
            format!("{}*sqrt({})", fmt_ratio(&self.coeff), self.radicand)
        };
        if self.rational.is_zero() {
            write!(f, "{c}")
        } else if let Some(rest) = c.strip_prefix('-') {
            write!(f, "{} - {}", fmt_ratio(&self.rational), rest)
        } else {
            write!(f, "{} + {}", fmt_ratio(&self.rational), c)
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expression(&mut self) -> Result<QuadSurd> {
        let mut sign = 1;
        if self.eat('-') {
            sign = -1;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if sign < 0 {
            acc = acc.neg();
        }
        loop {
            let neg = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            let mut t = self.term()?;
            if neg {
                t = t.neg();
            }
            acc = acc
                .checked_add(&t)
                .ok_or_else(|| self.err("terms with different radicands"))?;
        }
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QuadSurd> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let f = self.factor()?;
                acc = acc
                    .checked_mul(&f)
                    .ok_or_else(|| self.err("product of different radicands"))?;
            } else if self.eat('/') {
                let f = self.factor()?;
                if !f.is_rational() || f.is_zero() {
                    return Err(self.err("division by a non-rational or zero factor"));
                }
                acc = acc.div_rational(f.rational);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<QuadSurd> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with("sqrt") {
            self.pos += 4;
            if !self.eat('(') {
                return Err(self.err("expected '(' after sqrt"));
            }
            let n = self.integer()?;
            if n < 0 {
                return Err(self.err("negative radicand"));
            }
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(QuadSurd::sqrt(n as u64));
        }
        let n = self.integer()?;
        Ok(QuadSurd::from_integer(n))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        self.src[start..self.pos]
            .parse::<i64>()
            .map_err(|_| self.err("integer out of range"))
    }
}

/// A real coordinate: its `f64` value plus, when given exactly, the symbolic form.
#[derive(Debug, Clone, Copy)]
pub struct Real {
    value: f64,
    exact: Option<QuadSurd>,
}

impl Real {
    pub fn float(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate {value}"
            )));
        }
        Ok(Self { value, exact: None })
    }

    pub fn exact(q: QuadSurd) -> Self {
        Self {
            value: q.to_f64(),
            exact: Some(q),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::exact(QuadSurd::from_integer(n))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact_form(&self) -> Option<&QuadSurd> {
        self.exact.as_ref()
    }

    /// Integer test: exact when the symbolic form is known, otherwise
    /// `|x - round(x)| <= tol`.
    pub fn is_integer(&self, tol: f64) -> bool {
        match &self.exact {
            Some(q) => q.is_integer(),
            None => (self.value - self.value.round()).abs() <= tol,
        }
    }

    /// Equality on the stored representation.
    pub fn same_as(&self, other: &Real) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.value == other.value,
        }
    }

    /// Parses either the exact grammar or a decimal literal.
    ///
    /// Integer literals and anything containing `/` or `sqrt` are exact;
    /// other decimal text (`0.5`, `1e-3`) becomes a float.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let body = t.strip_prefix(['-', '+']).unwrap_or(t);
        let is_int = !body.is_empty() && body.chars().all(|c| c.is_ascii_digit());
        if t.contains("sqrt") || t.contains('/') || is_int {
            return QuadSurd::parse(t).map(Real::exact);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("cannot parse real {text:?}")))?;
        Real::float(v)
    }
}

impl From<QuadSurd> for Real {
    fn from(q: QuadSurd) -> Self {
        Real::exact(q)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{}", self.value),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.exact {
            Some(q) if q.is_integer() => s.serialize_i64(*q.rational_part().numer()),
            Some(q) => s.serialize_str(&q.to_string()),
            None => s.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        Real::from_json(&v).map_err(D::Error::custom)
    }
}

impl Real {
    /// JSON integers are exact, other numbers are floats, strings go through [`Real::parse`].
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Real::integer(i))
                } else {
                    Real::float(n.as_f64().unwrap_or(f64::NAN))
                }
            }
            serde_json::Value::String(s) => Real::parse(s),
            other => Err(Error::Parse(format!(
                "expected a number or string, got {other}"
            ))),
        }
    }
}

/// Least common multiple of the denominators of `values` (1 when empty).
pub fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> i64 {
    values.into_iter().fold(1i64, |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn parses_the_grammar() {
        assert_eq!(
            QuadSurd::parse("1/2").unwrap(),
            QuadSurd::from_rational(r(1, 2))
        );
        assert_eq!(QuadSurd::parse("sqrt(2)").unwrap(), QuadSurd::sqrt(2));
        assert_eq!(
            QuadSurd::parse("1/3*sqrt(2)").unwrap(),
            QuadSurd::new(r(0, 1), r(1, 3), 2)
        );
        assert_eq!(
            QuadSurd::parse("1/2 + 3/4*sqrt(5)").unwrap(),
            QuadSurd::new(r(1, 2), r(3, 4), 5)
        );
        assert_eq!(
            QuadSurd::parse("1 + 2*sqrt(2)").unwrap(),
            QuadSurd::new(r(1, 1), r(2, 1), 2)
        );
        assert_eq!(
            QuadSurd::parse("-sqrt(2)/3").unwrap(),
            QuadSurd::new(r(0, 1), r(-1, 3), 2)
        );
    }

    #[test]
    fn reduces_radicands() {
        assert_eq!(QuadSurd::sqrt(8), QuadSurd::new(r(0, 1), r(2, 1), 2));
        assert_eq!(QuadSurd::sqrt(9), QuadSurd::from_integer(3));
        assert!(QuadSurd::sqrt(0).is_zero());
        assert!(QuadSurd::parse("sqrt(4) / 2").unwrap().is_integer());
    }

    #[test]
    fn rejects_outside_the_grammar() {
        assert!(QuadSurd::parse("sqrt(2) + sqrt(3)").is_err());
        assert!(QuadSurd::parse("1/0").is_err());
        assert!(QuadSurd::parse("x").is_err());
        assert!(QuadSurd::parse("1/sqrt(2)").is_err());
        assert!(QuadSurd::parse("2 3").is_err());
    }

    #[test]
    fn arithmetic_in_one_field() {
        let a = QuadSurd::parse("1 + sqrt(2)").unwrap();
        let b = QuadSurd::parse("1 - sqrt(2)").unwrap();
        assert_eq!(a.checked_mul(&b).unwrap(), QuadSurd::from_integer(-1));
        assert!(a.checked_mul(&QuadSurd::sqrt(3)).is_none());
        assert_eq!(a.checked_sub(&a).unwrap(), QuadSurd::from_integer(0));
    }

    #[test]
    fn exact_sign() {
        assert_eq!(QuadSurd::parse("3/2 - sqrt(2)").unwrap().signum(), 1);
        assert_eq!(QuadSurd::parse("7/5 - sqrt(2)").unwrap().signum(), -1);
        assert_eq!(QuadSurd::parse("-2 + sqrt(2)").unwrap().signum(), -1);
        assert_eq!(QuadSurd::from_integer(0).signum(), 0);
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "1/2",
            "sqrt(2)",
            "1/3*sqrt(2)",
            "1/2 + 3/4*sqrt(5)",
            "1 - sqrt(3)",
            "-7",
        ] {
            let q = QuadSurd::parse(s).unwrap();
            assert_eq!(QuadSurd::parse(&q.to_string()).unwrap(), q, "{s}");
        }
    }

    #[test]
    fn real_parsing_modes() {
        assert!(Real::parse("2").unwrap().exact_form().is_some());
        assert!(Real::parse("-2").unwrap().exact_form().is_some());
        assert!(Real::parse("0.5").unwrap().exact_form().is_none());
        assert!(Real::parse("1e-3").unwrap().exact_form().is_none());
        assert!(Real::parse("nan").is_err());
        let v = Real::parse("sqrt(2)/3").unwrap();
        assert!((v.value() - 2f64.sqrt() / 3.0).abs() < 1e-16);
    }

    #[test]
    fn integrality() {
        assert!(Real::float(3.0000000001).unwrap().is_integer(1e-9));
        assert!(!Real::float(3.001).unwrap().is_integer(1e-9));
        assert!(!Real::exact(QuadSurd::sqrt(2)).is_integer(1e-9));
    }

    #[test]
    fn lcm_of_denominators_works() {
        assert_eq!(lcm_of_denominators(&[r(1, 2), r(3, 4)]), 4);
        assert_eq!(lcm_of_denominators(&[r(1, 6), r(1, 4)]), 12);
        assert_eq!(lcm_of_denominators(&[]), 1);
    }
}
