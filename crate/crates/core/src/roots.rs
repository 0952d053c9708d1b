//! Roots of unity with exact octant reduction.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// `e^{-2πi·num/den}`.
///
/// The argument is reduced modulo `den` in integers and folded into the first
/// octant before any transcendental call, so quarter turns come out exact and
/// the phase never drifts with the size of `num`.
pub fn cis_turns(num: i64, den: i64) -> Complex64 {
    assert!(den > 0, "denominator must be positive");
    let den = den as i128;
    let r = (num as i128).rem_euclid(den);
    let four_r = 4 * r;
    let quadrant = four_r / den;
    let rest = four_r - quadrant * den;
    let (c, s) = if 2 * rest <= den {
        let theta = FRAC_PI_2 * (rest as f64 / den as f64);
        (theta.cos(), theta.sin())
    } else {
        let phi = FRAC_PI_2 * ((den - rest) as f64 / den as f64);
        (phi.sin(), phi.cos())
    };
    let (re, im) = match quadrant {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    // e^{+iθ} computed above; the convention here is e^{-iθ}
    Complex64::new(re, -im)
}

/// Table of `e^{-2πik/q}` for `k = 0..q`.
#[derive(Debug, Clone)]
pub struct RootsOfUnity {
    table: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(q: usize) -> Self {
        assert!(q > 0);
        let table = (0..q).map(|k| cis_turns(k as i64, q as i64)).collect();
        Self { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    /// `e^{-2πik/q}` for any integer `k`.
    #[inline]
    pub fn get(&self, k: i64) -> Complex64 {
        let q = self.table.len() as i64;
        self.table[k.rem_euclid(q) as usize]
    }
}
