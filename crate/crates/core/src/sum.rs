//! Compensated summation.
//!
//! Long log-domain accumulations (orbit products with 10^6 factors) lose the
//! slow drift signal under naive summation; every ledger in this crate goes
//! through [`NeumaierSum`].

use num_complex::Complex64;
use std::ops::AddAssign;

/// Kahan-Babuska-Neumaier running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sum(&self) -> f64 {
        self.s + self.c
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        let s = self.s + rhs;
        if self.s.abs() >= rhs.abs() {
            self.c += (self.s - s) + rhs;
        } else {
            self.c += (rhs - s) + self.s;
        }
        self.s = s;
    }
}

/// Compensated sum of a real sequence.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in values {
        acc += v;
    }
    acc.sum()
}

/// Compensated sum of a complex sequence, real and imaginary parts separately.
pub fn compensated_sum_complex<I: IntoIterator<Item = Complex64>>(values: I) -> Complex64 {
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for v in values {
        re += v.re;
        im += v.im;
    }
    Complex64::new(re.sum(), im.sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_next_to_large_ones() {
        let v = [1e200, 0.1, 0.2, 0.3, -1e200];
        assert!((compensated_sum(v) - 0.6).abs() < 1e-15);
        // naive summation loses everything
        assert_eq!(v.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn many_small_increments() {
        let mut acc = NeumaierSum::new();
        for _ in 0..1_000_000 {
            acc += 0.1;
        }
        assert!((acc.sum() - 100_000.0).abs() < 1e-9);
    }
}
