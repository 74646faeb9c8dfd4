//! Rational functions with complex coefficients in a formal variable `T`.

use num_complex::Complex64;
use serde::Serialize;

/// `numerator / denominator`, coefficients in ascending powers of `T`, with
/// the denominator scaled to be monic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalFn {
    numerator: Vec<Complex64>,
    denominator: Vec<Complex64>,
}

fn trim(mut p: Vec<Complex64>) -> Vec<Complex64> {
    while p.len() > 1 && p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_eval(p: &[Complex64], t: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
}

impl RationalFn {
    /// Panics if the denominator is the zero polynomial.
    pub fn new(numerator: Vec<Complex64>, denominator: Vec<Complex64>) -> RationalFn {
        let numerator = trim(numerator);
        let denominator = trim(denominator);
        let lead = *denominator.last().expect("denominator has coefficients");
        assert!(lead.norm() > 0.0, "zero denominator");
        RationalFn {
            numerator: numerator.iter().map(|c| c / lead).collect(),
            denominator: denominator.iter().map(|c| c / lead).collect(),
        }
    }

    pub fn constant(c: Complex64) -> RationalFn {
        RationalFn::new(vec![c], vec![Complex64::new(1.0, 0.0)])
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.denominator
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        RationalFn::new(
            poly_mul(&self.numerator, &other.numerator),
            poly_mul(&self.denominator, &other.denominator),
        )
    }

    pub fn scale(&self, c: Complex64) -> RationalFn {
        RationalFn::new(self.numerator.iter().map(|x| x * c).collect(), self.denominator.clone())
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        poly_eval(&self.numerator, t) / poly_eval(&self.denominator, t)
    }

    /// Value at `T = q0^{-s}`.
    pub fn eval_at_s(&self, q0: f64, s: Complex64) -> Complex64 {
        self.eval((-s * q0.ln()).exp())
    }

    /// `T ↦ T^k`.
    pub fn substitute_power(&self, k: usize) -> RationalFn {
        let spread = |p: &[Complex64]| {
            let mut out = vec![Complex64::new(0.0, 0.0); (p.len() - 1) * k + 1];
            for (i, c) in p.iter().enumerate() {
                out[i * k] = *c;
            }
            out
        };
        RationalFn::new(spread(&self.numerator), spread(&self.denominator))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn arithmetic() {
        // (1 + T) / (2 - T)
        let f = RationalFn::new(vec![c(1.0), c(1.0)], vec![c(2.0), c(-1.0)]);
        assert_eq!(f.denominator().last(), Some(&c(1.0)));
        let t = Complex64::new(0.3, 0.1);
        assert!((f.eval(t) - (1.0 + t) / (2.0 - t)).norm() < 1e-14);
        let g = f.mul(&f).substitute_power(3);
        let t3 = t * t * t;
        assert!((g.eval(t) - ((1.0 + t3) / (2.0 - t3)).powu(2)).norm() < 1e-12);
        assert!((f.scale(c(2.0)).eval(t) - 2.0 * f.eval(t)).norm() < 1e-14);
        assert!((f.eval_at_s(4.0, c(0.5)) - f.eval(c(0.5))).norm() < 1e-14);
        assert_eq!(RationalFn::constant(c(3.0)).eval(t), c(3.0));
    }
}
