//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored in ascending degree order and the representation
//! is canonical: the zero polynomial has no coefficients, otherwise the last
//! coefficient is nonzero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

/// Exact rational from a small integer fraction.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binary value of a finite double.
pub fn exact_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

impl RationalPolynomial {
    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `a + b·x`
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Self::from_coeffs(vec![a, b])
    }

    /// Build from ascending coefficients; trailing zeros are stripped.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| ratio(c, 1)).collect())
    }

    /// Exact polynomial whose coefficients are the binary values of `coeffs`.
    pub fn from_f64(coeffs: &[f64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| exact_from_f64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        // homogeneous Horner over integers, normalized once at the end
        let Some(last) = self.coeffs.last() else {
            return BigRational::zero();
        };
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let (p, q) = (x.numer(), x.denom());
        let mut acc = last.numer() * (&lcm / last.denom());
        let mut q_pow = BigInt::one();
        for c in self.coeffs.iter().rev().skip(1) {
            q_pow *= q;
            acc = acc * p + c.numer() * (&lcm / c.denom()) * &q_pow;
        }
        BigRational::new(acc, lcm * q_pow)
    }

    /// Evaluate exactly at the binary value of `x`, then round once.
    pub fn eval_at_f64(&self, x: f64) -> f64 {
        to_f64(&self.eval(&exact_from_f64(x)))
    }

    /// Floating-point Horner evaluation on rounded coefficients.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Positive multiple of `self` with coprime integer coefficients.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})x")?,
                _ => write!(f, "({a})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        RationalPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        RationalPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::from_coeffs(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_strips_trailing_zeros() {
        let p = RationalPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(RationalPolynomial::from_i64(&[0, 0]).is_zero());
        assert_eq!(RationalPolynomial::zero().degree(), None);
    }

    #[test]
    fn product_and_derivative() {
        // (1 + x)(1 - x) = 1 - x²
        let a = RationalPolynomial::from_i64(&[1, 1]);
        let b = RationalPolynomial::from_i64(&[1, -1]);
        let p = &a * &b;
        assert_eq!(p, RationalPolynomial::from_i64(&[1, 0, -1]));
        assert_eq!(p.derivative(), RationalPolynomial::from_i64(&[0, -2]));
        assert_eq!(&p - &p, RationalPolynomial::zero());
    }

    #[test]
    fn primitive_integer_clears_denominators() {
        let p = RationalPolynomial::from_coeffs(vec![ratio(1, 2), ratio(-3, 4), ratio(3, 2)]);
        let ints: Vec<i64> = p.primitive_integer().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(ints, vec![2, -3, 6]);
        let q = RationalPolynomial::from_i64(&[4, 8, -12]);
        let ints: Vec<i64> = q.primitive_integer().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(ints, vec![1, 2, -3]);
        let neg = RationalPolynomial::from_i64(&[-2, -4]);
        let ints: Vec<i64> = neg.primitive_integer().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(ints, vec![-1, -2]);
    }

    #[test]
    fn display() {
        let p = RationalPolynomial::from_coeffs(vec![ratio(-1, 2), ratio(0, 1), ratio(3, 1)]);
        assert_eq!(p.to_string(), "(3)x^2 - 1/2");
    }

    fn small_poly() -> impl Strategy<Value = RationalPolynomial> {
        prop::collection::vec((-20i64..20, 1i64..9), 0..6).prop_map(|v| {
            RationalPolynomial::from_coeffs(v.into_iter().map(|(a, b)| ratio(a, b)).collect())
        })
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(a in small_poly(), b in small_poly(), x in (-9i64..9, 1i64..5)) {
            let x = ratio(x.0, x.1);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        }

        #[test]
        fn f64_coefficients_round_trip_exactly(v in prop::collection::vec(-1e6f64..1e6, 1..8)) {
            let p = RationalPolynomial::from_f64(&v);
            let mut back = p.to_f64_coeffs();
            back.resize(v.len(), 0.0);
            prop_assert_eq!(back, v);
        }
    }
}
