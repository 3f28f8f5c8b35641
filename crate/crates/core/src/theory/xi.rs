//! Moments of the limit law of the rescaled total cost.
//!
//! `C_{n,n-1} / n^{5/2}` converges to `(sqrt 2 / 6) xi`, where
//! `E(xi^k) = k! sqrt(pi) abar_k / (2^{(7k-2)/2} Gamma((5k-1)/2))` and
//! `abar_k = 2(5k-6)(5k-4) abar_{k-1} + sum_{j=1}^{k-1} abar_j abar_{k-j}`,
//! `abar_1 = sqrt 2`. The sequence lives in `Z[sqrt 2]`; the Gamma factor at
//! half-integers is a rational multiple of `sqrt(pi)`, so every moment is an
//! exact [`Surd`].

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::Signed;

use super::precision::Surd;
use super::TheoryValue;
use crate::exact::{pow, Rational};

/// `a + b sqrt 2` with integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicScalar {
    pub a: BigInt,
    pub b: BigInt,
}

impl AlgebraicScalar {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        AlgebraicScalar { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        AlgebraicScalar::new(0, 0)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        AlgebraicScalar {
            a: &self.a * factor,
            b: &self.b * factor,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.a.is_negative() && !self.b.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        crate::exact::to_f64(&Rational::from_integer(self.a.clone()))
            + crate::exact::to_f64(&Rational::from_integer(self.b.clone())) * std::f64::consts::SQRT_2
    }
}

impl Add for &AlgebraicScalar {
    type Output = AlgebraicScalar;

    fn add(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        AlgebraicScalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Mul for &AlgebraicScalar {
    type Output = AlgebraicScalar;

    fn mul(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        AlgebraicScalar {
            a: &self.a * &rhs.a + BigInt::from(2) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl fmt::Display for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(2)", self.a, self.b)
    }
}

/// `abar_1 ..= abar_k`.
pub fn xi_abar_sequence(k: usize) -> Vec<AlgebraicScalar> {
    let mut seq: Vec<AlgebraicScalar> = Vec::with_capacity(k);
    if k == 0 {
        return seq;
    }
    seq.push(AlgebraicScalar::new(0, 1));
    for order in 2..=k as i64 {
        let coeff = BigInt::from(2 * (5 * order - 6) * (5 * order - 4));
        let mut next = seq[order as usize - 2].scale(&coeff);
        for j in 1..order as usize {
            next = &next + &(&seq[j - 1] * &seq[order as usize - j - 1]);
        }
        seq.push(next);
    }
    seq
}

pub fn xi_abar(k: usize) -> AlgebraicScalar {
    assert!(k >= 1, "abar is indexed from 1");
    xi_abar_sequence(k).pop().expect("k >= 1")
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// Exact `E(xi^k)`.
pub fn xi_moment_exact(k: usize) -> Surd {
    assert!(k >= 1, "moments are indexed from 1");
    let abar = xi_abar(k);
    let k = k as u64;
    let k_fact = factorial(k);
    if k % 2 == 1 {
        // Gamma((5k-1)/2) = ((5k-3)/2)!, 2^{(7k-2)/2} = 2^{(7k-3)/2} sqrt 2
        let gamma = factorial((5 * k - 3) / 2);
        let c = Rational::new(k_fact, pow(2, (7 * k - 3) / 2) * gamma);
        // (a + b sqrt 2) / sqrt 2 = b + (a/2) sqrt 2
        Surd {
            rational: Rational::from_integer(abar.b) * &c,
            sqrt2: Rational::new(abar.a, BigInt::from(2)) * &c,
            with_sqrt_pi: true,
        }
    } else {
        // Gamma(h + 1/2) = (2h)! sqrt(pi) / (4^h h!) with h = (5k-2)/2
        let h = (5 * k - 2) / 2;
        let c = Rational::new(k_fact * pow(4, h) * factorial(h), pow(2, (7 * k - 2) / 2) * factorial(2 * h));
        Surd {
            rational: Rational::from_integer(abar.a) * &c,
            sqrt2: Rational::from_integer(abar.b) * &c,
            with_sqrt_pi: false,
        }
    }
}

/// `E(xi^k)` with a high-precision rendering.
pub fn xi_moment(k: usize) -> TheoryValue {
    TheoryValue::from_surd(xi_moment_exact(k))
}

/// Exact `E[((sqrt 2 / 6) xi)^k]`, the limit of `E[(C_{n,n-1} / n^{5/2})^k]`.
pub fn cost_moment_exact(k: usize) -> Surd {
    let mut value = xi_moment_exact(k);
    for _ in 0..k {
        value = value.times_sqrt2();
    }
    value.scale(&Rational::new(1.into(), pow(6, k as u64)))
}

pub fn cost_moment(k: usize) -> TheoryValue {
    TheoryValue::from_surd(cost_moment_exact(k))
}

/// `(sqrt 2 / 6) E(xi)`, the limit of `E[C_{n,n-1}] / n^{5/2}`.
pub fn cost_scaling_constant() -> TheoryValue {
    cost_moment(1)
}
