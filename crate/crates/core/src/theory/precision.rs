//! Fixed-point evaluation of `(p + q sqrt 2) * sqrt(pi)^e` to many digits.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use crate::exact::{to_f64, Rational};

/// `10^digits`.
fn ten_pow(digits: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), digits as usize)
}

/// `round_down(pi * 10^digits)` by Machin's formula.
pub fn pi_scaled(digits: u32) -> BigInt {
    let guard = 10;
    let scale = ten_pow(digits + guard);
    let pi = BigInt::from(16) * arctan_inv(5, &scale) - BigInt::from(4) * arctan_inv(239, &scale);
    pi / ten_pow(guard)
}

/// `arctan(1/x) * scale`.
fn arctan_inv(x: u64, scale: &BigInt) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut power = scale / BigInt::from(x);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// Exact number of the form `(rational + sqrt2 * sqrt 2) * sqrt(pi)^[with_sqrt_pi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub rational: Rational,
    pub sqrt2: Rational,
    pub with_sqrt_pi: bool,
}

impl Surd {
    pub fn rational(value: Rational) -> Self {
        Surd {
            rational: value,
            sqrt2: Rational::zero(),
            with_sqrt_pi: false,
        }
    }

    /// Multiplies by `sqrt 2`.
    pub fn times_sqrt2(&self) -> Self {
        Surd {
            rational: &self.sqrt2 * Rational::from_integer(2.into()),
            sqrt2: self.rational.clone(),
            with_sqrt_pi: self.with_sqrt_pi,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Surd {
            rational: &self.rational * factor,
            sqrt2: &self.sqrt2 * factor,
            with_sqrt_pi: self.with_sqrt_pi,
        }
    }

    fn approx(&self) -> f64 {
        let base = to_f64(&self.rational) + to_f64(&self.sqrt2) * std::f64::consts::SQRT_2;
        if self.with_sqrt_pi {
            base * std::f64::consts::PI.sqrt()
        } else {
            base
        }
    }

    /// Decimal expansion with at least `significant` correct leading digits.
    pub fn to_decimal(&self, significant: u32) -> Decimal {
        let magnitude = self.approx().abs();
        let exponent = if magnitude > 0.0 && magnitude.is_finite() {
            magnitude.log10().floor() as i64
        } else {
            0
        };
        let frac_digits = (significant as i64 + 12 - exponent).max(12) as u32;
        let work = frac_digits + 8;
        let scale = ten_pow(work);
        let sqrt2 = (BigInt::from(2) * &scale * &scale).sqrt();
        let fixed = |r: &Rational| -> BigInt { r.numer() * &scale / r.denom() };
        let mut value = fixed(&self.rational) + fixed(&self.sqrt2) * &sqrt2 / &scale;
        if self.with_sqrt_pi {
            let sqrt_pi = (pi_scaled(work) * &scale).sqrt();
            value = value * sqrt_pi / &scale;
        }
        Decimal {
            mantissa: value / ten_pow(work - frac_digits),
            frac_digits,
            significant,
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.rational.is_zero() {
            parts.push(self.rational.to_string());
        }
        if !self.sqrt2.is_zero() {
            parts.push(format!("{}*sqrt(2)", self.sqrt2));
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if self.with_sqrt_pi {
            write!(f, "({body})*sqrt(pi)")
        } else {
            write!(f, "{body}")
        }
    }
}

/// Fixed-point decimal `mantissa / 10^frac_digits`, truncated toward zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    mantissa: BigInt,
    frac_digits: u32,
    significant: u32,
}

impl Decimal {
    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Decimal {
    /// Scientific notation with `significant` digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa.is_zero() {
            return write!(f, "0");
        }
        let sign = if self.mantissa.sign() == Sign::Minus { "-" } else { "" };
        let digits = self.mantissa.abs().to_string();
        let exponent = digits.len() as i64 - 1 - self.frac_digits as i64;
        let keep = (self.significant as usize).min(digits.len());
        let (head, tail) = digits[..keep].split_at(1);
        write!(f, "{sign}{head}.{tail}e{exponent}")
    }
}
