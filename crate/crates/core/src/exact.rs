//! Small helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn uint(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Nearest `f64` to a rational, including ones whose numerator and
/// denominator overflow `f64` individually.
pub fn to_f64(value: &Rational) -> f64 {
    if let Some(v) = value.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let numer = value.numer();
    let denom = value.denom();
    let shift = numer.bits() as i64 - denom.bits() as i64;
    // scale so the quotient carries ~64 significant bits
    let scale = 64 - shift;
    let q: BigInt = if scale >= 0 {
        (numer << scale as usize) / denom
    } else {
        numer / (denom << (-scale) as usize)
    };
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-scale as i32)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_ratio_converts() {
        let big = Rational::new(pow(3, 2000) * BigInt::from(5), pow(3, 2000) * BigInt::from(4));
        assert_eq!(to_f64(&big), 1.25);
        assert_eq!(to_f64(&rat(1, 3)), 1.0 / 3.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(40, 20), BigInt::from(137846528820u64));
    }
}
