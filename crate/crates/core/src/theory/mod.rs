//! Closed-form limit objects and their exact or high-precision evaluation.

use std::fmt;

pub mod borel;
pub mod cost;
pub mod phi;
pub mod precision;
pub mod predator;
pub mod quadrature;
pub mod xi;

pub use borel::{borel_moment, borel_pmf, profile_series, smoluchowski_q, SeriesSum};
pub use cost::{h_cost, zeta, CostVariant};
pub use phi::{phi, phi_integral, PhiIntegral};
pub use precision::{Decimal, Surd};
pub use predator::{predator_law, predator_law_f64, prey_limit_pmf, PredatorVariant};
pub use xi::{cost_moment, cost_scaling_constant, xi_abar, xi_abar_sequence, xi_moment, AlgebraicScalar};

use crate::exact::Rational;

/// Significant digits carried by [`TheoryValue::digits`].
pub const THEORY_DIGITS: u32 = 55;

/// Exact part of a [`TheoryValue`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exact {
    Rational(Rational),
    Surd(Surd),
}

/// A theoretical constant: exact form, a correctly rounded `f64`, and a long
/// decimal rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryValue {
    pub exact: Exact,
    pub approx: f64,
    pub digits: Decimal,
}

impl TheoryValue {
    pub fn from_surd(value: Surd) -> Self {
        let digits = value.to_decimal(THEORY_DIGITS);
        TheoryValue {
            approx: digits.to_f64(),
            digits,
            exact: Exact::Surd(value),
        }
    }

    pub fn from_rational(value: Rational) -> Self {
        let mut tv = TheoryValue::from_surd(Surd::rational(value.clone()));
        tv.exact = Exact::Rational(value);
        tv
    }
}

impl fmt::Display for TheoryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Exact::Rational(r) => write!(f, "{r} = {}", self.digits),
            Exact::Surd(s) => write!(f, "{s} = {}", self.digits),
        }
    }
}
