//! Per-merge cost functions of the coagulation picture.

use num_traits::Zero;

use crate::exact::Rational;
use crate::walk::{validated_second_moment, SecondMomentForm};

/// `zeta(x, y) = ((x^3 + y^3)/(x + y) - 1)/6`, the mean movement of a merge.
pub fn zeta(x: u64, y: u64) -> Rational {
    assert!(x >= 1 && y >= 1, "cluster sizes start at 1");
    let (x, y) = (Rational::from_integer(x.into()), Rational::from_integer(y.into()));
    let one = Rational::from_integer(1.into());
    ((&x * &x * &x + &y * &y * &y) / (&x + &y) - one) / Rational::from_integer(6.into())
}

/// Which second-moment formula feeds [`h_cost`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostVariant {
    /// `(s^2 - 1)(3 s^2 - 7)/45` as printed.
    Printed,
    /// The form that matches the exact first-passage oracle.
    Validated,
}

/// `h(x, y) = (x m2(x) + y m2(y)) / (x + y)` where `m2(s)` is the second
/// moment of the walk length started uniformly on a cluster of size `s`.
pub fn h_cost(x: u64, y: u64, variant: CostVariant) -> Rational {
    assert!(x >= 1 && y >= 1, "cluster sizes start at 1");
    let moment = |s: u64| match variant {
        CostVariant::Printed => SecondMomentForm::Printed.eval(s),
        CostVariant::Validated => validated_second_moment(s),
    };
    let weighted = |s: u64| Rational::from_integer(s.into()) * moment(s);
    let total = weighted(x) + weighted(y);
    if total.is_zero() {
        return total;
    }
    total / Rational::from_integer((x + y).into())
}
