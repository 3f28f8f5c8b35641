//! The limiting concentration curve `phi(alpha) = lim C_{n, alpha n} / n`.

use super::borel::profile_series;
use super::quadrature::{integrate, Quadrature};
use crate::error::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in [0, 1), got {alpha}")))
    }
}

/// `alpha^2 (alpha^2 - 3 alpha + 3) / (6 (1 - alpha)^3)`.
pub fn phi(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let b = 1.0 - alpha;
    Ok(alpha * alpha * (alpha * alpha - 3.0 * alpha + 3.0) / (6.0 * b * b * b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiIntegral {
    pub value: f64,
    /// Error estimate of the quadrature rule.
    pub quadrature_error: f64,
    /// Bound on the contribution of the truncated series tails.
    pub truncation_bound: f64,
    /// Largest number of series terms used at any node.
    pub max_terms: usize,
    pub converged: bool,
}

impl PhiIntegral {
    pub fn error_bound(&self) -> f64 {
        self.quadrature_error + self.truncation_bound
    }
}

/// `(1/6) int_0^{ln(1/(1-alpha))} <q(.,t), x^3 - x> <q(.,t), 1> dt` with both
/// pairings evaluated as series.
///
/// Every series uses at least `series_cutoff` terms and is extended until its
/// tail bound is negligible against `quadrature_tol`.
pub fn phi_integral(alpha: f64, series_cutoff: usize, quadrature_tol: f64) -> Result<PhiIntegral> {
    check_alpha(alpha)?;
    if !(quadrature_tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance must be positive, got {quadrature_tol}")));
    }
    let horizon = -(-alpha).ln_1p();
    if horizon == 0.0 {
        return Ok(PhiIntegral {
            value: 0.0,
            quadrature_error: 0.0,
            truncation_bound: 0.0,
            max_terms: 0,
            converged: true,
        });
    }
    let tail_tol = quadrature_tol * 1e-3;
    let mut truncation = 0.0f64;
    let mut max_terms = 0usize;
    let integrand = |t: f64| {
        let cubic = profile_series(t, |k| (k as f64).powi(3) - k as f64, series_cutoff, tail_tol);
        let mass = profile_series(t, |_| 1.0, series_cutoff, tail_tol * 1e-6);
        // |AB - A'B'| <= |A - A'| B + A' |B - B'| with A >= A', B >= B'
        let point_bound = cubic.tail_bound * (mass.value + mass.tail_bound) + cubic.value * mass.tail_bound;
        truncation = truncation.max(point_bound);
        max_terms = max_terms.max(cubic.terms).max(mass.terms);
        cubic.value * mass.value / 6.0
    };
    let Quadrature { value, error, converged, .. } = integrate(integrand, 0.0, horizon, quadrature_tol, 1e-15);
    Ok(PhiIntegral {
        value,
        quadrature_error: error,
        truncation_bound: truncation * horizon / 6.0,
        max_terms,
        converged,
    })
}
