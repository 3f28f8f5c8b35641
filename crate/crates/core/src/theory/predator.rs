//! Size of the predator in the last merge of the additive coalescent.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{binomial, pow, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredatorVariant {
    /// `C(m-1,k-1) k^{k-1} (m-k)^{m-k-1} / ((m-1) m^{m-2})`.
    Proof,
    /// `C(m,k) k^{k-1} (m-k)^{m-k-1} (2k-1) / (4 (m-1) m^{m-1})`.
    Statement,
}

/// Probability that the predator of the final merge on `m` sites has size `k`.
pub fn predator_law(m: u64, k: u64, variant: PredatorVariant) -> Result<Rational> {
    if m < 2 || k == 0 || k >= m {
        return Err(Error::Domain(format!("predator_law needs m >= 2 and 1 <= k <= m-1; got m={m}, k={k}")));
    }
    let core = pow(k, k - 1) * pow(m - k, m - k - 1);
    Ok(match variant {
        PredatorVariant::Proof => Rational::new(binomial(m - 1, k - 1) * core, BigInt::from(m - 1) * pow(m, m - 2)),
        PredatorVariant::Statement => Rational::new(
            binomial(m, k) * core * BigInt::from(2 * k - 1),
            BigInt::from(4 * (m - 1)) * pow(m, m - 1),
        ),
    })
}

pub fn predator_law_f64(m: u64, k: u64, variant: PredatorVariant) -> Result<f64> {
    predator_law(m, k, variant).map(|p| to_f64(&p))
}

/// `k^{k-1} e^{-k} / k!`, the limiting law of the last prey's size.
pub fn prey_limit_pmf(k: u64) -> Result<f64> {
    super::borel::borel_pmf(1.0, k)
}
