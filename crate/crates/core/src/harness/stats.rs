//! Moment estimates with jackknife standard errors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub order: u32,
    pub estimate: f64,
    pub se: f64,
    pub reps: usize,
}

/// `k`-th raw moment of `samples` with its delete-one jackknife standard error.
pub fn estimate_moment(samples: &[f64], k: u32) -> Result<MomentEstimate> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let powers: Vec<f64> = samples.iter().map(|x| x.powi(k as i32)).collect();
    let total: f64 = powers.iter().sum();
    let estimate = total / n as f64;
    let nf = n as f64;
    let leave_one_out = powers.iter().map(|p| (total - p) / (nf - 1.0));
    let spread: f64 = leave_one_out.map(|t| (t - estimate).powi(2)).sum();
    Ok(MomentEstimate {
        order: k,
        estimate,
        se: ((nf - 1.0) / nf * spread).sqrt(),
        reps: n,
    })
}

/// Sample mean and its standard error.
pub fn mean_se(samples: &[f64]) -> Result<(f64, f64)> {
    estimate_moment(samples, 1).map(|m| (m.estimate, m.se))
}
