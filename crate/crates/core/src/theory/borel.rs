//! Borel law and the additive-kernel Smoluchowski profile.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Upper bound on series terms evaluated by the tail-controlled sums.
pub const MAX_SERIES_TERMS: usize = 10_000_000;

/// `P(B_a = k) = (k a)^{k-1} e^{-k a} / k!`.
pub fn borel_pmf(a: f64, k: u64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) || k == 0 {
        return Err(Error::Domain(format!("borel_pmf needs a in (0,1], k >= 1; got a={a}, k={k}")));
    }
    let k = k as f64;
    Ok(((k - 1.0) * (k * a).ln() - k * a - ln_gamma(k + 1.0)).exp())
}

/// Raw moments `E[B_a^j]` for `j = 1, 2, 3`.
pub fn borel_moment(a: f64, order: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::Domain(format!("borel_moment needs a in [0,1), got {a}")));
    }
    let b = 1.0 - a;
    match order {
        1 => Ok(1.0 / b),
        2 => Ok(1.0 / b.powi(3)),
        3 => Ok((2.0 * a + 1.0) / b.powi(5)),
        _ => Err(Error::Domain(format!("borel_moment order must be 1..=3, got {order}"))),
    }
}

/// `q(k,t) = [k(1 - e^{-t})]^{k-1} e^{-t} exp(-k(1 - e^{-t})) / k!`.
pub fn smoluchowski_q(k: u64, t: f64) -> Result<f64> {
    if k == 0 || !(t >= 0.0) {
        return Err(Error::Domain(format!("q(k,t) needs k >= 1, t >= 0; got k={k}, t={t}")));
    }
    let a = -(-t).exp_m1();
    if k == 1 {
        return Ok((-t - a).exp());
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let kf = k as f64;
    Ok(((kf - 1.0) * (kf * a).ln() - t - kf * a - ln_gamma(kf + 1.0)).exp())
}

/// A truncated series together with a rigorous bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `sum_k w(k) q(k, t)` for a polynomial weight of degree `degree` that is
/// nonnegative and has `w(k+1)/w(k)` nonincreasing for `k >= 2`. At least
/// `min_terms` terms are summed; summation continues until the bound on the
/// remaining tail is below `tail_tol`.
///
/// The ratio `q(k+1)/q(k) = a e^{-a} (1 + 1/k)^{k-1}` increases to
/// `rho = a e^{1-a} < 1`, so beyond `K` the tail is dominated by a geometric
/// series with ratio `rho * w(K+1)/w(K)`.
pub fn profile_series(
    t: f64,
    weight: impl Fn(u64) -> f64,
    min_terms: usize,
    tail_tol: f64,
) -> SeriesSum {
    let a = -(-t).exp_m1();
    let mut q = (-t - a).exp();
    if a == 0.0 {
        return SeriesSum {
            value: weight(1) * q,
            tail_bound: 0.0,
            terms: 1,
        };
    }
    let rho = a * (1.0 - a).exp();
    let step = a * (-a).exp();
    let mut value = 0.0;
    let mut k = 1u64;
    loop {
        let term = weight(k) * q;
        value += term;
        if k as usize >= min_terms.max(2) {
            let growth = if weight(k) > 0.0 { weight(k + 1) / weight(k) } else { f64::INFINITY };
            let r = rho * growth;
            if r < 1.0 {
                let next_q = q * step * (1.0 + 1.0 / k as f64).powf(k as f64 - 1.0);
                let tail_bound = weight(k + 1) * next_q / (1.0 - r);
                if tail_bound <= tail_tol || k as usize >= MAX_SERIES_TERMS {
                    return SeriesSum {
                        value,
                        tail_bound,
                        terms: k as usize,
                    };
                }
            } else if k as usize >= MAX_SERIES_TERMS {
                return SeriesSum {
                    value,
                    tail_bound: f64::INFINITY,
                    terms: k as usize,
                };
            }
        }
        q *= step * (1.0 + 1.0 / k as f64).powf(k as f64 - 1.0);
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_values() {
        assert!((borel_pmf(0.5, 1).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!((borel_pmf(1.0, 1).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert!(borel_pmf(0.0, 1).is_err());
        assert!(borel_pmf(1.5, 1).is_err());
        assert!(borel_pmf(0.5, 0).is_err());
    }

    #[test]
    fn pmf_normalizes() {
        for a in [0.1, 0.5, 0.8, 0.95] {
            // q(k,t) = (1 - a) P(B_a = k) with t = -ln(1 - a)
            let t = -(1.0f64 - a).ln();
            let s = profile_series(t, |_| 1.0, 1, 1e-16);
            let total = s.value / (1.0 - a);
            assert!((total - 1.0).abs() < 1e-12, "a={a}: {total}");
            let direct: f64 = (1..=2000).map(|k| borel_pmf(a, k).unwrap()).sum();
            if a <= 0.8 {
                assert!((direct - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn moments() {
        assert_eq!(borel_moment(0.5, 3).unwrap(), 64.0);
        assert_eq!(borel_moment(0.0, 1).unwrap(), 1.0);
        assert!((borel_moment(1e-12, 1).unwrap() - 1.0).abs() < 1e-11);
        assert!(borel_moment(1.0, 1).is_err());
        assert!(borel_moment(0.5, 4).is_err());
        for a in [0.2, 0.6] {
            let mean: f64 = (1..=3000u64).map(|k| k as f64 * borel_pmf(a, k).unwrap()).sum();
            let m2: f64 = (1..=3000u64).map(|k| (k * k) as f64 * borel_pmf(a, k).unwrap()).sum();
            let m3: f64 = (1..=3000u64).map(|k| (k * k * k) as f64 * borel_pmf(a, k).unwrap()).sum();
            assert!((mean - borel_moment(a, 1).unwrap()).abs() < 1e-10);
            assert!((m2 - borel_moment(a, 2).unwrap()).abs() < 1e-9);
            assert!((m3 - borel_moment(a, 3).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn profile_values() {
        assert_eq!(smoluchowski_q(1, 0.0).unwrap(), 1.0);
        assert_eq!(smoluchowski_q(2, 0.0).unwrap(), 0.0);
        assert!((smoluchowski_q(1, 2f64.ln()).unwrap() - 0.5 * (-0.5f64).exp()).abs() < 1e-15);
        assert!(smoluchowski_q(0, 1.0).is_err());
        assert!(smoluchowski_q(1, -1.0).is_err());
        for t in [0.3, 1.0, 2.0] {
            let a = 1.0 - (-t as f64).exp();
            for k in [1, 2, 5, 40] {
                let q = smoluchowski_q(k, t).unwrap();
                assert!((q - (1.0 - a) * borel_pmf(a, k).unwrap()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn profile_mass_and_moments() {
        for t in [0.0, 0.1, 0.5, 1.0, 2.0] {
            let zeroth = profile_series(t, |_| 1.0, 1, 1e-16);
            let first = profile_series(t, |k| k as f64, 1, 1e-16);
            assert!((zeroth.value - (-t as f64).exp()).abs() < 1e-10);
            assert!((first.value - 1.0).abs() < 1e-10);
        }
        for t in [0.1, 0.5, 1.0] {
            let s = profile_series(t, |k| (k * k * k - k) as f64, 1, 1e-12);
            let expected = 3.0 * (4.0 * t).exp() - 2.0 * (3.0 * t).exp() - 1.0;
            assert!((s.value - expected).abs() < 1e-8, "t={t}: {} vs {expected}", s.value);
        }
    }
}
