use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::exact::{one, zero, Rational};

/// A finite probability law with exact rational weights.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactLaw<T: Ord> {
    probs: BTreeMap<T, Rational>,
}

impl<T: Ord> Default for ExactLaw<T> {
    fn default() -> Self {
        ExactLaw { probs: BTreeMap::new() }
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for ExactLaw<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.probs.iter().map(|(k, v)| (k, v.to_string())))
            .finish()
    }
}

impl<T: Ord> ExactLaw<T> {
    pub fn point(outcome: T) -> Self {
        let mut law = ExactLaw::default();
        law.add(outcome, one());
        law
    }

    /// Adds `weight` to the mass of `outcome`. Zero weights are dropped.
    pub fn add(&mut self, outcome: T, weight: Rational) {
        if weight.is_zero() {
            return;
        }
        let slot = self.probs.entry(outcome).or_insert_with(zero);
        *slot += weight;
    }

    pub fn prob(&self, outcome: &T) -> Rational {
        self.probs.get(outcome).cloned().unwrap_or_else(zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Rational)> {
        self.probs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.probs.keys()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.probs.values().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total() == one() && self.probs.values().all(|p| !p.is_negative())
    }

    /// Image law under `f`.
    pub fn map<U: Ord>(&self, mut f: impl FnMut(&T) -> U) -> ExactLaw<U> {
        let mut out = ExactLaw::default();
        for (k, p) in &self.probs {
            out.add(f(k), p.clone());
        }
        out
    }

    /// Total variation distance `1/2 sum |p - q|`.
    pub fn total_variation(&self, other: &ExactLaw<T>) -> Rational {
        let mut acc = zero();
        for (k, p) in &self.probs {
            acc += (p - other.prob(k)).abs();
        }
        for (k, q) in &other.probs {
            if !self.probs.contains_key(k) {
                acc += q.clone();
            }
        }
        acc / Rational::from_integer(2.into())
    }

    pub fn expectation(&self, mut f: impl FnMut(&T) -> Rational) -> Rational {
        self.probs.iter().map(|(k, p)| f(k) * p).sum()
    }
}
