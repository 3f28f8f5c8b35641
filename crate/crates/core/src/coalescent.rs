//! Marcus-Lushnikov jump chain on cluster-size multisets.
//!
//! The additive chain is the reference process for the ring: pick a
//! predator with probability proportional to its size, then a prey uniformly
//! among the remaining clusters. The multiplicative and constant variants
//! pick both clusters size-biased or both uniformly.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::law::ExactLaw;

/// Largest `n` for the exact partition DP.
pub const MAX_EXACT_N: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Additive,
    Multiplicative,
    Constant,
}

/// Cluster sizes kept sorted in ascending order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeMultiset {
    sizes: Vec<u64>,
}

impl fmt::Debug for SizeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.sizes)
    }
}

impl SizeMultiset {
    pub fn monodisperse(n: usize) -> Self {
        SizeMultiset { sizes: vec![1; n] }
    }

    pub fn from_sizes(mut sizes: Vec<u64>) -> Self {
        sizes.sort_unstable();
        SizeMultiset { sizes }
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn mass(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Merges the clusters at positions `i != j`.
    fn merged(&self, i: usize, j: usize) -> SizeMultiset {
        let mut sizes: Vec<u64> = self
            .sizes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, &s)| s)
            .collect();
        sizes.push(self.sizes[i] + self.sizes[j]);
        SizeMultiset::from_sizes(sizes)
    }

    /// Number of unordered pairs of clusters with sizes `{x, y}`.
    pub fn pair_count(&self, x: u64, y: u64) -> u64 {
        let cx = self.sizes.iter().filter(|&&s| s == x).count() as u64;
        if x == y {
            cx * cx.saturating_sub(1) / 2
        } else {
            cx * self.sizes.iter().filter(|&&s| s == y).count() as u64
        }
    }
}

/// Outcome of one jump: `(predator, prey)` sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Merge {
    pub predator: u64,
    pub prey: u64,
}

fn size_biased<R: RngCore + ?Sized>(sizes: &[u64], skip: Option<usize>, rng: &mut R) -> usize {
    let total: u64 = sizes
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != skip)
        .map(|(_, &s)| s)
        .sum();
    let mut u = rng.random_range(0..total);
    for (i, &s) in sizes.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        if u < s {
            return i;
        }
        u -= s;
    }
    unreachable!("weights exhausted")
}

fn uniform<R: RngCore + ?Sized>(len: usize, skip: Option<usize>, rng: &mut R) -> usize {
    match skip {
        None => rng.random_range(0..len),
        Some(s) => {
            let i = rng.random_range(0..len - 1);
            if i >= s {
                i + 1
            } else {
                i
            }
        }
    }
}

/// Performs one jump of the chain in place.
pub fn ml_step<R: RngCore + ?Sized>(state: &mut SizeMultiset, kernel: KernelKind, rng: &mut R) -> Result<Merge> {
    if state.len() < 2 {
        return Err(Error::TooFewClusters(state.len()));
    }
    let sizes = &state.sizes;
    let (first, second) = match kernel {
        KernelKind::Additive => {
            let p = size_biased(sizes, None, rng);
            (p, uniform(sizes.len(), Some(p), rng))
        }
        KernelKind::Multiplicative => {
            let p = size_biased(sizes, None, rng);
            (p, size_biased(sizes, Some(p), rng))
        }
        KernelKind::Constant => {
            let p = uniform(sizes.len(), None, rng);
            (p, uniform(sizes.len(), Some(p), rng))
        }
    };
    let merge = Merge {
        predator: sizes[first],
        prey: sizes[second],
    };
    *state = state.merged(first, second);
    Ok(merge)
}

/// Probability that a given pair of clusters with sizes `x, y` merges at the
/// next jump of the additive chain when `clusters` clusters are present:
/// `(x + y) / (n (clusters - 1))`.
pub fn pair_merge_prob(x: u64, y: u64, clusters: usize, n: usize) -> Result<Rational> {
    if clusters < 2 {
        return Err(Error::TooFewClusters(clusters));
    }
    if x == 0 || y == 0 || x + y > n as u64 {
        return Err(Error::Domain(format!("pair ({x}, {y}) invalid for n = {n}")));
    }
    Ok(rat((x + y) as i64, (n * (clusters - 1)) as i64))
}

/// Probability that the specific clusters `i` and `j` merge next.
fn pair_weight(state: &SizeMultiset, i: usize, j: usize, kernel: KernelKind) -> Rational {
    let n = state.mass();
    let clusters = state.len();
    let (x, y) = (state.sizes[i], state.sizes[j]);
    match kernel {
        KernelKind::Additive => pair_merge_prob(x, y, clusters, n as usize).expect("valid pair"),
        KernelKind::Multiplicative => {
            // x first then y, or y first then x, both size-biased
            rat((x * y) as i64, n as i64) * (rat(1, (n - x) as i64) + rat(1, (n - y) as i64))
        }
        KernelKind::Constant => rat(2, (clusters * (clusters - 1)) as i64),
    }
}

/// Exact law of the next state.
pub fn exact_transition(state: &SizeMultiset, kernel: KernelKind) -> ExactLaw<SizeMultiset> {
    let mut law = ExactLaw::default();
    for i in 0..state.len() {
        for j in i + 1..state.len() {
            law.add(state.merged(i, j), pair_weight(state, i, j, kernel));
        }
    }
    law
}

/// Exact law of the size multiset after `k` jumps from the monodisperse
/// state on `n` units.
pub fn exact_partition_distribution(n: usize, k: usize, kernel: KernelKind) -> Result<ExactLaw<SizeMultiset>> {
    if n > MAX_EXACT_N {
        return Err(Error::TooLargeForExact { n, max: MAX_EXACT_N });
    }
    if n == 0 || k >= n {
        return Err(Error::DropCountOutOfRange { m: k, max: n.saturating_sub(1) });
    }
    Ok(partition_laws(n, k, kernel).pop().expect("k + 1 laws"))
}

/// Laws after `0..=k` jumps.
pub fn partition_laws(n: usize, k: usize, kernel: KernelKind) -> Vec<ExactLaw<SizeMultiset>> {
    let mut laws = vec![ExactLaw::point(SizeMultiset::monodisperse(n))];
    for _ in 0..k {
        let current = laws.last().expect("nonempty");
        let mut next = ExactLaw::default();
        for (state, p) in current.iter() {
            for (child, q) in exact_transition(state, kernel).iter() {
                next.add(child.clone(), p * q);
            }
        }
        laws.push(next);
    }
    laws
}

/// Exact probability that the next merge joins sizes `{x, y}` (any pair).
pub fn merge_sizes_prob(state: &SizeMultiset, x: u64, y: u64, kernel: KernelKind) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..state.len() {
        for j in i + 1..state.len() {
            let (a, b) = (state.sizes[i], state.sizes[j]);
            if (a, b) == (x, y) || (a, b) == (y, x) {
                acc += pair_weight(state, i, j, kernel);
            }
        }
    }
    acc
}
