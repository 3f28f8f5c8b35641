//! Exact small-instance ground truth for the drop process.
//!
//! Every first-site choice is enumerated with weight `1/n`; the walk is
//! integrated out analytically, branching on the exit side with weights
//! `x/s` and `1 - x/s` and charging the exact conditional mean cost.
//! Configurations are memoised, so the work is bounded by the number of
//! occupancy patterns rather than by the `n^k` drop sequences.
//!
//! Cluster geometry is recomputed here by plain scans over a bitmask and
//! shares no code with [`crate::ring`].

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coalescent::SizeMultiset;
use crate::error::{Error, Result};
use crate::exact::{one, uint, zero, Rational};
use crate::law::ExactLaw;
use crate::walk::{self, ExitSide};

/// Largest ring the enumeration accepts.
pub const MAX_ENUM_N: usize = 7;

/// Whether configurations that differ by a rotation are merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quotient {
    None,
    Rotation,
}

/// Occupancy bitmask of a ring with at most 32 sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingConfig {
    pub n: u8,
    pub mask: u32,
}

impl RingConfig {
    pub fn empty(n: usize) -> Self {
        RingConfig { n: n as u8, mask: 0 }
    }

    fn len(self) -> usize {
        self.n as usize
    }

    pub fn occupied(self, site: usize) -> bool {
        self.mask >> site & 1 == 1
    }

    fn with(self, site: usize) -> Self {
        RingConfig {
            n: self.n,
            mask: self.mask | 1 << site,
        }
    }

    /// `(size, coordinate, terminating empty site)` of the cluster holding `site`.
    pub fn cluster_of(self, site: usize) -> (u64, u64, usize) {
        let n = self.len();
        let mut empty = site;
        let mut distance = 0;
        while self.occupied(empty) {
            empty = (empty + 1) % n;
            distance += 1;
        }
        let mut size = 1u64;
        let mut back = (empty + n - 1) % n;
        while self.occupied(back) && back != empty {
            size += 1;
            back = (back + n - 1) % n;
        }
        (size, size - distance, empty)
    }

    pub fn cluster_sizes(self) -> SizeMultiset {
        let n = self.len();
        let sizes = (0..n)
            .filter(|&i| !self.occupied(i))
            .map(|e| self.cluster_of(e).0)
            .collect();
        SizeMultiset::from_sizes(sizes)
    }

    fn canonical(self, quotient: Quotient) -> Self {
        match quotient {
            Quotient::None => self,
            Quotient::Rotation => {
                let n = self.len() as u32;
                let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
                let best = (0..n)
                    .map(|r| ((self.mask >> r) | (self.mask << ((n - r) % n))) & full)
                    .min()
                    .unwrap_or(self.mask);
                RingConfig { n: self.n, mask: best }
            }
        }
    }
}

/// One memoised state of the enumeration after `drops` drops.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationNode {
    pub config: RingConfig,
    pub drops: usize,
    /// Probability of reaching `config`.
    pub prob: Rational,
    /// `E[C_{n,drops} ; config]`: expected cost accumulated on paths into this node.
    pub cost_mass: Rational,
}

/// One weighted outcome of a single drop from a fixed configuration.
struct Branch {
    next: RingConfig,
    weight: Rational,
    cost: Rational,
    predator: u64,
    prey: u64,
}

fn branches(config: RingConfig) -> Vec<Branch> {
    let n = config.len();
    let site_weight = Rational::new(1.into(), (n as i64).into());
    let mut out = Vec::with_capacity(2 * n);
    for first in 0..n {
        let (size, x, empty) = config.cluster_of(first);
        let sides: &[ExitSide] = if x == size {
            &[ExitSide::Clockwise]
        } else {
            &[ExitSide::Clockwise, ExitSide::Counterclockwise]
        };
        for &side in sides {
            let p_plus = walk::exit_side_prob_given_start(size, x).expect("valid start");
            let p_side = match side {
                ExitSide::Clockwise => p_plus,
                ExitSide::Counterclockwise => one() - p_plus,
            };
            let cost = walk::mean_steps_conditional(size, x, side).expect("valid side");
            let (settle, prey) = match side {
                ExitSide::Clockwise => (empty, config.cluster_of((empty + 1) % n).0),
                ExitSide::Counterclockwise => {
                    let site = (empty + n - size as usize) % n;
                    (site, config.cluster_of(site).0)
                }
            };
            out.push(Branch {
                next: config.with(settle),
                weight: &site_weight * p_side,
                cost,
                predator: size,
                prey,
            });
        }
    }
    out
}

/// Exact laws of the drop process on `n <= MAX_ENUM_N` sites for drops `1..=k`.
#[derive(Debug, Clone)]
pub struct DropProcessLaw {
    pub n: usize,
    /// `nodes[j]`: memoised states after `j` drops.
    pub nodes: Vec<Vec<EnumerationNode>>,
    /// `predator_prey[j-1]`: joint law of `(L, R)` at drop `j`.
    pub predator_prey: Vec<ExactLaw<(u64, u64)>>,
    /// `merges[j-1]`: for each size multiset before drop `j`, the joint
    /// weight `P(multiset, merged sizes = (larger, smaller))`.
    pub merges: Vec<BTreeMap<SizeMultiset, ExactLaw<(u64, u64)>>>,
    /// `expected_cost[j-1] = E[M_j]`.
    pub expected_cost: Vec<Rational>,
}

impl DropProcessLaw {
    pub fn drops(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn config_law(&self, k: usize) -> ExactLaw<RingConfig> {
        let mut law = ExactLaw::default();
        for node in &self.nodes[k] {
            law.add(node.config, node.prob.clone());
        }
        law
    }

    /// Law of the cluster-size multiset after `k` drops.
    pub fn cluster_law(&self, k: usize) -> ExactLaw<SizeMultiset> {
        self.config_law(k).map(|c| c.cluster_sizes())
    }

    /// `E[C_{n,m}]`.
    pub fn expected_partial_cost(&self, m: usize) -> Rational {
        self.expected_cost[..m].iter().sum()
    }

    /// `E[R_k | L_k = l]`, or `None` if `L_k = l` is impossible.
    pub fn conditional_prey_mean(&self, drop: usize, predator: u64) -> Option<Rational> {
        let law = &self.predator_prey[drop - 1];
        let mut mass = zero();
        let mut weighted = zero();
        for (&(l, r), p) in law.iter() {
            if l == predator {
                mass += p;
                weighted += uint(r) * p;
            }
        }
        (!mass.is_zero()).then(|| weighted / mass)
    }
}

pub fn enumerate_drop_process(n: usize, k: usize) -> Result<DropProcessLaw> {
    enumerate_drop_process_with(n, k, Quotient::None)
}

pub fn enumerate_drop_process_with(n: usize, k: usize, quotient: Quotient) -> Result<DropProcessLaw> {
    if n > MAX_ENUM_N {
        return Err(Error::TooLargeForExact { n, max: MAX_ENUM_N });
    }
    if n < 2 {
        return Err(Error::RingTooSmall(n));
    }
    if k > n - 1 {
        return Err(Error::DropCountOutOfRange { m: k, max: n - 1 });
    }
    let start = EnumerationNode {
        config: RingConfig::empty(n),
        drops: 0,
        prob: one(),
        cost_mass: zero(),
    };
    let mut law = DropProcessLaw {
        n,
        nodes: vec![vec![start]],
        predator_prey: Vec::with_capacity(k),
        merges: Vec::with_capacity(k),
        expected_cost: Vec::with_capacity(k),
    };
    for drop in 1..=k {
        let mut next: BTreeMap<RingConfig, (Rational, Rational)> = BTreeMap::new();
        let mut predator_prey = ExactLaw::default();
        let mut merges: BTreeMap<SizeMultiset, ExactLaw<(u64, u64)>> = BTreeMap::new();
        let mut step_cost = zero();
        for node in law.nodes.last().expect("nonempty") {
            let partition = node.config.cluster_sizes();
            let merge_law = merges.entry(partition).or_default();
            for branch in branches(node.config) {
                let p = &node.prob * &branch.weight;
                step_cost += &p * &branch.cost;
                let slot = next
                    .entry(branch.next.canonical(quotient))
                    .or_insert_with(|| (zero(), zero()));
                slot.0 += &p;
                slot.1 += &node.cost_mass * &branch.weight + &p * &branch.cost;
                predator_prey.add((branch.predator, branch.prey), p.clone());
                let pair = (branch.predator.max(branch.prey), branch.predator.min(branch.prey));
                merge_law.add(pair, p);
            }
        }
        law.nodes.push(
            next.into_iter()
                .map(|(config, (prob, cost_mass))| EnumerationNode {
                    config,
                    drops: drop,
                    prob,
                    cost_mass,
                })
                .collect(),
        );
        law.predator_prey.push(predator_prey);
        law.merges.push(merges);
        law.expected_cost.push(step_cost);
    }
    Ok(law)
}

/// Per-pair probability that a designated pair of clusters with sizes
/// `(x, y)` merges at drop `k`, averaged over the states reachable before
/// that drop: `P(merged sizes = {x, y}) / E[#pairs with sizes {x, y}]`.
pub fn exact_merge_prob(n: usize, k: usize, x: u64, y: u64) -> Result<Rational> {
    if k == 0 {
        return Err(Error::Unreachable);
    }
    let law = enumerate_drop_process(n, k)?;
    merge_prob_from(&law, k, x, y)
}

pub fn merge_prob_from(law: &DropProcessLaw, k: usize, x: u64, y: u64) -> Result<Rational> {
    let before = law.cluster_law(k - 1);
    let key = (x.max(y), x.min(y));
    let mut merged = zero();
    for merge_law in law.merges[k - 1].values() {
        merged += merge_law.prob(&key);
    }
    let pairs = before.expectation(|p| uint(p.pair_count(x, y)));
    if pairs.is_zero() {
        return Err(Error::Unreachable);
    }
    Ok(merged / pairs)
}

/// One row of the conditional merge table: before drop `drop`, given the
/// multiset `partition`, the per-pair probability that a pair with sizes
/// `(larger, smaller)` merges.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeRow {
    pub drop: usize,
    pub partition: SizeMultiset,
    pub larger: u64,
    pub smaller: u64,
    pub per_pair: Rational,
}

/// All reachable `(partition, size pair)` merge probabilities.
pub fn conditional_merge_table(law: &DropProcessLaw) -> Vec<MergeRow> {
    let mut rows = Vec::new();
    for drop in 1..=law.drops() {
        let before = law.cluster_law(drop - 1);
        for (partition, weight) in before.iter() {
            let merge_law = law.merges[drop - 1].get(partition);
            let sizes = partition.sizes();
            let mut pairs: Vec<(u64, u64)> = Vec::new();
            for i in 0..sizes.len() {
                for j in i + 1..sizes.len() {
                    let pair = (sizes[i].max(sizes[j]), sizes[i].min(sizes[j]));
                    if !pairs.contains(&pair) {
                        pairs.push(pair);
                    }
                }
            }
            for (larger, smaller) in pairs {
                let joint = merge_law.map(|l| l.prob(&(larger, smaller))).unwrap_or_else(zero);
                let count = partition.pair_count(larger, smaller);
                rows.push(MergeRow {
                    drop,
                    partition: partition.clone(),
                    larger,
                    smaller,
                    per_pair: joint / weight / uint(count),
                });
            }
        }
    }
    rows
}

/// Law of the predator size at the last drop on `m` sites.
pub fn exact_predator_law(m: usize) -> Result<ExactLaw<u64>> {
    let law = enumerate_drop_process_with(m, m - 1, Quotient::Rotation)?;
    Ok(law.predator_prey[m - 2].map(|&(l, _)| l))
}

/// `E[C_{n,m}]` with walk lengths integrated out.
pub fn exact_expected_cost(n: usize, m: usize) -> Result<Rational> {
    if m == 0 || m > n.saturating_sub(1) {
        return Err(Error::DropCountOutOfRange { m, max: n.saturating_sub(1) });
    }
    let law = enumerate_drop_process_with(n, m, Quotient::Rotation)?;
    let via_nodes: Rational = law.nodes[m].iter().map(|node| &node.cost_mass).sum();
    debug_assert_eq!(via_nodes, law.expected_partial_cost(m));
    Ok(via_nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn ms(v: &[u64]) -> SizeMultiset {
        SizeMultiset::from_sizes(v.to_vec())
    }

    #[test]
    fn cluster_geometry() {
        // n = 4, sites 1 and 2 occupied
        let c = RingConfig { n: 4, mask: 0b0110 };
        assert_eq!(c.cluster_of(1), (3, 1, 3));
        assert_eq!(c.cluster_of(3), (3, 3, 3));
        assert_eq!(c.cluster_of(0), (1, 1, 0));
        assert_eq!(c.cluster_sizes(), ms(&[1, 3]));
        let full = RingConfig { n: 3, mask: 0b011 };
        assert_eq!(full.cluster_of(0), (3, 1, 2));
    }

    #[test]
    fn small_laws() {
        let law = enumerate_drop_process(3, 1).unwrap();
        assert_eq!(law.cluster_law(1).prob(&ms(&[2, 1])), one());
        let law = enumerate_drop_process(4, 2).unwrap();
        let clusters = law.cluster_law(2);
        assert_eq!(clusters.prob(&ms(&[3, 1])), rat(3, 4));
        assert_eq!(clusters.prob(&ms(&[2, 2])), rat(1, 4));
        assert_eq!(law.conditional_prey_mean(2, 1), Some(rat(3, 2)));
        assert!(enumerate_drop_process(8, 2).is_err());
        assert!(enumerate_drop_process(4, 4).is_err());
    }

    #[test]
    fn children_conserve_probability() {
        for n in 2..=MAX_ENUM_N {
            let law = enumerate_drop_process(n, n - 1).unwrap();
            for k in 0..=n - 1 {
                let total: Rational = law.nodes[k].iter().map(|node| &node.prob).sum();
                assert_eq!(total, one());
                assert!(law.cluster_law(k).is_normalized());
            }
            for pp in &law.predator_prey {
                assert!(pp.is_normalized());
            }
        }
        for config in [RingConfig::empty(5), RingConfig { n: 5, mask: 0b00110 }] {
            let total: Rational = branches(config).iter().map(|b| &b.weight).sum();
            assert_eq!(total, one());
        }
    }

    #[test]
    fn merge_probabilities() {
        assert_eq!(exact_merge_prob(3, 1, 1, 1).unwrap(), rat(1, 3));
        assert_eq!(exact_merge_prob(4, 2, 2, 1).unwrap(), rat(3, 8));
        assert_eq!(exact_merge_prob(4, 2, 1, 1).unwrap(), rat(1, 4));
        assert_eq!(exact_merge_prob(4, 2, 2, 2), Err(Error::Unreachable));
    }

    #[test]
    fn predator_laws() {
        assert_eq!(exact_predator_law(2).unwrap().prob(&1), one());
        let m3 = exact_predator_law(3).unwrap();
        assert_eq!((m3.prob(&1), m3.prob(&2)), (rat(1, 3), rat(2, 3)));
        let m4 = exact_predator_law(4).unwrap();
        assert_eq!((m4.prob(&1), m4.prob(&2), m4.prob(&3)), (rat(3, 16), rat(1, 4), rat(9, 16)));
    }

    #[test]
    fn expected_costs() {
        assert_eq!(exact_expected_cost(2, 1).unwrap(), zero());
        assert_eq!(exact_expected_cost(3, 2).unwrap(), rat(1, 3));
        for n in 2..=MAX_ENUM_N {
            assert_eq!(exact_expected_cost(n, 1).unwrap(), zero());
        }
        assert!(exact_expected_cost(4, 4).is_err());
    }

    #[test]
    fn rotation_quotient_preserves_cluster_laws() {
        let plain = enumerate_drop_process(6, 5).unwrap();
        let quotient = enumerate_drop_process_with(6, 5, Quotient::Rotation).unwrap();
        for k in 0..=5 {
            assert_eq!(plain.cluster_law(k), quotient.cluster_law(k));
            assert!(quotient.nodes[k].len() <= plain.nodes[k].len());
        }
        assert_eq!(plain.expected_partial_cost(5), quotient.expected_partial_cost(5));
    }
}
