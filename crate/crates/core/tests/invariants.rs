use std::collections::BTreeMap;

use droppush_core::coalescent::{exact_transition, ml_step, KernelKind, SizeMultiset};
use droppush_core::exact::{rat, to_f64, Rational};
use droppush_core::law::ExactLaw;
use droppush_core::oracle::{enumerate_drop_process, RingConfig};
use droppush_core::ring::{CostMode, RingState};
use droppush_core::rng;
use droppush_core::walk::{
    exact_walk_oracle, exit_side_prob, exit_time_distribution, oracle_exit_side_prob, quadratic_stopping_identity,
    simulate_walk, ExitSide, WalkSpec,
};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

struct Moments {
    n: f64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn new() -> Self {
        Moments { n: 0.0, sum: 0.0, sum_sq: 0.0 }
    }

    fn push(&mut self, x: f64) {
        self.n += 1.0;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn mean(&self) -> f64 {
        self.sum / self.n
    }

    fn se(&self) -> f64 {
        let m = self.mean();
        ((self.sum_sq / self.n - m * m) / (self.n - 1.0)).sqrt()
    }

    fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.mean() - target).abs() <= sigmas * self.se()
    }
}

#[test]
fn walk_monte_carlo_matches_exact_moments() {
    let samples = 1_000_000;
    for s in [2u64, 3, 5, 10, 25] {
        let mut rng = rng::stream(1000 + s);
        let mut first = Moments::new();
        let mut second = Moments::new();
        let mut clockwise = Moments::new();
        for _ in 0..samples {
            let start = rng.random_range(1..=s);
            let out = simulate_walk(WalkSpec::new(s, start).unwrap(), &mut rng);
            let d = out.steps as f64;
            first.push(d);
            second.push(d * d);
            clockwise.push((out.side == ExitSide::Clockwise) as u8 as f64);
        }
        let m1 = to_f64(&exact_walk_oracle(s, 1).unwrap());
        let m2 = to_f64(&exact_walk_oracle(s, 2).unwrap());
        let p = to_f64(&exit_side_prob(s).unwrap());
        assert!(first.within(m1, 4.0), "s={s}: mean {} vs {m1}", first.mean());
        assert!(second.within(m2, 4.0), "s={s}: second {} vs {m2}", second.mean());
        assert!(clockwise.within(p, 4.0), "s={s}: P(+) {} vs {p}", clockwise.mean());
    }
}

#[test]
fn stopping_identity_and_exit_probability() {
    for s in 1..=50u64 {
        let (lhs, rhs) = quadratic_stopping_identity(s);
        assert_eq!(lhs, rhs, "s={s}");
        assert_eq!(oracle_exit_side_prob(s), rat(s as i64 + 1, 2 * s as i64));
        assert_eq!(exit_side_prob(s).unwrap(), oracle_exit_side_prob(s));
    }
}

fn config_of(state: &RingState) -> RingConfig {
    let mask = state
        .occupied()
        .iter()
        .enumerate()
        .fold(0u32, |m, (i, &o)| if o { m | 1 << i } else { m });
    RingConfig {
        n: state.n() as u8,
        mask,
    }
}

#[test]
fn ring_monte_carlo_matches_enumeration() {
    let reps = 1_000_000u64;
    for n in 3..=5usize {
        let law = enumerate_drop_process(n, n - 1).unwrap();
        for mode in [CostMode::ExactWalk, CostMode::ExpectedCost] {
            let mut configs: Vec<BTreeMap<RingConfig, u64>> = vec![BTreeMap::new(); n];
            let mut pairs: Vec<BTreeMap<(u64, u64), u64>> = vec![BTreeMap::new(); n - 1];
            let mut cost = Moments::new();
            for rep in 0..reps {
                let mut rng = rng::replication_stream(n as u64, rep);
                let mut state = RingState::new(n).unwrap();
                let mut thirds = 0;
                for k in 1..n {
                    let ev = state.drop_particle(mode, &mut rng).unwrap();
                    thirds += ev.cost_thirds;
                    *configs[k].entry(config_of(&state)).or_default() += 1;
                    *pairs[k - 1].entry((ev.predator, ev.prey)).or_default() += 1;
                }
                cost.push(thirds as f64 / 3.0);
            }
            let check = |p: &Rational, count: u64, what: String| {
                let p = to_f64(p);
                let freq = count as f64 / reps as f64;
                let se = (p * (1.0 - p) / reps as f64).sqrt().max(1e-12);
                assert!((freq - p).abs() <= 4.0 * se, "n={n} {mode:?} {what}: {freq} vs {p}");
            };
            for k in 1..n {
                let exact = law.config_law(k);
                for (c, p) in exact.iter() {
                    check(p, configs[k].get(c).copied().unwrap_or(0), format!("k={k} mask={:b}", c.mask));
                }
                assert!(configs[k].keys().all(|c| !exact.prob(c).is_zero()));
                for (lr, p) in law.predator_prey[k - 1].iter() {
                    check(p, pairs[k - 1].get(lr).copied().unwrap_or(0), format!("k={k} pair={lr:?}"));
                }
            }
            let mean = to_f64(&law.expected_partial_cost(n - 1));
            assert!(cost.within(mean, 4.0), "n={n} {mode:?}: cost {} vs {mean}", cost.mean());
        }
    }
}

fn normalized<T: Ord>(law: &ExactLaw<T>) -> bool {
    law.total() == Rational::one() && law.iter().all(|(_, p)| *p > Rational::zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerated_laws_are_normalized(n in 2usize..=7, k_frac in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let k = k.min(n - 1);
        let law = enumerate_drop_process(n, k).unwrap();
        for j in 0..=k {
            prop_assert!(normalized(&law.config_law(j)));
            let clusters = law.cluster_law(j);
            prop_assert!(normalized(&clusters));
            prop_assert!(clusters.iter().all(|(m, _)| m.len() == n - j && m.mass() == n as u64));
        }
        for j in 0..k {
            prop_assert!(normalized(&law.predator_prey[j]));
        }
    }

    #[test]
    fn exit_time_law_is_consistent(s in 1u64..16, start_frac in 0.0f64..1.0) {
        let start = (1 + (s as f64 * start_frac) as u64).min(s);
        let t_max = 4 * (s as usize) * (s as usize) + 10;
        let dist = exit_time_distribution(s, start, t_max).unwrap();
        let cw: Rational = dist.clockwise.iter().sum();
        let ccw: Rational = dist.counterclockwise.iter().sum();
        prop_assert_eq!(&cw + &ccw + &dist.tail, Rational::one());
        // steps have the parity of the distance travelled
        for (t, p) in dist.clockwise.iter().enumerate() {
            prop_assert!(p.is_zero() || (t as u64 + start + s).is_multiple_of(2));
        }
        let p_cw = to_f64(&cw) + to_f64(&dist.tail);
        prop_assert!(p_cw >= start as f64 / s as f64 - 1e-12);
        prop_assert!(to_f64(&cw) <= start as f64 / s as f64 + 1e-12);
    }

    #[test]
    fn coalescent_jumps_preserve_mass(n in 2usize..200, seed in any::<u64>(), kernel in 0u8..3) {
        let kernel = [KernelKind::Additive, KernelKind::Multiplicative, KernelKind::Constant][kernel as usize];
        let mut state = SizeMultiset::monodisperse(n);
        let mut rng = rng::stream(seed);
        for k in 1..n {
            let before = state.clone();
            let merge = ml_step(&mut state, kernel, &mut rng).unwrap();
            prop_assert_eq!(state.len(), n - k);
            prop_assert_eq!(state.mass(), n as u64);
            prop_assert!(before.pair_count(merge.predator, merge.prey) > 0);
            prop_assert!(state.sizes().contains(&(merge.predator + merge.prey)));
        }
        prop_assert!(ml_step(&mut state, kernel, &mut rng).is_err());
    }

    #[test]
    fn coalescent_transitions_are_normalized(sizes in proptest::collection::vec(1u64..6, 2..7)) {
        let state = SizeMultiset::from_sizes(sizes);
        for kernel in [KernelKind::Additive, KernelKind::Multiplicative, KernelKind::Constant] {
            let next = exact_transition(&state, kernel);
            prop_assert!(normalized(&next));
            prop_assert!(next.iter().all(|(m, _)| m.len() == state.len() - 1 && m.mass() == state.mass()));
        }
    }

    #[test]
    fn replication_seeds_are_stable(master in any::<u64>(), rep in 0u64..1_000_000) {
        let a: u64 = rng::replication_stream(master, rep).random();
        let b: u64 = rng::replication_stream(master, rep).random();
        prop_assert_eq!(a, b);
        prop_assert_ne!(rng::mix64(master, rep), rng::mix64(master, rep + 1));
    }
}
