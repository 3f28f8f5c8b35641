//! Replicated trajectories with per-replication random streams.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::stats::{estimate_moment, MomentEstimate};
use crate::error::{Error, Result};
use crate::ring::{drops_for_fraction, CostMode, RingState, TrajectoryStats};
use crate::rng;
use crate::theory::{cost_moment, phi};

/// How replications are scheduled. Results never depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon worker pool; `threads: None` uses the global pool.
    Parallel { threads: Option<usize> },
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { threads: None }
        } else {
            Execution::Sequential
        }
    }
}

/// `(0..count).map(f)` collected in index order under `exec`.
pub fn map_indexed<T, F>(count: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel { threads } => {
            let run = || (0..count).into_par_iter().map(&f).collect();
            match threads.and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().ok()) {
                Some(pool) => pool.install(run),
                None => run(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel { .. } => (0..count).map(f).collect(),
    }
}

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub rep: usize,
    /// Seed of this replication's stream, `mix64(master_seed, rep)`.
    pub seed: u64,
    pub stats: TrajectoryStats,
    /// `3 C_{n, ceil(alpha n)}` for each alpha of the grid.
    pub checkpoint_cost_thirds: Vec<u64>,
}

impl Replication {
    pub fn total_cost(&self) -> f64 {
        self.stats.total_cost()
    }

    pub fn checkpoint_cost(&self, i: usize) -> f64 {
        self.checkpoint_cost_thirds[i] as f64 / 3.0
    }
}

/// Runs `drops` drops on a ring of `n` sites, recording `3 C_{n,k}` at each
/// `k` in `checkpoints`.
pub fn simulate_replication(
    n: usize,
    drops: usize,
    mode: CostMode,
    master_seed: u64,
    rep: usize,
    checkpoints: &[usize],
) -> Result<Replication> {
    let seed = rng::mix64(master_seed, rep as u64);
    let mut stream = rng::stream(seed);
    let mut state = RingState::new(n)?;
    if drops == 0 || drops > n - 1 {
        return Err(Error::DropCountOutOfRange { m: drops, max: n - 1 });
    }
    let mut stats = TrajectoryStats {
        n,
        drops,
        cost_thirds: 0,
        l2_sum: 0,
        lr2_sum: 0,
        r2_sum: 0,
        max_cluster: 1,
    };
    let mut checkpoint_cost_thirds = vec![0u64; checkpoints.len()];
    for k in 1..=drops {
        let ev = state.drop_particle(mode, &mut stream)?;
        let (l, r) = (ev.predator as u128, ev.prey as u128);
        stats.cost_thirds += ev.cost_thirds;
        stats.l2_sum += l * l;
        stats.lr2_sum += (l + r) * (l + r);
        stats.r2_sum += r * r;
        stats.max_cluster = stats.max_cluster.max(ev.merged_size());
        for (slot, &at) in checkpoint_cost_thirds.iter_mut().zip(checkpoints) {
            if at == k {
                *slot = stats.cost_thirds;
            }
        }
    }
    Ok(Replication {
        rep,
        seed,
        stats,
        checkpoint_cost_thirds,
    })
}

/// Per-replication statistics reported as aggregates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// `C / n`
    CostPerSite,
    /// `C / n^{5/2}`
    ScaledCost,
    /// `6 C / n^{5/2}`
    SixScaledCost,
    /// `L_n / n^{5/2}`
    PredatorSquares,
    /// `sum (L + R)^2 / n^{5/2}`
    MergedSquares,
    /// `sum R^2 / (n^2 ln n)`
    PreySquares,
    /// `max_cluster / n`
    LargestCluster,
    /// `(6 C - L_n) / n^{5/2}`
    CostProxyGap,
    /// `(sum (L + R)^2 - L_n) / n^{5/2}`
    MergedProxyGap,
}

impl Statistic {
    pub const ALL: [Statistic; 9] = [
        Statistic::CostPerSite,
        Statistic::ScaledCost,
        Statistic::SixScaledCost,
        Statistic::PredatorSquares,
        Statistic::MergedSquares,
        Statistic::PreySquares,
        Statistic::LargestCluster,
        Statistic::CostProxyGap,
        Statistic::MergedProxyGap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::CostPerSite => "C/n",
            Statistic::ScaledCost => "C/n^2.5",
            Statistic::SixScaledCost => "6C/n^2.5",
            Statistic::PredatorSquares => "L_n/n^2.5",
            Statistic::MergedSquares => "sum(L+R)^2/n^2.5",
            Statistic::PreySquares => "sum(R^2)/(n^2 ln n)",
            Statistic::LargestCluster => "max_cluster/n",
            Statistic::CostProxyGap => "(6C-L_n)/n^2.5",
            Statistic::MergedProxyGap => "(sum(L+R)^2-L_n)/n^2.5",
        }
    }

    pub fn value(self, stats: &TrajectoryStats) -> f64 {
        let n = stats.n as f64;
        let scale = n * n * n.sqrt();
        let cost = stats.total_cost();
        let l2 = stats.l2_sum as f64;
        match self {
            Statistic::CostPerSite => cost / n,
            Statistic::ScaledCost => cost / scale,
            Statistic::SixScaledCost => 6.0 * cost / scale,
            Statistic::PredatorSquares => l2 / scale,
            Statistic::MergedSquares => stats.lr2_sum as f64 / scale,
            Statistic::PreySquares => stats.r2_sum as f64 / (n * n * n.ln()),
            Statistic::LargestCluster => stats.max_cluster as f64 / n,
            // 2 C_thirds - L_n is exact in integers
            Statistic::CostProxyGap => (2 * stats.cost_thirds as i128 - stats.l2_sum as i128) as f64 / scale,
            Statistic::MergedProxyGap => (stats.lr2_sum - stats.l2_sum) as f64 / scale,
        }
    }
}

/// Mean of the alpha checkpoint `C_{n, ceil(alpha n)} / n` against `phi(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRow {
    pub n: usize,
    pub alpha: f64,
    pub mean_cost_over_n: f64,
    pub se: f64,
    pub phi: f64,
    pub abs_err: f64,
}

/// Raw moment of `C_{n,m} / n^{5/2}` against its limit when `m = n - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub k: u32,
    pub estimate: f64,
    pub se: f64,
    pub theory: Option<f64>,
    pub rel_err: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub replications: Vec<Replication>,
}

impl ExperimentResult {
    pub fn samples(&self, statistic: Statistic) -> Vec<f64> {
        self.replications.iter().map(|r| statistic.value(&r.stats)).collect()
    }

    /// Mean of every [`Statistic`] with its standard error.
    pub fn aggregates(&self) -> Result<Vec<(Statistic, MomentEstimate)>> {
        Statistic::ALL
            .iter()
            .map(|&s| estimate_moment(&self.samples(s), 1).map(|m| (s, m)))
            .collect()
    }

    pub fn alpha_rows(&self) -> Result<Vec<AlphaRow>> {
        let n = self.config.n;
        self.config
            .alpha_grid
            .iter()
            .enumerate()
            .map(|(i, &alpha)| {
                let samples: Vec<f64> = self.replications.iter().map(|r| r.checkpoint_cost(i) / n as f64).collect();
                let m = estimate_moment(&samples, 1)?;
                let phi = phi(alpha)?;
                Ok(AlphaRow {
                    n,
                    alpha,
                    mean_cost_over_n: m.estimate,
                    se: m.se,
                    phi,
                    abs_err: (m.estimate - phi).abs(),
                })
            })
            .collect()
    }

    pub fn moment_rows(&self, orders: &[u32]) -> Result<Vec<MomentRow>> {
        let samples = self.samples(Statistic::ScaledCost);
        let full = self.config.drops == self.config.n - 1;
        orders
            .iter()
            .map(|&k| {
                let m = estimate_moment(&samples, k)?;
                let theory = full.then(|| cost_moment(k as usize).approx);
                Ok(MomentRow {
                    n: self.config.n,
                    k,
                    estimate: m.estimate,
                    se: m.se,
                    theory,
                    rel_err: theory.map(|t| (m.estimate - t).abs() / t),
                })
            })
            .collect()
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(config, Execution::default())
}

pub fn run_experiment_with(config: &ExperimentConfig, exec: Execution) -> Result<ExperimentResult> {
    config.validate()?;
    let checkpoints: Vec<usize> = config.alpha_grid.iter().map(|&a| drops_for_fraction(config.n, a)).collect();
    if let Some((a, k)) = config.alpha_grid.iter().zip(&checkpoints).find(|(_, &k)| k > config.drops) {
        return Err(Error::Config(format!(
            "alpha {a} needs {k} drops but trajectories stop after {}",
            config.drops
        )));
    }
    let replications = map_indexed(config.reps, exec, |rep| {
        simulate_replication(config.n, config.drops, config.mode, config.master_seed, rep, &checkpoints)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentResult {
        config: config.clone(),
        replications,
    })
}

/// One experiment per ring size, each filling the ring.
pub fn run_sweep(
    n_list: &[usize],
    reps: usize,
    mode: CostMode,
    master_seed: u64,
    exec: Execution,
) -> Result<Vec<ExperimentResult>> {
    n_list
        .iter()
        .map(|&n| {
            let mut config = ExperimentConfig::new(n, reps, mode, master_seed)?;
            config.name = format!("sweep-n{n}");
            run_experiment_with(&config, exec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::run_trajectory;

    #[test]
    fn two_site_ring_costs_nothing() {
        let cfg = ExperimentConfig::new(2, 5, CostMode::ExactWalk, 99).unwrap();
        let res = run_experiment(&cfg).unwrap();
        assert_eq!(res.replications.len(), 5);
        for r in &res.replications {
            assert_eq!(r.total_cost(), 0.0);
            assert_eq!((r.stats.l2_sum, r.stats.lr2_sum, r.stats.r2_sum, r.stats.max_cluster), (1, 4, 1, 2));
        }
    }

    #[test]
    fn replication_matches_stored_trajectory() {
        for mode in [CostMode::ExactWalk, CostMode::ExpectedCost] {
            let rep = simulate_replication(300, 299, mode, 5, 3, &[150, 299]).unwrap();
            let traj = run_trajectory(300, 299, mode, rng::mix64(5, 3)).unwrap();
            assert_eq!(rep.stats, traj.stats());
            assert_eq!(rep.checkpoint_cost(0), traj.partial_cost(150).unwrap());
            assert_eq!(rep.checkpoint_cost(1), traj.partial_cost(299).unwrap());
        }
    }

    #[test]
    fn execution_does_not_change_results() {
        let cfg = ExperimentConfig::new(200, 24, CostMode::ExactWalk, 11)
            .unwrap()
            .with_alpha_grid(vec![0.5, 0.9])
            .unwrap();
        let seq = run_experiment_with(&cfg, Execution::Sequential).unwrap();
        for threads in [None, Some(1), Some(3)] {
            let par = run_experiment_with(&cfg, Execution::Parallel { threads }).unwrap();
            assert_eq!(seq.replications, par.replications);
        }
    }

    #[test]
    fn checkpoints_beyond_drops_rejected() {
        let cfg = ExperimentConfig::new(100, 2, CostMode::ExpectedCost, 1)
            .unwrap()
            .with_drops(50)
            .unwrap()
            .with_alpha_grid(vec![0.9])
            .unwrap();
        assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn statistic_values() {
        let stats = TrajectoryStats {
            n: 4,
            drops: 3,
            cost_thirds: 30,
            l2_sum: 14,
            lr2_sum: 30,
            r2_sum: 3,
            max_cluster: 4,
        };
        assert_eq!(Statistic::CostPerSite.value(&stats), 2.5);
        assert_eq!(Statistic::ScaledCost.value(&stats), 10.0 / 32.0);
        assert_eq!(Statistic::CostProxyGap.value(&stats), (60.0 - 14.0) / 32.0);
        assert_eq!(Statistic::MergedProxyGap.value(&stats), 16.0 / 32.0);
        assert_eq!(Statistic::LargestCluster.value(&stats), 1.0);
    }
}
