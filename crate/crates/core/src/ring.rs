//! Drop-push dynamics on a ring of `n` sites.
//!
//! Sites are indexed `0..n` clockwise. A cluster is a maximal run of occupied
//! sites together with the empty site that terminates it clockwise; an empty
//! site preceded by another empty site is a cluster of size 1. There are
//! always as many clusters as empty sites.
//!
//! Clusters are tracked by their terminating empty site: `next` is a
//! union-find style forest where every occupied site points one step
//! clockwise, so the root of any site is the nearest empty site at or after
//! it. Sizes live in a side table keyed by that empty site.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::rng;
use crate::walk::{self, ExitSide, WalkSpec};

/// How the walk cost of a drop is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostMode {
    /// The walk is simulated step by step; `M` is the step count.
    ExactWalk,
    /// The exit side is sampled exactly, `M` is the conditional mean exit
    /// time given the start and the side.
    ExpectedCost,
}

impl CostMode {
    pub fn name(self) -> &'static str {
        match self {
            CostMode::ExactWalk => "exact-walk",
            CostMode::ExpectedCost => "expected-cost",
        }
    }
}

impl std::str::FromStr for CostMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-walk" => Ok(CostMode::ExactWalk),
            "expected-cost" => Ok(CostMode::ExpectedCost),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterLocation {
    pub size: u64,
    /// Walk coordinate in `1..=size`; equals `size` on the empty site.
    pub coordinate: u64,
    pub empty_site: usize,
}

/// Everything recorded about one drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DropEvent {
    /// 1-based drop index.
    pub index: usize,
    pub first_site: usize,
    /// Size `L` of the cluster hit by the first try.
    pub predator: u64,
    /// Size `R` of the neighbour absorbed by the merge.
    pub prey: u64,
    pub side: ExitSide,
    /// Three times the walk cost. Exact in both modes.
    pub cost_thirds: u64,
}

impl DropEvent {
    pub fn larger(&self) -> u64 {
        self.predator.max(self.prey)
    }

    pub fn smaller(&self) -> u64 {
        self.predator.min(self.prey)
    }

    pub fn merged_size(&self) -> u64 {
        self.predator + self.prey
    }

    pub fn cost(&self) -> f64 {
        self.cost_thirds as f64 / 3.0
    }
}

#[derive(Debug, Clone)]
pub struct RingState {
    n: usize,
    occupied: Vec<bool>,
    drops_done: usize,
    next: Vec<u32>,
    cluster_size: Vec<u64>,
}

impl RingState {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::RingTooSmall(n));
        }
        assert!(n <= u32::MAX as usize, "ring too large for 32-bit site indices");
        Ok(RingState {
            n,
            occupied: vec![false; n],
            drops_done: 0,
            next: (0..n as u32).collect(),
            cluster_size: vec![1; n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn drops_done(&self) -> usize {
        self.drops_done
    }

    pub fn empty_sites(&self) -> usize {
        self.n - self.drops_done
    }

    pub fn is_occupied(&self, site: usize) -> bool {
        self.occupied[site]
    }

    pub fn occupied(&self) -> &[bool] {
        &self.occupied
    }

    /// Nearest empty site clockwise from `site`, inclusive.
    pub fn next_empty(&mut self, site: usize) -> usize {
        let mut i = site;
        loop {
            let parent = self.next[i] as usize;
            if parent == i {
                return i;
            }
            let grand = self.next[parent];
            self.next[i] = grand;
            i = parent;
        }
    }

    /// Reference scan for `next_empty`, without the accelerator.
    pub fn next_empty_naive(&self, site: usize) -> usize {
        let mut i = site;
        while self.occupied[i] {
            i = (i + 1) % self.n;
        }
        i
    }

    pub fn locate_cluster(&mut self, site: usize) -> Result<ClusterLocation> {
        if site >= self.n {
            return Err(Error::SiteOutOfRange { site, n: self.n });
        }
        let empty_site = self.next_empty(site);
        let size = self.cluster_size[empty_site];
        let distance = (empty_site + self.n - site) % self.n;
        Ok(ClusterLocation {
            size,
            coordinate: size - distance as u64,
            empty_site,
        })
    }

    /// Cluster sizes listed clockwise from the cluster ending at the first
    /// empty site, computed by a plain scan.
    pub fn cluster_sizes(&self) -> Vec<u64> {
        let Some(first_empty) = self.occupied.iter().position(|&o| !o) else {
            return Vec::new();
        };
        let mut sizes = Vec::with_capacity(self.empty_sites());
        let mut run = 0u64;
        for step in 1..=self.n {
            let site = (first_empty + step) % self.n;
            run += 1;
            if !self.occupied[site] {
                sizes.push(run);
                run = 0;
            }
        }
        sizes
    }

    /// Drops one particle, drawing the first site and the walk from `rng`.
    pub fn drop_particle<R: RngCore + ?Sized>(&mut self, mode: CostMode, rng: &mut R) -> Result<DropEvent> {
        if self.empty_sites() < 2 {
            return Err(Error::RingFull {
                empty: self.empty_sites(),
            });
        }
        let first_site = rng.random_range(0..self.n);
        let loc = self.locate_cluster(first_site)?;
        let (side, cost_thirds) = match mode {
            CostMode::ExactWalk => {
                let spec = WalkSpec::new(loc.size, loc.coordinate)?;
                let out = walk::simulate_walk(spec, rng);
                (out.side, 3 * out.steps)
            }
            CostMode::ExpectedCost => {
                let side = if rng.random_range(0..loc.size) < loc.coordinate {
                    ExitSide::Clockwise
                } else {
                    ExitSide::Counterclockwise
                };
                (side, walk::conditional_mean_thirds(loc.size, loc.coordinate, side))
            }
        };
        Ok(self.settle(first_site, loc, side, cost_thirds))
    }

    /// Settles a particle whose first try was `first_site` and whose walk
    /// left on `side`.
    pub fn drop_with_outcome(&mut self, first_site: usize, side: ExitSide, cost_thirds: u64) -> Result<DropEvent> {
        if self.empty_sites() < 2 {
            return Err(Error::RingFull {
                empty: self.empty_sites(),
            });
        }
        let loc = self.locate_cluster(first_site)?;
        if side == ExitSide::Counterclockwise && loc.coordinate == loc.size {
            return Err(Error::ImpossibleExit);
        }
        Ok(self.settle(first_site, loc, side, cost_thirds))
    }

    fn settle(&mut self, first_site: usize, loc: ClusterLocation, side: ExitSide, cost_thirds: u64) -> DropEvent {
        let n = self.n;
        let prey = match side {
            ExitSide::Clockwise => {
                let site = loc.empty_site;
                self.fill(site);
                let survivor = self.next_empty(site);
                let prey = self.cluster_size[survivor];
                self.cluster_size[survivor] = loc.size + prey;
                prey
            }
            ExitSide::Counterclockwise => {
                let site = (loc.empty_site + n - loc.size as usize) % n;
                let prey = self.cluster_size[site];
                self.fill(site);
                self.cluster_size[loc.empty_site] = loc.size + prey;
                prey
            }
        };
        self.drops_done += 1;
        DropEvent {
            index: self.drops_done,
            first_site,
            predator: loc.size,
            prey,
            side,
            cost_thirds,
        }
    }

    fn fill(&mut self, site: usize) {
        debug_assert!(!self.occupied[site]);
        self.occupied[site] = true;
        self.next[site] = ((site + 1) % self.n) as u32;
    }
}

/// One simulated run of `m` drops on a fresh ring.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub n: usize,
    pub mode: CostMode,
    pub seed: u64,
    pub events: Vec<DropEvent>,
    /// `partial_cost_thirds[k-1] = 3 C_{n,k}`.
    pub partial_cost_thirds: Vec<u64>,
    /// Largest cluster after each drop.
    pub max_cluster: Vec<u64>,
    pub l2_sum: u128,
    pub lr2_sum: u128,
    pub r2_sum: u128,
}

/// Summary statistics of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryStats {
    pub n: usize,
    pub drops: usize,
    pub cost_thirds: u64,
    pub l2_sum: u128,
    pub lr2_sum: u128,
    pub r2_sum: u128,
    pub max_cluster: u64,
}

impl TrajectoryStats {
    pub fn total_cost(&self) -> f64 {
        self.cost_thirds as f64 / 3.0
    }
}

impl Trajectory {
    pub fn drops(&self) -> usize {
        self.events.len()
    }

    pub fn stats(&self) -> TrajectoryStats {
        TrajectoryStats {
            n: self.n,
            drops: self.drops(),
            cost_thirds: self.partial_cost_thirds.last().copied().unwrap_or(0),
            l2_sum: self.l2_sum,
            lr2_sum: self.lr2_sum,
            r2_sum: self.r2_sum,
            max_cluster: self.max_cluster.last().copied().unwrap_or(1),
        }
    }

    /// `C_{n,k}`, the cost of the first `k` drops (`k = 0` gives 0).
    pub fn partial_cost(&self, k: usize) -> Option<f64> {
        match k {
            0 => Some(0.0),
            k => self.partial_cost_thirds.get(k - 1).map(|&c| c as f64 / 3.0),
        }
    }

    /// `C_{n, ceil(alpha n)}`, or `None` when the trajectory is too short.
    pub fn partial_cost_at_fraction(&self, alpha: f64) -> Option<f64> {
        self.partial_cost(drops_for_fraction(self.n, alpha))
    }
}

/// `ceil(alpha n)`, tolerant to the representation error of decimal `alpha`.
pub fn drops_for_fraction(n: usize, alpha: f64) -> usize {
    let x = alpha * n as f64;
    let rounded = x.round();
    if (x - rounded).abs() <= 1e-9 * x.max(1.0) {
        rounded as usize
    } else {
        x.ceil() as usize
    }
}

pub fn run_trajectory(n: usize, m: usize, mode: CostMode, seed: u64) -> Result<Trajectory> {
    let mut stream = rng::stream(seed);
    run_trajectory_with(n, m, mode, seed, &mut stream)
}

/// Runs `m` drops on a fresh ring, drawing from `rng`. `seed` is recorded
/// only.
pub fn run_trajectory_with<R: RngCore + ?Sized>(
    n: usize,
    m: usize,
    mode: CostMode,
    seed: u64,
    rng: &mut R,
) -> Result<Trajectory> {
    let mut state = RingState::new(n)?;
    if m == 0 || m > n - 1 {
        return Err(Error::DropCountOutOfRange { m, max: n - 1 });
    }
    let mut traj = Trajectory {
        n,
        mode,
        seed,
        events: Vec::with_capacity(m),
        partial_cost_thirds: Vec::with_capacity(m),
        max_cluster: Vec::with_capacity(m),
        l2_sum: 0,
        lr2_sum: 0,
        r2_sum: 0,
    };
    let mut cost = 0u64;
    let mut largest = 1u64;
    for _ in 0..m {
        let ev = state.drop_particle(mode, rng)?;
        cost += ev.cost_thirds;
        largest = largest.max(ev.merged_size());
        let (l, r) = (ev.predator as u128, ev.prey as u128);
        traj.l2_sum += l * l;
        traj.lr2_sum += (l + r) * (l + r);
        traj.r2_sum += r * r;
        traj.partial_cost_thirds.push(cost);
        traj.max_cluster.push(largest);
        traj.events.push(ev);
    }
    Ok(traj)
}
