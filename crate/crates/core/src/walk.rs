//! Symmetric random walk inside a cluster.
//!
//! A cluster of size `s` is walked on coordinates `0..=s`, both ends
//! absorbing. Coordinate `s` is the cluster's own empty site (clockwise end),
//! coordinate `0` is the empty site of the counterclockwise neighbour.
//!
//! Besides step simulation this module carries the closed forms for exit
//! sides and first-passage moments, and an exact oracle that solves the
//! one-step conditioning recurrences over the interior states with rational
//! arithmetic. The closed forms are never used to build the oracle.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::exact::{binomial, int, one, rat, uint, zero, Rational};

/// Side on which the walk is absorbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExitSide {
    /// Absorbed at coordinate `s`, the cluster's own empty site.
    Clockwise,
    /// Absorbed at coordinate `0`, the neighbouring empty site.
    Counterclockwise,
}

impl ExitSide {
    pub fn symbol(self) -> char {
        match self {
            ExitSide::Clockwise => '+',
            ExitSide::Counterclockwise => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkSpec {
    size: u64,
    start: u64,
}

impl WalkSpec {
    pub fn new(size: u64, start: u64) -> Result<Self> {
        if size == 0 || start == 0 || start > size {
            return Err(Error::InvalidWalk { size, start });
        }
        Ok(WalkSpec { size, start })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn start(&self) -> u64 {
        self.start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkOutcome {
    pub side: ExitSide,
    pub steps: u64,
}

/// Runs the walk step by step. Each step consumes one random bit.
pub fn simulate_walk<R: RngCore + ?Sized>(spec: WalkSpec, rng: &mut R) -> WalkOutcome {
    let size = spec.size;
    let mut pos = spec.start;
    let mut steps = 0u64;
    let mut bits = 0u64;
    let mut left = 0u32;
    while pos != 0 && pos != size {
        if left == 0 {
            bits = rng.next_u64();
            left = 64;
        }
        if bits & 1 == 1 {
            pos += 1;
        } else {
            pos -= 1;
        }
        bits >>= 1;
        left -= 1;
        steps += 1;
    }
    let side = if pos == size {
        ExitSide::Clockwise
    } else {
        ExitSide::Counterclockwise
    };
    WalkOutcome { side, steps }
}

fn check_start(size: u64, start: u64) -> Result<()> {
    WalkSpec::new(size, start).map(|_| ())
}

/// Probability of a clockwise exit with a uniform start on `1..=s`.
pub fn exit_side_prob(size: u64) -> Result<Rational> {
    if size == 0 {
        return Err(Error::InvalidWalk { size, start: 0 });
    }
    Ok(rat(size as i64 + 1, 2 * size as i64))
}

/// Probability of a clockwise exit from `start` (gambler's ruin).
pub fn exit_side_prob_given_start(size: u64, start: u64) -> Result<Rational> {
    check_start(size, start)?;
    Ok(rat(start as i64, size as i64))
}

/// `E[D_s] = (s^2 - 1) / 6` for a uniform start.
pub fn mean_steps(size: u64) -> Result<Rational> {
    if size == 0 {
        return Err(Error::InvalidWalk { size, start: 0 });
    }
    let s = uint(size);
    Ok((&s * &s - one()) / int(6))
}

/// Three times the conditional mean exit time, as an integer:
/// `s^2 - x^2` for a clockwise exit and `x (2s - x)` for a counterclockwise one.
pub fn conditional_mean_thirds(size: u64, start: u64, side: ExitSide) -> u64 {
    match side {
        ExitSide::Clockwise => size * size - start * start,
        ExitSide::Counterclockwise => start * (2 * size - start),
    }
}

/// `E[D | X_0 = x, exit side]`.
pub fn mean_steps_conditional(size: u64, start: u64, side: ExitSide) -> Result<Rational> {
    check_start(size, start)?;
    if start == size && side == ExitSide::Counterclockwise {
        return Err(Error::ImpossibleExit);
    }
    Ok(rat(conditional_mean_thirds(size, start, side) as i64, 3))
}

/// Closed forms available for `E[D_s^2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondMomentForm {
    /// `(s^2 - 1)(3 s^2 - 7) / 45`, as printed with the martingale derivation.
    Printed,
    /// `(s^2 - 1)(2 s^2 - 3) / 30`.
    Corrected,
}

impl SecondMomentForm {
    pub fn eval(self, size: u64) -> Rational {
        let s2 = int(size as i64 * size as i64);
        match self {
            SecondMomentForm::Printed => (&s2 - one()) * (int(3) * &s2 - int(7)) / int(45),
            SecondMomentForm::Corrected => (&s2 - one()) * (int(2) * &s2 - int(3)) / int(30),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    Printed,
    Oracle,
}

pub fn second_moment_steps(size: u64, source: MomentSource) -> Result<Rational> {
    if size == 0 {
        return Err(Error::InvalidWalk { size, start: 0 });
    }
    Ok(match source {
        MomentSource::Printed => SecondMomentForm::Printed.eval(size),
        MomentSource::Oracle => exact_walk_oracle(size, 2)?,
    })
}

/// Largest cluster size over which the second-moment forms are adjudicated.
pub const ADJUDICATION_MAX_SIZE: u64 = 50;

/// The closed form for `E[D_s^2]` that matches the oracle for every
/// `s <= ADJUDICATION_MAX_SIZE`, or `None` if neither does.
pub fn validated_second_moment_form() -> Option<SecondMomentForm> {
    static FORM: OnceLock<Option<SecondMomentForm>> = OnceLock::new();
    *FORM.get_or_init(|| {
        let oracle: Vec<Rational> = (1..=ADJUDICATION_MAX_SIZE)
            .map(|s| exact_walk_oracle(s, 2).expect("valid size"))
            .collect();
        [SecondMomentForm::Corrected, SecondMomentForm::Printed]
            .into_iter()
            .find(|form| (1..=ADJUDICATION_MAX_SIZE).all(|s| form.eval(s) == oracle[s as usize - 1]))
    })
}

/// `E[D_s^2]` from the validated closed form, or from the oracle itself when
/// no closed form survives adjudication.
pub fn validated_second_moment(size: u64) -> Rational {
    match validated_second_moment_form() {
        Some(form) => form.eval(size),
        None => exact_walk_oracle(size, 2).expect("size >= 1"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub size: u64,
    pub mean: Rational,
    pub second_moment_printed: Rational,
    pub second_moment_oracle: Rational,
    pub agrees: bool,
}

pub fn moment_report(size: u64) -> Result<MomentReport> {
    let second_moment_printed = second_moment_steps(size, MomentSource::Printed)?;
    let second_moment_oracle = second_moment_steps(size, MomentSource::Oracle)?;
    Ok(MomentReport {
        size,
        mean: exact_walk_oracle(size, 1)?,
        agrees: second_moment_printed == second_moment_oracle,
        second_moment_printed,
        second_moment_oracle,
    })
}

// ---------------------------------------------------------------------------
// Exact oracle
// ---------------------------------------------------------------------------

/// Weight attached to the absorbing state the walk ends in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    /// Every exit counts: plain moments `E[D^j]`.
    Any,
    /// Only clockwise exits count: `E[D^j ; X_D = s]`.
    Clockwise,
}

/// Exact table `table[j][x] = E[D^j w(X_D) | X_0 = x]` for `j = 0..=order`
/// and `x = 0..=s`, from one-step conditioning:
/// `u_j(x) = sum_{i<=j} C(j,i) (u_i(x-1) + u_i(x+1)) / 2` on the interior.
pub fn first_passage_table(size: u64, order: usize, terminal: Terminal) -> Vec<Vec<Rational>> {
    let s = size as usize;
    let (w_left, w_right) = match terminal {
        Terminal::Any => (one(), one()),
        Terminal::Clockwise => (zero(), one()),
    };
    let half = rat(1, 2);
    let mut table: Vec<Vec<Rational>> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut u = vec![zero(); s + 1];
        if j == 0 {
            u[0] = w_left.clone();
            u[s] = w_right.clone();
        }
        if s >= 2 {
            // interior unknowns x = 1..s-1: u(x) - (u(x-1)+u(x+1))/2 = rhs(x)
            let mut rhs: Vec<Rational> = (1..s)
                .map(|x| {
                    let mut acc = zero();
                    for (i, lower) in table.iter().enumerate() {
                        let c = Rational::from_integer(binomial(j as u64, i as u64));
                        acc += c * (&lower[x - 1] + &lower[x + 1]) * &half;
                    }
                    acc
                })
                .collect();
            if j == 0 {
                rhs[0] += &w_left * &half;
                let last = rhs.len() - 1;
                rhs[last] += &w_right * &half;
            }
            let solved = solve_walk_system(&rhs);
            u[1..s].clone_from_slice(&solved);
        }
        table.push(u);
    }
    table
}

/// Thomas algorithm for the tridiagonal system with unit diagonal and
/// off-diagonals -1/2.
fn solve_walk_system(rhs: &[Rational]) -> Vec<Rational> {
    let n = rhs.len();
    let off = rat(-1, 2);
    let mut c_prime = Vec::with_capacity(n);
    let mut d_prime = Vec::with_capacity(n);
    for i in 0..n {
        let (denom, d) = if i == 0 {
            (one(), rhs[0].clone())
        } else {
            let denom = one() - &off * &c_prime[i - 1];
            let d = &rhs[i] - &off * &d_prime[i - 1];
            (denom, d)
        };
        c_prime.push(&off / &denom);
        d_prime.push(d / denom);
    }
    let mut x = vec![zero(); n];
    for i in (0..n).rev() {
        x[i] = if i + 1 == n {
            d_prime[i].clone()
        } else {
            &d_prime[i] - &c_prime[i] * &x[i + 1]
        };
    }
    x
}

/// Exact `E[D_s^j]` for a start uniform on `1..=s`.
pub fn exact_walk_oracle(size: u64, order: usize) -> Result<Rational> {
    if size == 0 || !(1..=3).contains(&order) {
        return Err(Error::Domain(format!("oracle needs s >= 1 and order in 1..=3, got s={size}, j={order}")));
    }
    let table = first_passage_table(size, order, Terminal::Any);
    Ok(uniform_average(&table[order][1..]))
}

/// Exact `E[D~_s^j]` for the symmetrised chain: start uniform on `0..=s`.
pub fn symmetrized_moment(size: u64, order: usize) -> Rational {
    let table = first_passage_table(size, order, Terminal::Any);
    uniform_average(&table[order])
}

fn uniform_average(values: &[Rational]) -> Rational {
    let total: Rational = values.iter().sum();
    total / uint(values.len() as u64)
}

/// Exact law of the exit time split by exit side, truncated at `t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitTimeDistribution {
    /// `clockwise[t] = P(D = t, X_D = s)`.
    pub clockwise: Vec<Rational>,
    /// `counterclockwise[t] = P(D = t, X_D = 0)`.
    pub counterclockwise: Vec<Rational>,
    /// Exact probability mass of `D > t_max`.
    pub tail: Rational,
}

impl ExitTimeDistribution {
    pub fn prob(&self, t: usize) -> Rational {
        &self.clockwise[t] + &self.counterclockwise[t]
    }

    fn mix(parts: &[ExitTimeDistribution]) -> ExitTimeDistribution {
        let weight = rat(1, parts.len() as i64);
        let len = parts[0].clockwise.len();
        let sum = |pick: fn(&ExitTimeDistribution) -> &Vec<Rational>| -> Vec<Rational> {
            (0..len)
                .map(|t| parts.iter().map(|p| &pick(p)[t]).sum::<Rational>() * &weight)
                .collect()
        };
        ExitTimeDistribution {
            clockwise: sum(|p| &p.clockwise),
            counterclockwise: sum(|p| &p.counterclockwise),
            tail: parts.iter().map(|p| &p.tail).sum::<Rational>() * &weight,
        }
    }
}

/// Exact exit-time law from `start` (any coordinate in `0..=s`).
pub fn exit_time_distribution(size: u64, start: u64, t_max: usize) -> Result<ExitTimeDistribution> {
    if size == 0 || start > size {
        return Err(Error::InvalidWalk { size, start });
    }
    let s = size as usize;
    let mut clockwise = vec![zero(); t_max + 1];
    let mut counterclockwise = vec![zero(); t_max + 1];
    let mut mass = vec![zero(); s + 1];
    mass[start as usize] = one();
    let half = rat(1, 2);
    for t in 0..=t_max {
        if t > 0 {
            let mut next = vec![zero(); s + 1];
            for x in 1..s {
                if mass[x].is_zero() {
                    continue;
                }
                let piece = &mass[x] * &half;
                next[x - 1] += &piece;
                next[x + 1] += piece;
            }
            mass = next;
        }
        clockwise[t] = std::mem::replace(&mut mass[s], zero());
        counterclockwise[t] = std::mem::replace(&mut mass[0], zero());
    }
    let tail = mass.iter().sum();
    Ok(ExitTimeDistribution {
        clockwise,
        counterclockwise,
        tail,
    })
}

/// Exit-time law of the symmetrised chain (start uniform on `0..=s`).
pub fn symmetrized_exit_time_distribution(size: u64, t_max: usize) -> Result<ExitTimeDistribution> {
    let parts = (0..=size)
        .map(|x| exit_time_distribution(size, x, t_max))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExitTimeDistribution::mix(&parts))
}

// ---------------------------------------------------------------------------
// Martingale identities, tested as claims against the oracle
// ---------------------------------------------------------------------------

/// Constant term of the quartic process `X^4 - 2(3h-2) X^2 + h(3h - c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticForm {
    /// `h(3h - 1)`.
    Printed,
    /// `h(3h - 2)`.
    Corrected,
}

impl QuarticForm {
    fn offset(self) -> i64 {
        match self {
            QuarticForm::Printed => 1,
            QuarticForm::Corrected => 2,
        }
    }

    pub fn eval(self, position: i64, time: i64) -> BigInt {
        let x2 = BigInt::from(position) * position;
        let h = BigInt::from(time);
        &x2 * &x2 - BigInt::from(2 * (3 * time - 2)) * &x2 + &h * (BigInt::from(3) * &h - self.offset())
    }

    /// `E[f(X + Y, h + 1)] - f(X, h)` for one symmetric step.
    pub fn one_step_drift(self, position: i64, time: i64) -> Rational {
        let up = self.eval(position + 1, time + 1);
        let down = self.eval(position - 1, time + 1);
        Rational::new(up + down, BigInt::from(2)) - Rational::from_integer(self.eval(position, time))
    }

    /// `(E[f(X_D, D)], E[f(X_0, 0)])` for the symmetrised chain on `0..=s`.
    pub fn stopped_expectations(self, size: u64) -> (Rational, Rational) {
        let s2 = int(size as i64 * size as i64);
        let plus = first_passage_table(size, 1, Terminal::Clockwise);
        let any = first_passage_table(size, 2, Terminal::Any);
        let p_plus = uniform_average(&plus[0]);
        let d_plus = uniform_average(&plus[1]);
        let d1 = uniform_average(&any[1]);
        let d2 = uniform_average(&any[2]);
        // X_D^2 = s^2 on clockwise exits and 0 otherwise
        let stopped = &s2 * &s2 * &p_plus - int(6) * &s2 * &d_plus + int(4) * &s2 * &p_plus + int(3) * d2
            - int(self.offset()) * d1;
        let initial: Rational = (0..=size as i64)
            .map(|x| Rational::from_integer(self.eval(x, 0)))
            .sum::<Rational>()
            / uint(size + 1);
        (stopped, initial)
    }
}

/// `(E[X_D^2] - E[D], E[X_0^2])` for a start uniform on `1..=s`.
pub fn quadratic_stopping_identity(size: u64) -> (Rational, Rational) {
    let s2 = int(size as i64 * size as i64);
    let plus = first_passage_table(size, 0, Terminal::Clockwise);
    let any = first_passage_table(size, 1, Terminal::Any);
    let lhs = s2 * uniform_average(&plus[0][1..]) - uniform_average(&any[1][1..]);
    let rhs = (1..=size as i64).map(|x| int(x * x)).sum::<Rational>() / uint(size);
    (lhs, rhs)
}

/// Exact `P(X_D = s)` for a start uniform on `1..=s`.
pub fn oracle_exit_side_prob(size: u64) -> Rational {
    let plus = first_passage_table(size, 0, Terminal::Clockwise);
    uniform_average(&plus[0][1..])
}

/// Exact `E[D | X_0 = x, X_D = s]` and, when `x < s`, `E[D | X_0 = x, X_D = 0]`.
pub fn oracle_conditional_means(size: u64, start: u64) -> (Rational, Option<Rational>) {
    let plus = first_passage_table(size, 1, Terminal::Clockwise);
    let any = first_passage_table(size, 1, Terminal::Any);
    let x = start as usize;
    let p_plus = &plus[0][x];
    let clockwise = &plus[1][x] / p_plus;
    let p_minus = one() - p_plus;
    let counter = if p_minus.is_zero() {
        None
    } else {
        Some((&any[1][x] - &plus[1][x]) / p_minus)
    };
    (clockwise, counter)
}

/// Sanity accessor used by tests: `E[D^j | X_0 = x]` as a single rational.
pub fn oracle_moment_from(size: u64, start: u64, order: usize) -> Rational {
    first_passage_table(size, order, Terminal::Any)[order][start as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn walk_spec_rejects_bad_start() {
        assert!(WalkSpec::new(3, 0).is_err());
        assert!(WalkSpec::new(3, 4).is_err());
        assert!(WalkSpec::new(0, 0).is_err());
        assert!(WalkSpec::new(1, 1).is_ok());
    }

    #[test]
    fn start_on_boundary_sticks() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = simulate_walk(WalkSpec::new(1, 1).unwrap(), &mut rng);
        assert_eq!(out, WalkOutcome { side: ExitSide::Clockwise, steps: 0 });
        let out = simulate_walk(WalkSpec::new(7, 7).unwrap(), &mut rng);
        assert_eq!(out.steps, 0);
    }

    #[test]
    fn size_two_always_one_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut plus = 0;
        for _ in 0..20_000 {
            let out = simulate_walk(WalkSpec::new(2, 1).unwrap(), &mut rng);
            assert_eq!(out.steps, 1);
            plus += (out.side == ExitSide::Clockwise) as u32;
        }
        let p = plus as f64 / 20_000.0;
        assert!((p - 0.5).abs() < 4.0 * (0.25f64 / 20_000.0).sqrt());
    }

    #[test]
    fn size_three_step_law() {
        // oracle: P(D=1)=1/2, P(D=2)=1/4, P(D=3)=1/8 from x0 = 1
        let dist = exit_time_distribution(3, 1, 3).unwrap();
        assert_eq!(dist.prob(1), rat(1, 2));
        assert_eq!(dist.prob(2), rat(1, 4));
        assert_eq!(dist.prob(3), rat(1, 8));
        assert_eq!(dist.tail, rat(1, 8));

        let reps = 1_000_000u32;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [0u32; 4];
        for _ in 0..reps {
            let out = simulate_walk(WalkSpec::new(3, 1).unwrap(), &mut rng);
            if out.steps <= 3 {
                counts[out.steps as usize] += 1;
            }
        }
        for (t, p) in [(1, 0.5), (2, 0.25), (3, 0.125)] {
            let freq = counts[t] as f64 / reps as f64;
            let sigma = (p * (1.0 - p) / reps as f64).sqrt();
            assert!((freq - p).abs() < 3.0 * sigma, "t={t} freq={freq}");
        }
    }

    #[test]
    fn exit_probabilities() {
        assert_eq!(exit_side_prob(1).unwrap(), one());
        assert_eq!(exit_side_prob(2).unwrap(), rat(3, 4));
        assert_eq!(exit_side_prob_given_start(4, 1).unwrap(), rat(1, 4));
        assert!(exit_side_prob_given_start(4, 5).is_err());
        for s in 1..=30u64 {
            let avg: Rational = (1..=s).map(|x| exit_side_prob_given_start(s, x).unwrap()).sum::<Rational>() / uint(s);
            assert_eq!(avg, exit_side_prob(s).unwrap());
            assert_eq!(oracle_exit_side_prob(s), exit_side_prob(s).unwrap());
        }
    }

    #[test]
    fn mean_formulas() {
        assert_eq!(mean_steps(1).unwrap(), zero());
        assert_eq!(mean_steps(3).unwrap(), rat(4, 3));
        assert_eq!(mean_steps_conditional(2, 1, ExitSide::Clockwise).unwrap(), one());
        assert_eq!(
            mean_steps_conditional(3, 3, ExitSide::Counterclockwise),
            Err(Error::ImpossibleExit)
        );
    }

    #[test]
    fn conditional_means_match_oracle() {
        for s in 1..=50u64 {
            for x in 1..=s {
                let (plus, minus) = oracle_conditional_means(s, x);
                assert_eq!(plus, mean_steps_conditional(s, x, ExitSide::Clockwise).unwrap());
                match minus {
                    Some(m) => assert_eq!(m, mean_steps_conditional(s, x, ExitSide::Counterclockwise).unwrap()),
                    None => assert_eq!(x, s),
                }
                // side-weighted average recovers x(s-x)
                let p = exit_side_prob_given_start(s, x).unwrap();
                let mut avg = &p * mean_steps_conditional(s, x, ExitSide::Clockwise).unwrap();
                if x < s {
                    avg += (one() - &p) * mean_steps_conditional(s, x, ExitSide::Counterclockwise).unwrap();
                }
                assert_eq!(avg, int((x * (s - x)) as i64));
            }
        }
    }

    #[test]
    fn oracle_small_values() {
        assert_eq!(exact_walk_oracle(2, 1).unwrap(), rat(1, 2));
        assert_eq!(exact_walk_oracle(3, 2).unwrap(), int(4));
        assert_eq!(oracle_moment_from(3, 1, 2), int(6));
        assert_eq!(oracle_moment_from(3, 2, 2), int(6));
        assert!(exact_walk_oracle(3, 4).is_err());
        let dist = exit_time_distribution(2, 1, 1).unwrap();
        assert_eq!(dist.prob(1), one());
        assert!(dist.tail.is_zero());
    }

    #[test]
    fn second_moment_discrepancy_at_two() {
        assert_eq!(second_moment_steps(1, MomentSource::Printed).unwrap(), zero());
        assert_eq!(second_moment_steps(1, MomentSource::Oracle).unwrap(), zero());
        assert_eq!(second_moment_steps(2, MomentSource::Printed).unwrap(), rat(1, 3));
        assert_eq!(second_moment_steps(2, MomentSource::Oracle).unwrap(), rat(1, 2));
        let report = moment_report(2).unwrap();
        assert!(!report.agrees);
        assert_eq!(validated_second_moment_form(), Some(SecondMomentForm::Corrected));
    }

    #[test]
    fn third_moment_is_positive_and_grows() {
        let mut prev = zero();
        for s in 2..=12 {
            let m3 = exact_walk_oracle(s, 3).unwrap();
            assert!(m3 > prev);
            prev = m3;
        }
    }

    #[test]
    fn quartic_drift() {
        for x in -5..=5 {
            for h in 0..6 {
                assert_eq!(QuarticForm::Printed.one_step_drift(x, h), one());
                assert!(QuarticForm::Corrected.one_step_drift(x, h).is_zero());
            }
        }
    }

    #[test]
    fn symmetrized_relations() {
        for s in 1..=12u64 {
            for j in 1..=2 {
                assert_eq!(
                    symmetrized_moment(s, j),
                    rat(s as i64, s as i64 + 1) * exact_walk_oracle(s, j).unwrap()
                );
            }
            let dist = symmetrized_exit_time_distribution(s, 40).unwrap();
            for t in 0..=40 {
                assert_eq!(dist.clockwise[t], dist.counterclockwise[t]);
            }
            let (stopped, initial) = QuarticForm::Corrected.stopped_expectations(s);
            assert_eq!(stopped, initial);
        }
        let (stopped, initial) = QuarticForm::Printed.stopped_expectations(5);
        assert_ne!(stopped, initial);
    }
}
