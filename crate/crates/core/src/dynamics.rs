//! Repeated play with no-regret learners on perceived values, exact
//! external regret of the realized trajectory, and the total-anarchy bound
//! implied by a smoothness certificate.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equilibria::table_optimum;
use crate::game::{AltruismVector, Game, Orientation, StrategyProfile};
use crate::rational::{Extended, Rational};
use crate::smoothness::{rpoa_in_table, PairDomain};
use crate::table::ValueTable;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Learner {
    /// Hedge with step size `sqrt(ln k / t)` on normalized losses.
    MultiplicativeWeights,
    /// Play proportional to positive cumulative regret.
    RegretMatching,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub learner: Learner,
    pub seed: u64,
    pub profiles: Vec<StrategyProfile>,
    /// Social value of each round's profile.
    pub social: Vec<Rational>,
    /// Per-player perceived value summed over all rounds.
    pub cumulative_perceived: Vec<Rational>,
}

impl Trajectory {
    pub fn rounds(&self) -> usize {
        self.profiles.len()
    }

    pub fn average_social(&self) -> Rational {
        let total: Rational = self.social.iter().sum();
        total / Rational::from(self.rounds().max(1))
    }

    /// Number of rounds each distinct profile was played.
    pub fn profile_counts(&self) -> BTreeMap<&StrategyProfile, u64> {
        let mut counts = BTreeMap::new();
        for p in &self.profiles {
            *counts.entry(p).or_insert(0) += 1;
        }
        counts
    }
}

struct PlayerState {
    rng: ChaCha8Rng,
    /// cumulative normalized loss (MW) or cumulative regret (RM), per strategy
    acc: Vec<f64>,
}

fn sample(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut r = rng.gen::<f64>() * total;
    for (k, w) in weights.iter().enumerate() {
        if r < *w {
            return k;
        }
        r -= w;
    }
    // rounding leftover lands on the last positive weight
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(weights.len() - 1)
}

impl PlayerState {
    fn choose(&mut self, learner: Learner, round: usize) -> usize {
        let k = self.acc.len();
        if k == 1 {
            return 0;
        }
        let weights: Vec<f64> = match learner {
            Learner::MultiplicativeWeights => {
                let eta = libm::sqrt(libm::log(k as f64) / round.max(1) as f64);
                let least = self.acc.iter().cloned().fold(f64::INFINITY, f64::min);
                self.acc.iter().map(|l| libm::exp(-eta * (l - least))).collect()
            }
            Learner::RegretMatching => {
                let positive: Vec<f64> = self.acc.iter().map(|r| r.max(0.0)).collect();
                if positive.iter().any(|r| *r > 0.0) {
                    positive
                } else {
                    vec![1.0; k]
                }
            }
        };
        sample(&mut self.rng, &weights)
    }
}

/// Plays `rounds` rounds where every player runs `learner` against its
/// perceived values. Each player samples from its own ChaCha stream of
/// `seed`, so trajectories are reproducible.
pub fn run_no_regret(
    game: &Game,
    alpha: &AltruismVector,
    rounds: usize,
    seed: u64,
    learner: Learner,
) -> Result<Trajectory, Error> {
    game.check_alpha(alpha)?;
    let table = ValueTable::build(game)?;
    let n = table.player_count();
    let counts = table.strategy_counts().to_vec();
    let perceived: Vec<f64> =
        (0..table.len()).flat_map(|idx| (0..n).map(move |i| (idx, i))).map(|(idx, i)| table.perceived(alpha, i, idx).to_f64()).collect();
    let scale = perceived.iter().cloned().fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let loss = |idx: usize, i: usize| {
        let v = perceived[idx * n + i] / scale;
        match table.orientation() {
            Orientation::CostMin => v,
            Orientation::PayoffMax => 1.0 - v,
        }
    };
    let mut players: Vec<PlayerState> = counts
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            PlayerState { rng, acc: vec![0.0; k] }
        })
        .collect();
    let mut indices = Vec::with_capacity(rounds);
    for round in 1..=rounds {
        let choices: Vec<usize> = players.iter_mut().map(|p| p.choose(learner, round)).collect();
        let idx = crate::game::profile_index(&counts, &choices);
        for (i, p) in players.iter_mut().enumerate() {
            let current = loss(idx, i);
            for t in 0..counts[i] {
                let l = loss(table.deviation(idx, i, t), i);
                match learner {
                    Learner::MultiplicativeWeights => p.acc[t] += l,
                    Learner::RegretMatching => p.acc[t] += current - l,
                }
            }
        }
        indices.push(idx);
    }
    let mut cumulative_perceived = vec![Rational::zero(); n];
    let mut tally: BTreeMap<usize, u64> = BTreeMap::new();
    for &idx in &indices {
        *tally.entry(idx).or_insert(0) += 1;
    }
    for (&idx, &c) in &tally {
        let c = Rational::from(c as usize);
        for (i, total) in cumulative_perceived.iter_mut().enumerate() {
            *total += &c * &table.perceived(alpha, i, idx);
        }
    }
    Ok(Trajectory {
        learner,
        seed,
        social: indices.iter().map(|&idx| table.social(idx).clone()).collect(),
        profiles: indices.into_iter().map(|idx| game.profile_at(idx)).collect(),
        cumulative_perceived,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegretReport {
    /// Exact average external regret of each player on perceived values.
    pub per_player: Vec<Rational>,
    /// Best fixed strategy in hindsight for each player.
    pub best_fixed: Vec<usize>,
    /// Regret divided by the largest perceived value in the game.
    pub normalized: Vec<Rational>,
}

impl RegretReport {
    pub fn max(&self) -> Rational {
        self.per_player.iter().cloned().max().unwrap_or_else(Rational::zero)
    }

    pub fn max_normalized(&self) -> Rational {
        self.normalized.iter().cloned().max().unwrap_or_else(Rational::zero)
    }
}

fn check_trajectory(game: &Game, trajectory: &Trajectory) -> Result<(), Error> {
    if trajectory.profiles.is_empty() {
        return Err(Error::ParameterOutOfRange("trajectory has no rounds".into()));
    }
    trajectory.profiles.iter().try_for_each(|p| game.check_profile(p))
}

/// Average regret of player `i` against each fixed strategy `t`:
/// `(1/T) sum_r V_i(s^r) - V_i(t, s^r_-i)` for costs, reversed for payoffs.
pub fn average_external_regret(game: &Game, alpha: &AltruismVector, trajectory: &Trajectory) -> Result<RegretReport, Error> {
    game.check_alpha(alpha)?;
    check_trajectory(game, trajectory)?;
    let table = ValueTable::build(game)?;
    let counts = trajectory.profile_counts();
    let rounds = Rational::from(trajectory.rounds());
    let mut scale = Rational::zero();
    for idx in 0..table.len() {
        for i in 0..table.player_count() {
            scale = scale.max(table.perceived(alpha, i, idx));
        }
    }
    if scale.is_zero() {
        scale = Rational::one();
    }
    let mut per_player = Vec::new();
    let mut best_fixed = Vec::new();
    for (i, &k) in table.strategy_counts().iter().enumerate() {
        let mut realized = Rational::zero();
        let mut fixed = vec![Rational::zero(); k];
        for (profile, &c) in &counts {
            let c = Rational::from(c as usize);
            let idx = game.index_of(profile);
            realized += &c * &table.perceived(alpha, i, idx);
            for (t, total) in fixed.iter_mut().enumerate() {
                *total += &c * &table.perceived(alpha, i, table.deviation(idx, i, t));
            }
        }
        let (best, value) = match game.orientation() {
            Orientation::CostMin => fixed.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)),
            Orientation::PayoffMax => fixed.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))),
        }
        .expect("non-empty strategy set");
        let gap = match game.orientation() {
            Orientation::CostMin => realized - value,
            Orientation::PayoffMax => value - &realized,
        };
        per_player.push(gap / &rounds);
        best_fixed.push(best);
    }
    let normalized = per_player.iter().map(|r| r / &scale).collect();
    Ok(RegretReport { per_player, best_fixed, normalized })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalAnarchyCheck {
    pub average_social: Rational,
    pub optimum: Rational,
    pub rpoa: Extended,
    pub regret: RegretReport,
    /// Upper bound on average cost, or lower bound on average welfare.
    pub bound: Option<Rational>,
    pub holds: bool,
}

/// Compares the time-averaged social value with the bound a smoothness
/// certificate `(lambda, mu)` gives for any trajectory:
/// `avg C <= (lambda OPT + sum_i R_i+) / (1 - mu)` for costs and
/// `avg P >= (lambda OPT - sum_i R_i+) / (1 + mu)` for payoffs, where
/// `R_i` is the perceived-value regret.
pub fn total_anarchy_check(game: &Game, alpha: &AltruismVector, trajectory: &Trajectory) -> Result<TotalAnarchyCheck, Error> {
    let regret = average_external_regret(game, alpha, trajectory)?;
    let table = ValueTable::build(game)?;
    let (_, optimum) = table_optimum(&table);
    let result = rpoa_in_table(&table, alpha, PairDomain::OptimumTargets, game.profile_cap())?;
    let average_social = trajectory.average_social();
    let slack: Rational = regret.per_player.iter().map(|r| r.clone().max(Rational::zero())).sum();
    let one = Rational::one();
    let (bound, holds) = match &result.certificate {
        None => (None, true),
        Some(cert) => match game.orientation() {
            Orientation::CostMin => {
                let bound = (&cert.lambda * &optimum + &slack) / (&one - &cert.mu);
                let holds = average_social <= bound;
                (Some(bound), holds)
            }
            Orientation::PayoffMax => {
                let bound = (&cert.lambda * &optimum - &slack) / (&one + &cert.mu);
                let holds = average_social >= bound;
                (Some(bound), holds)
            }
        },
    };
    Ok(TotalAnarchyCheck { average_social, optimum, rpoa: result.value, regret, bound, holds })
}
