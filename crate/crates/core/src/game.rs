//! Finite strategic games, altruism vectors and exact evaluation of
//! direct, social and perceived values.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::families::Family;
use crate::rational::Rational;
use crate::Error;

/// Default cap on the number of profiles any exhaustive routine will visit.
pub const DEFAULT_PROFILE_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Players minimize cost; the social objective is a cost.
    CostMin,
    /// Players maximize payoff; the social objective is a welfare.
    PayoffMax,
}

impl Orientation {
    /// `true` when `candidate` is strictly better than `current` for a player.
    pub fn improves(self, candidate: &Rational, current: &Rational) -> bool {
        match self {
            Orientation::CostMin => candidate < current,
            Orientation::PayoffMax => candidate > current,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::CostMin => "cost-min",
            Orientation::PayoffMax => "payoff-max",
        })
    }
}

/// Direct values of every player and the social value at one profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub direct: Vec<Rational>,
    pub social: Rational,
}

/// Pure evaluation oracle behind a [`Game`].
pub trait Evaluator: Send + Sync {
    fn direct_value(&self, player: usize, profile: &[usize]) -> Rational;

    fn social_value(&self, profile: &[usize]) -> Rational;

    /// Evaluates all players and the social objective in one pass. Families
    /// override this to share the load computation.
    fn evaluate(&self, profile: &[usize]) -> Evaluation {
        Evaluation {
            direct: (0..profile.len()).map(|i| self.direct_value(i, profile)).collect(),
            social: self.social_value(profile),
        }
    }
}

struct FnEvaluator<D, S> {
    direct: D,
    social: S,
}

impl<D, S> Evaluator for FnEvaluator<D, S>
where
    D: Fn(usize, &[usize]) -> Rational + Send + Sync,
    S: Fn(&[usize]) -> Rational + Send + Sync,
{
    fn direct_value(&self, player: usize, profile: &[usize]) -> Rational {
        (self.direct)(player, profile)
    }

    fn social_value(&self, profile: &[usize]) -> Rational {
        (self.social)(profile)
    }
}

/// Payoff table indexed by lexicographic profile index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitTable {
    pub strategy_counts: Vec<usize>,
    /// `direct[profile_index][player]`
    pub direct: Vec<Vec<Rational>>,
    /// `social[profile_index]`
    pub social: Vec<Rational>,
}

impl Evaluator for ExplicitTable {
    fn direct_value(&self, player: usize, profile: &[usize]) -> Rational {
        self.direct[profile_index(&self.strategy_counts, profile)][player].clone()
    }

    fn social_value(&self, profile: &[usize]) -> Rational {
        self.social[profile_index(&self.strategy_counts, profile)].clone()
    }

    fn evaluate(&self, profile: &[usize]) -> Evaluation {
        let idx = profile_index(&self.strategy_counts, profile);
        Evaluation { direct: self.direct[idx].clone(), social: self.social[idx].clone() }
    }
}

/// Lexicographic index of `profile`, player 0 most significant.
pub fn profile_index(counts: &[usize], profile: &[usize]) -> usize {
    profile.iter().zip(counts).fold(0, |acc, (&s, &k)| acc * k + s)
}

/// A finite strategic game with exact rational values.
#[derive(Clone)]
pub struct Game {
    strategy_counts: Vec<usize>,
    orientation: Orientation,
    evaluator: Arc<dyn Evaluator>,
    family: Option<Family>,
    profile_cap: u64,
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game")
            .field("strategy_counts", &self.strategy_counts)
            .field("orientation", &self.orientation)
            .field("family", &self.family.as_ref().map(Family::tag))
            .finish()
    }
}

impl Game {
    pub fn from_evaluator(
        strategy_counts: Vec<usize>,
        orientation: Orientation,
        evaluator: Arc<dyn Evaluator>,
    ) -> Result<Self, Error> {
        if strategy_counts.is_empty() {
            return Err(Error::InvalidSpec("a game needs at least one player".into()));
        }
        if let Some(player) = strategy_counts.iter().position(|&k| k == 0) {
            return Err(Error::EmptyStrategySet { player });
        }
        Ok(Game { strategy_counts, orientation, evaluator, family: None, profile_cap: DEFAULT_PROFILE_CAP })
    }

    /// Game backed by two pure closures.
    pub fn from_fns<D, S>(
        strategy_counts: Vec<usize>,
        orientation: Orientation,
        direct: D,
        social: S,
    ) -> Result<Self, Error>
    where
        D: Fn(usize, &[usize]) -> Rational + Send + Sync + 'static,
        S: Fn(&[usize]) -> Rational + Send + Sync + 'static,
    {
        Self::from_evaluator(strategy_counts, orientation, Arc::new(FnEvaluator { direct, social }))
    }

    /// Game backed by an explicit payoff table, checked for shape.
    pub fn from_table(table: ExplicitTable, orientation: Orientation) -> Result<Self, Error> {
        let n = table.strategy_counts.len();
        let total = table
            .strategy_counts
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .ok_or(Error::InstanceTooLarge { profiles: None, cap: DEFAULT_PROFILE_CAP })?;
        if table.direct.len() != total || table.social.len() != total {
            return Err(Error::InvalidSpec(alloc::format!(
                "explicit table needs {total} profiles, got {} direct rows and {} social values",
                table.direct.len(),
                table.social.len()
            )));
        }
        if let Some(row) = table.direct.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidSpec(alloc::format!("profile row {row} must list {n} player values")));
        }
        let counts = table.strategy_counts.clone();
        Self::from_evaluator(counts, orientation, Arc::new(table))
    }

    pub(crate) fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    /// Overrides the exhaustive-enumeration cap.
    pub fn with_profile_cap(mut self, cap: u64) -> Self {
        self.profile_cap = cap;
        self
    }

    pub fn profile_cap(&self) -> u64 {
        self.profile_cap
    }

    pub fn player_count(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn evaluator(&self) -> &Arc<dyn Evaluator> {
        &self.evaluator
    }

    /// Number of pure profiles, or `None` on `u64` overflow.
    pub fn profile_count(&self) -> Option<u64> {
        self.strategy_counts.iter().try_fold(1u64, |acc, &k| acc.checked_mul(k as u64))
    }

    /// Fails with [`Error::InstanceTooLarge`] unless the profile space fits `cap`.
    pub fn ensure_within(&self, cap: u64) -> Result<u64, Error> {
        match self.profile_count() {
            Some(p) if p <= cap => Ok(p),
            other => Err(Error::InstanceTooLarge { profiles: other, cap }),
        }
    }

    pub fn check_player(&self, player: usize) -> Result<(), Error> {
        if player < self.player_count() {
            Ok(())
        } else {
            Err(Error::PlayerOutOfRange { player, players: self.player_count() })
        }
    }

    pub fn check_profile(&self, profile: &StrategyProfile) -> Result<(), Error> {
        let n = self.player_count();
        if profile.len() != n {
            return Err(Error::ProfileLength { expected: n, found: profile.len() });
        }
        for (player, (&s, &k)) in profile.0.iter().zip(&self.strategy_counts).enumerate() {
            if s >= k {
                return Err(Error::StrategyOutOfRange { player, strategy: s, count: k });
            }
        }
        Ok(())
    }

    pub fn check_alpha(&self, alpha: &AltruismVector) -> Result<(), Error> {
        if alpha.len() != self.player_count() {
            return Err(Error::AltruismLength { expected: self.player_count(), found: alpha.len() });
        }
        Ok(())
    }

    pub fn direct_value(&self, player: usize, profile: &StrategyProfile) -> Result<Rational, Error> {
        self.check_player(player)?;
        self.check_profile(profile)?;
        Ok(self.evaluator.direct_value(player, profile.choices()))
    }

    pub fn social_value(&self, profile: &StrategyProfile) -> Result<Rational, Error> {
        self.check_profile(profile)?;
        Ok(self.evaluator.social_value(profile.choices()))
    }

    /// Unchecked evaluation on a raw choice slice.
    pub fn evaluate(&self, choices: &[usize]) -> Evaluation {
        self.evaluator.evaluate(choices)
    }

    /// Perceived value `(1 - a_i) * direct_i + a_i * social`.
    pub fn perceived_value(
        &self,
        alpha: &AltruismVector,
        player: usize,
        profile: &StrategyProfile,
    ) -> Result<Rational, Error> {
        self.check_alpha(alpha)?;
        let direct = self.direct_value(player, profile)?;
        let social = self.evaluator.social_value(profile.choices());
        Ok(perceived(&direct, &social, alpha.get(player)))
    }

    /// Social value minus the player's direct value.
    pub fn residual_value(&self, player: usize, profile: &StrategyProfile) -> Result<Rational, Error> {
        let direct = self.direct_value(player, profile)?;
        Ok(self.evaluator.social_value(profile.choices()) - direct)
    }

    /// `profile` with player's strategy replaced; the input is untouched.
    pub fn deviate(
        &self,
        profile: &StrategyProfile,
        player: usize,
        strategy: usize,
    ) -> Result<StrategyProfile, Error> {
        self.check_profile(profile)?;
        self.check_player(player)?;
        let count = self.strategy_counts[player];
        if strategy >= count {
            return Err(Error::StrategyOutOfRange { player, strategy, count });
        }
        Ok(profile.with_choice(player, strategy))
    }

    /// Every profile in lexicographic order, subject to the profile cap.
    pub fn profiles(&self) -> Result<Profiles, Error> {
        self.ensure_within(self.profile_cap)?;
        Ok(Profiles::new(self.strategy_counts.clone()))
    }

    pub fn profile_at(&self, index: usize) -> StrategyProfile {
        StrategyProfile(profile_from_index(&self.strategy_counts, index))
    }

    pub fn index_of(&self, profile: &StrategyProfile) -> usize {
        profile_index(&self.strategy_counts, profile.choices())
    }

    /// Checks `C(s) <= sum_i C_i(s)` (cost) or `P(s) >= sum_i P_i(s)` (payoff) on every profile.
    pub fn check_sum_bounded(&self) -> Result<(), Error> {
        for profile in self.profiles()? {
            let eval = self.evaluate(profile.choices());
            let total: Rational = eval.direct.iter().sum();
            let ok = match self.orientation {
                Orientation::CostMin => eval.social <= total,
                Orientation::PayoffMax => eval.social >= total,
            };
            if !ok {
                return Err(Error::NotSumBounded { profile: profile.into_choices() });
            }
        }
        Ok(())
    }
}

/// `(1 - a) * direct + a * social`
pub fn perceived(direct: &Rational, social: &Rational, a: &Rational) -> Rational {
    if a.is_zero() {
        return direct.clone();
    }
    direct + &(a * &(social - direct))
}

pub(crate) fn profile_from_index(counts: &[usize], mut index: usize) -> Vec<usize> {
    let mut choices = vec![0; counts.len()];
    for (slot, &k) in choices.iter_mut().zip(counts).rev() {
        *slot = index % k;
        index /= k;
    }
    choices
}

/// One strategy index per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile(Vec<usize>);

impl StrategyProfile {
    pub fn new(choices: Vec<usize>) -> Self {
        StrategyProfile(choices)
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_choices(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn choice(&self, player: usize) -> usize {
        self.0[player]
    }

    /// Unchecked unilateral deviation.
    pub fn with_choice(&self, player: usize, strategy: usize) -> Self {
        let mut choices = self.0.clone();
        choices[player] = strategy;
        StrategyProfile(choices)
    }
}

impl From<Vec<usize>> for StrategyProfile {
    fn from(value: Vec<usize>) -> Self {
        StrategyProfile(value)
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// Lexicographic profile iterator.
#[derive(Clone, Debug)]
pub struct Profiles {
    counts: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Profiles {
    pub fn new(counts: Vec<usize>) -> Self {
        let next = if counts.iter().all(|&k| k > 0) { Some(vec![0; counts.len()]) } else { None };
        Profiles { counts, next }
    }
}

impl Iterator for Profiles {
    type Item = StrategyProfile;

    fn next(&mut self) -> Option<StrategyProfile> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for (slot, &k) in succ.iter_mut().zip(&self.counts).rev() {
            *slot += 1;
            if *slot < k {
                carried = false;
                break;
            }
            *slot = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(StrategyProfile(current))
    }
}

/// Per-player altruism levels in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AltruismVector(Vec<Rational>);

impl AltruismVector {
    pub fn new(alphas: Vec<Rational>) -> Result<Self, Error> {
        for (player, a) in alphas.iter().enumerate() {
            if a.is_negative() || *a > Rational::one() {
                return Err(Error::AltruismOutOfRange { player, value: a.clone() });
            }
        }
        Ok(AltruismVector(alphas))
    }

    pub fn uniform(players: usize, alpha: Rational) -> Result<Self, Error> {
        Self::new(vec![alpha; players])
    }

    /// The selfish vector.
    pub fn zeros(players: usize) -> Self {
        AltruismVector(vec![Rational::zero(); players])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, player: usize) -> &Rational {
        &self.0[player]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// Largest altruism level; zero for an empty vector.
    pub fn max(&self) -> Rational {
        self.0.iter().cloned().fold(Rational::zero(), Rational::max)
    }

    /// Smallest altruism level; zero for an empty vector.
    pub fn min(&self) -> Rational {
        self.0.iter().cloned().reduce(Rational::min).unwrap_or_default()
    }

    /// The common level when every player has the same one.
    pub fn uniform_value(&self) -> Option<&Rational> {
        let first = self.0.first()?;
        self.0.iter().all(|a| a == first).then_some(first)
    }

    /// Every level is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|a| a.is_zero() || *a == Rational::one())
    }

    /// Fraction of fully altruistic players.
    pub fn altruist_fraction(&self) -> Rational {
        let count = self.0.iter().filter(|a| **a == Rational::one()).count();
        Rational::from(count) / Rational::from(self.0.len().max(1))
    }

    /// `gamma * self + (1 - gamma) * other`
    pub fn convex_combination(&self, other: &AltruismVector, gamma: &Rational) -> Result<Self, Error> {
        if self.len() != other.len() {
            return Err(Error::AltruismLength { expected: self.len(), found: other.len() });
        }
        let rest = Rational::one() - gamma;
        Self::new(self.0.iter().zip(&other.0).map(|(a, b)| gamma * a + &rest * b).collect())
    }
}
