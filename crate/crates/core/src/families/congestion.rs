use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{loads, normalize_strategy_sets, Family};
use crate::game::{Evaluation, Evaluator, Game, Orientation};
use crate::rational::Rational;
use crate::Error;

/// Delay `d(x) = a * x + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearDelay {
    pub a: Rational,
    pub b: Rational,
}

impl LinearDelay {
    pub fn new(a: Rational, b: Rational) -> Self {
        LinearDelay { a, b }
    }

    /// `d(x) = x`
    pub fn unit() -> Self {
        LinearDelay { a: Rational::one(), b: Rational::zero() }
    }

    pub fn at(&self, x: usize) -> Rational {
        &self.a * &Rational::from(x) + &self.b
    }
}

/// Atomic congestion game with linear delays and unit-weight players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongestionSpec {
    pub delays: Vec<LinearDelay>,
    pub strategy_sets: Vec<Vec<Vec<usize>>>,
    /// Symmetric singleton: every strategy is one facility, shared strategy set.
    pub singleton: bool,
}

impl CongestionSpec {
    pub fn new(delays: Vec<LinearDelay>, strategy_sets: Vec<Vec<Vec<usize>>>) -> Self {
        CongestionSpec { delays, strategy_sets, singleton: false }
    }

    /// `players` players each choosing one of the facilities.
    pub fn symmetric_singleton(delays: Vec<LinearDelay>, players: usize) -> Self {
        let strategies: Vec<Vec<usize>> = (0..delays.len()).map(|e| vec![e]).collect();
        CongestionSpec { delays, strategy_sets: vec![strategies; players], singleton: true }
    }

    fn direct(&self, x: &[usize], player: usize, choices: &[usize]) -> Rational {
        self.strategy_sets[player][choices[player]].iter().map(|&e| self.delays[e].at(x[e])).sum()
    }

    fn social_from_loads(&self, x: &[usize]) -> Rational {
        x.iter().zip(&self.delays).filter(|(&l, _)| l > 0).map(|(&l, d)| Rational::from(l) * d.at(l)).sum()
    }

    pub(crate) fn rosenthal_potential(&self, choices: &[usize]) -> Rational {
        let x = loads(self.delays.len(), &self.strategy_sets, choices);
        x.iter().zip(&self.delays).map(|(&l, d)| (1..=l).map(|k| d.at(k)).sum::<Rational>()).sum()
    }

    fn validate(&mut self) -> Result<(), Error> {
        for (e, d) in self.delays.iter().enumerate() {
            if d.a.is_negative() || d.b.is_negative() {
                return Err(Error::InvalidSpec(format!("facility {e} has a negative delay coefficient")));
            }
        }
        normalize_strategy_sets(self.delays.len(), &mut self.strategy_sets, true)?;
        if self.singleton {
            let first = &self.strategy_sets[0];
            if first.iter().any(|s| s.len() != 1) || self.strategy_sets.iter().any(|set| set != first) {
                return Err(Error::InvalidSpec(
                    "singleton game needs one shared set of single-facility strategies".into(),
                ));
            }
        }
        Ok(())
    }
}

impl Evaluator for CongestionSpec {
    fn direct_value(&self, player: usize, profile: &[usize]) -> Rational {
        let x = loads(self.delays.len(), &self.strategy_sets, profile);
        self.direct(&x, player, profile)
    }

    fn social_value(&self, profile: &[usize]) -> Rational {
        let x = loads(self.delays.len(), &self.strategy_sets, profile);
        self.social_from_loads(&x)
    }

    fn evaluate(&self, profile: &[usize]) -> Evaluation {
        let x = loads(self.delays.len(), &self.strategy_sets, profile);
        Evaluation {
            direct: (0..profile.len()).map(|i| self.direct(&x, i, profile)).collect(),
            social: self.social_from_loads(&x),
        }
    }
}

/// Builds `C_i(s) = sum_{e in s_i} d_e(x_e(s))`, `C(s) = sum_i C_i(s)`.
pub fn build_linear_congestion(mut spec: CongestionSpec) -> Result<Game, Error> {
    spec.validate()?;
    let counts = spec.strategy_sets.iter().map(Vec::len).collect();
    let spec = Arc::new(spec);
    Ok(Game::from_evaluator(counts, Orientation::CostMin, spec.clone())?
        .with_family(Family::LinearCongestion(spec)))
}

/// Where a facility of a normalized game came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FacilityOrigin {
    /// One of the unit copies of the `a_e * x` part of facility `facility`.
    Shared { facility: usize, copy: usize },
    /// One of the unit copies of the `b_e` part private to `player`.
    Private { facility: usize, player: usize, copy: usize },
}

/// A unit-delay congestion game equivalent to the original one.
///
/// Strategy indices are unchanged, so the profile bijection is the
/// identity on choice vectors; every player's cost is `scale` times the
/// original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedCongestion {
    pub spec: CongestionSpec,
    pub scale: Rational,
    pub origins: Vec<FacilityOrigin>,
}

impl NormalizedCongestion {
    pub fn map_profile(&self, choices: &[usize]) -> Vec<usize> {
        choices.to_vec()
    }
}

const MAX_UNIT_COPIES: usize = 1 << 16;

/// Rewrites a linear congestion game so that every delay is `d(x) = x`:
/// scale all coefficients to integers by the least common multiple `M` of
/// their denominators, give each player a private copy of the constant
/// part, then split every integer coefficient into unit facilities.
pub fn normalize_congestion(spec: &CongestionSpec) -> Result<NormalizedCongestion, Error> {
    let mut checked = spec.clone();
    checked.validate()?;
    let n = checked.strategy_sets.len();

    let lcm = checked
        .delays
        .iter()
        .flat_map(|d| [d.a.denom(), d.b.denom()])
        .fold(BigInt::one(), |acc, den| acc.lcm(&den));
    let scale = Rational::from(BigRational::from_integer(lcm));

    let to_copies = |r: &Rational, what: &str, e: usize| -> Result<usize, Error> {
        let scaled = r * &scale;
        debug_assert!(scaled.is_integer());
        scaled.numer().to_usize().filter(|&k| k <= MAX_UNIT_COPIES).ok_or_else(|| {
            Error::InvalidSpec(format!("coefficient {what} of facility {e} scales to too many unit facilities"))
        })
    };

    let mut origins = Vec::new();
    let mut shared: Vec<Vec<usize>> = Vec::with_capacity(checked.delays.len());
    let mut private: Vec<Vec<Vec<usize>>> = Vec::with_capacity(checked.delays.len());
    for (e, d) in checked.delays.iter().enumerate() {
        let a = to_copies(&d.a, "a", e)?;
        let b = to_copies(&d.b, "b", e)?;
        shared.push(
            (0..a)
                .map(|copy| {
                    origins.push(FacilityOrigin::Shared { facility: e, copy });
                    origins.len() - 1
                })
                .collect(),
        );
        private.push(
            (0..n)
                .map(|player| {
                    (0..b)
                        .map(|copy| {
                            origins.push(FacilityOrigin::Private { facility: e, player, copy });
                            origins.len() - 1
                        })
                        .collect()
                })
                .collect(),
        );
    }

    let strategy_sets = checked
        .strategy_sets
        .iter()
        .enumerate()
        .map(|(player, set)| {
            set.iter()
                .map(|strategy| {
                    let mut facilities: Vec<usize> = strategy
                        .iter()
                        .flat_map(|&e| shared[e].iter().chain(&private[e][player]).copied())
                        .collect();
                    facilities.sort_unstable();
                    facilities
                })
                .collect()
        })
        .collect();

    let singleton = checked.singleton && origins.len() == checked.delays.len();
    let spec = CongestionSpec { delays: vec![LinearDelay::unit(); origins.len()], strategy_sets, singleton };
    Ok(NormalizedCongestion { spec, scale, origins })
}

/// Symmetric singleton game with delays given as a table per facility:
/// `delays[e][x - 1] = d_e(x)` for `x = 1..=players`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSingletonSpec {
    pub delays: Vec<Vec<Rational>>,
    pub players: usize,
}

impl TableSingletonSpec {
    pub fn new(delays: Vec<Vec<Rational>>, players: usize) -> Self {
        TableSingletonSpec { delays, players }
    }

    fn delay(&self, e: usize, x: usize) -> Rational {
        if x == 0 {
            Rational::zero()
        } else {
            self.delays[e][x - 1].clone()
        }
    }

    /// `x * d(x)` has non-decreasing differences on every facility.
    pub fn is_semi_convex(&self) -> bool {
        (0..self.delays.len()).all(|e| {
            let total = |x: usize| Rational::from(x) * self.delay(e, x);
            (1..self.players).all(|x| total(x) - total(x - 1) <= total(x + 1) - total(x))
        })
    }

    fn loads(&self, choices: &[usize]) -> Vec<usize> {
        let mut x = vec![0; self.delays.len()];
        for &e in choices {
            x[e] += 1;
        }
        x
    }

    pub(crate) fn rosenthal_potential(&self, choices: &[usize]) -> Rational {
        self.loads(choices)
            .iter()
            .enumerate()
            .map(|(e, &l)| (1..=l).map(|k| self.delay(e, k)).sum::<Rational>())
            .sum()
    }
}

impl Evaluator for TableSingletonSpec {
    fn direct_value(&self, player: usize, profile: &[usize]) -> Rational {
        let e = profile[player];
        self.delay(e, self.loads(profile)[e])
    }

    fn social_value(&self, profile: &[usize]) -> Rational {
        self.loads(profile).iter().enumerate().map(|(e, &l)| Rational::from(l) * self.delay(e, l)).sum()
    }

    fn evaluate(&self, profile: &[usize]) -> Evaluation {
        let x = self.loads(profile);
        let direct: Vec<Rational> = profile.iter().map(|&e| self.delay(e, x[e])).collect();
        let social = direct.iter().sum();
        Evaluation { direct, social }
    }
}

pub fn build_table_singleton(spec: TableSingletonSpec) -> Result<Game, Error> {
    if spec.players == 0 || spec.delays.is_empty() {
        return Err(Error::InvalidSpec("singleton game needs players and facilities".into()));
    }
    for (e, table) in spec.delays.iter().enumerate() {
        if table.len() != spec.players {
            return Err(Error::InvalidSpec(format!(
                "facility {e} lists {} delays, expected one per load 1..={}",
                table.len(),
                spec.players
            )));
        }
        if table.iter().any(Rational::is_negative) {
            return Err(Error::InvalidSpec(format!("facility {e} has a negative delay")));
        }
    }
    let counts = vec![spec.delays.len(); spec.players];
    let spec = Arc::new(spec);
    Ok(Game::from_evaluator(counts, Orientation::CostMin, spec.clone())?.with_family(Family::TableSingleton(spec)))
}
