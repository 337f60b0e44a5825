use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::Family;
use crate::game::{profile_index, Evaluation, Evaluator, Game, Orientation, Profiles};
use crate::rational::Rational;
use crate::Error;

pub const MAX_GROUND_SET: usize = 16;

/// Valid utility game over a ground set of at most 16 elements.
///
/// Subsets are bitmasks: element `k` is bit `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilitySpec {
    pub ground_set_size: usize,
    /// `set_function[mask] = V(mask)`, `2^ground_set_size` entries.
    pub set_function: Vec<Rational>,
    /// `strategy_sets[i][k]` is the subset chosen by player `i`'s strategy `k`.
    pub strategy_sets: Vec<Vec<u32>>,
    /// `payoffs[profile_index][i] = P_i(s)`, lexicographic profile order.
    pub payoffs: Vec<Vec<Rational>>,
}

impl UtilitySpec {
    fn counts(&self) -> Vec<usize> {
        self.strategy_sets.iter().map(Vec::len).collect()
    }

    fn union(&self, choices: &[usize]) -> u32 {
        choices.iter().enumerate().fold(0, |acc, (i, &k)| acc | self.strategy_sets[i][k])
    }

    /// Union of everyone's strategy except `player`'s.
    fn union_without(&self, choices: &[usize], player: usize) -> u32 {
        choices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != player)
            .fold(0, |acc, (i, &k)| acc | self.strategy_sets[i][k])
    }

    pub fn welfare(&self, choices: &[usize]) -> Rational {
        self.set_function[self.union(choices) as usize].clone()
    }
}

impl Evaluator for UtilitySpec {
    fn direct_value(&self, player: usize, profile: &[usize]) -> Rational {
        self.payoffs[profile_index(&self.counts(), profile)][player].clone()
    }

    fn social_value(&self, profile: &[usize]) -> Rational {
        self.welfare(profile)
    }

    fn evaluate(&self, profile: &[usize]) -> Evaluation {
        Evaluation {
            direct: self.payoffs[profile_index(&self.counts(), profile)].clone(),
            social: self.welfare(profile),
        }
    }
}

/// Violating triple for `f(A + x) - f(A) >= f(B + x) - f(B)` with `A ⊆ B`, `x ∉ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubmodularWitness {
    pub a: u32,
    pub b: u32,
    pub x: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UtilityViolation {
    Negative { set: u32 },
    Decreasing { set: u32, element: usize },
    NotSubmodular(SubmodularWitness),
    /// `P_i(s) < P(s) - V(union of the others' strategies)`
    BelowMarginalContribution { profile: Vec<usize>, player: usize },
    /// `sum_i P_i(s) > P(s)`
    ExceedsWelfare { profile: Vec<usize> },
}

impl fmt::Display for UtilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UtilityViolation::Negative { set } => write!(f, "V({set:#b}) is negative"),
            UtilityViolation::Decreasing { set, element } => {
                write!(f, "V decreases when adding element {element} to {set:#b}")
            }
            UtilityViolation::NotSubmodular(w) => {
                write!(f, "V is not submodular: A={:#b}, B={:#b}, x={}", w.a, w.b, w.x)
            }
            UtilityViolation::BelowMarginalContribution { profile, player } => {
                write!(f, "payoff of player {player} at {profile:?} is below its marginal contribution")
            }
            UtilityViolation::ExceedsWelfare { profile } => write!(f, "payoffs at {profile:?} exceed the welfare"),
        }
    }
}

/// Exhaustive submodularity check of a set function over `ground` elements.
///
/// Uses the equivalent local form `f(S+x) + f(S+y) >= f(S+x+y) + f(S)`,
/// scanning `x`, then `S ∌ x` ascending, then `y ∉ S + x` ascending. The
/// first failure is reported as the triple `(A = S, B = S + y, x)`.
pub fn validate_submodular(ground: usize, f: &[Rational]) -> Result<(), SubmodularWitness> {
    assert!(ground <= MAX_GROUND_SET && f.len() == 1 << ground, "set function must have 2^ground entries");
    let full: u32 = (1u32 << ground) - 1;
    for x in 0..ground {
        let xb = 1u32 << x;
        for s in 0..=full {
            if s & xb != 0 {
                continue;
            }
            let gain_x = &f[(s | xb) as usize] - &f[s as usize];
            for y in 0..ground {
                let yb = 1u32 << y;
                if y == x || s & yb != 0 {
                    continue;
                }
                let gain_x_after_y = &f[(s | xb | yb) as usize] - &f[(s | yb) as usize];
                if gain_x < gain_x_after_y {
                    return Err(SubmodularWitness { a: s, b: s | yb, x });
                }
            }
        }
    }
    Ok(())
}

/// Checks non-negativity, monotonicity and submodularity of `V`, then the
/// two validity conditions on every profile.
pub fn validate_utility(spec: &UtilitySpec) -> Result<(), Error> {
    let g = spec.ground_set_size;
    if g > MAX_GROUND_SET {
        return Err(Error::InvalidSpec(format!("ground set of {g} elements exceeds {MAX_GROUND_SET}")));
    }
    if spec.set_function.len() != 1 << g {
        return Err(Error::InvalidSpec(format!(
            "set function needs {} entries, got {}",
            1usize << g,
            spec.set_function.len()
        )));
    }
    if spec.strategy_sets.is_empty() {
        return Err(Error::InvalidSpec("a game needs at least one player".into()));
    }
    let full = ((1u64 << g) - 1) as u32;
    for (player, set) in spec.strategy_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptyStrategySet { player });
        }
        if let Some(k) = set.iter().position(|&m| m & !full != 0) {
            return Err(Error::InvalidSpec(format!("strategy {k} of player {player} leaves the ground set")));
        }
    }
    let counts = spec.counts();
    let total = counts.iter().try_fold(1usize, |acc, &k| acc.checked_mul(k)).unwrap_or(usize::MAX);
    if spec.payoffs.len() != total || spec.payoffs.iter().any(|row| row.len() != counts.len()) {
        return Err(Error::InvalidSpec(format!(
            "payoff table needs {total} rows of {} entries",
            counts.len()
        )));
    }

    let f = &spec.set_function;
    if let Some(set) = f.iter().position(Rational::is_negative) {
        return Err(Error::InvalidUtility(UtilityViolation::Negative { set: set as u32 }));
    }
    for s in 0..=full {
        for element in 0..g {
            let bit = 1u32 << element;
            if s & bit == 0 && f[(s | bit) as usize] < f[s as usize] {
                return Err(Error::InvalidUtility(UtilityViolation::Decreasing { set: s, element }));
            }
        }
    }
    validate_submodular(g, f).map_err(|w| Error::InvalidUtility(UtilityViolation::NotSubmodular(w)))?;

    for (idx, profile) in Profiles::new(counts.clone()).enumerate() {
        let choices = profile.choices();
        let welfare = spec.welfare(choices);
        let row = &spec.payoffs[idx];
        for (player, payoff) in row.iter().enumerate() {
            let without = &f[spec.union_without(choices, player) as usize];
            if *payoff < &welfare - without {
                return Err(Error::InvalidUtility(UtilityViolation::BelowMarginalContribution {
                    profile: choices.to_vec(),
                    player,
                }));
            }
        }
        if row.iter().sum::<Rational>() > welfare {
            return Err(Error::InvalidUtility(UtilityViolation::ExceedsWelfare { profile: choices.to_vec() }));
        }
    }
    Ok(())
}

/// Builds the payoff-maximization game `P(s) = V(U(s))` after validation.
pub fn build_valid_utility(spec: UtilitySpec) -> Result<Game, Error> {
    validate_utility(&spec)?;
    let counts = spec.counts();
    let spec = Arc::new(spec);
    Ok(Game::from_evaluator(counts, Orientation::PayoffMax, spec.clone())?.with_family(Family::ValidUtility(spec)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use alloc::vec;
    use proptest::prelude::*;

    fn cardinality(g: usize) -> Vec<Rational> {
        (0u32..1 << g).map(|m| Rational::from(m.count_ones() as usize)).collect()
    }

    /// Direct transcription of the definition: all A ⊆ B, x ∉ B.
    fn brute_force_submodular(g: usize, f: &[Rational]) -> bool {
        let full = (1u32 << g) - 1;
        for b in 0..=full {
            let mut a = b;
            loop {
                for x in 0..g {
                    let xb = 1u32 << x;
                    if b & xb == 0 {
                        let lhs = &f[(a | xb) as usize] - &f[a as usize];
                        let rhs = &f[(b | xb) as usize] - &f[b as usize];
                        if lhs < rhs {
                            return false;
                        }
                    }
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
        }
        true
    }

    #[test]
    fn cardinality_is_submodular() {
        assert!(validate_submodular(4, &cardinality(4)).is_ok());
    }

    #[test]
    fn capped_cardinality_is_submodular() {
        let f: Vec<Rational> = (0u32..1 << 4).map(|m| Rational::from(m.count_ones().min(2) as usize)).collect();
        assert!(brute_force_submodular(4, &f));
        assert!(validate_submodular(4, &f).is_ok());
    }

    #[test]
    fn supermodular_pair_witness() {
        // f(∅)=0, f({1})=0, f({2})=0, f({1,2})=1 with element 1 = bit 0
        let f = vec![int(0), int(0), int(0), int(1)];
        assert_eq!(validate_submodular(2, &f), Err(SubmodularWitness { a: 0b00, b: 0b10, x: 0 }));
    }

    #[test]
    fn zero_function_validates() {
        let spec = UtilitySpec {
            ground_set_size: 1,
            set_function: vec![int(0), int(0)],
            strategy_sets: vec![vec![0, 1], vec![1]],
            payoffs: vec![vec![int(0), int(0)]; 2],
        };
        assert!(build_valid_utility(spec).is_ok());
    }

    #[test]
    fn marginal_contribution_payoffs_validate() {
        // V(S) = |S|, two players picking one element each out of two.
        let sets = vec![vec![0b01, 0b10], vec![0b01, 0b10]];
        let mut payoffs = Vec::new();
        for s in Profiles::new(vec![2, 2]) {
            let c = s.choices();
            let (m0, m1) = (sets[0][c[0]], sets[1][c[1]]);
            let marginal = |mine: u32, other: u32| Rational::from(((mine | other).count_ones() - other.count_ones()) as usize);
            payoffs.push(vec![marginal(m0, m1), marginal(m1, m0)]);
        }
        let spec = UtilitySpec { ground_set_size: 2, set_function: cardinality(2), strategy_sets: sets, payoffs };
        assert!(validate_utility(&spec).is_ok());
    }

    #[test]
    fn violations_are_reported() {
        let base = UtilitySpec {
            ground_set_size: 1,
            set_function: vec![int(0), int(2)],
            strategy_sets: vec![vec![0b1]],
            payoffs: vec![vec![int(2)]],
        };
        assert!(validate_utility(&base).is_ok());

        let mut low = base.clone();
        low.payoffs = vec![vec![int(1)]];
        assert!(matches!(
            validate_utility(&low),
            Err(Error::InvalidUtility(UtilityViolation::BelowMarginalContribution { player: 0, .. }))
        ));

        let mut high = base.clone();
        high.payoffs = vec![vec![int(3)]];
        assert!(matches!(validate_utility(&high), Err(Error::InvalidUtility(UtilityViolation::ExceedsWelfare { .. }))));

        let mut decreasing = base.clone();
        decreasing.set_function = vec![int(1), int(0)];
        decreasing.payoffs = vec![vec![int(0)]];
        assert!(matches!(
            validate_utility(&decreasing),
            Err(Error::InvalidUtility(UtilityViolation::Decreasing { set: 0, element: 0 }))
        ));

        let mut negative = base;
        negative.set_function = vec![int(-1), int(0)];
        assert!(matches!(validate_utility(&negative), Err(Error::InvalidUtility(UtilityViolation::Negative { set: 0 }))));
    }

    proptest! {
        #[test]
        fn local_check_agrees_with_definition(values in proptest::collection::vec(0i64..4, 8)) {
            let f: Vec<Rational> = values.into_iter().map(int).collect();
            let local = validate_submodular(3, &f);
            prop_assert_eq!(local.is_ok(), brute_force_submodular(3, &f));
            if let Err(w) = local {
                prop_assert_eq!(w.a & !w.b, 0);
                prop_assert_eq!(w.b & (1 << w.x), 0);
                let xb = 1u32 << w.x;
                prop_assert!(&f[(w.a | xb) as usize] - &f[w.a as usize] < &f[(w.b | xb) as usize] - &f[w.b as usize]);
            }
        }
    }
}
