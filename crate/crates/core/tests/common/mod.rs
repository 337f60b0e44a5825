#![allow(dead_code)]

use gamelab_core::families::{
    build_cost_sharing, build_linear_congestion, build_table_singleton, CongestionSpec, CostSharingSpec, LinearDelay,
    TableSingletonSpec,
};
use gamelab_core::rational::{int, ratio};
use gamelab_core::{AltruismVector, Game, Rational};
use proptest::prelude::*;

pub fn quarter() -> impl Strategy<Value = Rational> {
    (0i64..=4).prop_map(|k| ratio(k, 4))
}

pub fn uniform_alpha(n: usize) -> impl Strategy<Value = AltruismVector> {
    quarter().prop_map(move |a| AltruismVector::uniform(n, a).unwrap())
}

pub fn any_alpha(n: usize) -> impl Strategy<Value = AltruismVector> {
    proptest::collection::vec(quarter(), n).prop_map(|v| AltruismVector::new(v).unwrap())
}

pub fn binary_alpha(n: usize) -> impl Strategy<Value = AltruismVector> {
    proptest::collection::vec(any::<bool>(), n)
        .prop_map(|v| AltruismVector::new(v.into_iter().map(|b| int(b as i64)).collect()).unwrap())
}

/// Non-empty facility subsets as sorted index lists.
fn subset(facilities: usize) -> impl Strategy<Value = Vec<usize>> {
    (1u32..(1 << facilities)).prop_map(move |m| (0..facilities).filter(|e| m >> e & 1 == 1).collect())
}

fn strategy_sets(n: usize, facilities: usize, per_player: usize) -> impl Strategy<Value = Vec<Vec<Vec<usize>>>> {
    proptest::collection::vec(proptest::collection::vec(subset(facilities), 1..=per_player), n)
}

pub fn cost_sharing(max_n: usize, max_facilities: usize) -> impl Strategy<Value = Game> {
    (1..=max_n, 1..=max_facilities)
        .prop_flat_map(|(n, f)| (proptest::collection::vec(1i64..=10, f), strategy_sets(n, f, 3)))
        .prop_map(|(costs, sets)| {
            build_cost_sharing(CostSharingSpec::new(costs.into_iter().map(int).collect(), sets)).unwrap()
        })
}

fn delay() -> impl Strategy<Value = LinearDelay> {
    (0i64..=3, 0i64..=3).prop_map(|(a, b)| if a == 0 && b == 0 { LinearDelay::unit() } else { LinearDelay::new(int(a), int(b)) })
}

pub fn congestion(max_n: usize, max_facilities: usize) -> impl Strategy<Value = Game> {
    (1..=max_n, 1..=max_facilities)
        .prop_flat_map(|(n, f)| (proptest::collection::vec(delay(), f), strategy_sets(n, f, 2)))
        .prop_map(|(delays, sets)| build_linear_congestion(CongestionSpec::new(delays, sets)).unwrap())
}

pub fn unit_congestion(max_n: usize, max_facilities: usize) -> impl Strategy<Value = Game> {
    (1..=max_n, 1..=max_facilities)
        .prop_flat_map(|(n, f)| strategy_sets(n, f, 2).prop_map(move |sets| (f, sets)))
        .prop_map(|(f, sets)| build_linear_congestion(CongestionSpec::new(vec![LinearDelay::unit(); f], sets)).unwrap())
}

pub fn singleton(max_n: usize, max_m: usize) -> impl Strategy<Value = Game> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| proptest::collection::vec(delay(), m).prop_map(move |d| (n, d)))
        .prop_map(|(n, delays)| build_linear_congestion(CongestionSpec::symmetric_singleton(delays, n)).unwrap())
}

/// Tabulated delays whose total cost `x d(x)` has non-decreasing increments.
pub fn semi_convex_singleton(max_n: usize, max_m: usize) -> impl Strategy<Value = Game> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| {
            // increments of x d(x): first >= 1, then non-decreasing
            proptest::collection::vec((1i64..=4, proptest::collection::vec(0i64..=3, n)), m)
                .prop_map(move |facilities| (n, facilities))
        })
        .prop_map(|(n, facilities)| {
            let delays = facilities
                .into_iter()
                .map(|(first, steps)| {
                    let mut total = 0i64;
                    let mut inc = first;
                    (1..=n)
                        .map(|x| {
                            total += inc;
                            inc += steps[x - 1];
                            ratio(total, x as i64)
                        })
                        .collect()
                })
                .collect();
            build_table_singleton(TableSingletonSpec::new(delays, n)).unwrap()
        })
}

/// Weighted coverage welfare with marginal-contribution payoffs.
pub fn coverage_utility(max_n: usize, max_ground: usize) -> impl Strategy<Value = Game> {
    use gamelab_core::families::{build_valid_utility, UtilitySpec};
    (1..=max_n, 1..=max_ground)
        .prop_flat_map(|(n, g)| {
            (
                Just(g),
                proptest::collection::vec(1i64..=5, g),
                proptest::collection::vec(proptest::collection::vec(1u32..(1 << g), 1..=3), n),
            )
        })
        .prop_map(|(g, weights, strategy_sets)| {
            let set_function: Vec<Rational> = (0..1u32 << g)
                .map(|m| int((0..g).filter(|k| m >> k & 1 == 1).map(|k| weights[k]).sum()))
                .collect();
            let counts: Vec<usize> = strategy_sets.iter().map(Vec::len).collect();
            let total: usize = counts.iter().product();
            let payoffs = (0..total)
                .map(|mut idx| {
                    let mut choices = vec![0; counts.len()];
                    for i in (0..counts.len()).rev() {
                        choices[i] = idx % counts[i];
                        idx /= counts[i];
                    }
                    let union = |skip: Option<usize>| {
                        choices
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| Some(i) != skip)
                            .fold(0u32, |acc, (i, &k)| acc | strategy_sets[i][k])
                    };
                    let all = &set_function[union(None) as usize];
                    (0..counts.len()).map(|i| all - &set_function[union(Some(i)) as usize]).collect()
                })
                .collect();
            build_valid_utility(UtilitySpec { ground_set_size: g, set_function, strategy_sets, payoffs }).unwrap()
        })
}
