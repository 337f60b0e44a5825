mod common;

use gamelab_core::bounds::{eval_bound, BoundId, BoundParams, Verdict};
use gamelab_core::rational::{int, ratio};
use gamelab_core::{analyze, AltruismVector, AnalysisOptions, Extended, Game, Rational};
use proptest::prelude::*;

fn value(id: BoundId, params: &BoundParams) -> Extended {
    eval_bound(id, params).unwrap()
}

fn uniform(n: usize, a: Rational) -> BoundParams {
    BoundParams::uniform(n, a).unwrap()
}

fn no_violations(game: &Game, alpha: &AltruismVector) -> Result<(), TestCaseError> {
    let options = AnalysisOptions { skip_ce: true, ..AnalysisOptions::default() };
    let report = analyze(game, alpha, &options).unwrap();
    for c in &report.comparisons {
        prop_assert_ne!(c.verdict, Verdict::Violated, "{:?}", c);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn altruism_never_improves_the_uniform_congestion_bound(a in 0i64..=100, b in 0i64..=100) {
        let (lo, hi) = (ratio(a.min(b), 100), ratio(a.max(b), 100));
        prop_assert!(value(BoundId::CongestionUniformPoa, &uniform(3, lo.clone())) <= value(BoundId::CongestionUniformPoa, &uniform(3, hi.clone())));
        prop_assert!(value(BoundId::CostSharingRpoa, &uniform(3, lo.clone())) <= value(BoundId::CostSharingRpoa, &uniform(3, hi.clone())));
        prop_assert!(value(BoundId::CongestionPos, &uniform(3, lo.clone())) >= value(BoundId::CongestionPos, &uniform(3, hi.clone())));
        prop_assert!(value(BoundId::SingletonUniformPoa, &uniform(3, lo)) >= value(BoundId::SingletonUniformPoa, &uniform(3, hi)));
    }

    #[test]
    fn two_level_formula_reduces_to_the_uniform_one(a in 0i64..=100, n in 1usize..=6) {
        let p = uniform(n, ratio(a, 100));
        prop_assert_eq!(value(BoundId::CongestionRpoa, &p), value(BoundId::CongestionUniformPoa, &p));
    }

    #[test]
    fn cost_sharing_within_bounds((g, a) in common::cost_sharing(3, 3).prop_flat_map(|g| { let n = g.player_count(); (Just(g), common::any_alpha(n)) })) {
        no_violations(&g, &a)?;
    }

    #[test]
    fn congestion_within_bounds((g, a) in common::congestion(3, 3).prop_flat_map(|g| { let n = g.player_count(); (Just(g), common::any_alpha(n)) })) {
        no_violations(&g, &a)?;
    }

    #[test]
    fn singletons_within_bounds((g, a) in common::singleton(3, 3).prop_flat_map(|g| { let n = g.player_count(); (Just(g), common::binary_alpha(n)) })) {
        no_violations(&g, &a)?;
    }

    #[test]
    fn utility_within_bounds((g, a) in common::coverage_utility(3, 3).prop_flat_map(|g| { let n = g.player_count(); (Just(g), common::any_alpha(n)) })) {
        let options = AnalysisOptions { skip_ce: true, ..AnalysisOptions::default() };
        match analyze(&g, &a, &options) {
            Ok(report) => prop_assert!(report.comparisons.iter().all(|c| c.verdict != Verdict::Violated)),
            Err(gamelab_core::Error::UndefinedRatio) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }
}

#[test]
fn closed_forms_at_known_points() {
    assert_eq!(value(BoundId::CongestionUniformPoa, &uniform(2, int(0))), Extended::Finite(ratio(5, 2)));
    assert_eq!(value(BoundId::CongestionUniformPoa, &uniform(2, int(1))), Extended::Finite(int(3)));
    assert_eq!(value(BoundId::CostSharingRpoa, &uniform(4, ratio(3, 4))), Extended::Finite(int(16)));
    assert_eq!(value(BoundId::CostSharingRpoa, &uniform(4, int(1))), Extended::Infinity);
    assert_eq!(value(BoundId::SingletonUniformPoa, &uniform(3, int(0))), Extended::Finite(ratio(4, 3)));
}
