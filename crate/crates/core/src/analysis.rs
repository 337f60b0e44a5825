//! One-call analysis of an altruistic extension: pure equilibria, optimum,
//! robust price of anarchy, worst (coarse) correlated equilibria and the
//! applicable closed-form bounds.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bounds::{compare_report, BoundComparison};
use crate::equilibria::{equilibrium_report, pure_ne_indices, ratio_to_optimum, EquilibriumReport};
use crate::game::{AltruismVector, Game, Orientation};
use crate::lp::{worst_ce_in_table, worst_cce_in_table, LpEquilibrium, DEFAULT_LP_CAP};
use crate::rational::Extended;
use crate::smoothness::{rpoa_from_data, PairDomain, RpoaResult, SmoothnessData};
use crate::table::{RangeRunner, Sequential, ValueTable};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub pair_domain: PairDomain,
    pub skip_cce: bool,
    pub skip_ce: bool,
    pub skip_rpoa: bool,
    /// Largest profile space for which the equilibrium LPs are solved.
    pub lp_cap: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            pair_domain: PairDomain::AllPairs,
            skip_cce: false,
            skip_ce: false,
            skip_rpoa: false,
            lp_cap: DEFAULT_LP_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Notice {
    NoPureEquilibrium,
    /// The best certificate sits on the `mu` search guard.
    GuardActive,
    /// Ratios are undefined because the optimum is zero.
    ZeroOptimum,
    Skipped(&'static str),
}

impl fmt::Display for Notice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Notice::NoPureEquilibrium => f.write_str("no pure Nash equilibrium"),
            Notice::GuardActive => f.write_str("rpoa optimum lies on the mu search guard"),
            Notice::ZeroOptimum => f.write_str("optimal social value is zero; ratios undefined"),
            Notice::Skipped(what) => write!(f, "{what} skipped on request"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub orientation: Orientation,
    pub alpha: AltruismVector,
    pub profiles: u64,
    pub equilibria: EquilibriumReport,
    pub pair_domain: PairDomain,
    pub rpoa: Option<RpoaResult>,
    pub cce: Option<LpEquilibrium>,
    pub ce: Option<LpEquilibrium>,
    /// Worst coarse correlated equilibrium value over the optimum.
    pub cce_ratio: Option<Extended>,
    pub ce_ratio: Option<Extended>,
    pub notices: Vec<Notice>,
    pub comparisons: Vec<BoundComparison>,
}

impl AnalysisReport {
    pub fn notice_lines(&self) -> Vec<String> {
        self.notices.iter().map(|n| alloc::format!("{n}")).collect()
    }
}

pub fn analyze(game: &Game, alpha: &AltruismVector, options: &AnalysisOptions) -> Result<AnalysisReport, Error> {
    analyze_with(game, alpha, options, &Sequential)
}

/// Full analysis with profile-indexed work split by `runner`. Fails with
/// [`Error::InstanceTooLarge`] when the LPs exceed `lp_cap` and were not
/// skipped.
pub fn analyze_with<R: RangeRunner>(
    game: &Game,
    alpha: &AltruismVector,
    options: &AnalysisOptions,
    runner: &R,
) -> Result<AnalysisReport, Error> {
    game.check_alpha(alpha)?;
    let profiles = game.ensure_within(game.profile_cap())?;
    let needs_lp = !(options.skip_cce && options.skip_ce);
    if needs_lp && profiles > options.lp_cap {
        return Err(Error::InstanceTooLarge { profiles: Some(profiles), cap: options.lp_cap });
    }
    let table = ValueTable::build_with(game, runner)?;
    let orientation = table.orientation();
    let ne = pure_ne_indices(&table, alpha, runner);
    let equilibria = equilibrium_report(game, &table, &ne)?;
    let mut notices = Vec::new();
    if !equilibria.has_pure_ne() {
        notices.push(Notice::NoPureEquilibrium);
    }
    let zero_optimum = equilibria.optimum_value.is_zero();
    if zero_optimum {
        notices.push(Notice::ZeroOptimum);
    }

    let rpoa = if options.skip_rpoa {
        notices.push(Notice::Skipped("rpoa"));
        None
    } else {
        let data = SmoothnessData::build_with(&table, alpha, options.pair_domain, game.profile_cap(), runner)?;
        match rpoa_from_data(&data, runner) {
            Ok(r) => {
                if r.guard_active {
                    notices.push(Notice::GuardActive);
                }
                Some(r)
            }
            Err(Error::UndefinedRatio) => None,
            Err(e) => return Err(e),
        }
    };

    let ratio = |lp: &Option<LpEquilibrium>| -> Option<Extended> {
        let lp = lp.as_ref()?;
        ratio_to_optimum(orientation, &lp.value, &equilibria.optimum_value).ok()
    };
    let cce = if options.skip_cce {
        notices.push(Notice::Skipped("cce"));
        None
    } else {
        Some(worst_cce_in_table(&table, alpha)?)
    };
    let ce = if options.skip_ce {
        notices.push(Notice::Skipped("ce"));
        None
    } else {
        Some(worst_ce_in_table(&table, alpha)?)
    };
    let cce_ratio = ratio(&cce);
    let ce_ratio = ratio(&ce);

    let mut report = AnalysisReport {
        orientation,
        alpha: alpha.clone(),
        profiles,
        equilibria,
        pair_domain: options.pair_domain,
        rpoa,
        cce,
        ce,
        cce_ratio,
        ce_ratio,
        notices,
        comparisons: Vec::new(),
    };
    if let Some(family) = game.family() {
        report.comparisons = compare_report(family.tag(), &report)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{BoundId, Quantity, Verdict};
    use crate::families::{example_instance, ExampleName};
    use crate::rational::{int, ratio};

    #[test]
    fn congestion_lb_is_tight() {
        let f = example_instance(ExampleName::CongestionLb { alpha: int(0) }).unwrap();
        let report = analyze(&f.game, &f.alpha, &AnalysisOptions::default()).unwrap();
        assert_eq!(report.equilibria.pure_poa, Some(Extended::Finite(ratio(5, 2))));
        assert_eq!(report.rpoa.as_ref().unwrap().value, Extended::Finite(ratio(5, 2)));
        assert_eq!(report.cce_ratio, Some(Extended::Finite(ratio(5, 2))));
        let tight = report
            .comparisons
            .iter()
            .filter(|c| c.id == BoundId::CongestionUniformPoa)
            .all(|c| c.verdict == Verdict::Tight);
        assert!(tight);
    }

    #[test]
    fn skips_and_lp_cap() {
        let f = example_instance(ExampleName::SingletonMixed { m: 3 }).unwrap();
        let mut options = AnalysisOptions { lp_cap: 10, ..AnalysisOptions::default() };
        assert!(matches!(analyze(&f.game, &f.alpha, &options), Err(Error::InstanceTooLarge { .. })));
        options.skip_cce = true;
        options.skip_ce = true;
        options.skip_rpoa = true;
        let report = analyze(&f.game, &f.alpha, &options).unwrap();
        assert!(report.rpoa.is_none() && report.cce.is_none() && report.ce.is_none());
        assert_eq!(report.notices.len(), 3);
        assert!(report.comparisons.iter().all(|c| c.quantity == Quantity::PurePoa || c.quantity == Quantity::PurePos));
    }

    #[test]
    fn optimum_targets_never_exceed_all_pairs() {
        let f = example_instance(ExampleName::CongestionLb { alpha: ratio(1, 2) }).unwrap();
        let all = analyze(&f.game, &f.alpha, &AnalysisOptions::default()).unwrap();
        let opt = analyze(
            &f.game,
            &f.alpha,
            &AnalysisOptions { pair_domain: PairDomain::OptimumTargets, ..AnalysisOptions::default() },
        )
        .unwrap();
        assert!(opt.rpoa.unwrap().value <= all.rpoa.unwrap().value);
    }
}
