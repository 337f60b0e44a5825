use alloc::format;
use alloc::vec;

use core::fmt;

use super::{
    build_cost_sharing, build_linear_congestion, build_valid_utility, CongestionSpec, CostSharingSpec, LinearDelay,
    UtilitySpec,
};
use crate::equilibria::MixedProfile;
use crate::game::{AltruismVector, Game, StrategyProfile};
use crate::rational::{int, Rational};
use crate::Error;

/// The lower-bound and tightness instances shipped with the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExampleName {
    /// `n` players, two facilities of cost 1 and `n / (1 - alpha)`.
    CostSharingLb { n: usize, alpha: Rational },
    /// Two-player valid utility game whose pure PoA is 2.
    ValidUtilityTight,
    /// Three players, six facilities, pure PoA `(5 + 4a) / (2 + a)`.
    CongestionLb { alpha: Rational },
    /// `m` players on `m` unit-delay facilities, uniform mixed equilibrium.
    SingletonMixed { m: usize },
    /// Two players, delays `x` and `2 + alpha`, pure PoA `4 / (3 + alpha)`.
    SingletonTight2p { alpha: Rational },
}

impl ExampleName {
    pub fn slug(&self) -> &'static str {
        match self {
            ExampleName::CostSharingLb { .. } => "cost-sharing-lb",
            ExampleName::ValidUtilityTight => "valid-utility-tight",
            ExampleName::CongestionLb { .. } => "congestion-lb",
            ExampleName::SingletonMixed { .. } => "singleton-mixed",
            ExampleName::SingletonTight2p { .. } => "singleton-tight-2p",
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleName::CostSharingLb { n, alpha } => write!(f, "{}(n={n}, alpha={alpha})", self.slug()),
            ExampleName::CongestionLb { alpha } | ExampleName::SingletonTight2p { alpha } => {
                write!(f, "{}(alpha={alpha})", self.slug())
            }
            ExampleName::SingletonMixed { m } => write!(f, "{}(m={m})", self.slug()),
            ExampleName::ValidUtilityTight => f.write_str(self.slug()),
        }
    }
}

/// A constructed example with its annotated profiles.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: ExampleName,
    pub game: Game,
    pub alpha: AltruismVector,
    pub designated_ne: Option<StrategyProfile>,
    pub optimum: StrategyProfile,
    pub mixed_ne: Option<MixedProfile>,
}

fn unit_interval(alpha: &Rational, upper_open: bool) -> Result<(), Error> {
    let one = Rational::one();
    if alpha.is_negative() || *alpha > one || (upper_open && *alpha == one) {
        let range = if upper_open { "[0, 1)" } else { "[0, 1]" };
        return Err(Error::ParameterOutOfRange(format!("alpha = {alpha} must lie in {range}")));
    }
    Ok(())
}

pub fn example_instance(name: ExampleName) -> Result<Fixture, Error> {
    match &name {
        ExampleName::CostSharingLb { n, alpha } => {
            unit_interval(alpha, true)?;
            if *n == 0 {
                return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
            }
            let expensive = Rational::from(*n) / (Rational::one() - alpha);
            let spec = CostSharingSpec::new(vec![int(1), expensive], vec![vec![vec![0], vec![1]]; *n]);
            Ok(Fixture {
                game: build_cost_sharing(spec)?,
                alpha: AltruismVector::uniform(*n, alpha.clone())?,
                designated_ne: Some(StrategyProfile::new(vec![1; *n])),
                optimum: StrategyProfile::new(vec![0; *n]),
                mixed_ne: None,
                name,
            })
        }
        ExampleName::ValidUtilityTight => {
            // ground set {1, 2} as bits 0 and 1, V(S) = |S|
            let set_function = (0u32..4).map(|m| Rational::from(m.count_ones() as usize)).collect();
            let strategy_sets = vec![vec![0b01, 0b10], vec![0b00, 0b01]];
            // profiles (0,0) (0,1) (1,0) (1,1); only ({2},{1}) pays player 2
            let payoffs = vec![
                vec![int(1), int(0)],
                vec![int(1), int(0)],
                vec![int(1), int(0)],
                vec![int(1), int(1)],
            ];
            let spec = UtilitySpec { ground_set_size: 2, set_function, strategy_sets, payoffs };
            Ok(Fixture {
                game: build_valid_utility(spec)?,
                alpha: AltruismVector::zeros(2),
                designated_ne: Some(StrategyProfile::new(vec![0, 0])),
                optimum: StrategyProfile::new(vec![1, 1]),
                mixed_ne: None,
                name,
            })
        }
        ExampleName::CongestionLb { alpha } => {
            unit_interval(alpha, false)?;
            // facilities 0..3 are h_j with delay (1 + a) x, 3..6 are g_j with delay x
            let mut delays = vec![LinearDelay::new(Rational::one() + alpha, Rational::zero()); 3];
            delays.extend(vec![LinearDelay::unit(); 3]);
            let h = |j: usize| j % 3;
            let g = |j: usize| 3 + j % 3;
            let strategy_sets = (0..3)
                .map(|p| vec![vec![h(p), g(p)], vec![h(p + 2), h(p + 1), g(p + 1)]])
                .collect();
            Ok(Fixture {
                game: build_linear_congestion(CongestionSpec::new(delays, strategy_sets))?,
                alpha: AltruismVector::uniform(3, alpha.clone())?,
                designated_ne: Some(StrategyProfile::new(vec![1; 3])),
                optimum: StrategyProfile::new(vec![0; 3]),
                mixed_ne: None,
                name,
            })
        }
        ExampleName::SingletonMixed { m } => {
            if *m < 2 {
                return Err(Error::ParameterOutOfRange(format!("m = {m} must be at least 2")));
            }
            let spec = CongestionSpec::symmetric_singleton(vec![LinearDelay::unit(); *m], *m);
            Ok(Fixture {
                game: build_linear_congestion(spec)?,
                alpha: AltruismVector::zeros(*m),
                designated_ne: None,
                optimum: StrategyProfile::new((0..*m).collect()),
                mixed_ne: Some(MixedProfile::uniform(&vec![*m; *m])),
                name,
            })
        }
        ExampleName::SingletonTight2p { alpha } => {
            unit_interval(alpha, false)?;
            let delays = vec![LinearDelay::unit(), LinearDelay::new(Rational::zero(), int(2) + alpha)];
            let spec = CongestionSpec::symmetric_singleton(delays, 2);
            Ok(Fixture {
                game: build_linear_congestion(spec)?,
                alpha: AltruismVector::uniform(2, alpha.clone())?,
                designated_ne: Some(StrategyProfile::new(vec![0, 0])),
                optimum: StrategyProfile::new(vec![0, 1]),
                mixed_ne: None,
                name,
            })
        }
    }
}
