//! Closed-form inefficiency bounds for the supported families, and their
//! comparison with quantities computed on an instance.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::analysis::AnalysisReport;
use crate::families::{harmonic, FamilyTag};
use crate::game::AltruismVector;
use crate::rational::{Extended, Rational};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    CostSharingRpoa,
    CostSharingPos,
    ValidUtilityRpoa,
    CongestionUniformPoa,
    CongestionRpoa,
    CongestionPos,
    SingletonUniformPoa,
    SingletonBinaryPoa,
    SingletonMixedLower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundDirection {
    /// Worst case over the family, attained: instance rpoa never exceeds it.
    ExactRpoa,
    /// Upper bound on the pure price of anarchy.
    UpperPoa,
    /// Upper bound on the pure price of stability.
    UpperPos,
    /// Worst-case lower bound on the mixed/correlated price of anarchy.
    LowerPoa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AltruismShape {
    Any,
    Uniform,
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundInfo {
    pub id: BoundId,
    pub formula: &'static str,
    pub direction: BoundDirection,
    pub families: &'static [FamilyTag],
    pub shape: AltruismShape,
}

const CONGESTION: &[FamilyTag] = &[FamilyTag::LinearCongestion, FamilyTag::Singleton];
const SINGLETON: &[FamilyTag] = &[FamilyTag::Singleton];

const CATALOG: &[BoundInfo] = &[
    BoundInfo {
        id: BoundId::CostSharingRpoa,
        formula: "n / (1 - a_max)",
        direction: BoundDirection::ExactRpoa,
        families: &[FamilyTag::CostSharing],
        shape: AltruismShape::Any,
    },
    BoundInfo {
        id: BoundId::CostSharingPos,
        formula: "(1 - a) H_n + a",
        direction: BoundDirection::UpperPos,
        families: &[FamilyTag::CostSharing],
        shape: AltruismShape::Uniform,
    },
    BoundInfo {
        id: BoundId::ValidUtilityRpoa,
        formula: "2",
        direction: BoundDirection::ExactRpoa,
        families: &[FamilyTag::ValidUtility],
        shape: AltruismShape::Any,
    },
    BoundInfo {
        id: BoundId::CongestionUniformPoa,
        formula: "(5 + 4a) / (2 + a)",
        direction: BoundDirection::ExactRpoa,
        families: CONGESTION,
        shape: AltruismShape::Uniform,
    },
    BoundInfo {
        id: BoundId::CongestionRpoa,
        formula: "(5 + 2 a_max + 2 a_min) / (2 - a_max + 2 a_min)",
        direction: BoundDirection::ExactRpoa,
        families: CONGESTION,
        shape: AltruismShape::Any,
    },
    BoundInfo {
        id: BoundId::CongestionPos,
        formula: "2 / (1 + a)",
        direction: BoundDirection::UpperPos,
        families: CONGESTION,
        shape: AltruismShape::Uniform,
    },
    BoundInfo {
        id: BoundId::SingletonUniformPoa,
        formula: "4 / (3 + a)",
        direction: BoundDirection::UpperPoa,
        families: SINGLETON,
        shape: AltruismShape::Uniform,
    },
    BoundInfo {
        id: BoundId::SingletonBinaryPoa,
        formula: "(4 - 2f) / (3 - f), f = fraction of altruists",
        direction: BoundDirection::UpperPoa,
        families: SINGLETON,
        shape: AltruismShape::Binary,
    },
    BoundInfo {
        id: BoundId::SingletonMixedLower,
        formula: "2",
        direction: BoundDirection::LowerPoa,
        families: SINGLETON,
        shape: AltruismShape::Any,
    },
];

pub fn catalog() -> &'static [BoundInfo] {
    CATALOG
}

impl BoundId {
    pub fn all() -> impl Iterator<Item = BoundId> {
        CATALOG.iter().map(|b| b.id)
    }

    pub fn info(self) -> &'static BoundInfo {
        CATALOG.iter().find(|b| b.id == self).expect("every id is catalogued")
    }

    pub fn slug(self) -> &'static str {
        match self {
            BoundId::CostSharingRpoa => "cost_sharing_rpoa",
            BoundId::CostSharingPos => "cost_sharing_pos",
            BoundId::ValidUtilityRpoa => "valid_utility_rpoa",
            BoundId::CongestionUniformPoa => "congestion_uniform_poa",
            BoundId::CongestionRpoa => "congestion_rpoa",
            BoundId::CongestionPos => "congestion_pos",
            BoundId::SingletonUniformPoa => "singleton_uniform_poa",
            BoundId::SingletonBinaryPoa => "singleton_binary_poa",
            BoundId::SingletonMixedLower => "singleton_mixed_lower",
        }
    }

    pub fn from_slug(slug: &str) -> Option<BoundId> {
        BoundId::all().find(|id| id.slug() == slug)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// Summary of an altruism vector as used by the formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub n: usize,
    pub alpha_max: Rational,
    pub alpha_min: Rational,
    pub uniform: Option<Rational>,
    /// Fraction of fully altruistic players when every level is 0 or 1.
    pub altruist_fraction: Option<Rational>,
}

impl BoundParams {
    pub fn from_alpha(alpha: &AltruismVector) -> Self {
        BoundParams {
            n: alpha.len(),
            alpha_max: alpha.max(),
            alpha_min: alpha.min(),
            uniform: alpha.uniform_value().cloned(),
            altruist_fraction: alpha.is_binary().then(|| alpha.altruist_fraction()),
        }
    }

    /// `n` players, all with altruism `a`.
    pub fn uniform(n: usize, a: Rational) -> Result<Self, Error> {
        Ok(Self::from_alpha(&AltruismVector::uniform(n, a)?))
    }

    pub fn fits(&self, shape: AltruismShape) -> bool {
        match shape {
            AltruismShape::Any => true,
            AltruismShape::Uniform => self.uniform.is_some(),
            AltruismShape::Binary => self.altruist_fraction.is_some(),
        }
    }
}

/// Evaluates a catalogued bound. Fails when the altruism shape required by
/// the bound is not met.
pub fn eval_bound(id: BoundId, params: &BoundParams) -> Result<Extended, Error> {
    let info = id.info();
    if !params.fits(info.shape) {
        return Err(match info.shape {
            AltruismShape::Uniform => Error::NonUniformAltruism,
            _ => Error::ParameterOutOfRange(format!("{id} needs every altruism level in {{0, 1}}")),
        });
    }
    let one = Rational::one();
    let r = |v: i64| Rational::from(v);
    let uniform = || params.uniform.clone().expect("shape checked");
    let (hi, lo) = (&params.alpha_max, &params.alpha_min);
    Ok(match id {
        BoundId::CostSharingRpoa => Extended::ratio(&Rational::from(params.n), &(&one - hi)),
        BoundId::CostSharingPos => {
            let a = uniform();
            Extended::Finite((&one - &a) * harmonic(params.n) + a)
        }
        BoundId::ValidUtilityRpoa | BoundId::SingletonMixedLower => Extended::Finite(r(2)),
        BoundId::CongestionUniformPoa => {
            let a = uniform();
            Extended::ratio(&(r(5) + r(4) * &a), &(r(2) + a))
        }
        BoundId::CongestionRpoa => {
            Extended::ratio(&(r(5) + r(2) * hi + r(2) * lo), &(r(2) - hi + r(2) * lo))
        }
        BoundId::CongestionPos => Extended::ratio(&r(2), &(one + uniform())),
        BoundId::SingletonUniformPoa => Extended::ratio(&r(4), &(r(3) + uniform())),
        BoundId::SingletonBinaryPoa => {
            let f = params.altruist_fraction.clone().expect("shape checked");
            Extended::ratio(&(r(4) - r(2) * &f), &(r(3) - f))
        }
    })
}

/// Bounds that apply to a family under the given altruism vector.
pub fn applicable(family: FamilyTag, params: &BoundParams) -> Vec<BoundId> {
    CATALOG.iter().filter(|b| b.families.contains(&family) && params.fits(b.shape)).map(|b| b.id).collect()
}

/// Converts a spite-free collusion weight `xi` in `[0, 1/2]` to altruism
/// `xi / (1 - xi)`.
pub fn xi_to_alpha(xi: &Rational) -> Result<Rational, Error> {
    if xi.is_negative() || *xi > Rational::new(1, 2) {
        return Err(Error::ParameterOutOfRange(format!("xi = {xi} is outside [0, 1/2]")));
    }
    Ok(xi / &(Rational::one() - xi))
}

/// Inverse of [`xi_to_alpha`]: `a / (1 + a)` for `a` in `[0, 1]`.
pub fn alpha_to_xi(alpha: &Rational) -> Result<Rational, Error> {
    if alpha.is_negative() || *alpha > Rational::one() {
        return Err(Error::ParameterOutOfRange(format!("alpha = {alpha} is outside [0, 1]")));
    }
    Ok(alpha / &(Rational::one() + alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    PurePoa,
    PurePos,
    Rpoa,
    CcePoa,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::PurePoa => "pure_poa",
            Quantity::PurePos => "pure_pos",
            Quantity::Rpoa => "rpoa",
            Quantity::CcePoa => "cce_poa",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Computed value equals the bound.
    Tight,
    Holds,
    Violated,
    /// Below a worst-case lower bound, which says nothing about an instance.
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Tight => "tight",
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Info => "info",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundComparison {
    pub id: BoundId,
    pub quantity: Quantity,
    pub bound: Extended,
    pub computed: Extended,
    pub verdict: Verdict,
}

fn upper_verdict(computed: &Extended, bound: &Extended) -> Verdict {
    if computed == bound {
        Verdict::Tight
    } else if computed < bound {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

fn lower_verdict(computed: &Extended, bound: &Extended) -> Verdict {
    if computed == bound {
        Verdict::Tight
    } else if computed > bound {
        Verdict::Holds
    } else {
        Verdict::Info
    }
}

/// Compares every applicable bound with the computed quantities of a
/// report. Rows whose quantity was not computed are omitted.
pub fn compare_report(family: FamilyTag, report: &AnalysisReport) -> Result<Vec<BoundComparison>, Error> {
    let params = BoundParams::from_alpha(&report.alpha);
    let rpoa = report.rpoa.as_ref().map(|r| r.value.clone());
    let mut rows = Vec::new();
    for id in applicable(family, &params) {
        let bound = eval_bound(id, &params)?;
        let quantities: &[Quantity] = match id {
            BoundId::CongestionUniformPoa => &[Quantity::PurePoa, Quantity::Rpoa, Quantity::CcePoa],
            BoundId::SingletonMixedLower => &[Quantity::CcePoa],
            _ => match id.info().direction {
                BoundDirection::ExactRpoa => &[Quantity::Rpoa],
                BoundDirection::UpperPoa => &[Quantity::PurePoa],
                BoundDirection::UpperPos => &[Quantity::PurePos],
                BoundDirection::LowerPoa => &[Quantity::CcePoa],
            },
        };
        for &quantity in quantities {
            let computed = match quantity {
                Quantity::PurePoa => report.equilibria.pure_poa.clone(),
                Quantity::PurePos => report.equilibria.pure_pos.clone(),
                Quantity::Rpoa => rpoa.clone(),
                Quantity::CcePoa => report.cce_ratio.clone(),
            };
            let Some(computed) = computed else { continue };
            let verdict = match id.info().direction {
                BoundDirection::LowerPoa => lower_verdict(&computed, &bound),
                _ => upper_verdict(&computed, &bound),
            };
            rows.push(BoundComparison { id, quantity, bound: bound.clone(), computed, verdict });
        }
    }
    Ok(rows)
}
