//! Altruistic extensions of finite strategic games.
//!
//! Player `i` with altruism level `a_i` perceives
//! `(1 - a_i) * C_i(s) + a_i * C(s)` instead of its direct cost `C_i(s)`.
//! This crate evaluates such games exactly over rationals and provides:
//!
//! * constructors for fair cost-sharing, linear congestion, symmetric
//!   singleton and valid utility games, plus the known tight instances
//!   ([`families`]);
//! * pure/mixed equilibrium enumeration and verification, optima, price
//!   of anarchy and stability, best-response dynamics ([`equilibria`]);
//! * an exact simplex solver and worst-case correlated / coarse correlated
//!   equilibria ([`lp`]);
//! * smoothness certificates and the instance-level robust price of
//!   anarchy ([`smoothness`]);
//! * no-regret simulation ([`dynamics`]) and closed-form bounds ([`bounds`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

use alloc::string::String;
use alloc::vec::Vec;

pub mod analysis;
pub mod bounds;
pub mod dynamics;
pub mod equilibria;
pub mod families;
pub mod game;
pub mod lp;
pub mod rational;
pub mod smoothness;
pub mod table;

pub use analysis::{analyze, AnalysisOptions, AnalysisReport};
pub use game::{AltruismVector, Evaluation, Evaluator, ExplicitTable, Game, Orientation, StrategyProfile};
pub use rational::{Extended, Rational};
pub use table::{RangeRunner, Sequential, ValueTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("player {player} out of range (game has {players} players)")]
    PlayerOutOfRange { player: usize, players: usize },
    #[error("strategy {strategy} out of range for player {player} ({count} strategies)")]
    StrategyOutOfRange { player: usize, strategy: usize, count: usize },
    #[error("profile has {found} entries, expected {expected}")]
    ProfileLength { expected: usize, found: usize },
    #[error("player {player} has an empty strategy set")]
    EmptyStrategySet { player: usize },
    #[error("altruism level {value} of player {player} is outside [0, 1]")]
    AltruismOutOfRange { player: usize, value: Rational },
    #[error("altruism vector has {found} entries, expected {expected}")]
    AltruismLength { expected: usize, found: usize },
    #[error("instance too large: {} profiles exceed the cap of {cap}", match .profiles { Some(p) => alloc::format!("{p}"), None => String::from("more than 2^64") })]
    InstanceTooLarge { profiles: Option<u64>, cap: u64 },
    #[error("ratio undefined: optimal social value is zero")]
    UndefinedRatio,
    #[error("social value is not sum-bounded at profile {profile:?}")]
    NotSumBounded { profile: Vec<usize> },
    #[error("invalid game specification: {0}")]
    InvalidSpec(String),
    #[error("invalid valid-utility game: {0}")]
    InvalidUtility(families::UtilityViolation),
    #[error("potential kind {kind:?} does not apply to this game")]
    PotentialMismatch { kind: families::PotentialKind },
    #[error("operation requires uniform altruism")]
    NonUniformAltruism,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("operation requires a {0} game")]
    OrientationMismatch(Orientation),
}
