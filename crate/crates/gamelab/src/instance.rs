//! JSON instance documents.
//!
//! Rationals are strings `"p/q"` (or `"p"`); plain JSON integers are
//! accepted on input. Only the fields of the declared `kind` may appear.

use std::collections::BTreeMap;
use std::fmt;

use gamelab_core::families::{
    build_cost_sharing, build_linear_congestion, build_table_singleton, build_valid_utility, CongestionSpec,
    CostSharingSpec, Family, Fixture, LinearDelay, TableSingletonSpec, UtilitySpec,
};
use gamelab_core::{AltruismVector, ExplicitTable, Game, Orientation, Rational, StrategyProfile};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct QVisitor;
        impl Visitor<'_> for QVisitor {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(Rational::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                i64::try_from(v).map(|v| Q(Rational::from(v))).map_err(|_| E::custom("integer too large"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                v.trim().parse::<Rational>().map(Q).map_err(|e| E::custom(format!("bad rational {v:?}: {}", e.0)))
            }
        }
        d.deserialize_any(QVisitor)
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn unq(v: &[Q]) -> Vec<Rational> {
    v.iter().map(|q| q.0.clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    CostSharing,
    LinearCongestion,
    Singleton,
    ValidUtility,
    Explicit,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::CostSharing => "cost_sharing",
            Kind::LinearCongestion => "linear_congestion",
            Kind::Singleton => "singleton",
            Kind::ValidUtility => "valid_utility",
            Kind::Explicit => "explicit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AltruismDoc {
    Uniform(Q),
    PerPlayer(Vec<Q>),
}

impl AltruismDoc {
    pub fn from_vector(alpha: &AltruismVector) -> Self {
        match alpha.uniform_value() {
            Some(a) => AltruismDoc::Uniform(Q(a.clone())),
            None => AltruismDoc::PerPlayer(qs(alpha.as_slice())),
        }
    }

    pub fn to_vector(&self, players: usize) -> Result<AltruismVector, InstanceError> {
        let v = match self {
            AltruismDoc::Uniform(a) => AltruismVector::uniform(players, a.0.clone()),
            AltruismDoc::PerPlayer(v) => AltruismVector::new(unq(v)),
        };
        let v = v.map_err(|e| InstanceError::field("altruism", e))?;
        if v.len() != players {
            return Err(InstanceError::field("altruism", format!("{} entries for {players} players", v.len())));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayDoc {
    pub a: Q,
    pub b: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrientationDoc {
    CostMin,
    PayoffMax,
}

/// One game instance with its altruism levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub kind: Kind,
    pub players: usize,
    pub altruism: AltruismDoc,
    /// cost_sharing
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facility_costs: Option<Vec<Q>>,
    /// linear_congestion, singleton
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delays: Option<Vec<DelayDoc>>,
    /// singleton: `delay_table[e][x - 1]` is the delay of facility `e` at load `x`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay_table: Option<Vec<Vec<Q>>>,
    /// cost_sharing, linear_congestion: facilities of each strategy;
    /// valid_utility: ground elements of each strategy
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy_sets: Option<Vec<Vec<Vec<usize>>>>,
    /// valid_utility
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_set_size: Option<usize>,
    /// valid_utility: value of every subset, indexed by bitmask
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_function: Option<Vec<Q>>,
    /// valid_utility, explicit: `payoffs[profile][player]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payoffs: Option<Vec<Vec<Q>>>,
    /// explicit
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<OrientationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy_counts: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub social: Option<Vec<Q>>,
    /// Named profiles, e.g. a designated equilibrium.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fixtures: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    Parse(String),
    Field { field: &'static str, message: String },
    Game(gamelab_core::Error),
}

impl InstanceError {
    fn field(field: &'static str, message: impl fmt::Display) -> Self {
        InstanceError::Field { field, message: message.to_string() }
    }
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::Parse(m) => write!(f, "parse error: {m}"),
            InstanceError::Field { field, message } => write!(f, "field `{field}`: {message}"),
            InstanceError::Game(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for InstanceError {}

impl From<gamelab_core::Error> for InstanceError {
    fn from(e: gamelab_core::Error) -> Self {
        InstanceError::Game(e)
    }
}

fn require<'a, T>(value: &'a Option<T>, field: &'static str, kind: Kind) -> Result<&'a T, InstanceError> {
    value.as_ref().ok_or_else(|| InstanceError::field(field, format!("required for kind {}", kind.name())))
}

impl InstanceDocument {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    /// `sha256:<hex>` of the compact canonical serialization.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("documents always serialize");
        format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
    }

    fn allowed_fields(&self) -> Result<(), InstanceError> {
        let present: [(&'static str, bool); 10] = [
            ("facility_costs", self.facility_costs.is_some()),
            ("delays", self.delays.is_some()),
            ("delay_table", self.delay_table.is_some()),
            ("strategy_sets", self.strategy_sets.is_some()),
            ("ground_set_size", self.ground_set_size.is_some()),
            ("set_function", self.set_function.is_some()),
            ("payoffs", self.payoffs.is_some()),
            ("orientation", self.orientation.is_some()),
            ("strategy_counts", self.strategy_counts.is_some()),
            ("social", self.social.is_some()),
        ];
        let allowed: &[&str] = match self.kind {
            Kind::CostSharing => &["facility_costs", "strategy_sets"],
            Kind::LinearCongestion => &["delays", "strategy_sets"],
            Kind::Singleton => &["delays", "delay_table"],
            Kind::ValidUtility => &["ground_set_size", "set_function", "strategy_sets", "payoffs"],
            Kind::Explicit => &["orientation", "strategy_counts", "payoffs", "social"],
        };
        for (name, is_set) in present {
            if is_set && !allowed.contains(&name) {
                return Err(InstanceError::field(name, format!("not used by kind {}", self.kind.name())));
            }
        }
        Ok(())
    }

    fn check_players(&self, found: usize, field: &'static str) -> Result<(), InstanceError> {
        if found != self.players {
            return Err(InstanceError::field(field, format!("describes {found} players, `players` is {}", self.players)));
        }
        Ok(())
    }

    /// Builds the game and the altruism vector.
    pub fn build(&self) -> Result<(Game, AltruismVector), InstanceError> {
        self.allowed_fields()?;
        if self.players == 0 {
            return Err(InstanceError::field("players", "must be at least 1"));
        }
        let kind = self.kind;
        let game = match kind {
            Kind::CostSharing => {
                let sets = require(&self.strategy_sets, "strategy_sets", kind)?;
                self.check_players(sets.len(), "strategy_sets")?;
                let costs = unq(require(&self.facility_costs, "facility_costs", kind)?);
                build_cost_sharing(CostSharingSpec::new(costs, sets.clone()))?
            }
            Kind::LinearCongestion => {
                let sets = require(&self.strategy_sets, "strategy_sets", kind)?;
                self.check_players(sets.len(), "strategy_sets")?;
                let delays = self.linear_delays()?;
                build_linear_congestion(CongestionSpec::new(delays, sets.clone()))?
            }
            Kind::Singleton => match (&self.delays, &self.delay_table) {
                (Some(_), None) => {
                    build_linear_congestion(CongestionSpec::symmetric_singleton(self.linear_delays()?, self.players))?
                }
                (None, Some(table)) => {
                    let rows = table.iter().map(|r| unq(r)).collect();
                    build_table_singleton(TableSingletonSpec::new(rows, self.players))?
                }
                _ => return Err(InstanceError::field("delays", "give exactly one of `delays` and `delay_table`")),
            },
            Kind::ValidUtility => {
                let ground = *require(&self.ground_set_size, "ground_set_size", kind)?;
                let sets = require(&self.strategy_sets, "strategy_sets", kind)?;
                self.check_players(sets.len(), "strategy_sets")?;
                let mut masks = Vec::new();
                for (p, set) in sets.iter().enumerate() {
                    let mut row = Vec::new();
                    for strategy in set {
                        let mut mask = 0u32;
                        for &x in strategy {
                            if x >= ground || x >= 32 {
                                return Err(InstanceError::field(
                                    "strategy_sets",
                                    format!("player {p} names element {x} outside the ground set"),
                                ));
                            }
                            mask |= 1 << x;
                        }
                        row.push(mask);
                    }
                    masks.push(row);
                }
                let spec = UtilitySpec {
                    ground_set_size: ground,
                    set_function: unq(require(&self.set_function, "set_function", kind)?),
                    strategy_sets: masks,
                    payoffs: require(&self.payoffs, "payoffs", kind)?.iter().map(|r| unq(r)).collect(),
                };
                build_valid_utility(spec)?
            }
            Kind::Explicit => {
                let counts = require(&self.strategy_counts, "strategy_counts", kind)?;
                self.check_players(counts.len(), "strategy_counts")?;
                let orientation = match require(&self.orientation, "orientation", kind)? {
                    OrientationDoc::CostMin => Orientation::CostMin,
                    OrientationDoc::PayoffMax => Orientation::PayoffMax,
                };
                let table = ExplicitTable {
                    strategy_counts: counts.clone(),
                    direct: require(&self.payoffs, "payoffs", kind)?.iter().map(|r| unq(r)).collect(),
                    social: unq(require(&self.social, "social", kind)?),
                };
                Game::from_table(table, orientation)?
            }
        };
        if game.player_count() != self.players {
            return Err(InstanceError::field("players", format!("game has {} players", game.player_count())));
        }
        for (name, profile) in &self.fixtures {
            game.check_profile(&StrategyProfile::new(profile.clone()))
                .map_err(|e| InstanceError::Field { field: "fixtures", message: format!("{name}: {e}") })?;
        }
        let alpha = self.altruism.to_vector(self.players)?;
        Ok((game, alpha))
    }

    fn linear_delays(&self) -> Result<Vec<LinearDelay>, InstanceError> {
        Ok(require(&self.delays, "delays", self.kind)?.iter().map(|d| LinearDelay::new(d.a.0.clone(), d.b.0.clone())).collect())
    }

    fn empty(kind: Kind, players: usize, alpha: &AltruismVector) -> Self {
        InstanceDocument {
            kind,
            players,
            altruism: AltruismDoc::from_vector(alpha),
            facility_costs: None,
            delays: None,
            delay_table: None,
            strategy_sets: None,
            ground_set_size: None,
            set_function: None,
            payoffs: None,
            orientation: None,
            strategy_counts: None,
            social: None,
            fixtures: BTreeMap::new(),
        }
    }

    /// Document for a family-built game. Explicit games carry no spec and
    /// yield `None`.
    pub fn from_game(game: &Game, alpha: &AltruismVector) -> Option<Self> {
        let n = game.player_count();
        let delays = |d: &[LinearDelay]| d.iter().map(|d| DelayDoc { a: Q(d.a.clone()), b: Q(d.b.clone()) }).collect();
        Some(match game.family()? {
            Family::CostSharing(spec) => InstanceDocument {
                facility_costs: Some(qs(&spec.facility_costs)),
                strategy_sets: Some(spec.strategy_sets.clone()),
                ..Self::empty(Kind::CostSharing, n, alpha)
            },
            Family::LinearCongestion(spec) if spec.singleton => {
                InstanceDocument { delays: Some(delays(&spec.delays)), ..Self::empty(Kind::Singleton, n, alpha) }
            }
            Family::LinearCongestion(spec) => InstanceDocument {
                delays: Some(delays(&spec.delays)),
                strategy_sets: Some(spec.strategy_sets.clone()),
                ..Self::empty(Kind::LinearCongestion, n, alpha)
            },
            Family::TableSingleton(spec) => InstanceDocument {
                delay_table: Some(spec.delays.iter().map(|r| qs(r)).collect()),
                ..Self::empty(Kind::Singleton, n, alpha)
            },
            Family::ValidUtility(spec) => InstanceDocument {
                ground_set_size: Some(spec.ground_set_size),
                set_function: Some(qs(&spec.set_function)),
                strategy_sets: Some(
                    spec.strategy_sets
                        .iter()
                        .map(|set| {
                            set.iter().map(|&m| (0..spec.ground_set_size).filter(|x| m >> x & 1 == 1).collect()).collect()
                        })
                        .collect(),
                ),
                payoffs: Some(spec.payoffs.iter().map(|r| qs(r)).collect()),
                ..Self::empty(Kind::ValidUtility, n, alpha)
            },
        })
    }

    pub fn from_fixture(fixture: &Fixture) -> Self {
        let mut doc = Self::from_game(&fixture.game, &fixture.alpha).expect("fixtures are family games");
        if let Some(ne) = &fixture.designated_ne {
            doc.fixtures.insert("designated_ne".into(), ne.choices().to_vec());
        }
        doc.fixtures.insert("optimum".into(), fixture.optimum.choices().to_vec());
        doc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gamelab_core::families::{example_instance, ExampleName};
    use gamelab_core::rational::{int, ratio};

    #[test]
    fn rationals_parse_from_strings_and_integers() {
        let v: Vec<Q> = serde_json::from_str(r#"[3, "1/2", "-4/6", " 7 "]"#).unwrap();
        assert_eq!(v, vec![Q(int(3)), Q(ratio(1, 2)), Q(ratio(-2, 3)), Q(int(7))]);
        assert!(serde_json::from_str::<Q>(r#""1/0""#).is_err());
        assert!(serde_json::from_str::<Q>("1.5").is_err());
        assert_eq!(serde_json::to_string(&Q(ratio(2, 4))).unwrap(), r#""1/2""#);
    }

    #[test]
    fn fixtures_round_trip() {
        for name in [
            ExampleName::CostSharingLb { n: 3, alpha: ratio(1, 2) },
            ExampleName::ValidUtilityTight,
            ExampleName::CongestionLb { alpha: ratio(1, 4) },
            ExampleName::SingletonMixed { m: 3 },
            ExampleName::SingletonTight2p { alpha: int(1) },
        ] {
            let f = example_instance(name).unwrap();
            let doc = InstanceDocument::from_fixture(&f);
            let text = doc.to_json();
            let back = InstanceDocument::parse(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_json(), text);
            let (game, alpha) = back.build().unwrap();
            assert_eq!(alpha, f.alpha);
            for p in game.profiles().unwrap() {
                assert_eq!(game.evaluate(p.choices()), f.game.evaluate(p.choices()));
            }
        }
    }

    #[test]
    fn field_diagnostics() {
        let unknown = r#"{"kind": "cost_sharing", "players": 1, "altruism": 0, "colour": 1}"#;
        assert!(matches!(InstanceDocument::parse(unknown), Err(InstanceError::Parse(m)) if m.contains("colour")));

        let wrong = r#"{"kind": "cost_sharing", "players": 1, "altruism": 0, "facility_costs": [1],
                        "strategy_sets": [[[0]]], "delays": []}"#;
        let err = InstanceDocument::parse(wrong).unwrap().build().unwrap_err();
        assert!(matches!(err, InstanceError::Field { field: "delays", .. }));

        let missing = r#"{"kind": "cost_sharing", "players": 1, "altruism": 0, "strategy_sets": [[[0]]]}"#;
        let err = InstanceDocument::parse(missing).unwrap().build().unwrap_err();
        assert!(matches!(err, InstanceError::Field { field: "facility_costs", .. }));

        let alpha = r#"{"kind": "cost_sharing", "players": 2, "altruism": ["1/2"], "facility_costs": [1],
                        "strategy_sets": [[[0]], [[0]]]}"#;
        let err = InstanceDocument::parse(alpha).unwrap().build().unwrap_err();
        assert!(matches!(err, InstanceError::Field { field: "altruism", .. }));
    }

    #[test]
    fn explicit_games() {
        // prisoner's dilemma in costs
        let text = r#"{"kind": "explicit", "players": 2, "altruism": [0, "1/2"], "orientation": "cost_min",
            "strategy_counts": [2, 2], "payoffs": [[1, 1], [3, 0], [0, 3], [2, 2]], "social": [2, 3, 3, 4]}"#;
        let (game, alpha) = InstanceDocument::parse(text).unwrap().build().unwrap();
        assert_eq!(game.player_count(), 2);
        assert_eq!(alpha.get(1), &ratio(1, 2));
        assert!(InstanceDocument::from_game(&game, &alpha).is_none());
    }
}
