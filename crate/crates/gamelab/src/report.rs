//! Report rendering.
//!
//! The machine format is line oriented: a `gamelab-report 1` header, one
//! `key value` pair per line, and `[section]` markers. Output depends only
//! on the instance, the flags and the tool version.

use std::fmt::Write as _;

use gamelab_core::bounds::{eval_bound, BoundParams};
use gamelab_core::dynamics::{Learner, TotalAnarchyCheck, Trajectory};
use gamelab_core::families::FamilyTag;
use gamelab_core::lp::LpEquilibrium;
use gamelab_core::smoothness::PairDomain;
use gamelab_core::{AltruismVector, AnalysisReport, Game, Orientation, StrategyProfile};

pub const FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Binding pairs and witness support entries listed before truncation.
pub const LIST_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Machine,
}

pub fn profile(p: &StrategyProfile) -> String {
    let parts: Vec<String> = p.choices().iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn alpha_list(alpha: &AltruismVector) -> String {
    alpha.as_slice().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::CostMin => "cost_min",
        Orientation::PayoffMax => "payoff_max",
    }
}

pub fn domain_name(d: PairDomain) -> &'static str {
    match d {
        PairDomain::AllPairs => "all",
        PairDomain::OptimumTargets => "opt",
    }
}

pub fn learner_name(l: Learner) -> &'static str {
    match l {
        Learner::MultiplicativeWeights => "mw",
        Learner::RegretMatching => "rm",
    }
}

pub fn family_name(tag: FamilyTag) -> &'static str {
    match tag {
        FamilyTag::CostSharing => "cost-sharing",
        FamilyTag::LinearCongestion => "congestion",
        FamilyTag::Singleton => "singleton",
        FamilyTag::TableSingleton => "singleton-table",
        FamilyTag::ValidUtility => "valid-utility",
    }
}

/// Ordered `key value` lines grouped into sections; rendered either as
/// the machine format or as an aligned table.
#[derive(Default)]
pub struct Doc {
    preamble: Vec<(String, String)>,
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Doc {
    pub fn new(command: &str) -> Self {
        let mut d = Doc::default();
        d.preamble.push(("tool".into(), format!("gamelab {TOOL_VERSION}")));
        d.preamble.push(("command".into(), command.into()));
        d
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.preamble.push((key.into(), value.to_string()));
        self
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        self.sections.push((name.into(), Vec::new()));
        self
    }

    pub fn line(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.sections.last_mut().expect("section opened").1.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Machine => {
                writeln!(out, "gamelab-report {FORMAT_VERSION}").unwrap();
                for (k, v) in &self.preamble {
                    writeln!(out, "{k} {v}").unwrap();
                }
                for (name, lines) in &self.sections {
                    writeln!(out, "[{name}]").unwrap();
                    for (k, v) in lines {
                        writeln!(out, "{k} {v}").unwrap();
                    }
                }
            }
            Format::Table => {
                let width = self
                    .preamble
                    .iter()
                    .chain(self.sections.iter().flat_map(|(_, l)| l.iter()))
                    .map(|(k, _)| k.len())
                    .max()
                    .unwrap_or(0);
                for (k, v) in &self.preamble {
                    writeln!(out, "{k:<width$}  {v}").unwrap();
                }
                for (name, lines) in &self.sections {
                    writeln!(out, "\n== {name} ==").unwrap();
                    for (k, v) in lines {
                        writeln!(out, "  {k:<width$}  {v}").unwrap();
                    }
                }
            }
        }
        out
    }
}

fn lp_section(doc: &mut Doc, name: &str, lp: &LpEquilibrium, ratio: Option<String>, game: &Game) {
    doc.section(name).line("value", &lp.value);
    if let Some(r) = ratio {
        doc.line("ratio", r);
    }
    let support: Vec<_> = lp.witness.support().collect();
    doc.line("support_size", support.len());
    for (idx, w) in support.iter().take(LIST_LIMIT) {
        doc.line("witness", format!("{} {}", profile(&game.profile_at(*idx)), w));
    }
}

pub struct AnalyzeMeta<'a> {
    pub digest: &'a str,
    pub kind: &'a str,
    pub skipped: &'a [&'a str],
}

pub fn analysis_doc(meta: &AnalyzeMeta<'_>, game: &Game, report: &AnalysisReport) -> Doc {
    let mut doc = Doc::new("analyze");
    doc.meta("instance", meta.digest)
        .meta("kind", meta.kind)
        .meta("pairs", domain_name(report.pair_domain))
        .meta("skip", if meta.skipped.is_empty() { "none".into() } else { meta.skipped.join(",") });

    let eq = &report.equilibria;
    doc.section("game")
        .line("orientation", orientation_name(report.orientation))
        .line("players", game.player_count())
        .line(
            "strategy_counts",
            game.strategy_counts().iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        )
        .line("profiles", report.profiles)
        .line("alpha", alpha_list(&report.alpha));

    doc.section("equilibria")
        .line("optimum", format!("{} {}", profile(&eq.optimum_profile), eq.optimum_value))
        .line("pure_ne_count", eq.pure_ne.len());
    for (p, v) in eq.pure_ne.iter().zip(&eq.ne_values).take(LIST_LIMIT) {
        doc.line("pure_ne", format!("{} {}", profile(p), v));
    }
    if let Some(poa) = &eq.pure_poa {
        doc.line("pure_poa", poa);
    }
    if let Some(pos) = &eq.pure_pos {
        doc.line("pure_pos", pos);
    }

    if let Some(r) = &report.rpoa {
        doc.section("rpoa").line("value", &r.value);
        if let Some(c) = &r.certificate {
            doc.line("lambda", &c.lambda).line("mu", &c.mu);
        }
        doc.line("pairs_checked", r.pairs).line("guard_active", r.guard_active).line("binding_pairs", r.binding_pairs.len());
        for (s, t) in r.binding_pairs.iter().take(LIST_LIMIT) {
            doc.line("binding", format!("{} {}", profile(&game.profile_at(*s)), profile(&game.profile_at(*t))));
        }
    }
    if let Some(cce) = &report.cce {
        lp_section(&mut doc, "cce", cce, report.cce_ratio.as_ref().map(ToString::to_string), game);
    }
    if let Some(ce) = &report.ce {
        lp_section(&mut doc, "ce", ce, report.ce_ratio.as_ref().map(ToString::to_string), game);
    }
    if !report.comparisons.is_empty() {
        doc.section("bounds");
        for c in &report.comparisons {
            doc.line(c.id.slug(), format!("{} computed {} bound {} {}", c.quantity.name(), c.computed, c.bound, c.verdict));
        }
    }
    if !report.notices.is_empty() {
        doc.section("notices");
        for n in &report.notices {
            doc.line("notice", n);
        }
    }
    doc
}

pub fn dynamics_doc(digest: &str, trajectory: &Trajectory, check: &TotalAnarchyCheck, game: &Game) -> Doc {
    let mut doc = Doc::new("dynamics");
    doc.meta("instance", digest)
        .meta("learner", learner_name(trajectory.learner))
        .meta("rounds", trajectory.rounds())
        .meta("seed", trajectory.seed);
    let counts = trajectory.profile_counts();
    let mut frequent: Vec<_> = counts.iter().collect();
    frequent.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    doc.section("trajectory").line("distinct_profiles", counts.len());
    if let Some(last) = trajectory.profiles.last() {
        doc.line("last_profile", profile(last));
    }
    for (p, c) in frequent.iter().take(5) {
        doc.line("frequent", format!("{} {}", profile(p), c));
    }
    doc.line("average_social", &check.average_social).line("optimum", &check.optimum);
    doc.section("regret");
    for (i, (r, n)) in check.regret.per_player.iter().zip(&check.regret.normalized).enumerate() {
        doc.line(&format!("player_{i}"), format!("{r} normalized {n} best_fixed {}", check.regret.best_fixed[i]));
    }
    doc.line("max_normalized", check.regret.max_normalized());
    doc.section("total_anarchy").line("rpoa", &check.rpoa);
    let relation = match game.orientation() {
        Orientation::CostMin => "average_at_most",
        Orientation::PayoffMax => "average_at_least",
    };
    match &check.bound {
        Some(b) => doc.line(relation, b),
        None => doc.line(relation, "none"),
    };
    doc.line("holds", check.holds);
    doc
}

pub fn bounds_doc(family: Option<FamilyTag>, params: &BoundParams, alpha: &AltruismVector) -> Doc {
    let mut doc = Doc::new("bounds");
    doc.meta("n", params.n).meta("alpha", alpha_list(alpha));
    let families = [FamilyTag::CostSharing, FamilyTag::ValidUtility, FamilyTag::LinearCongestion, FamilyTag::Singleton];
    for tag in families.into_iter().filter(|t| family.map_or(true, |f| f == *t)) {
        doc.section(family_name(tag));
        for id in gamelab_core::bounds::applicable(tag, params) {
            let info = id.info();
            let value = eval_bound(id, params).expect("applicable bounds evaluate");
            let direction = match info.direction {
                gamelab_core::bounds::BoundDirection::ExactRpoa => "exact_rpoa",
                gamelab_core::bounds::BoundDirection::UpperPoa => "upper_poa",
                gamelab_core::bounds::BoundDirection::UpperPos => "upper_pos",
                gamelab_core::bounds::BoundDirection::LowerPoa => "lower_poa",
            };
            doc.line(id.slug(), format!("{value} {direction} {}", info.formula));
        }
    }
    doc
}
