//! Command-line interface.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gamelab_core::analysis::{analyze_with, AnalysisOptions};
use gamelab_core::bounds::BoundParams;
use gamelab_core::dynamics::{run_no_regret, total_anarchy_check, Learner};
use gamelab_core::families::{example_instance, ExampleName, FamilyTag};
use gamelab_core::smoothness::PairDomain;
use gamelab_core::{AltruismVector, Error, Game, Rational, Sequential};

use crate::instance::{InstanceDocument, InstanceError};
use crate::parallel::RayonRunner;
use crate::report::{analysis_doc, bounds_doc, dynamics_doc, AnalyzeMeta, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CAP: i32 = 2;

/// Environment variable overriding the profile enumeration cap.
pub const CAP_ENV: &str = "GAMELAB_CAP";

#[derive(Parser, Debug)]
#[command(name = "gamelab", version, about = "Equilibria and robust price of anarchy of altruistic games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Example {
    CostSharingLb,
    ValidUtilityTight,
    CongestionLb,
    SingletonMixed,
    #[value(name = "singleton-tight-2p")]
    SingletonTight2p,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Pairs {
    All,
    Opt,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Skip {
    Cce,
    Ce,
    Rpoa,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Machine,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LearnerArg {
    Mw,
    Rm,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    CostSharing,
    ValidUtility,
    Congestion,
    Singleton,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a built-in example instance as JSON.
    Gen {
        #[arg(value_enum)]
        name: Example,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Equilibria, optimum, robust price of anarchy, worst (C)CE, bounds.
    Analyze {
        /// Instance file, `-` for stdin.
        file: PathBuf,
        /// Altruism override: one level for everyone or a comma list.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value = "all")]
        pairs: Pairs,
        #[arg(long, value_enum, value_delimiter = ',')]
        skip: Vec<Skip>,
        /// Worker threads for profile and pair enumeration.
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Repeated play with a no-regret learner.
    Dynamics {
        file: PathBuf,
        #[arg(long = "T", default_value_t = 10_000)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "mw")]
        learner: LearnerArg,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Evaluate the closed-form bounds.
    Bounds {
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// One level for everyone or a comma list.
        #[arg(long, default_value = "0")]
        alpha: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::InstanceTooLarge { .. }) { EXIT_CAP } else { EXIT_INPUT };
        Failure { code, message: e.to_string() }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        match e {
            InstanceError::Game(e) => e.into(),
            other => Failure::input(other),
        }
    }
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, Failure> {
    text.trim().parse().map_err(|_| Failure::input(format!("{what}: {text:?} is not a rational")))
}

/// `a` for everyone or `a1,a2,...` per player.
fn parse_alpha(text: &str, players: usize) -> Result<AltruismVector, Failure> {
    let values = text.split(',').map(|t| parse_rational(t, "--alpha")).collect::<Result<Vec<_>, _>>()?;
    let alpha = if values.len() == 1 {
        AltruismVector::uniform(players, values[0].clone())
    } else {
        AltruismVector::new(values)
    }
    .map_err(|e| Failure::input(format!("--alpha: {e}")))?;
    if alpha.len() != players {
        return Err(Failure::input(format!("--alpha lists {} levels for {players} players", alpha.len())));
    }
    Ok(alpha)
}

fn format_of(f: FormatArg) -> Format {
    match f {
        FormatArg::Table => Format::Table,
        FormatArg::Machine => Format::Machine,
    }
}

fn read_instance(file: &PathBuf) -> Result<InstanceDocument, Failure> {
    let text = if file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| Failure::input(format!("{}: {e}", file.display())))?
    };
    InstanceDocument::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", file.display())))
}

fn load(file: &PathBuf, alpha: Option<&str>, cap: Option<u64>) -> Result<(InstanceDocument, Game, AltruismVector), Failure> {
    let doc = read_instance(file)?;
    let (mut game, mut a) = doc.build().map_err(|e| {
        let f = Failure::from(e);
        Failure { message: format!("{}: {}", file.display(), f.message), ..f }
    })?;
    if let Some(cap) = cap {
        game = game.with_profile_cap(cap);
    }
    if let Some(text) = alpha {
        a = parse_alpha(text, game.player_count())?;
    }
    Ok((doc, game, a))
}

fn example(name: Example, alpha: Option<&str>, n: Option<usize>, m: Option<usize>) -> Result<ExampleName, Failure> {
    let reject = |flag: &str, given: bool| {
        if given {
            Err(Failure::input(format!("{flag} does not apply to this example")))
        } else {
            Ok(())
        }
    };
    let a = alpha.map(|t| parse_rational(t, "--alpha")).transpose()?.unwrap_or_else(Rational::zero);
    Ok(match name {
        Example::CostSharingLb => {
            reject("--m", m.is_some())?;
            ExampleName::CostSharingLb { n: n.unwrap_or(2), alpha: a }
        }
        Example::ValidUtilityTight => {
            reject("--alpha", alpha.is_some())?;
            reject("--n", n.is_some())?;
            reject("--m", m.is_some())?;
            ExampleName::ValidUtilityTight
        }
        Example::CongestionLb => {
            reject("--n", n.is_some())?;
            reject("--m", m.is_some())?;
            ExampleName::CongestionLb { alpha: a }
        }
        Example::SingletonMixed => {
            reject("--alpha", alpha.is_some())?;
            reject("--n", n.is_some())?;
            ExampleName::SingletonMixed { m: m.unwrap_or(2) }
        }
        Example::SingletonTight2p => {
            reject("--n", n.is_some())?;
            reject("--m", m.is_some())?;
            ExampleName::SingletonTight2p { alpha: a }
        }
    })
}

fn execute(cli: Cli, cap: Option<u64>) -> Result<String, Failure> {
    match cli.command {
        Command::Gen { name, alpha, n, m } => {
            let fixture = example_instance(example(name, alpha.as_deref(), n, m)?)
                .map_err(|e| Failure::input(e.to_string()))?;
            Ok(InstanceDocument::from_fixture(&fixture).to_json())
        }
        Command::Analyze { file, alpha, pairs, skip, parallel, format } => {
            let (doc, game, alpha) = load(&file, alpha.as_deref(), cap)?;
            let options = AnalysisOptions {
                pair_domain: match pairs {
                    Pairs::All => PairDomain::AllPairs,
                    Pairs::Opt => PairDomain::OptimumTargets,
                },
                skip_cce: skip.contains(&Skip::Cce),
                skip_ce: skip.contains(&Skip::Ce),
                skip_rpoa: skip.contains(&Skip::Rpoa),
                ..AnalysisOptions::default()
            };
            let report = match parallel {
                Some(threads) if threads > 1 => {
                    let runner = RayonRunner::new(threads).map_err(|e| Failure::input(format!("--parallel: {e}")))?;
                    analyze_with(&game, &alpha, &options, &runner)?
                }
                _ => analyze_with(&game, &alpha, &options, &Sequential)?,
            };
            let mut skipped: Vec<&str> = Vec::new();
            for (flag, name) in [(options.skip_rpoa, "rpoa"), (options.skip_cce, "cce"), (options.skip_ce, "ce")] {
                if flag {
                    skipped.push(name);
                }
            }
            let kind = serde_json::to_value(doc.kind).expect("kind serializes");
            let meta = AnalyzeMeta { digest: &doc.digest(), kind: kind.as_str().unwrap_or("?"), skipped: &skipped };
            Ok(analysis_doc(&meta, &game, &report).render(format_of(format)))
        }
        Command::Dynamics { file, rounds, seed, learner, alpha, format } => {
            if rounds == 0 {
                return Err(Failure::input("--T must be at least 1"));
            }
            let (doc, game, alpha) = load(&file, alpha.as_deref(), cap)?;
            let learner = match learner {
                LearnerArg::Mw => Learner::MultiplicativeWeights,
                LearnerArg::Rm => Learner::RegretMatching,
            };
            let trajectory = run_no_regret(&game, &alpha, rounds, seed, learner)?;
            let check = total_anarchy_check(&game, &alpha, &trajectory)?;
            Ok(dynamics_doc(&doc.digest(), &trajectory, &check, &game).render(format_of(format)))
        }
        Command::Bounds { family, alpha, n, format } => {
            let values = alpha.split(',').count();
            let n = match (n, values) {
                (Some(n), 1) => n,
                (None, 1) => 2,
                (Some(n), k) if n != k => return Err(Failure::input(format!("--n {n} but --alpha lists {k} levels"))),
                (_, k) => k,
            };
            if n == 0 {
                return Err(Failure::input("--n must be at least 1"));
            }
            let alpha = parse_alpha(&alpha, n)?;
            let tag = family.map(|f| match f {
                FamilyArg::CostSharing => FamilyTag::CostSharing,
                FamilyArg::ValidUtility => FamilyTag::ValidUtility,
                FamilyArg::Congestion => FamilyTag::LinearCongestion,
                FamilyArg::Singleton => FamilyTag::Singleton,
            });
            Ok(bounds_doc(tag, &BoundParams::from_alpha(&alpha), &alpha).render(format_of(format)))
        }
    }
}

/// Runs the CLI and returns the exit code. `cap` overrides the profile cap.
pub fn run<I, T>(args: I, cap: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cap = match cap.map(|c| c.trim().parse::<u64>()) {
        None => None,
        Some(Ok(c)) if c > 0 => Some(c),
        Some(_) => {
            let _ = writeln!(stderr, "gamelab: {CAP_ENV} must be a positive integer");
            return EXIT_INPUT;
        }
    };
    match execute(cli, cap) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(stderr, "gamelab: {}", f.message);
            f.code
        }
    }
}
