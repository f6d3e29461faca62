use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use gtcount_core::cards::{self, CanonicalCache, CanonicalSource};
use gtcount_core::gamespec::{self, parse_game_file, Betting, GameSpec};
use gtcount_core::limit::limit_betting_tallies;
use gtcount_core::nolimit::{count_betting, SweepMode};
use gtcount_core::oracle::{walk_betting, DEFAULT_MAX_NODES};
use gtcount_core::report::{self, Format};
use gtcount_core::Execution;

/// Exact game-size counts for heads-up limit and no-limit poker.
#[derive(Parser)]
#[command(name = "gtcount", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count game states, information sets and infoset-actions.
    Size(SizeArgs),
    /// Print the per-round card-deal counts.
    Cards(CardsArgs),
    /// Walk the betting tree explicitly and compare with the counter.
    Oracle(OracleArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GameArg {
    /// Game definition file.
    #[arg(long, value_name = "FILE")]
    game: Option<PathBuf>,
    /// Name of a shipped game definition.
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
}

impl GameArg {
    fn load(&self) -> Result<GameSpec> {
        if let Some(path) = &self.game {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return parse_game_file(&text).with_context(|| format!("parsing {}", path.display()));
        }
        let name = self.builtin.as_deref().expect("clap enforces one source");
        let names: Vec<&str> = gamespec::KnownGame::ALL.iter().map(|g| g.name()).collect();
        gamespec::builtin(name).with_context(|| format!("known games: {}", names.join(", ")))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonicalMode {
    /// Use the canonical-count cache, enumerating only on a miss.
    Cache,
    /// Always enumerate canonical card combinations.
    Compute,
}

#[derive(Args)]
struct SizeArgs {
    #[command(flatten)]
    game: GameArg,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    #[arg(long, value_enum, default_value = "cache")]
    canonical: CanonicalMode,
    /// Significant digits in the text table.
    #[arg(long, default_value_t = 6)]
    sig_digits: usize,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CardsArgs {
    #[command(flatten)]
    game: GameArg,
    /// Only this round (0-based).
    #[arg(long)]
    round: Option<usize>,
    /// Enumerate canonical counts and compare them with the cache.
    #[arg(long)]
    verify: bool,
    /// Merge enumerated canonical counts into the cache and write it here.
    #[arg(long, value_name = "PATH")]
    emit_cache: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    game: GameArg,
    /// Refuse trees with more nodes than this.
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: u64,
}

enum Outcome {
    Ok,
    Mismatch,
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn size(args: &SizeArgs) -> Result<Outcome> {
    let spec = args.game.load()?;
    let source = match args.canonical {
        CanonicalMode::Cache => CanonicalSource::Cache(CanonicalCache::from_env()?),
        CanonicalMode::Compute => CanonicalSource::Compute(Execution::default()),
    };
    let size = report::game_size(&spec, &source)?;
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    write_output(&args.out, &report::emit(&size, format, args.sig_digits)?)?;
    Ok(Outcome::Ok)
}

fn cards(args: &CardsArgs) -> Result<Outcome> {
    let spec = args.game.load()?;
    if let Err(v) = spec.validate() {
        bail!("invalid game: `{}` {}", v.key, v.reason);
    }
    let rounds: Vec<usize> = match args.round {
        Some(r) if r >= spec.num_rounds => bail!(
            "round {r} out of range for a {}-round game",
            spec.num_rounds
        ),
        Some(r) => vec![r],
        None => (0..spec.num_rounds).collect(),
    };
    let mut cache = CanonicalCache::from_env()?;
    let enumerate = args.verify || args.emit_cache.is_some();
    let raw = cards::raw_deal_counts(&spec);
    let mut outcome = Outcome::Ok;
    println!(
        "{:<8} {:>22} {:>16} {:>16}",
        "Round", "Total Two-Player", "Total One-Player", "Canonical"
    );
    for r in rounds {
        let cached = cache.lookup(&spec, r).cloned();
        let canonical = match cached {
            Some(c) if !enumerate => c,
            cached => {
                info!("enumerating canonical deals for {}", spec.round_name(r));
                let c = cards::canonical_count_with(&spec, r, Execution::default())?;
                if let Some(old) = &cached {
                    if old != &c {
                        eprintln!(
                            "{}: cache has {old}, enumeration gives {c}",
                            spec.round_name(r)
                        );
                        outcome = Outcome::Mismatch;
                    }
                }
                cache.insert(&spec, r, c.clone());
                c
            }
        };
        let (two, one) = &raw[r];
        println!(
            "{:<8} {:>22} {:>16} {:>16}",
            spec.round_name(r),
            two,
            one,
            canonical
        );
    }
    if args.verify && matches!(outcome, Outcome::Ok) {
        println!("cache == enumeration");
    }
    if let Some(path) = &args.emit_cache {
        fs::write(path, cache.render()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(outcome)
}

fn oracle(args: &OracleArgs) -> Result<Outcome> {
    let spec = args.game.load()?;
    if let Err(v) = spec.validate() {
        bail!("invalid game: `{}` {}", v.key, v.reason);
    }
    let run = walk_betting(&spec, args.max_nodes)?;
    let dp = match spec.betting {
        Betting::Limit { .. } => limit_betting_tallies(&spec)?,
        Betting::NoLimit => count_betting(&spec, SweepMode::RangeAdd)?,
    };
    let mut outcome = Outcome::Ok;
    for (r, (walked, counted)) in run.tallies.iter().zip(&dp).enumerate() {
        if let Some(d) = counted.diff(walked) {
            eprintln!("{}: DP vs oracle: {d}", spec.round_name(r));
            outcome = Outcome::Mismatch;
        }
    }
    if matches!(outcome, Outcome::Mismatch) {
        println!("DP != oracle");
        return Ok(outcome);
    }
    println!("DP == oracle ({} nodes walked)", run.nodes_visited);
    println!();
    let size = report::game_size(&spec, &CanonicalSource::Cache(CanonicalCache::from_env()?))?;
    print!("{}", report::emit(&size, Format::Text, 6)?);
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the validation exit status
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Size(a) => size(a),
        Command::Cards(a) => cards(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
