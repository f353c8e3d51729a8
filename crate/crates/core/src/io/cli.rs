//! The `cpnet` command-line driver.
//!
//! Exit codes: 0 success, 1 negative answer to a query, 2 invalid input,
//! 3 size limit exceeded. Results go to stdout, diagnostics to stderr.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::{format_values, parse_assignment, parse_cpnet_with, parse_game_bytes, serialize_cpnet, serialize_game};
use crate::elimination::{eliminate, solve_acyclic, unique_outcome, EliminationKind, EliminationPolicy};
use crate::error::Error;
use crate::game::{cpnet_to_game, game_to_cpnet_with, Game};
use crate::gen::{random_spec_seeded, NetConfig};
use crate::model::{CpNet, Limits, Outcome, ViolationKind, DEFAULT_MAX_OUTCOMES, DEFAULT_MAX_TABLE_ROWS};
use crate::reduction::reduce;
use crate::semantics::{better_within, flips, optimal_outcomes_within, Direction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cpnet", version, about = "CP-nets, games with parametrized preferences, and their optimal outcomes")]
struct Cli {
    /// Largest outcome space the exhaustive searches will enumerate.
    #[arg(long, global = true, env = "CPNET_MAX_OUTCOMES", default_value_t = DEFAULT_MAX_OUTCOMES as u64)]
    max_outcomes: u64,

    /// Largest preference table accepted when reading or building a net.
    #[arg(long, global = true, env = "CPNET_MAX_TABLE_ROWS", default_value_t = DEFAULT_MAX_TABLE_ROWS)]
    max_table_rows: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a net; violations are reported on stderr.
    Validate { file: PathBuf },
    /// Print the optimal outcomes, one per line.
    Solve {
        file: PathBuf,
        /// Defaults to `acyclic` for acyclic nets and `eliminate` otherwise.
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Print the reduced net.
    Reduce { file: PathBuf },
    /// Iteratively remove values and print the final net.
    Eliminate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "nbr")]
        kind: Kind,
        /// Print one `- Var=value (kind)` line per removal before the net.
        #[arg(long)]
        trace: bool,
        /// Pick removals at random with this seed instead of lowest index first.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Translate a net into its game.
    ToGame { file: PathBuf },
    /// Translate a game into its net, with every other variable as parent.
    ToCpnet {
        file: PathBuf,
        /// Drop redundant parents from the result.
        #[arg(long)]
        reduce: bool,
    },
    /// Exit 0 and print a chain of worsening flips when the first outcome is
    /// better than the second; exit 1 otherwise.
    Better { file: PathBuf, better: String, worse: String },
    /// List the single-variable flips out of an outcome.
    Flips {
        file: PathBuf,
        outcome: String,
        #[arg(long, value_enum, default_value = "down")]
        dir: Dir,
    },
    /// Print a random net, deterministic per seed.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        vars: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        domain: u64,
        #[arg(long)]
        acyclic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_parents: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Oracle,
    Acyclic,
    Eliminate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Nbr,
    Dominated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Dir {
    Up,
    Down,
}

/// A failed command: exit code and message.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SizeLimit { .. } => EXIT_LIMIT,
            Error::Invalid(report) if report.count(ViolationKind::TableTooLarge) > 0 => EXIT_LIMIT,
            _ => EXIT_INVALID,
        };
        Failure(code, e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    limits: Limits,
}

/// Runs the driver on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let limits = Limits { max_table_rows: cli.max_table_rows, max_outcomes: cli.max_outcomes as u128 };
    let mut ctx = Ctx { out: stdout, err: stderr, limits };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(ctx.err, "error: {message}");
            code
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut bytes = Vec::new();
    let result = if path.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(path).map(|b| bytes = b)
    };
    result.map_err(|e| Failure(EXIT_INVALID, format!("cannot read {}: {e}", path.display())))?;
    Ok(bytes)
}

fn parse_error(path: &Path, e: super::ParseError) -> Failure {
    let limit = e.diagnostics().iter().any(|d| d.message.starts_with(ViolationKind::TableTooLarge.as_str()));
    let text = e.diagnostics().iter().map(|d| format!("{}:{d}", path.display())).collect::<Vec<_>>().join("\n");
    Failure(if limit { EXIT_LIMIT } else { EXIT_INVALID }, text)
}

fn load_net(ctx: &Ctx<'_>, path: &Path) -> Result<CpNet, Failure> {
    let bytes = read_input(path)?;
    let text = super::decode(&bytes).map_err(|e| parse_error(path, e))?;
    parse_cpnet_with(text, &ctx.limits).map_err(|e| parse_error(path, e))
}

fn load_game(path: &Path) -> Result<Game, Failure> {
    parse_game_bytes(&read_input(path)?).map_err(|e| parse_error(path, e))
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> CmdResult {
    match command {
        Command::Validate { file } => {
            let net = load_net(ctx, &file)?;
            let _ = writeln!(ctx.out, "valid: {} variables, {} outcomes", net.len(), net.outcome_count());
            Ok(EXIT_OK)
        }
        Command::Solve { file, method } => {
            let net = load_net(ctx, &file)?;
            solve(ctx, &net, method)
        }
        Command::Reduce { file } => {
            let net = load_net(ctx, &file)?;
            let _ = write!(ctx.out, "{}", serialize_cpnet(&reduce(&net)));
            Ok(EXIT_OK)
        }
        Command::Eliminate { file, kind, trace, seed } => {
            let net = load_net(ctx, &file)?;
            let kind = match kind {
                Kind::Nbr => EliminationKind::NeverBestResponse,
                Kind::Dominated => EliminationKind::StrictlyDominated,
            };
            let policy = seed.map_or(EliminationPolicy::LowestIndex, |seed| EliminationPolicy::Shuffled { seed });
            let result = eliminate(&net, kind, policy);
            if trace {
                for step in &result.steps {
                    let _ = writeln!(ctx.out, "- {}={} ({})", step.variable_name, step.value_name, step.kind);
                }
                let _ = writeln!(ctx.out);
            }
            let _ = write!(ctx.out, "{}", serialize_cpnet(&result.final_net));
            Ok(EXIT_OK)
        }
        Command::ToGame { file } => {
            let net = load_net(ctx, &file)?;
            net.check_outcome_count(ctx.limits.max_outcomes)?;
            let _ = write!(ctx.out, "{}", serialize_game(&cpnet_to_game(&net)));
            Ok(EXIT_OK)
        }
        Command::ToCpnet { file, reduce: reduced } => {
            let game = load_game(&file)?;
            let mut net = game_to_cpnet_with(&game, &ctx.limits)?;
            if reduced {
                net = reduce(&net);
            }
            let _ = write!(ctx.out, "{}", serialize_cpnet(&net));
            Ok(EXIT_OK)
        }
        Command::Better { file, better, worse } => {
            let net = load_net(ctx, &file)?;
            let a = parse_assignment(&net, &better)?;
            let b = parse_assignment(&net, &worse)?;
            match better_within(&net, &a, &b, ctx.limits.max_outcomes)? {
                Some(witness) => {
                    for o in witness.chain() {
                        let _ = writeln!(ctx.out, "{}", format_values(&net, o));
                    }
                    Ok(EXIT_OK)
                }
                None => {
                    let _ = writeln!(ctx.err, "not better");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Flips { file, outcome, dir } => {
            let net = load_net(ctx, &file)?;
            let o = parse_assignment(&net, &outcome)?;
            let direction = match dir {
                Dir::Up => Direction::Improving,
                Dir::Down => Direction::Worsening,
            };
            for (flip, next) in flips(&net, &o, direction) {
                let x = flip.variable;
                let _ = writeln!(
                    ctx.out,
                    "{}  ({}: {} -> {})",
                    format_values(&net, &next),
                    net.name(x),
                    net.value_name(x, flip.from),
                    net.value_name(x, flip.to)
                );
            }
            Ok(EXIT_OK)
        }
        Command::Gen { vars, domain, acyclic, seed, max_parents } => {
            let cfg = NetConfig {
                vars: vars as usize,
                min_domain: domain as usize,
                max_domain: domain as usize,
                max_parents,
                acyclic,
                redundancy: 0.0,
            };
            let net = random_spec_seeded(seed, &cfg).build_with(&ctx.limits)?;
            let _ = write!(ctx.out, "{}", serialize_cpnet(&net));
            Ok(EXIT_OK)
        }
    }
}

fn solve(ctx: &mut Ctx<'_>, net: &CpNet, method: Option<Method>) -> CmdResult {
    let method = method.unwrap_or(if net.is_acyclic() { Method::Acyclic } else { Method::Eliminate });
    let optima: Vec<Outcome> = match method {
        Method::Oracle => optimal_outcomes_within(net, ctx.limits.max_outcomes)?,
        Method::Acyclic => {
            if !net.is_acyclic() {
                return Err(Failure(EXIT_INVALID, "`--method acyclic` needs an acyclic net".into()));
            }
            vec![solve_acyclic(net)?]
        }
        Method::Eliminate => {
            let residual = eliminate(net, EliminationKind::NeverBestResponse, EliminationPolicy::LowestIndex).final_net;
            let found = match unique_outcome(&residual) {
                Some(o) => vec![o],
                None => optimal_outcomes_within(&residual, ctx.limits.max_outcomes)?,
            };
            let space = net.outcome_space();
            let mut mapped = found
                .iter()
                .map(|o| net.outcome_from_names(&residual.outcome_names(o)))
                .collect::<Result<Vec<_>, _>>()?;
            mapped.sort_by_key(|o| space.encode(o.values()));
            mapped
        }
    };
    if optima.is_empty() {
        let _ = writeln!(ctx.err, "no optimal outcome");
    }
    for o in &optima {
        let _ = writeln!(ctx.out, "{}", format_values(net, o));
    }
    Ok(EXIT_OK)
}
