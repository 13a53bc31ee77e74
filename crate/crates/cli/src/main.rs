//! `chm`: complex Hadamard matrices from the shell. Verification, invariants
//! (Haagerup set, defect), block-structure detection, affine-family
//! construction, conference matrices, and a built-in catalogue.
//!
//! stdout carries exactly one machine-readable payload per run: a
//! schema-versioned JSON report, or the requested object itself (`catalogue
//! get`, `dephase`, `param`, `conference gen/hadamard/param`), which feeds
//! straight back into the other subcommands. Human summaries go to stderr.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict (not
//! Hadamard, structure refuted, pair unsuitable), 2 operational error,
//! 3 search budget exhausted.

mod cmd;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use chm_core::dita::DEFAULT_NODE_BUDGET;
use input::{ConferenceSource, Source};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// Fallback for the dita-check node budget when `--budget` is absent.
const BUDGET_ENV: &str = "CHM_DITA_BUDGET";

#[derive(Copy, Clone, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "chm", version, about = "Complex Hadamard matrix toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a matrix, family, or conference matrix against its defining equations
    Verify {
        #[command(flatten)]
        source: Source,
    },
    /// Normalize the first row and column to 1 and print the result
    Dephase {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Survey an object: Hadamard check, Haagerup set, defect, quick structure scan
    Info {
        #[command(flatten)]
        source: Source,
    },
    /// Search for block-composition structure up to equivalence
    DitaCheck {
        #[command(flatten)]
        source: Source,
        /// Node budget for the backtracking search (default from CHM_DITA_BUDGET or 10^8)
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check that no fifth sign row extends the canonical four of length 4p
    LemmaL {
        /// Quarter width, 3 or 5
        p: usize,
    },
    /// Introduce affine parameters into a Hadamard matrix
    Param {
        #[command(subcommand)]
        which: ParamCommand,
    },
    /// Conference matrices: generation, feasibility, derived objects
    Conference {
        #[command(subcommand)]
        which: ConferenceCommand,
    },
    /// Operations on affine families
    Family {
        #[command(subcommand)]
        which: FamilyCommand,
    },
    /// Built-in matrices and families
    Catalogue {
        #[command(subcommand)]
        which: CatalogueCommand,
    },
}

#[derive(Subcommand)]
enum ParamCommand {
    /// Maximal affine family over a real Hadamard matrix (order 12 and up)
    Real {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// One-parameter family from a qualifying column pair; lists pairs without --cols
    Pair {
        #[command(flatten)]
        source: Source,
        /// 1-based column pair, e.g. 1,4
        #[arg(long, value_name = "U,V")]
        cols: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
}

#[derive(Subcommand)]
enum ConferenceCommand {
    /// Generate the Paley conference matrix of order q+1
    Gen {
        /// Odd prime q
        #[arg(long, value_name = "Q")]
        paley: u64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Test the order condition for symmetric conference matrices
    Feasible {
        order: usize,
    },
    /// Build the Hadamard matrix of a conference matrix (I + iC or I - C)
    Hadamard {
        #[command(flatten)]
        source: ConferenceSource,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Introduce affine parameters over a symmetric conference matrix
    Param {
        #[command(flatten)]
        source: ConferenceSource,
        /// 1-based row pairs, e.g. "2,10;3,9;5,7"; omit to pick greedily
        #[arg(long, value_name = "R,S;...")]
        pairs: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Verify orthogonality for all parameter values
    Check {
        #[command(flatten)]
        source: Source,
    },
    /// Evaluate at a parameter point (radians) and measure the Gram deviation
    Eval {
        #[command(flatten)]
        source: Source,
        /// Comma-separated values, one per parameter
        #[arg(long, value_name = "X1,X2,...", allow_hyphen_values = true)]
        at: String,
    },
    /// Dimension of the family (rank of the coefficient matrix)
    Dim {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Subcommand)]
enum CatalogueCommand {
    /// Print one entry in a form the other subcommands read back
    Get {
        id: String,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// List all entries
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> cmd::CmdResult {
    match command {
        Command::Verify { source } => cmd::verify(input::load(&source)?),
        Command::Dephase { source, format } => cmd::dephase_cmd(input::load(&source)?, format),
        Command::Info { source } => cmd::info(input::load(&source)?),
        Command::DitaCheck { source, budget } => {
            cmd::dita_check(input::load(&source)?, resolve_budget(budget)?)
        }
        Command::LemmaL { p } => cmd::lemma_l(p),
        Command::Param { which } => match which {
            ParamCommand::Real { source, format } => {
                cmd::param_real(input::load(&source)?, format)
            }
            ParamCommand::Pair { source, cols, format } => {
                let cols = cols.as_deref().map(parse_pair).transpose()?;
                cmd::param_pair(input::load(&source)?, cols, format)
            }
        },
        Command::Conference { which } => match which {
            ConferenceCommand::Gen { paley, format } => cmd::conference_gen(paley, format),
            ConferenceCommand::Feasible { order } => cmd::conference_feasible(order),
            ConferenceCommand::Hadamard { source, format } => {
                cmd::conference_hadamard(input::load_conference(&source)?, format)
            }
            ConferenceCommand::Param { source, pairs, format } => {
                let pairs = pairs.as_deref().map(parse_pair_list).transpose()?;
                cmd::conference_param(input::load_conference(&source)?, pairs, format)
            }
        },
        Command::Family { which } => match which {
            FamilyCommand::Check { source } => cmd::family_check(input::load(&source)?),
            FamilyCommand::Eval { source, at } => {
                let at = parse_values(&at)?;
                cmd::family_eval(input::load(&source)?, &at)
            }
            FamilyCommand::Dim { source } => cmd::family_dim(input::load(&source)?),
        },
        Command::Catalogue { which } => match which {
            CatalogueCommand::Get { id, format } => cmd::catalogue_get(&id, format),
            CatalogueCommand::List => cmd::catalogue_list(),
        },
    }
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, String> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV} must be a node count, got {v:?}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_NODE_BUDGET),
        Err(e) => Err(format!("{BUDGET_ENV}: {e}")),
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected two comma-separated indices, got {s:?}");
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_pair_list(s: &str) -> Result<Vec<(usize, usize)>, String> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_pair)
        .collect()
}

fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse()
                .map_err(|_| format!("bad parameter value {v:?}"))
        })
        .collect()
}
