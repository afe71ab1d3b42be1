mod corpus;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quatclass::cmorders::CuratedTable;
use quatclass::selectivity::DeltaBase;
use quatclass::{Error, Result};

use crate::run::{exit_code, Settings};

/// Bundled corpus used by `verify` without a path.
pub const DEFAULT_CORPUS: &str = include_str!("../corpus/default.corpus");

#[derive(Parser)]
#[command(name = "quatclass", version, about = "Class numbers of Eichler orders over Q and real quadratic fields")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Print a key-sorted JSON document instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed recorded in the output; every search is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Curated class numbers: `field_d, extension_tag, conductor_norm, h_B, w_B, source_note`.
    #[arg(long, global = true, value_name = "PATH")]
    curated_table: Option<PathBuf>,
    /// Worker threads for corpus runs (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Largest ideal norm used when enumerating class groups of CM orders.
    #[arg(long, global = true, default_value_t = 5000)]
    budget: u64,
    /// Delta(B, O) for selective orders: `0`, `1`, or `KEY=0|1,...` with KEY = tag@conductor.
    #[arg(long, global = true, value_name = "SPEC", default_value = "1")]
    delta_base: String,
    /// Leave out timings so that output is byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of Q(sqrt(d)) (d = 1 for Q): units, class groups, zeta(-1).
    Field { d: i64 },
    /// Ramification of a quaternion algebra over Q(sqrt(d)).
    Algebra {
        d: i64,
        /// `unramified`, `ramified:L,...` or `(a,b)`.
        #[arg(default_value = "unramified")]
        spec: String,
    },
    /// CM orders with extra units over Q(sqrt(d)).
    Catalog { d: i64 },
    /// Total class number and divisibility for one case, e.g. `field=7 level=3`.
    Classno {
        #[arg(required = true, num_args = 1..)]
        case: Vec<String>,
    },
    /// Psi and Phi fibers for one case.
    Fibers {
        #[arg(required = true, num_args = 1..)]
        case: Vec<String>,
    },
    /// Enumerate ideal classes of a definite order over Q and compare.
    Oracle {
        #[arg(required = true, num_args = 1..)]
        case: Vec<String>,
    },
    /// Run every case of a corpus file (the bundled corpus by default).
    Verify { path: Option<PathBuf> },
}

fn settings(g: &GlobalArgs) -> Result<Settings> {
    let curated = g.curated_table.as_deref().map(CuratedTable::load).transpose()?;
    Ok(Settings {
        seed: g.seed,
        curated,
        jobs: g.jobs,
        budget: g.budget,
        delta_base: DeltaBase::parse(&g.delta_base)?,
        timing: !g.no_timing,
    })
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let s = settings(&cli.global)?;
    let json = cli.global.json;
    match &cli.command {
        Command::Field { d } => output::field(&s, *d, json),
        Command::Algebra { d, spec } => output::algebra(&s, *d, spec, json),
        Command::Catalog { d } => output::catalog(&s, *d, json),
        Command::Classno { case } => output::case(&s, &case.join(" "), output::CaseView::Classno, json),
        Command::Fibers { case } => output::case(&s, &case.join(" "), output::CaseView::Fibers, json),
        Command::Oracle { case } => output::case(&s, &case.join(" "), output::CaseView::Oracle, json),
        Command::Verify { path } => {
            let (name, text) = match path {
                Some(p) => (p.display().to_string(), std::fs::read_to_string(p)?),
                None => ("default".to_string(), DEFAULT_CORPUS.to_string()),
            };
            let cases = corpus::parse_corpus(&text).map_err(|e| match e {
                Error::Parse { line, column, msg } => Error::InvalidInput(format!("{name}:{line}:{column}: {msg}")),
                other => other,
            })?;
            let outcomes = run::run_corpus(&cases, &s);
            output::verify(&s, &name, &outcomes, json);
            Ok(exit_code(&outcomes))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if run::Status::of_error(&e) == run::Status::Fail { 1 } else { 2 })
        }
    }
}
