use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spm::cli::{self, BFileSource, OutputFormat, RunConfig};
use spm::spcounts::Family;
use spm::verify::{run_verify, VerifyConfig};
use spm::Result;

#[derive(Parser)]
#[command(
    name = "spm",
    version,
    about = "Counts of series-parallel matroids by size and rank"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a count table.
    Table(TableArgs),
    /// Run the identity suites.
    Verify {
        #[arg(long)]
        order: Option<usize>,
    },
    /// Enumerate matroids by brute force.
    Oracle {
        #[arg(long)]
        max_n: Option<usize>,
        /// Diff against the formula tables.
        #[arg(long)]
        compare: bool,
        /// Write the catalog, one matroid per line.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Check a table against an OEIS b-file.
    Oeis {
        #[arg(long)]
        id: String,
        #[arg(long, conflicts_with = "fetch")]
        bfile: Option<PathBuf>,
        /// Download the b-file into the fixtures directory first.
        #[arg(long)]
        fetch: bool,
    },
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    max_n: usize,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation order; `max_n` may not exceed it.
    #[arg(long)]
    order: Option<usize>,
}

enum Outcome {
    Pass,
    Fail,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    let mut cfg = RunConfig::from_env()?;
    let outcome = match cli.command {
        Command::Table(args) => {
            if let Some(order) = args.order {
                cfg.truncation_order = order;
            }
            cfg.validate()?;
            let format = args.format.unwrap_or(cfg.output_format);
            let text = cli::run_table(&cfg, args.family, args.max_n, format)?;
            emit(&text, args.out.as_ref())?;
            Outcome::Pass
        }
        Command::Verify { order } => {
            if let Some(order) = order {
                cfg.truncation_order = order;
            }
            let report = run_verify(&VerifyConfig {
                order: cfg.truncation_order,
            });
            println!("{report}");
            if report.passed() {
                Outcome::Pass
            } else {
                Outcome::Fail
            }
        }
        Command::Oracle {
            max_n,
            compare,
            dump,
        } => {
            if let Some(max_n) = max_n {
                cfg.oracle_max_n = max_n;
            }
            cfg.validate()?;
            let report = cli::run_oracle(cfg.oracle_max_n, compare)?;
            if let Some(path) = dump {
                let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
                report.catalog.dump(&mut file)?;
                file.flush()?;
            }
            println!("{report}");
            if report.passed() {
                Outcome::Pass
            } else {
                Outcome::Fail
            }
        }
        Command::Oeis { id, bfile, fetch } => {
            let source = match (bfile, fetch) {
                (Some(path), _) => BFileSource::Path(path),
                (None, true) => BFileSource::Fetch,
                (None, false) => BFileSource::Fixture,
            };
            let report = cli::run_oeis_compare(&cfg, &id, &source)?;
            println!("{report}");
            if report.passed() {
                Outcome::Pass
            } else {
                Outcome::Fail
            }
        }
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
