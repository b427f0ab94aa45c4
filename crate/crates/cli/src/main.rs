//! `netloc` — facility-location mechanisms on metric networks.
//!
//! Subcommands: `run`, `verify-sp`, `lowerbound`, `table`,
//! `gsp-circle`. Reports go to stdout as JSON (the table is plain
//! text); diagnostics go to stderr. The `NETLOC_THREADS` environment
//! variable caps worker parallelism.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use netloc::mechanisms::MechanismId;
use netloc::rational::parse_rational;
use netloc::Error;
use netloc_cli::commands::{cmd_gsp_circle, cmd_lowerbound, cmd_run, cmd_verify_sp, CmdOutput};
use netloc_cli::instance::Instance;
use netloc_cli::table::{render_table, run_table};

#[derive(Parser)]
#[command(name = "netloc", about = "Facility-location mechanisms on metric networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mechanism on an instance file.
    Run {
        #[arg(long)]
        instance: PathBuf,
        /// random-dictator | lrm | rc | hybrid | tree-median |
        /// dictator[:i] | tree-center-lottery
        #[arg(long)]
        mechanism: String,
        /// Sample one outcome with this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Grid step for general-graph optima, e.g. "1/1000" (default:
        /// longest edge / 1000).
        #[arg(long)]
        resolution: Option<String>,
    },
    /// Search for profitable deviations (exit 1 when one is found).
    VerifySp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        mechanism: String,
        /// Deviation grid step, e.g. "1/1000".
        #[arg(long)]
        resolution: String,
        /// Coalition size bound; 1 audits single agents.
        #[arg(long, default_value_t = 1)]
        coalition: usize,
        /// Cap on mechanism evaluations for coalition searches.
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
    },
    /// Run the recursive-tree chain and report the per-level trace.
    Lowerbound {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mechanism: String,
        /// Move agents one at a time and log per-move gains.
        #[arg(long, default_value_t = false)]
        one_by_one: bool,
        /// Derive m and k from n (largest usable multiple of 2*m^k).
        #[arg(long, default_value_t = false)]
        auto: bool,
    },
    /// Empirical summary table of the proven bounds.
    Table {
        #[arg(long, default_value = "table1")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit JSON rows instead of the text table.
        #[arg(long, default_value_t = false)]
        json: bool,
    },
    /// Find a witness for the circle inequality between two profiles.
    GspCircle {
        #[arg(long)]
        instance: PathBuf,
        /// File holding the deviation profile (JSON array of points).
        #[arg(long)]
        deviation: PathBuf,
    },
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(CmdOutput { exit, report }) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("valid JSON"));
            ExitCode::from(exit as u8)
        }
        Err(TopError::Text { exit, text }) => {
            print!("{text}");
            ExitCode::from(exit as u8)
        }
        Err(TopError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(netloc_cli::exit_code_for(&e) as u8)
        }
    }
}

enum TopError {
    Domain(Error),
    /// Non-JSON output path (the text table).
    Text {
        exit: i32,
        text: String,
    },
}

impl From<Error> for TopError {
    fn from(e: Error) -> Self {
        TopError::Domain(e)
    }
}

fn dispatch(cli: Cli) -> Result<CmdOutput, TopError> {
    match cli.command {
        Command::Run { instance, mechanism, seed, resolution } => {
            let inst = Instance::load(&instance)?;
            let mech: MechanismId = mechanism.parse()?;
            let res = resolution.as_deref().map(parse_rational).transpose()?;
            Ok(cmd_run(&inst, &mech, seed, res.as_ref())?)
        }
        Command::VerifySp { instance, mechanism, resolution, coalition, budget } => {
            let inst = Instance::load(&instance)?;
            let mech: MechanismId = mechanism.parse()?;
            let res = parse_rational(&resolution)?;
            Ok(cmd_verify_sp(&inst, &mech, &res, coalition, budget)?)
        }
        Command::Lowerbound { m, k, n, mechanism, one_by_one, auto } => {
            let mech: MechanismId = mechanism.parse()?;
            let (m, k, n) = if auto {
                netloc::lowerbound::auto_params(n)?
            } else {
                let m = m.ok_or_else(|| {
                    Error::InvalidParameter("--m is required without --auto".into())
                })?;
                let k = k.ok_or_else(|| {
                    Error::InvalidParameter("--k is required without --auto".into())
                })?;
                (m, k, n)
            };
            Ok(cmd_lowerbound(m, k, n, &mech, one_by_one)?)
        }
        Command::Table { suite, trials, max_n, seed, json } => {
            if suite != "table1" {
                return Err(Error::InvalidParameter(format!("unknown suite {suite:?}")).into());
            }
            let rows = run_table(trials, max_n, seed)?;
            let all_pass = rows.iter().all(|r| r.pass);
            let exit = if all_pass { 0 } else { 1 };
            if json {
                let report = serde_json::Value::Array(rows.iter().map(|r| r.to_json()).collect());
                Ok(CmdOutput { exit, report })
            } else {
                Err(TopError::Text { exit, text: render_table(&rows) })
            }
        }
        Command::GspCircle { instance, deviation } => {
            let inst = Instance::load(&instance)?;
            let text = std::fs::read_to_string(&deviation).map_err(|e| {
                Error::Parse(format!("cannot read {}: {e}", deviation.display()))
            })?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
            Ok(cmd_gsp_circle(&inst, &value)?)
        }
    }
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("NETLOC_THREADS") {
        if let Ok(threads) = raw.trim().parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}
