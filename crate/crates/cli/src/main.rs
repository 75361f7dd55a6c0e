use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fitshift_cli::session::{parse_precision, BatchOutcome, Options, Session};
use fitshift_cli::CliError;

#[derive(Parser)]
#[command(name = "fitshift", version, about = "Fitting ideals and their shifts over truncated Iwasawa group rings")]
struct Cli {
    /// Emit one JSON document per command instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Override the p-adic and T-adic precision, as k,N.
    #[arg(long, global = true, value_name = "k,N")]
    precision: Option<String>,
    /// Accept denominators that cannot be certified as non-zero-divisors.
    #[arg(long, global = true)]
    assume_nzd: bool,
    /// Worker threads for minor enumeration.
    #[arg(long, global = true, value_name = "n")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a session file, one command per line.
    Run { file: PathBuf },
    /// Run commands given on the command line, in order.
    Exec {
        #[arg(required = true)]
        commands: Vec<String>,
    },
    /// Check every explicit identity of the regression suite.
    VerifyPaper,
    /// Compare both routes to the Euler factor for a decomposition data file.
    Euler { file: PathBuf },
}

fn emit(outcome: &BatchOutcome, json: bool) {
    for r in &outcome.reports {
        if json {
            println!("{}", r.to_json());
        } else {
            for line in &r.text {
                println!("{line}");
            }
        }
    }
    if let Some(e) = &outcome.error {
        if json {
            println!("{}", serde_json::json!({ "verdict": "error", "error": e.to_string() }));
        }
        eprintln!("error: {e}");
    }
}

fn run(cli: Cli) -> Result<BatchOutcome, CliError> {
    let precision = cli.precision.as_deref().map(parse_precision).transpose()?;
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot set up {n} workers: {e}")))?;
    }
    let mut opts = Options { precision, assume_nzd: cli.assume_nzd, base_dir: None };
    let outcome = match cli.command {
        Command::Run { file } => {
            let text = std::fs::read_to_string(&file).map_err(|source| CliError::Io { path: file.display().to_string(), source })?;
            opts.base_dir = file.parent().map(PathBuf::from);
            Session::new(opts).run_lines(text.lines())
        }
        Command::Exec { commands } => Session::new(opts).run_lines(commands.iter().map(String::as_str)),
        Command::VerifyPaper => Session::new(opts).run_lines(["verify-paper"]),
        Command::Euler { file } => {
            let line = format!("euler {}", file.display());
            Session::new(opts).run_lines([line.as_str()])
        }
    };
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => BatchOutcome { reports: Vec::new(), error: Some(e) },
    };
    emit(&outcome, json);
    ExitCode::from(outcome.exit_code() as u8)
}
