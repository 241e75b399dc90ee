use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kowtype::catalog::SystemId;
use kowtype_cli::commands::{self, select_targets};
use kowtype_cli::{CliError, Overrides, RunConfig, Target};

#[derive(Parser)]
#[command(name = "kowtype", version, about = "Simulate and verify Kowalevski-type integrable systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the systems with their parameters, integrals and measures.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Integrate one run and write trajectory and drift files.
    Simulate(RunArgs),
    /// Run verification targets and report every check.
    Verify {
        #[arg(value_enum)]
        target: Option<VerifyArg>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Separability,
    Theorem,
    Measure,
    Chart,
    Integrals,
    Quadrature,
    All,
}

impl VerifyArg {
    fn targets(self) -> Vec<Target> {
        match self {
            VerifyArg::Separability => vec![Target::Separability],
            VerifyArg::Theorem => vec![Target::Theorem],
            VerifyArg::Measure => vec![Target::Measure],
            VerifyArg::Chart => vec![Target::Chart],
            VerifyArg::Integrals => vec![Target::Integrals],
            VerifyArg::Quadrature => vec![Target::Quadrature],
            VerifyArg::All => Target::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "ID", value_parser = parse_system)]
    system: Option<SystemId>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long = "t-end", value_name = "T")]
    t_end: Option<f64>,
    /// Relative tolerance; the absolute tolerance is set to 1e-2 times it.
    #[arg(long, value_name = "R")]
    tol: Option<f64>,
    #[arg(long = "sample-dt", value_name = "D")]
    sample_dt: Option<f64>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn parse_system(s: &str) -> Result<SystemId, String> {
    s.parse().map_err(|e: kowtype::catalog::CatalogError| e.to_string())
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        base.resolve(&Overrides {
            system: self.system,
            seed: self.seed,
            t_end: self.t_end,
            tol: self.tol,
            sample_dt: self.sample_dt,
            out: self.out.clone(),
        })
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Catalog { json } => {
            print!("{}", commands::catalog(json)?);
            Ok(kowtype_cli::EXIT_OK)
        }
        Command::Simulate(args) => {
            let cfg = args.config()?;
            let outcome = commands::simulate(&cfg)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&outcome)?);
            } else {
                print!("{}", outcome.render_text());
            }
            Ok(outcome.exit_code)
        }
        Command::Verify { target, run } => {
            let cfg = run.config()?;
            let targets = select_targets(target.map(VerifyArg::targets), &cfg);
            let output = commands::verify(&targets, &cfg)?;
            if run.json {
                println!("{}", serde_json::to_string_pretty(&output)?);
            } else {
                print!("{}", output.report.render_text());
            }
            Ok(output.report.exit_code)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { kowtype_cli::EXIT_CONFIG } else { kowtype_cli::EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
