use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::CommandResult;

#[derive(Parser)]
#[command(name = "torsion")]
#[command(about = "Torsion of SU(3)- and G2-structures on nilmanifolds, circle bundles and intervals")]
#[command(version)]
struct Cli {
    /// Print the structured JSON report instead of the summary
    #[arg(long, global = true)]
    json: bool,

    /// Also write the JSON report to this path
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a structure file and check the structure it defines
    Validate { input: String },

    /// SU(3) torsion components and classes
    #[command(name = "su3-report")]
    Su3Report { input: String },

    /// G2 torsion of the structure, or of the product with an interval for 6-dimensional inputs
    #[command(name = "g2-report")]
    G2Report { input: String },

    /// Compare the G2 torsion of a product or circle bundle with the SU(3) torsion of its base
    Correspondence {
        input: String,
        /// File with the curvature form (`rho = ...` or a bare 2-form)
        #[arg(long)]
        rho: Option<PathBuf>,
    },

    /// Integrate the half-flat evolution equations
    Flow {
        input: String,
        #[arg(long)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        dt: f64,
        /// Write the trajectory as CSV
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },

    /// Run the full acceptance suite
    #[command(name = "verify-paper")]
    VerifyPaper,

    /// List the built-in examples
    #[command(name = "list-examples")]
    ListExamples,
}

fn dispatch(cli: &Cli) -> CommandResult {
    match &cli.command {
        Command::Validate { input } => commands::validate(input),
        Command::Su3Report { input } => commands::su3_report(input),
        Command::G2Report { input } => commands::g2_report(input),
        Command::Correspondence { input, rho } => commands::correspondence(input, rho.as_deref()),
        Command::Flow { input, t0, t1, dt, csv } => commands::flow(input, *t0, *t1, *dt, csv.as_deref()),
        Command::VerifyPaper => commands::verify_all(),
        Command::ListExamples => commands::list_examples(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut result = dispatch(&cli);
    if let (Some(path), Some(report)) = (&cli.report, &result.report) {
        match std::fs::write(path, torsion_core::report::render(report)) {
            Ok(()) => result.report_path = Some(path.clone()),
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }
    match (&result.report, cli.json) {
        (Some(report), true) => print!("{}", torsion_core::report::render(report)),
        _ => print!("{}", result.summary),
    }
    if let Some(err) = &result.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(result.code)
}
