use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use momentkit::cli::{run_command, Command, RunOptions, EXIT_INPUT_ERROR};
use momentkit::moment::Method;
use momentkit::problem::parse_problem;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    /// Betti numbers and Lie kernel dimensions
    Cohomology,
    /// Explicit Lie kernel bases
    Kernel,
    /// Validate the action and the multisymplectic form
    CheckAction,
    /// Invariant closed forms
    Invariants,
    /// Existence and uniqueness diagnostics
    Diagnose,
    /// Construct a weak moment map and verify it
    Construct,
    /// Equivariance cocycle and equivariantization
    Equivariance,
    /// All of the above
    Report,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Poincare,
    Exactness,
    Brackets,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Machine,
}

/// Lie algebra cohomology and weak homotopy moment maps for multisymplectic actions on R^n.
#[derive(Parser, Debug)]
#[command(name = "momentkit", version)]
struct Args {
    command: Cmd,
    /// Problem file
    file: PathBuf,
    /// Degrees k to process, e.g. `1,2`
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Coefficient-degree truncation for closed forms
    #[arg(long)]
    max_poly_degree: Option<u32>,
    /// Construction method
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.file.display());
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}: {e}", args.file.display());
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let cmd = match args.command {
        Cmd::Cohomology => Command::Cohomology,
        Cmd::Kernel => Command::Kernel,
        Cmd::CheckAction => Command::CheckAction,
        Cmd::Invariants => Command::Invariants,
        Cmd::Diagnose => Command::Diagnose,
        Cmd::Construct => Command::Construct,
        Cmd::Equivariance => Command::Equivariance,
        Cmd::Report => Command::Report,
    };
    let opts = RunOptions {
        degrees: args.k,
        max_poly_degree: args.max_poly_degree,
        method: args.method.map(|m| match m {
            MethodArg::Poincare => Method::Poincare,
            MethodArg::Exactness => Method::Exactness,
            MethodArg::Brackets => Method::Brackets,
        }),
    };
    let out = run_command(cmd, &problem, &opts);
    match args.format {
        Format::Text => print!("{}", out.text),
        Format::Machine => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
    }
    ExitCode::from(out.exit as u8)
}
