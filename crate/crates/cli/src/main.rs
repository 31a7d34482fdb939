use std::path::PathBuf;
use std::process::ExitCode;

use amen_cli::{families, load, run, Overrides};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "amen", version, about = "Certify amenability defects of transformation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Structured,
    Tabular,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites of a scenario file and emit a report.
    Run {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "structured")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the number of net stages.
        #[arg(long)]
        stages: Option<usize>,
        /// Override the group radius of radius-based windows.
        #[arg(long)]
        window_radius: Option<usize>,
    },
    /// Print the supported group, space, action, net and suite names.
    ListFamilies,
    /// Parse and build a scenario without running it.
    Validate { scenario: PathBuf },
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("amen: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> amen_cli::Result<bool> {
    match command {
        Command::Run { scenario, format, out, stages, window_radius } => {
            let mut s = load(&scenario)?;
            Overrides { stages, window_radius }.apply(&mut s);
            let report = run(&s)?;
            let text = match format {
                Format::Structured => report.to_json(),
                Format::Tabular => report.to_tsv(),
            };
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| {
                    amen_cli::Error::Configuration(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{text}"),
            }
            Ok(report.passed())
        }
        Command::ListFamilies => {
            print!("{}", families());
            Ok(true)
        }
        Command::Validate { scenario } => {
            let s = load(&scenario)?;
            s.build()?;
            println!("{}: ok", scenario.display());
            Ok(true)
        }
    }
}
