use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use pbridge::harness::{exit_code, Command, ExperimentConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Integrate,
    ReduceCompare,
    BehaviorFit,
    SeriesCheck,
}

#[derive(Debug, Parser)]
#[command(name = "pbridge", version, about = "Numerical experiments on the PVI to PIII reduction near s = 0")]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_dir` of the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the relative integrator tolerance.
    #[arg(long, allow_negative_numbers = true)]
    tol_override: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = match cli.command {
        Cmd::Integrate => Command::Integrate,
        Cmd::ReduceCompare => Command::ReduceCompare,
        Cmd::BehaviorFit => Command::BehaviorFit,
        Cmd::SeriesCheck => Command::SeriesCheck,
    };
    let outcome = ExperimentConfig::load(&cli.config).and_then(|mut cfg| {
        if let Some(out) = cli.out {
            cfg.output_dir = out;
        }
        if let Some(r) = cli.tol_override {
            cfg.tolerances.rel = r;
            cfg.validate()?;
        }
        let report = command.run(&cfg)?;
        let (csv, json) = report.write(&cfg.output_dir)?;
        for c in &report.checks {
            println!("{} {}: {:.3e} (threshold {:.3e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
        }
        for n in &report.notes {
            println!("note: {n}");
        }
        println!("wrote {} and {}", csv.display(), json.display());
        Ok(report)
    });
    if let Err(e) = &outcome {
        eprintln!("pbridge: {e}");
    }
    ExitCode::from(exit_code(&outcome) as u8)
}
