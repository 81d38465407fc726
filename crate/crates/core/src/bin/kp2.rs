use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kp2_core::experiments::{exit_code_for, run, Command, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "kp2",
    version,
    about = "Dispersion-generalised KP-II simulator and verification campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides every sampling seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a simulation and write the trajectory and checkpoints.
    Simulate(Common),
    /// Check the scaling symmetry.
    Scaling(Common),
    /// Resonance campaigns and kernel boundedness probes.
    Verify(Common),
    /// Temporal order, spatial decay and Picard contraction.
    Converge(Common),
    /// Kernel and Strichartz probes.
    Probe(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Simulate(c) => (Command::Simulate, c),
        Cmd::Scaling(c) => (Command::Scaling, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Converge(c) => (Command::Converge, c),
        Cmd::Probe(c) => (Command::Probe, c),
    };
    let result = ExperimentConfig::load(&common.config).and_then(|mut cfg| {
        if let Some(seed) = common.seed {
            cfg.probe.seed = seed;
            cfg.verify.seed = seed;
        }
        if let Some(out) = common.out {
            cfg.output_dir = out;
        }
        run(command, &cfg)
    });
    match result {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            println!(
                "{}: {}",
                command.name(),
                if outcome.passed { "pass" } else { "FAIL" }
            );
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("kp2 {}: {e}", command.name());
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
