use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use epdiff_cli::commands::{cmd_greens_table, cmd_run, cmd_verify};
use epdiff_cli::verify::Suite;

/// Pseudospectral shallow-water and EPDiff solver.
#[derive(Parser)]
#[command(name = "epdiff", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the run described by a key = value configuration file.
    Run { config: PathBuf },
    /// Run an invariant suite: operators, greens, identities or conservation.
    Verify { suite: Suite },
    /// Print the closed-form Green's kernel as `r,G` CSV.
    GreensTable {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        nu: f64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        dim: u8,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let outcome = match cli.command {
        Command::Run { config } => cmd_run(&config, &mut stdout).map(|_| true),
        Command::Verify { suite } => cmd_verify(suite, &mut stdout),
        Command::GreensTable {
            alpha,
            nu,
            dim,
            rmax,
            samples,
        } => cmd_greens_table(alpha, nu, dim.into(), rmax, samples, &mut stdout).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
