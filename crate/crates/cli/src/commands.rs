//! Subcommand bodies, kept separate from argument parsing so they can be
//! driven from tests.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use epdiff_core::greens::{green_scalar, GreenParams};
use epdiff_core::integrate::{run_with, suggested_dt, ConservationSummary};
use epdiff_core::OperatorParams;
use log::info;

use crate::config::load_config;
use crate::output::OutputWriter;
use crate::verify::{run_suite, Suite};

/// Runs the configuration at `path`, writing output and a conservation
/// summary to `out`.
pub fn cmd_run(path: &Path, out: &mut impl Write) -> Result<ConservationSummary> {
    let config = load_config(path).with_context(|| format!("loading {}", path.display()))?;
    info!("CFL guideline dt <= {:.3e}", suggested_dt(&config)?);
    let mut writer = OutputWriter::create(&config.output_dir)
        .with_context(|| format!("creating {}", config.output_dir.display()))?;
    let outcome = run_with(&config, &mut writer);
    // Write out whatever was produced before reporting an abort.
    let snapshots = writer.finish().context("writing run output")?;
    let summary = outcome?;

    writeln!(out, "model:            {}", config.model)?;
    writeln!(out, "steps:            {}", summary.last.step)?;
    writeln!(out, "final time:       {}", summary.last.t)?;
    writeln!(out, "snapshots:        {}", snapshots.len())?;
    writeln!(out, "output:           {}", config.output_dir.display())?;
    writeln!(
        out,
        "hamiltonian:      {:e} -> {:e} (relative drift {:.3e})",
        summary.initial.hamiltonian,
        summary.last.hamiltonian,
        summary.hamiltonian_drift()
    )?;
    if let Some(drift) = summary.mass_drift() {
        writeln!(out, "mass:             relative drift {drift:.3e}")?;
    }
    writeln!(
        out,
        "momentum:         max absolute drift {:.3e}",
        summary.momentum_drift()
    )?;
    Ok(summary)
}

/// Runs one suite, printing a line per check. Returns whether all passed.
pub fn cmd_verify(suite: Suite, out: &mut impl Write) -> Result<bool> {
    let checks = run_suite(suite).with_context(|| format!("running the {suite} suite"))?;
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(out, "{suite}: {} checks, {failed} failed", checks.len())?;
    Ok(failed == 0)
}

/// Prints `r,G` for `r = rmax * i / samples`, `i = 1..=samples`.
pub fn cmd_greens_table(
    alpha: f64,
    nu: f64,
    dim: usize,
    rmax: f64,
    samples: usize,
    out: &mut impl Write,
) -> Result<()> {
    anyhow::ensure!(samples > 0, "samples must be at least 1");
    anyhow::ensure!(
        rmax.is_finite() && rmax > 0.0,
        "rmax must be positive, got {rmax}"
    );
    let gp = GreenParams::new(OperatorParams::new(alpha, nu, dim)?);
    writeln!(out, "r,G")?;
    for i in 1..=samples {
        let r = rmax * i as f64 / samples as f64;
        let g = green_scalar(r, &gp).with_context(|| format!("evaluating G at r = {r}"))?;
        writeln!(out, "{r},{g:e}")?;
    }
    Ok(())
}
