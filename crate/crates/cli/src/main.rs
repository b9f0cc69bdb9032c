//! `powergen`: coefficients, zeros, verification reports and figure data for
//! the polynomials generated by `(1 + B(z)t + A(z)t^3)^(-alpha)`.
//!
//! Exit status is 0 when every requested check passes and every solve
//! converges, 1 when a check fails or a solve does not converge, and 2 for
//! invalid input.

mod commands;
mod config;
mod output;

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{Format, Params};

#[derive(Parser)]
#[command(name = "powergen", version, about = "Polynomials generated by (1 + B(z)t + A(z)t^3)^(-alpha)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of P_m, or of H_m when --A or --B is given
    Coeffs(Params),
    /// Real zeros of P_m for one order or a range of orders
    Roots(Params),
    /// Empirical zero distribution against the limiting law
    Density(Params),
    /// Numerical checks of the integral representation and its consequences
    Verify(Params),
    /// Zeros of H_m mapped through B^3/A
    Curve(Params),
    /// Write fig1.csv (zeros by order) and fig2.csv (limiting density)
    Figures(Params),
}

/// `POWERGEN_THREADS` caps the worker pool; unset or unparsable leaves the default.
fn configure_threads() {
    if let Some(n) = std::env::var("POWERGEN_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    // figures writes its files under --output and prints only a summary
    let figures = matches!(cli.command, Command::Figures(_));
    let (params, run): (Params, fn(&Params) -> Result<commands::Report>) = match cli.command {
        Command::Coeffs(p) => (p, commands::coeffs),
        Command::Roots(p) => (p, commands::roots),
        Command::Density(p) => (p, commands::density),
        Command::Verify(p) => (p, commands::verify),
        Command::Curve(p) => (p, commands::curve),
        Command::Figures(p) => (p, commands::figures),
    };
    let params = params.resolve()?;
    let report = run(&params)?;
    let text = commands::render(&report, params.format() == Format::Csv)?;
    match (&params.output, figures) {
        (Some(path), false) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        _ => print!("{text}"),
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
