//! `siegel`: certified height bounds for S-integral points on `X0(p)`.

mod commands;
mod config;
mod exit;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand};

use config::{FileConfig, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "siegel", version, about = "Certified height bounds for S-integral points on modular curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (default: json, or csv for compare)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Working precision in bits, within [64, 4096]
    #[arg(long, global = true, env = "SIEGEL_PRECISION_BITS")]
    precision: Option<u32>,

    /// JSON file with defaults for the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Leave the generated_at field out of JSON reports
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Height bound for X0(p) over K and S, with the chain of inequalities
    Bound(commands::BoundArgs),
    /// Index, cusps and widths of a congruence subgroup
    Cusps(commands::CuspsArgs),
    /// Precise, simplified and Sha reference bounds across a range of p
    Compare(commands::CompareArgs),
    /// Absolute logarithmic height of a rational or algebraic number
    Height(commands::HeightArgs),
    /// Classical modular polynomial Phi_p
    Modpoly(commands::ModpolyArgs),
    /// Check rational j-values against X0(p) and the height bound
    Scan(commands::ScanArgs),
}

fn run(cli: &Cli) -> anyhow::Result<output::Rendered> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let cfg = RunConfig::new(cli.precision, cli.format, cli.no_timestamp, file)?;
    match &cli.command {
        Command::Bound(a) => commands::bound(&cfg, a),
        Command::Cusps(a) => commands::cusps(&cfg, a),
        Command::Compare(a) => commands::compare(&cfg, a),
        Command::Height(a) => commands::height(&cfg, a),
        Command::Modpoly(a) => commands::modpoly(&cfg, a),
        Command::Scan(a) => commands::scan(&cfg, a),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            process::exit(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.body.as_bytes());
            let _ = stdout.flush();
            process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            process::exit(exit::code_for(&e));
        }
    }
}
