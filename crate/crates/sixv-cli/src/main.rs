use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sixv_cli::campaign::run_campaign;
use sixv_cli::config::CampaignConfig;
use sixv_cli::raw::read_raw;
use sixv_cli::render::render_svg;
use sixv_cli::stats::{edge_csv, edge_stats, height_csv, height_variance, holes_csv};
use sixv_cli::verify::{run_suite, verify_csv, Suite};
use sixv_cli::{CliError, Result};

#[derive(Parser)]
#[command(name = "sixv", about = "Stochastic six-vertex model: sampling, statistics, verification, rendering")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Edge,
    Holes,
    HeightVariance,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a sampling campaign.
    Sample {
        /// key=value configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides, e.g. `--set N=50 --set seed=3`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Statistics from a raw sample file, written as CSV.
    Stats {
        raw: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Columns for holes mode.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite: identities, operators, sampler-exact, asymptotics.
    Verify {
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render one sample of a raw file as SVG.
    Render {
        raw: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Mark holes in the first K columns.
        #[arg(long, value_name = "K")]
        holes: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Sample { config, overrides } => {
            let mut c = match config {
                Some(p) => CampaignConfig::parse(&std::fs::read_to_string(p)?)?,
                None => CampaignConfig::default(),
            };
            for o in &overrides {
                c.set_pair(o)?;
            }
            let s = run_campaign(&c)?;
            println!("{}", s.line());
            Ok(true)
        }
        Cmd::Stats { raw, mode, k, out } => {
            let file = read_raw(&std::fs::read_to_string(raw)?)?;
            let body = match mode {
                Mode::Edge => {
                    let e = edge_stats(&file.meta, &file.samples)?;
                    eprintln!("KS distance vs standard normal: {:.4}", e.ks);
                    edge_csv(&e)
                }
                Mode::Holes => holes_csv(&file.samples, k)?,
                Mode::HeightVariance => height_csv(&height_variance(&file.samples)?),
            };
            emit(out, &body)?;
            Ok(true)
        }
        Cmd::Verify { suite, out } => {
            let s: Suite = suite.parse()?;
            let checks = run_suite(s)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            emit(out, &verify_csv(&suite, &checks))?;
            eprintln!("{suite}: {} checks, {failed} failed", checks.len());
            Ok(failed == 0)
        }
        Cmd::Render { raw, index, holes, out } => {
            let file = read_raw(&std::fs::read_to_string(raw)?)?;
            let (_, w) = file.samples.get(index).ok_or_else(|| {
                CliError::Usage(format!("index {index} out of range (file has {} samples)", file.samples.len()))
            })?;
            emit(out, &render_svg(w, holes)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
