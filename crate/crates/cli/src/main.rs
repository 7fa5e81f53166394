use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use tcm_core::commands::{cmd_fig1, cmd_fig2, cmd_sweep, cmd_verify, VerifyOptions};
use tcm_core::config::{parse_config, RunConfig};
use tcm_core::hamiltonian::build_hamiltonian;
use tcm_core::model::Family;
use tcm_core::Execution;

#[derive(Parser)]
#[command(name = "tcm-entangle", version, about = "Atom-atom entanglement in a two-mode two-photon cavity")]
struct Cli {
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the Hamiltonian for the first configured epsilon as CSV.
    #[arg(long, value_name = "FILE")]
    dump_hamiltonian: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Psi-family datasets (cos a|eg> + sin a|ge>).
    Fig1 {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Phi-family datasets (cos a|ee> + sin a|gg>) and death windows.
    Fig2 {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Analytic-vs-numeric and invariant checks; exits non-zero on failure.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Ad-hoc grid of angles and dipole ratios.
    Sweep {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Comma-separated angles, e.g. `pi/12,pi/8`.
        #[arg(long)]
        alpha: String,
        /// Comma-separated dipole ratios.
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 20.0)]
        tmax: f64,
        #[arg(long, default_value_t = 2000)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

fn dump_hamiltonian(config: &RunConfig, path: &Path) -> Result<()> {
    let eps = config.figure_epsilons()[0].value;
    let params = config.params(eps)?;
    let h = build_hamiltonian(&params, &params.basis())?;
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    h.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn report(files: &[PathBuf]) {
    for f in files {
        println!("{}", f.display());
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Fig1 { config, common } => {
            let cfg = load_config(&config)?;
            if let Some(p) = common.dump_hamiltonian {
                dump_hamiltonian(&cfg, &p)?;
            }
            report(&cmd_fig1(&cfg, exec)?);
        }
        Command::Fig2 { config, common } => {
            let cfg = load_config(&config)?;
            if let Some(p) = common.dump_hamiltonian {
                dump_hamiltonian(&cfg, &p)?;
            }
            report(&cmd_fig2(&cfg, exec)?);
        }
        Command::Verify { config, inject_fault } => {
            let cfg = match config {
                Some(p) => load_config(&p)?,
                None => RunConfig::default(),
            };
            let rep = cmd_verify(&cfg, VerifyOptions { inject_fault }, exec)?;
            print!("{}", rep.render());
            if !rep.all_pass() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Sweep {
            family,
            alpha,
            epsilon,
            tmax,
            points,
            out,
            svg,
            common,
        } => {
            // Validation is shared with the config file route.
            let text = format!(
                "family = {}\nalpha = {alpha}\nepsilon = {epsilon}\nT_max = {tmax}\nn_points = {points}\nsvg = {svg}\n",
                family.name()
            );
            let mut cfg = parse_config(&text).context("invalid sweep arguments")?;
            cfg.output_dir = out;
            if let Some(p) = common.dump_hamiltonian {
                dump_hamiltonian(&cfg, &p)?;
            }
            report(&cmd_sweep(&cfg, exec)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
