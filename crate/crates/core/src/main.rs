//! Command-line front end. Exit codes: 0 success, 1 runtime failure,
//! 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pinn_topo::config::{DataConfig, RunConfig};
use pinn_topo::error::{Error, Result};
use pinn_topo::metrics::SweepRow;
use pinn_topo::run::{self, RunContext};

#[derive(Parser)]
#[command(
    name = "pinn-topo",
    version,
    about = "Locate hidden voids and inclusions from boundary measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a case with the FEM and write its measurements and ground truth.
    GenerateData { config: PathBuf },
    /// Fit the level-set network to the initial guess for every seed.
    Pretrain { config: PathBuf },
    /// Train every seed, resuming from checkpoints, and evaluate the result.
    Train { config: PathBuf },
    /// IoU of a density raster, checkpoint or run directory against a ground truth.
    Evaluate {
        /// Density raster (.csv), checkpoint, or run directory.
        run: PathBuf,
        /// Ground-truth raster (.csv) or case file.
        truth: PathBuf,
    },
    /// Train each regularizer over a weight sweep and report the IoU of every run.
    CompareRegularizers {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "eikonal,tvd,penalization,simp")]
        regularizers: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,1,10")]
        weights: Vec<f64>,
        /// SIMP exponents.
        #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
        exponents: Vec<f64>,
        /// Number of seeds `0..n`; the configured seeds when absent.
        #[arg(long)]
        seeds: Option<u64>,
    },
}

fn log(msg: &str) {
    eprintln!("{msg}");
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenerateData { config } => {
            let cfg = DataConfig::load(&config)?;
            let case = run::generate_data(&cfg)?;
            println!("case {} written to {}", case.spec.id, cfg.output.display());
            println!("fem = {}", case.fem);
        }
        Command::Pretrain { config } => {
            let ctx = RunContext::new(&RunConfig::load(&config)?)?;
            for &seed in &ctx.config.seeds {
                let (_, report) = ctx.pretrain(seed)?;
                println!("seed {seed}: pretraining mae {:.4e}", report.final_mae);
            }
        }
        Command::Train { config } => {
            let ctx = RunContext::new(&RunConfig::load(&config)?)?;
            let mut failure = None;
            for (seed, result) in ctx.train_all(&mut log) {
                match result {
                    Ok(r) => println!("seed {seed}: iou {:.6}", r.iou),
                    Err(e) => {
                        println!("seed {seed}: failed: {e}");
                        failure.get_or_insert(e);
                    }
                }
            }
            if let Some(e) = failure {
                return Err(e);
            }
        }
        Command::Evaluate { run: path, truth } => {
            let truth = run::load_truth(&truth)?;
            for report in run::evaluate(&path, &truth)? {
                print!("{}", report.to_text());
            }
        }
        Command::CompareRegularizers {
            config,
            regularizers,
            weights,
            exponents,
            seeds,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(n) = seeds {
                if n == 0 {
                    return Err(Error::Config("--seeds must be positive".into()));
                }
                cfg.seeds = (0..n).collect();
            }
            let names: Vec<&str> = regularizers.iter().map(String::as_str).collect();
            let settings = run::sweep_settings(&names, &weights, &exponents)?;
            println!("{}", SweepRow::HEADER);
            let rows = run::compare_regularizers(&cfg, &settings, &mut log, &mut |r| println!("{}", r.to_csv_line()))?;
            for (reg, weight, best) in pinn_topo::metrics::best_per_setting(&rows) {
                eprintln!("best {reg} {weight}: iou {best:.6}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
