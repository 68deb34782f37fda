use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qscd_core::codec::GenMode;

use crate::artifacts::metrics_json;
use crate::error::{Result, RunError};
use crate::run::{complex_dataset, eval_files, letters_dataset, run_spec_file, RunOptions};

#[derive(Parser, Debug)]
#[command(name = "qscd", about = "Train and evaluate two-mode gate meshes for state compression")]
pub struct Cli {
    /// Worker threads for gradient evaluation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the experiment described by a spec file.
    Run {
        spec: PathBuf,
        /// Write artifacts here instead of the spec's output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long, short)]
        quiet: bool,
    },
    /// Write a dataset CSV.
    GenData {
        #[arg(value_enum)]
        kind: DataKind,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Subspace)]
        mode: ModeArg,
        #[arg(long, default_value_t = 4)]
        d: usize,
        /// Noise amplitude for subspace mode.
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate stored meshes on a dataset and print the metrics JSON.
    Eval {
        #[arg(long)]
        enc: PathBuf,
        #[arg(long)]
        dec: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Version,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DataKind {
    Letters,
    Complex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Uniform,
    Subspace,
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(&path, text).map_err(RunError::io(&path)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { spec, output_dir, quiet } => {
            let opts = RunOptions {
                threads: cli.threads,
                output_dir,
                quiet,
            };
            let outcome = run_spec_file(&spec, &opts)?;
            let r = &outcome.report;
            println!(
                "{}: similarity {:.3}% mean fidelity {:.6} loss {:.6e}",
                outcome.output_dir.display(),
                r.similarity,
                r.mean_fidelity,
                r.loss
            );
            Ok(())
        }
        Command::GenData { kind, n, m, mode, d, eps, seed, out } => {
            let text = match kind {
                DataKind::Letters => letters_dataset().render(),
                DataKind::Complex => {
                    let mode = match mode {
                        ModeArg::Uniform => GenMode::UniformRandom,
                        ModeArg::Subspace => GenMode::SubspaceSupported { d, noise: eps },
                    };
                    complex_dataset(n, m, mode, seed)
                        .map_err(|e| RunError::Config(e.to_string()))?
                        .render()
                }
            };
            emit(out, &text)
        }
        Command::Eval { enc, dec, data, d, out } => {
            let report = eval_files(&enc, &dec, &data, d)?;
            emit(out, &metrics_json(&report))
        }
        Command::Version => {
            println!("qscd {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}
