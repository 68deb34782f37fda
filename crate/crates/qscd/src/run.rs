//! End-to-end runs: dataset, training, evaluation and artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qscd_core::codec::{gen_complex_states, state_to_image, GenMode};
use qscd_core::letters::{letters, LETTER_COLS, LETTER_ROWS};
use qscd_core::training::{evaluate, train_with, IterationRecord, TrainHooks, TrainingHistory};
use qscd_core::{CompressionChannel, MeshNetwork, MetricReport, StateVector};
use sha2::{Digest, Sha256};

use crate::artifacts;
use crate::dataset::{mode_token, Dataset, Encoded, ImageSet, StateSet};
use crate::error::{Result, RunError};
use crate::netfile;
use crate::parallel::RayonExecutor;
use crate::spec::{DatasetSource, ExperimentSpec};

pub const MANIFEST: &str = "manifest.txt";

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub threads: Option<usize>,
    /// Replaces the spec's `output_dir`.
    pub output_dir: Option<PathBuf>,
    pub quiet: bool,
}

pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub encoder: MeshNetwork,
    pub decoder: MeshNetwork,
    pub history: TrainingHistory,
    pub report: MetricReport,
}

pub fn letters_dataset() -> ImageSet {
    ImageSet {
        rows: LETTER_ROWS,
        cols: LETTER_COLS,
        images: letters(),
    }
}

pub fn complex_dataset(n_modes: usize, count: usize, mode: GenMode, seed: u64) -> Result<StateSet> {
    Ok(StateSet {
        n_modes,
        seed: seed.to_string(),
        mode: mode_token(mode),
        states: gen_complex_states(count, n_modes, mode, seed)?,
    })
}

pub fn load_dataset(spec: &ExperimentSpec) -> Result<Dataset> {
    match &spec.dataset {
        DatasetSource::Letters => Ok(Dataset::Images(letters_dataset())),
        DatasetSource::ImageCsv(p) | DatasetSource::ComplexCsv(p) => {
            if !p.exists() {
                return Err(RunError::Data(format!("dataset file {} does not exist", p.display())));
            }
            let ds = Dataset::load(p)?;
            let expect_images = matches!(spec.dataset, DatasetSource::ImageCsv(_));
            if expect_images != matches!(ds, Dataset::Images(_)) {
                return Err(RunError::Data(format!(
                    "{} does not hold the dataset kind the spec names",
                    p.display()
                )));
            }
            Ok(ds)
        }
        DatasetSource::ComplexGen { n_modes, count, mode } => Ok(Dataset::States(complex_dataset(
            *n_modes,
            *count,
            *mode,
            spec.training.seed,
        )?)),
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(RunError::io(path))
}

/// Reconstructions in the same CSV layout as the input dataset.
pub fn reconstructions_csv(ds: &Dataset, enc: &Encoded, outputs: &[StateVector]) -> Result<String> {
    match ds {
        Dataset::Images(set) => {
            let images = outputs
                .iter()
                .zip(&enc.sigmas)
                .enumerate()
                .map(|(id, (o, &sigma))| {
                    let mut img = state_to_image(&o.moduli(), sigma, (set.rows, set.cols))?;
                    img.id = id;
                    Ok(img)
                })
                .collect::<Result<_>>()?;
            Ok(ImageSet {
                rows: set.rows,
                cols: set.cols,
                images,
            }
            .render_clipped())
        }
        Dataset::States(set) => Ok(StateSet {
            n_modes: set.n_modes,
            seed: set.seed.clone(),
            mode: "reconstruction".into(),
            states: outputs.to_vec(),
        }
        .render()),
    }
}

fn manifest(spec: &ExperimentSpec, spec_text: &str) -> String {
    let digest = Sha256::digest(spec_text.as_bytes());
    let hash: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!(
        "# qscd run manifest; run it again with `qscd run {MANIFEST}`\n\
         # code_version = {}\n\
         # spec_sha256 = {hash}\n\
         # seed = {}\n\
         # dataset = {}\n{}",
        env!("CARGO_PKG_VERSION"),
        spec.training.seed,
        spec.dataset_label(),
        spec.render()
    )
}

pub fn run_spec_file(path: &Path, opts: &RunOptions) -> Result<RunOutcome> {
    let (spec, text) = ExperimentSpec::from_file(path)?;
    run_spec(&spec, &text, opts)
}

pub fn run_spec(spec: &ExperimentSpec, spec_text: &str, opts: &RunOptions) -> Result<RunOutcome> {
    let mut spec = spec.clone();
    if let Some(dir) = &opts.output_dir {
        spec.output_dir = dir.clone();
    }
    let ds = load_dataset(&spec)?;
    let encoded = ds.encode()?;
    let n_modes = encoded.states[0].dim();
    spec.training.validate(n_modes)?;

    let out = spec.output_dir.clone();
    fs::create_dir_all(&out).map_err(RunError::io(&out))?;

    let exec = RayonExecutor::new(opts.threads)
        .map_err(|e| RunError::Config(format!("cannot start worker pool: {e}")))?;
    let started = Instant::now();
    let clock = move || started.elapsed().as_secs_f64() * 1e3;
    let total = spec.training.iterations;
    let every = (total / 10).max(1);
    let quiet = opts.quiet;
    let mut progress = |r: &IterationRecord| {
        if !quiet && (r.iter.is_multiple_of(every) || r.iter == total) {
            eprintln!("[{}] iter {}/{} loss {:.6e} loss_inv {:.6e}", spec.name, r.iter, total, r.loss, r.loss_inv);
        }
    };
    let hooks = TrainHooks {
        executor: &exec,
        clock_ms: spec.record_wall_time.then_some(&clock as &dyn Fn() -> f64),
        on_iteration: Some(&mut progress),
    };
    let (encoder, decoder, history) = train_with(&spec.training, &encoded.states, &encoded.states, hooks)?;

    let ch = CompressionChannel::new(n_modes, spec.training.d)?;
    let (outputs, report) = evaluate(&encoder, &decoder, &ch, &encoded.states, &encoded.states, encoded.support)?;

    netfile::save(&out.join("encoder.net"), &encoder)?;
    netfile::save(&out.join("decoder.net"), &decoder)?;
    write(&out.join("history.csv"), &artifacts::history_csv(&history))?;
    write(&out.join("metrics.json"), &artifacts::metrics_json(&report))?;
    write(&out.join("reconstructions.csv"), &reconstructions_csv(&ds, &encoded, &outputs)?)?;
    write(&out.join(MANIFEST), &manifest(&spec, spec_text))?;
    if spec.emit_plots_data {
        let plots = out.join("plots");
        fs::create_dir_all(&plots).map_err(RunError::io(&plots))?;
        write(&plots.join("loss_curve.csv"), &artifacts::loss_curve_csv(&history))?;
        write(&plots.join("param_hist.csv"), &artifacts::param_hist_csv(&encoder, &decoder))?;
    }
    Ok(RunOutcome {
        output_dir: out,
        encoder,
        decoder,
        history,
        report,
    })
}

/// Inference with stored meshes; targets are the inputs.
pub fn eval_files(enc: &Path, dec: &Path, data: &Path, d: usize) -> Result<MetricReport> {
    let encoder = netfile::load(enc)?;
    let decoder = netfile::load(dec)?;
    let ds = Dataset::load(data)?;
    let encoded = ds.encode()?;
    let n = encoded.states[0].dim();
    for (path, net) in [(enc, &encoder), (dec, &decoder)] {
        if net.n_modes() != n {
            return Err(RunError::Data(format!(
                "{} has {} modes but the dataset needs {n}",
                path.display(),
                net.n_modes()
            )));
        }
    }
    let ch = CompressionChannel::new(n, d).map_err(|e| RunError::Config(e.to_string()))?;
    let (_, report) = evaluate(&encoder, &decoder, &ch, &encoded.states, &encoded.states, encoded.support)?;
    Ok(report)
}
