//! Experiment spec files: one `key = value` per line, `#` starts a comment.
//! Relative paths resolve against the spec file's directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qscd_core::codec::GenMode;
use qscd_core::training::{DecoderMode, FdScheme, GradientSource, LossKind, LossScale};
use qscd_core::TrainingConfig;

use crate::dataset::mode_token;
use crate::error::{Result, RunError};
use crate::netfile::{parse_topology, topology_name};

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSource {
    Letters,
    ImageCsv(PathBuf),
    ComplexCsv(PathBuf),
    ComplexGen { n_modes: usize, count: usize, mode: GenMode },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub dataset: DatasetSource,
    pub training: TrainingConfig,
    pub output_dir: PathBuf,
    pub emit_plots_data: bool,
    /// Off by default so repeated runs write byte-identical histories.
    pub record_wall_time: bool,
}

const KEYS: &[&str] = &[
    "name",
    "dataset",
    "dataset_path",
    "gen_n",
    "gen_m",
    "gen_mode",
    "gen_d",
    "gen_noise",
    "seed",
    "topology",
    "l_e",
    "l_d",
    "d",
    "eta",
    "iterations",
    "delta",
    "init_theta",
    "init_alpha",
    "decoder_mode",
    "loss_kind",
    "loss_scale",
    "fd_scheme",
    "gradient",
    "train_alpha",
    "freeze_encoder",
    "freeze_decoder",
    "output_dir",
    "emit_plots_data",
    "record_wall_time",
];

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn parse<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| RunError::Config(format!("`{key}`: cannot parse {v:?}"))),
        }
    }

    fn choice<T: Copy>(&mut self, key: &str, default: T, options: &[(&str, T)]) -> Result<T> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => options
                .iter()
                .find(|(name, _)| *name == v)
                .map(|(_, t)| *t)
                .ok_or_else(|| {
                    let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
                    RunError::Config(format!("`{key}`: {v:?} is not one of {}", names.join(", ")))
                }),
        }
    }
}

const DECODER_MODES: &[(&str, DecoderMode)] =
    &[("trained", DecoderMode::Trained), ("mirror_inverse", DecoderMode::MirrorInverse)];
const LOSS_KINDS: &[(&str, LossKind)] = &[
    ("reconstruction", LossKind::Reconstruction),
    ("inv_probability", LossKind::InvProbability),
];
const LOSS_SCALES: &[(&str, LossScale)] = &[
    ("half_sum", LossScale::HalfSum),
    ("sum", LossScale::Sum),
    ("mean_per_component", LossScale::MeanPerComponent),
];
const FD_SCHEMES: &[(&str, FdScheme)] =
    &[("central", FdScheme::Central), ("forward", FdScheme::Forward)];
const GRADIENTS: &[(&str, GradientSource)] = &[
    ("finite_difference", GradientSource::FiniteDifference),
    ("analytic", GradientSource::Analytic),
];

fn name_of<T: PartialEq + Copy>(options: &[(&'static str, T)], value: T) -> &'static str {
    options.iter().find(|(_, t)| *t == value).map(|(n, _)| *n).unwrap()
}

impl ExperimentSpec {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| RunError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(RunError::Config(format!("line {}: unknown key `{key}`", i + 1)));
            }
            if map.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(RunError::Config(format!("line {}: duplicate key `{key}`", i + 1)));
            }
        }
        let mut e = Entries(map);
        let defaults = TrainingConfig::default();
        let name = e.take("name").unwrap_or_else(|| "experiment".into());
        let path = |e: &mut Entries| -> Result<PathBuf> {
            let p = e
                .take("dataset_path")
                .ok_or_else(|| RunError::Config("`dataset_path` is required for file datasets".into()))?;
            Ok(base_dir.join(p))
        };
        let kind = e
            .take("dataset")
            .ok_or_else(|| RunError::Config("`dataset` is required".into()))?;
        let dataset = match kind.as_str() {
            "letters" => DatasetSource::Letters,
            "image-csv" => DatasetSource::ImageCsv(path(&mut e)?),
            "complex-csv" => DatasetSource::ComplexCsv(path(&mut e)?),
            "complex-gen" => {
                let n_modes = e.parse("gen_n", 8usize)?;
                let count = e.parse("gen_m", 50usize)?;
                let mode = match e.take("gen_mode").as_deref() {
                    None | Some("subspace") => GenMode::SubspaceSupported {
                        d: e.parse("gen_d", 4usize)?,
                        noise: e.parse("gen_noise", 0.05f64)?,
                    },
                    Some("uniform") => GenMode::UniformRandom,
                    Some(other) => {
                        return Err(RunError::Config(format!(
                            "`gen_mode`: {other:?} is not one of uniform, subspace"
                        )))
                    }
                };
                DatasetSource::ComplexGen { n_modes, count, mode }
            }
            other => {
                return Err(RunError::Config(format!(
                    "`dataset`: {other:?} is not one of letters, image-csv, complex-csv, complex-gen"
                )))
            }
        };
        let topology = match e.take("topology") {
            None => defaults.topology,
            Some(t) => parse_topology(&t)
                .ok_or_else(|| RunError::Config(format!("`topology`: {t:?} is not one of cross, order")))?,
        };
        let fd_scheme = e.choice("fd_scheme", defaults.fd_scheme, FD_SCHEMES)?;
        let training = TrainingConfig {
            topology,
            l_e: e.parse("l_e", defaults.l_e)?,
            l_d: e.parse("l_d", defaults.l_d)?,
            d: e.parse("d", defaults.d)?,
            eta: e.parse("eta", defaults.eta)?,
            iterations: e.parse("iterations", defaults.iterations)?,
            delta: e.parse("delta", fd_scheme.default_delta())?,
            init: (
                e.parse("init_theta", defaults.init.0)?,
                e.parse("init_alpha", defaults.init.1)?,
            ),
            decoder_mode: e.choice("decoder_mode", defaults.decoder_mode, DECODER_MODES)?,
            loss_kind: e.choice("loss_kind", defaults.loss_kind, LOSS_KINDS)?,
            loss_scale: e.choice("loss_scale", defaults.loss_scale, LOSS_SCALES)?,
            fd_scheme,
            gradient: e.choice("gradient", defaults.gradient, GRADIENTS)?,
            train_alpha: e.parse("train_alpha", defaults.train_alpha)?,
            freeze_encoder: e.parse("freeze_encoder", defaults.freeze_encoder)?,
            freeze_decoder: e.parse("freeze_decoder", defaults.freeze_decoder)?,
            seed: e.parse("seed", defaults.seed)?,
        };
        let output_dir = base_dir.join(e.take("output_dir").unwrap_or_else(|| format!("out/{name}")));
        let spec = ExperimentSpec {
            name,
            dataset,
            training,
            output_dir,
            emit_plots_data: e.parse("emit_plots_data", false)?,
            record_wall_time: e.parse("record_wall_time", false)?,
        };
        if let Some(k) = e.0.keys().next() {
            return Err(RunError::Config(format!("`{k}` does not apply to dataset `{kind}`")));
        }
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path).map_err(RunError::io(path))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Ok((Self::parse(&text, base)?, text))
    }

    /// Canonical spec text listing every key; parses back to `self`.
    pub fn render(&self) -> String {
        let t = &self.training;
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| writeln!(out, "{k} = {v}").unwrap();
        kv("name", &self.name);
        match &self.dataset {
            DatasetSource::Letters => kv("dataset", &"letters"),
            DatasetSource::ImageCsv(p) => {
                kv("dataset", &"image-csv");
                kv("dataset_path", &p.display());
            }
            DatasetSource::ComplexCsv(p) => {
                kv("dataset", &"complex-csv");
                kv("dataset_path", &p.display());
            }
            DatasetSource::ComplexGen { n_modes, count, mode } => {
                kv("dataset", &"complex-gen");
                kv("gen_n", n_modes);
                kv("gen_m", count);
                match mode {
                    GenMode::UniformRandom => kv("gen_mode", &"uniform"),
                    GenMode::SubspaceSupported { d, noise } => {
                        kv("gen_mode", &"subspace");
                        kv("gen_d", d);
                        kv("gen_noise", noise);
                    }
                }
            }
        }
        kv("seed", &t.seed);
        kv("topology", &topology_name(t.topology));
        kv("l_e", &t.l_e);
        kv("l_d", &t.l_d);
        kv("d", &t.d);
        kv("eta", &t.eta);
        kv("iterations", &t.iterations);
        kv("delta", &t.delta);
        kv("init_theta", &t.init.0);
        kv("init_alpha", &t.init.1);
        kv("decoder_mode", &name_of(DECODER_MODES, t.decoder_mode));
        kv("loss_kind", &name_of(LOSS_KINDS, t.loss_kind));
        kv("loss_scale", &name_of(LOSS_SCALES, t.loss_scale));
        kv("fd_scheme", &name_of(FD_SCHEMES, t.fd_scheme));
        kv("gradient", &name_of(GRADIENTS, t.gradient));
        kv("train_alpha", &t.train_alpha);
        kv("freeze_encoder", &t.freeze_encoder);
        kv("freeze_decoder", &t.freeze_decoder);
        kv("output_dir", &self.output_dir.display());
        kv("emit_plots_data", &self.emit_plots_data);
        kv("record_wall_time", &self.record_wall_time);
        out
    }

    /// Short description of the dataset, used in manifests.
    pub fn dataset_label(&self) -> String {
        match &self.dataset {
            DatasetSource::Letters => "letters".into(),
            DatasetSource::ImageCsv(p) | DatasetSource::ComplexCsv(p) => p.display().to_string(),
            DatasetSource::ComplexGen { n_modes, count, mode } => {
                format!("complex-gen n={n_modes} m={count} {}", mode_token(*mode))
            }
        }
    }
}
