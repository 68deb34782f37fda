//! Dataset CSV files.
//!
//! Images: header `# D1 D2 M`, then one image per row as D1·D2 comma-separated
//! pixels in [0, 1], row-major. States: header `# N M seed mode`, then one
//! state per row as `Re₀,Im₀,…,Re_{N−1},Im_{N−1}`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qscd_core::codec::{image_to_state, GenMode, ImageSample};
use qscd_core::{Complex64, StateVector};

use crate::error::{Result, RunError};

#[derive(Clone, Debug, PartialEq)]
pub struct ImageSet {
    pub rows: usize,
    pub cols: usize,
    pub images: Vec<ImageSample>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateSet {
    pub n_modes: usize,
    pub seed: String,
    pub mode: String,
    pub states: Vec<StateVector>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Dataset {
    Images(ImageSet),
    States(StateSet),
}

/// A dataset in state form, ready for the meshes.
pub struct Encoded {
    pub states: Vec<StateVector>,
    /// Per-image scale factors; empty for state datasets.
    pub sigmas: Vec<f64>,
    /// Leading components that carry data.
    pub support: usize,
}

/// Header token for a generator mode, e.g. `subspace(d=4,eps=0.05)`.
pub fn mode_token(mode: GenMode) -> String {
    match mode {
        GenMode::UniformRandom => "uniform".into(),
        GenMode::SubspaceSupported { d, noise } => format!("subspace(d={d},eps={noise})"),
    }
}

fn csv_row<I: IntoIterator<Item = f64>>(out: &mut String, values: I) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(',');
        }
        first = false;
        write!(out, "{v}").unwrap();
    }
    out.push('\n');
}

impl ImageSet {
    pub fn render(&self) -> String {
        let mut out = format!("# {} {} {}\n", self.rows, self.cols, self.images.len());
        for img in &self.images {
            csv_row(&mut out, img.pixels().iter().copied());
        }
        out
    }

    /// Same layout with pixels clipped to [0, 1].
    pub fn render_clipped(&self) -> String {
        let mut out = format!("# {} {} {}\n", self.rows, self.cols, self.images.len());
        for img in &self.images {
            csv_row(&mut out, img.clipped());
        }
        out
    }
}

impl StateSet {
    pub fn render(&self) -> String {
        let mut out = format!("# {} {} {} {}\n", self.n_modes, self.states.len(), self.seed, self.mode);
        for s in &self.states {
            csv_row(&mut out, s.amps().iter().flat_map(|a| [a.re, a.im]));
        }
        out
    }
}

fn parse_row(line: &str, lineno: usize) -> Result<Vec<f64>> {
    line.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| RunError::Data(format!("line {lineno}: bad number {:?}", v.trim())))
        })
        .collect()
}

impl Dataset {
    /// Parses either CSV layout; the header's field count tells them apart.
    pub fn parse(text: &str) -> Result<Dataset> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| RunError::Data("empty dataset file".into()))?;
        let fields: Vec<&str> = header
            .strip_prefix('#')
            .ok_or_else(|| RunError::Data("dataset header must start with `#`".into()))?
            .split_whitespace()
            .collect();
        let num = |i: usize| -> Result<usize> {
            fields[i]
                .parse()
                .map_err(|_| RunError::Data(format!("bad header field {:?}", fields[i])))
        };
        let rows: Vec<(usize, Vec<f64>)> = lines
            .map(|(i, l)| parse_row(l, i + 1).map(|r| (i + 1, r)))
            .collect::<Result<_>>()?;
        match fields.len() {
            3 => {
                let (d1, d2, m) = (num(0)?, num(1)?, num(2)?);
                check_count(m, rows.len())?;
                let images = rows
                    .into_iter()
                    .enumerate()
                    .map(|(id, (lineno, px))| {
                        ImageSample::new(id, d1, d2, px)
                            .map_err(|e| RunError::Data(format!("line {lineno}: {e}")))
                    })
                    .collect::<Result<_>>()?;
                Ok(Dataset::Images(ImageSet { rows: d1, cols: d2, images }))
            }
            4 => {
                let (n, m) = (num(0)?, num(1)?);
                check_count(m, rows.len())?;
                let states = rows
                    .into_iter()
                    .map(|(lineno, v)| {
                        if v.len() != 2 * n {
                            return Err(RunError::Data(format!(
                                "line {lineno}: expected {} values, found {}",
                                2 * n,
                                v.len()
                            )));
                        }
                        Ok(StateVector::new(
                            v.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect(),
                        ))
                    })
                    .collect::<Result<_>>()?;
                Ok(Dataset::States(StateSet {
                    n_modes: n,
                    seed: fields[2].into(),
                    mode: fields[3].into(),
                    states,
                }))
            }
            _ => Err(RunError::Data(format!(
                "unrecognized dataset header {header:?}; expected `# D1 D2 M` or `# N M seed mode`"
            ))),
        }
    }

    pub fn load(path: &Path) -> Result<Dataset> {
        let text = fs::read_to_string(path).map_err(RunError::io(path))?;
        Dataset::parse(&text).map_err(|e| match e {
            RunError::Data(msg) => RunError::Data(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn len(&self) -> usize {
        match self {
            Dataset::Images(s) => s.images.len(),
            Dataset::States(s) => s.states.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encode(&self) -> Result<Encoded> {
        match self {
            Dataset::Images(set) => {
                let mut states = Vec::with_capacity(set.images.len());
                let mut sigmas = Vec::with_capacity(set.images.len());
                for img in &set.images {
                    let e = image_to_state(img)
                        .map_err(|e| RunError::Data(format!("image {}: {e}", img.id)))?;
                    states.push(e.state);
                    sigmas.push(e.sigma);
                }
                Ok(Encoded {
                    states,
                    sigmas,
                    support: set.rows * set.cols,
                })
            }
            Dataset::States(set) => {
                for (i, s) in set.states.iter().enumerate() {
                    if !s.is_normalized() {
                        return Err(RunError::Data(format!(
                            "state {i} has squared norm {}, expected 1",
                            s.norm_sqr()
                        )));
                    }
                }
                Ok(Encoded {
                    states: set.states.clone(),
                    sigmas: Vec::new(),
                    support: set.n_modes,
                })
            }
        }
    }
}

fn check_count(header: usize, found: usize) -> Result<()> {
    if header != found {
        return Err(RunError::Data(format!(
            "header announces {header} rows, file has {found}"
        )));
    }
    if found == 0 {
        return Err(RunError::Data("dataset has no rows".into()));
    }
    Ok(())
}
