//! Conversion between classical data and amplitude-encoded states, plus the
//! seeded generators for complex-state datasets.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::math;
use crate::statevec::{self, StateVector};

/// A grayscale image, pixels stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageSample {
    pub id: usize,
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl ImageSample {
    /// Checks the pixel count and that every pixel lies in [0, 1].
    pub fn new(id: usize, rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || pixels.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} pixels for a {rows}x{cols} image",
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidParams(format!("pixel value {p} outside [0, 1]")));
        }
        Ok(Self { id, rows, cols, pixels })
    }

    /// A reconstructed image; values may leave [0, 1] until clipped for export.
    pub fn reconstructed(id: usize, rows: usize, cols: usize, pixels: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), rows * cols);
        Self { id, rows, cols, pixels }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn clipped(&self) -> Vec<f64> {
        self.pixels.iter().map(|p| p.clamp(0.0, 1.0)).collect()
    }
}

/// An image as a unit state of dimension 2^q plus its normalization factor σ.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedSample {
    pub state: StateVector,
    pub sigma: f64,
    pub source_shape: (usize, usize),
}

/// Smallest power of two N ≥ 2 with N ≥ `len`.
pub fn padded_dim(len: usize) -> usize {
    len.next_power_of_two().max(2)
}

/// Flattens row-major, zero-pads to 2^q and normalizes; all phases are zero.
pub fn image_to_state(img: &ImageSample) -> Result<EncodedSample> {
    let n = padded_dim(img.pixels.len());
    let mut padded = img.pixels.clone();
    padded.resize(n, 0.0);
    let (state, sigma) = statevec::normalize(&padded).map_err(|e| match e {
        Error::ZeroVector => Error::ZeroImage,
        other => other,
    })?;
    Ok(EncodedSample {
        state,
        sigma,
        source_shape: img.shape(),
    })
}

/// x̂ = σ·R on the first D1·D2 entries, reshaped row-major; padding is dropped.
pub fn state_to_image(moduli: &[f64], sigma: f64, shape: (usize, usize)) -> Result<ImageSample> {
    let (rows, cols) = shape;
    if rows == 0 || cols == 0 || moduli.len() < rows * cols {
        return Err(Error::ShapeMismatch(format!(
            "{} amplitudes cannot fill a {rows}x{cols} image",
            moduli.len()
        )));
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidParams(format!("sigma must be positive, got {sigma}")));
    }
    let pixels = moduli[..rows * cols].iter().map(|r| sigma * r).collect();
    Ok(ImageSample::reconstructed(0, rows, cols, pixels))
}

/// Detection probabilities |amp_n|² of a unit state.
pub fn measure_probabilities(state: &StateVector) -> Result<Vec<f64>> {
    state.ensure_normalized()?;
    Ok(state.amps().iter().map(|a| a.norm_sqr()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenMode {
    /// Real and imaginary parts drawn i.i.d. standard normal, then normalized.
    UniformRandom,
    /// V·w + noise·ξ, normalized, with V one fixed random N×d isometry shared
    /// by the whole set.
    SubspaceSupported { d: usize, noise: f64 },
}

/// Stream reserved for the shared isometry; sample `i` uses stream `i`.
const ISOMETRY_STREAM: u64 = u64::MAX;

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Orthonormal columns from Gaussian draws by twice-applied modified Gram–Schmidt.
fn random_isometry(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj = q
                    .iter()
                    .zip(&v)
                    .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
        }
        let norm = math::sqrt(v.iter().map(|x| x.norm_sqr()).sum());
        // Degenerate draws are astronomically unlikely; redraw if one happens.
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    cols
}

/// Draws `m` unit states of dimension `n`; identical seeds give identical sets.
pub fn gen_complex_states(m: usize, n: usize, mode: GenMode, seed: u64) -> Result<Vec<StateVector>> {
    if n < 2 || m == 0 {
        return Err(Error::InvalidParams(format!(
            "need n >= 2 and m >= 1, got n = {n}, m = {m}"
        )));
    }
    let basis = match mode {
        GenMode::UniformRandom => None,
        GenMode::SubspaceSupported { d, noise } => {
            if d == 0 || d > n || !(noise >= 0.0) || !noise.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "subspace mode needs 1 <= d <= {n} and finite noise >= 0, got d = {d}, noise = {noise}"
                )));
            }
            let mut rng = stream(seed, ISOMETRY_STREAM);
            Some((random_isometry(n, d, &mut rng), noise))
        }
    };
    (0..m)
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            let amps: Vec<Complex64> = match &basis {
                None => (0..n).map(|_| complex_normal(&mut rng)).collect(),
                Some((cols, noise)) => {
                    let w: Vec<Complex64> = cols.iter().map(|_| complex_normal(&mut rng)).collect();
                    (0..n)
                        .map(|row| {
                            let signal = cols
                                .iter()
                                .zip(&w)
                                .fold(Complex64::new(0.0, 0.0), |acc, (c, wj)| acc + c[row] * wj);
                            signal + complex_normal(&mut rng) * *noise
                        })
                        .collect()
                }
            };
            statevec::normalize(&amps).map(|(s, _)| s)
        })
        .collect()
}
