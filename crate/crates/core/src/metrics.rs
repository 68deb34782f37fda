//! Reconstruction quality measures.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::codec::ImageSample;
use crate::error::{Error, Result};
use crate::math;
use crate::statevec::{self, check_dims, phase_of, StateVector};
use crate::training::loss_reconstruction;

/// Components whose output and target moduli are both below this carry no
/// phase error.
pub const PHASE_MASK: f64 = 1e-6;

/// Fidelity, amplitude error and phase error of one sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleMetrics {
    pub fidelity: f64,
    pub amp_err: f64,
    pub pha_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    /// Mean overlap of target and reconstruction, in percent.
    pub similarity: f64,
    pub mean_fidelity: f64,
    /// Summed over samples and components.
    pub e_amp: f64,
    pub e_pha: f64,
    /// `e_amp` and `e_pha` divided by the number of components M·N.
    pub e_amp_mean: f64,
    pub e_pha_mean: f64,
    pub e_complex: Complex64,
    /// Mean squared reconstruction error per component.
    pub loss: f64,
    /// Mean discarded probability; only known when the encoder is available.
    pub loss_inv: Option<f64>,
    pub per_sample: Vec<SampleMetrics>,
}

fn check_sets(outputs: &[StateVector], targets: &[StateVector]) -> Result<()> {
    check_dims(targets.len(), outputs.len())?;
    for (o, t) in outputs.iter().zip(targets) {
        check_dims(t.dim(), o.dim())?;
    }
    Ok(())
}

/// Wraps a phase difference into (−π, π].
pub fn wrap_gap(gap: f64) -> f64 {
    math::wrap_pi(gap)
}

fn sample_errors(out: &StateVector, target: &StateVector) -> (f64, f64) {
    let mut amp = 0.0;
    let mut pha = 0.0;
    for (o, t) in out.amps().iter().zip(target.amps()) {
        let (big_r, r) = (o.norm(), t.norm());
        amp += (big_r - r) * (big_r - r);
        if big_r >= PHASE_MASK || r >= PHASE_MASK {
            let gap = wrap_gap(phase_of(*o) - phase_of(*t));
            pha += gap * gap;
        }
    }
    (amp, pha)
}

/// (E_amp, E_pha): squared modulus gaps and squared wrapped phase gaps,
/// summed over samples and components.
pub fn amp_phase_errors(outputs: &[StateVector], targets: &[StateVector]) -> Result<(f64, f64)> {
    check_sets(outputs, targets)?;
    Ok(outputs
        .iter()
        .zip(targets)
        .map(|(o, t)| sample_errors(o, t))
        .fold((0.0, 0.0), |(a, p), (da, dp)| (a + da, p + dp)))
}

/// E_amp·e^{i·E_pha}.
pub fn complex_error(e_amp: f64, e_pha: f64) -> Complex64 {
    math::cis(e_pha) * e_amp
}

fn overlap(a: &[f64], b: &[f64]) -> f64 {
    let na = math::sqrt(a.iter().map(|x| x * x).sum());
    let nb = math::sqrt(b.iter().map(|x| x * x).sum());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb)
}

/// 100 × mean over images of the overlap of the normalized pixel vectors.
pub fn similarity(reconstructed: &[ImageSample], originals: &[ImageSample]) -> Result<f64> {
    check_dims(originals.len(), reconstructed.len())?;
    if originals.is_empty() {
        return Err(Error::ShapeMismatch("no images to compare".into()));
    }
    let mut total = 0.0;
    for (r, o) in reconstructed.iter().zip(originals) {
        if r.shape() != o.shape() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "reconstruction {:?} vs original {:?}",
                r.shape(),
                o.shape()
            )));
        }
        total += overlap(r.pixels(), o.pixels());
    }
    Ok(100.0 * total / originals.len() as f64)
}

/// [`similarity`] computed on state moduli restricted to the first
/// `support` components; scale-free, so σ is not needed.
pub fn state_similarity(outputs: &[StateVector], targets: &[StateVector], support: usize) -> Result<f64> {
    check_sets(outputs, targets)?;
    if targets.is_empty() {
        return Err(Error::ShapeMismatch("no states to compare".into()));
    }
    let mut total = 0.0;
    for (o, t) in outputs.iter().zip(targets) {
        let len = support.min(t.dim());
        total += overlap(&o.moduli()[..len], &t.moduli()[..len]);
    }
    Ok(100.0 * total / targets.len() as f64)
}

pub fn mean_fidelity(outputs: &[StateVector], targets: &[StateVector]) -> Result<f64> {
    check_sets(outputs, targets)?;
    if targets.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for (o, t) in outputs.iter().zip(targets) {
        total += statevec::fidelity(t, o)?;
    }
    Ok(total / targets.len() as f64)
}

impl MetricReport {
    /// Compares reconstructions to targets. `support` is the number of leading
    /// components that carry data (pixel count for padded images, N otherwise).
    pub fn compare(outputs: &[StateVector], targets: &[StateVector], support: usize) -> Result<Self> {
        check_sets(outputs, targets)?;
        let mut per_sample = Vec::with_capacity(targets.len());
        for (o, t) in outputs.iter().zip(targets) {
            let (amp_err, pha_err) = sample_errors(o, t);
            per_sample.push(SampleMetrics {
                fidelity: statevec::fidelity(t, o)?,
                amp_err,
                pha_err,
            });
        }
        let (e_amp, e_pha) = per_sample
            .iter()
            .fold((0.0, 0.0), |(a, p), s| (a + s.amp_err, p + s.pha_err));
        let components = targets.iter().map(StateVector::dim).sum::<usize>().max(1) as f64;
        let mean_fidelity =
            per_sample.iter().map(|s| s.fidelity).sum::<f64>() / targets.len().max(1) as f64;
        Ok(Self {
            similarity: state_similarity(outputs, targets, support)?,
            mean_fidelity,
            e_amp,
            e_pha,
            e_amp_mean: e_amp / components,
            e_pha_mean: e_pha / components,
            e_complex: complex_error(e_amp, e_pha),
            loss: loss_reconstruction(outputs, targets)? / components,
            loss_inv: None,
            per_sample,
        })
    }
}
