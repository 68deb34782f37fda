use alloc::format;

use num_complex::Complex64;

use super::MeshNetwork;
use crate::error::{Error, Result};
use crate::math;
use crate::statevec::{check_dims, StateVector};

/// Kept probabilities below this make renormalization undefined.
pub const REJECT_FLOOR: f64 = 1e-12;

/// Projection onto the first `d` modes (P₀); the remaining modes (P₁) are
/// discarded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompressionChannel {
    n_modes: usize,
    d: usize,
}

impl CompressionChannel {
    pub fn new(n_modes: usize, d: usize) -> Result<Self> {
        if d == 0 || d > n_modes {
            return Err(Error::InvalidParams(format!(
                "retained dimension d = {d} must lie in 1..={n_modes}"
            )));
        }
        Ok(Self { n_modes, d })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Zeroes the discarded modes in place and returns ⟨χ|χ⟩.
    pub(crate) fn project_in_place(&self, amps: &mut [Complex64]) -> f64 {
        for a in &mut amps[self.d..] {
            *a = Complex64::new(0.0, 0.0);
        }
        amps[..self.d].iter().map(|a| a.norm_sqr()).sum()
    }
}

/// χ = P₀·state together with the kept probability ⟨χ|χ⟩.
pub fn project(state: &StateVector, ch: &CompressionChannel) -> Result<(StateVector, f64)> {
    check_dims(ch.n_modes, state.dim())?;
    let mut chi = state.clone();
    let kept = ch.project_in_place(chi.amps_mut());
    Ok((chi, kept))
}

pub(crate) fn renormalize(amps: &mut [Complex64], kept: f64, sample: usize) -> Result<()> {
    if !(kept >= REJECT_FLOOR) {
        return Err(Error::FullyRejected {
            sample,
            kept_prob: kept,
        });
    }
    let inv = 1.0 / math::sqrt(kept);
    for a in amps {
        *a *= inv;
    }
    Ok(())
}

/// T_D·(χ/√⟨χ|χ⟩) with χ = P₀·T_E·ψ.
pub fn compress_decode(
    enc: &MeshNetwork,
    dec: &MeshNetwork,
    ch: &CompressionChannel,
    psi: &StateVector,
) -> Result<StateVector> {
    check_dims(enc.n_modes(), psi.dim())?;
    check_dims(enc.n_modes(), dec.n_modes())?;
    check_dims(enc.n_modes(), ch.n_modes)?;
    let mut s = enc.forward(psi)?;
    let kept = ch.project_in_place(s.amps_mut());
    renormalize(s.amps_mut(), kept, 0)?;
    dec.forward(&s)
}
