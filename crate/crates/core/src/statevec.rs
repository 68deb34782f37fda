//! Complex amplitude vectors over the mode basis.
//!
//! Amplitudes are stored in rectangular form; the polar view
//! (`modulus`, `phase`) is computed on demand.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Entries below this magnitude count as zero when normalizing.
pub const ZERO_ENTRY: f64 = 1e-15;
/// Moduli below this report a phase of 0.
pub const PHASE_FLOOR: f64 = 1e-12;
/// Allowed deviation of the norm from 1 for operations that require unit states.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes as-is; no normalization is applied.
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(alloc::vec![Complex64::new(0.0, 0.0); dim])
    }

    /// The basis state |n⟩.
    pub fn basis(dim: usize, n: usize) -> Self {
        let mut s = Self::zeros(dim);
        s.amps[n] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        math::abs(self.norm_sqr() - 1.0) <= NORM_TOL
    }

    pub(crate) fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                norm_sqr: self.norm_sqr(),
            })
        }
    }

    pub fn modulus(&self, n: usize) -> f64 {
        math::sqrt(self.amps[n].norm_sqr())
    }

    pub fn phase(&self, n: usize) -> f64 {
        phase_of(self.amps[n])
    }

    pub fn moduli(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.modulus(n)).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.phase(n)).collect()
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(self.amps.iter().map(|a| a * factor).collect())
    }
}

/// Phase in [0, 2π); 0 for amplitudes with modulus below [`PHASE_FLOOR`].
pub fn phase_of(z: Complex64) -> f64 {
    if z.norm_sqr() < PHASE_FLOOR * PHASE_FLOOR {
        0.0
    } else {
        math::wrap_tau(math::atan2(z.im, z.re))
    }
}

/// Scales `v` to unit norm, returning the unit state and the original norm σ.
pub fn normalize<T>(v: &[T]) -> Result<(StateVector, f64)>
where
    T: Copy + Into<Complex64>,
{
    let amps: Vec<Complex64> = v.iter().map(|&x| x.into()).collect();
    if amps.iter().all(|a| a.norm_sqr() < ZERO_ENTRY * ZERO_ENTRY) {
        return Err(Error::ZeroVector);
    }
    let sigma = math::sqrt(amps.iter().map(|a| a.norm_sqr()).sum());
    let unit = amps.into_iter().map(|a| a / sigma).collect();
    Ok((StateVector::new(unit), sigma))
}

/// ⟨a|b⟩ = Σ conj(a_n)·b_n
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y))
}

/// |⟨a|b⟩|² for unit states.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    a.ensure_normalized()?;
    b.ensure_normalized()?;
    Ok(inner(a, b)?.norm_sqr())
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, found })
    }
}
