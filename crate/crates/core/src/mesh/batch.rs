use alloc::vec::Vec;

use num_complex::Complex64;

use super::GateMatrix;
use crate::statevec::StateVector;

/// Several states of equal dimension stored back to back.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct StateBatch {
    dim: usize,
    data: Vec<Complex64>,
}

impl StateBatch {
    pub(crate) fn from_states(dim: usize, states: &[StateVector]) -> Self {
        let mut data = Vec::with_capacity(dim * states.len());
        for s in states {
            debug_assert_eq!(s.dim(), dim);
            data.extend_from_slice(s.amps());
        }
        Self { dim, data }
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len() % dim, 0);
        Self { dim, data }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub(crate) fn raw(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn samples(&self) -> core::slice::ChunksExact<'_, Complex64> {
        self.data.chunks_exact(self.dim)
    }

    pub(crate) fn samples_mut(&mut self) -> core::slice::ChunksExactMut<'_, Complex64> {
        self.data.chunks_exact_mut(self.dim)
    }

    #[inline]
    pub(crate) fn apply_gate(&mut self, m: &GateMatrix, k: usize) {
        for s in self.data.chunks_exact_mut(self.dim) {
            m.apply(s, k);
        }
    }

    pub(crate) fn to_states(&self) -> Vec<StateVector> {
        self.samples().map(|s| StateVector::new(s.to_vec())).collect()
    }
}
