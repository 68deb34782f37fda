use alloc::vec::Vec;

use super::config::LossKind;
use super::pipeline::{batches, Objective, Pipeline};
use crate::error::Result;
use crate::mesh::{CompressionChannel, MeshNetwork};
use crate::statevec::StateVector;

fn compile(
    enc: &MeshNetwork,
    dec: &MeshNetwork,
    ch: &CompressionChannel,
    loss_kind: LossKind,
) -> Pipeline {
    let objective = Objective {
        kind: loss_kind,
        scale: 1.0,
    };
    Pipeline::new(enc, dec, ch, objective, false)
}

/// The loss differentiated by [`analytic_gradient`]: the plain reconstruction
/// sum, or the mean discarded probability.
pub fn objective(
    enc: &MeshNetwork,
    dec: &MeshNetwork,
    ch: &CompressionChannel,
    inputs: &[StateVector],
    targets: &[StateVector],
    loss_kind: LossKind,
) -> Result<f64> {
    let (x, t) = batches(enc, dec, ch, inputs, targets)?;
    Ok(compile(enc, dec, ch, loss_kind).run(&x, &t)?.loss)
}

/// Exact gradient of [`objective`] with respect to `enc.params()` followed by
/// `dec.params()`.
pub fn analytic_gradient(
    enc: &MeshNetwork,
    dec: &MeshNetwork,
    ch: &CompressionChannel,
    inputs: &[StateVector],
    targets: &[StateVector],
    loss_kind: LossKind,
) -> Result<Vec<f64>> {
    let (x, t) = batches(enc, dec, ch, inputs, targets)?;
    let pipe = compile(enc, dec, ch, loss_kind);
    let pass = pipe.run(&x, &t)?;
    Ok(pipe.backward(&pass, &t))
}
