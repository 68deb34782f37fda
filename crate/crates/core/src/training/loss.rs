use crate::error::Result;
use crate::mesh::{CompressionChannel, MeshNetwork};
use crate::statevec::{check_dims, StateVector};

/// Σ over samples and components of |output − target|².
pub fn loss_reconstruction(outputs: &[StateVector], targets: &[StateVector]) -> Result<f64> {
    check_dims(targets.len(), outputs.len())?;
    let mut total = 0.0;
    for (o, t) in outputs.iter().zip(targets) {
        check_dims(t.dim(), o.dim())?;
        total += o
            .amps()
            .iter()
            .zip(t.amps())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>();
    }
    Ok(total)
}

/// Mean over inputs of the probability the channel discards after `enc`.
pub fn loss_inv(enc: &MeshNetwork, ch: &CompressionChannel, inputs: &[StateVector]) -> Result<f64> {
    check_dims(enc.n_modes(), ch.n_modes())?;
    if inputs.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for s in inputs {
        let out = enc.forward(s)?;
        total += out.amps()[ch.d()..].iter().map(|a| a.norm_sqr()).sum::<f64>();
    }
    Ok(total / inputs.len() as f64)
}
