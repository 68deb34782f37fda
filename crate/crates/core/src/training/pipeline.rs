//! Encoder gates, projection and decoder gates compiled into one op list.
//!
//! A forward pass stores the batch state before every op. A perturbed loss
//! evaluation restarts from the snapshot in front of the first op that the
//! perturbed parameter touches, so early decoder parameters are cheap and late
//! encoder parameters cost a near-full pass.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::config::LossKind;
use crate::error::{Error, Result};
use crate::math;
use crate::statevec::{check_dims, StateVector};
use crate::mesh::{renormalize, CompressionChannel, GateMatrix, MeshNetwork, StateBatch};

#[derive(Clone, Copy, Debug)]
pub(crate) struct GateOp {
    pub k: usize,
    pub theta: f64,
    pub alpha: f64,
    pub adjoint: bool,
    /// Index of the (θ, α) pair in the flat parameter vector, halved.
    pub slot: usize,
    pub m: GateMatrix,
}

#[derive(Clone, Debug)]
pub(crate) enum Op {
    Gate(GateOp),
    Project,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Objective {
    pub kind: LossKind,
    /// Multiplies the reconstruction sum; unused for the discarded probability.
    pub scale: f64,
}

pub(crate) struct Pipeline {
    ch: CompressionChannel,
    d: usize,
    ops: Vec<Op>,
    project_at: usize,
    slot_ops: Vec<Vec<usize>>,
    objective: Objective,
}

/// Result of a full forward pass.
pub(crate) struct Pass {
    /// `snaps[i]` is the batch in front of op `i`; the last entry is the output.
    pub snaps: Vec<StateBatch>,
    pub kept: Vec<f64>,
    /// Probability on the dropped modes, summed directly rather than as 1 − kept.
    pub discarded: Vec<f64>,
    pub loss: f64,
}

impl Pass {
    pub(crate) fn output(&self) -> &StateBatch {
        self.snaps.last().expect("a pass always has an output")
    }

    pub(crate) fn loss_inv(&self) -> f64 {
        mean(&self.discarded)
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn gate_op(g: &crate::mesh::GateParam, adjoint: bool, slot: usize) -> Op {
    Op::Gate(GateOp {
        k: g.k,
        theta: g.theta,
        alpha: g.alpha,
        adjoint,
        slot,
        m: GateMatrix::new(g.theta, g.alpha, adjoint),
    })
}

impl Pipeline {
    /// Parameter slots run over encoder gates, then decoder gates. With `tied`,
    /// `dec` must be `enc.inverse()`: its gates reuse the encoder slots and the
    /// decoder slots stay unused.
    pub(crate) fn new(
        enc: &MeshNetwork,
        dec: &MeshNetwork,
        ch: &CompressionChannel,
        objective: Objective,
        tied: bool,
    ) -> Self {
        let n_enc = enc.n_gates();
        let n_slots = n_enc + dec.n_gates();
        let mut ops = Vec::with_capacity(n_slots + 1);
        ops.extend(enc.gates().enumerate().map(|(i, g)| gate_op(g, enc.is_adjoint(), i)));
        let project_at = ops.len();
        ops.push(Op::Project);
        ops.extend(dec.gates().enumerate().map(|(j, g)| {
            let slot = if tied { n_enc - 1 - j } else { n_enc + j };
            gate_op(g, dec.is_adjoint(), slot)
        }));
        let mut slot_ops = vec![Vec::new(); n_slots];
        for (i, op) in ops.iter().enumerate() {
            if let Op::Gate(g) = op {
                slot_ops[g.slot].push(i);
            }
        }
        Self {
            ch: *ch,
            d: ch.d(),
            ops,
            project_at,
            slot_ops,
            objective,
        }
    }

    pub(crate) fn n_params(&self) -> usize {
        2 * self.slot_ops.len()
    }

    /// Whether parameter slot `slot` can change the objective.
    pub(crate) fn affects_loss(&self, slot: usize) -> bool {
        match self.slot_ops[slot].first() {
            None => false,
            Some(&first) => self.objective.kind == LossKind::Reconstruction || first < self.project_at,
        }
    }

    /// Current value of flat parameter `coord`.
    pub(crate) fn param(&self, coord: usize) -> f64 {
        let op = self.slot_ops[coord / 2][0];
        match &self.ops[op] {
            Op::Gate(g) if coord.is_multiple_of(2) => g.theta,
            Op::Gate(g) => g.alpha,
            Op::Project => unreachable!("slots only map to gates"),
        }
    }

    fn project(
        &self,
        batch: &mut StateBatch,
        kept: &mut Vec<f64>,
        discarded: &mut Vec<f64>,
        normalize: bool,
    ) -> Result<()> {
        kept.clear();
        discarded.clear();
        for (m, s) in batch.samples_mut().enumerate() {
            discarded.push(s[self.d..].iter().map(|a| a.norm_sqr()).sum());
            let p = self.ch.project_in_place(s);
            if normalize {
                renormalize(s, p, m)?;
            }
            kept.push(p);
        }
        Ok(())
    }

    fn reconstruction_loss(&self, out: &StateBatch, targets: &StateBatch) -> f64 {
        let sum: f64 = out
            .raw()
            .iter()
            .zip(targets.raw())
            .map(|(o, t)| (o - t).norm_sqr())
            .sum();
        self.objective.scale * sum
    }

    fn final_loss(&self, out: &StateBatch, discarded: &[f64], targets: &StateBatch) -> f64 {
        match self.objective.kind {
            LossKind::Reconstruction => self.reconstruction_loss(out, targets),
            LossKind::InvProbability => mean(discarded),
        }
    }

    pub(crate) fn run(&self, inputs: &StateBatch, targets: &StateBatch) -> Result<Pass> {
        let mut snaps = Vec::with_capacity(self.ops.len() + 1);
        let mut kept = Vec::new();
        let mut discarded = Vec::new();
        let mut b = inputs.clone();
        for op in &self.ops {
            snaps.push(b.clone());
            match op {
                Op::Gate(g) => b.apply_gate(&g.m, g.k),
                Op::Project => self.project(&mut b, &mut kept, &mut discarded, true)?,
            }
        }
        let loss = self.final_loss(&b, &discarded, targets);
        snaps.push(b);
        Ok(Pass {
            snaps,
            kept,
            discarded,
            loss,
        })
    }

    /// Objective with flat parameter `coord` set to `value`, all else as
    /// compiled. `coord` must satisfy [`Pipeline::affects_loss`].
    pub(crate) fn perturbed_loss(
        &self,
        pass: &Pass,
        targets: &StateBatch,
        coord: usize,
        value: f64,
    ) -> Result<f64> {
        let touched = &self.slot_ops[coord / 2];
        let start = touched[0];
        let mut b = pass.snaps[start].clone();
        let mut kept = pass.kept.clone();
        let mut discarded = pass.discarded.clone();
        for (i, op) in self.ops.iter().enumerate().skip(start) {
            match op {
                Op::Gate(g) => {
                    if touched.binary_search(&i).is_ok() {
                        let (theta, alpha) = if coord.is_multiple_of(2) {
                            (value, g.alpha)
                        } else {
                            (g.theta, value)
                        };
                        b.apply_gate(&GateMatrix::new(theta, alpha, g.adjoint), g.k);
                    } else {
                        b.apply_gate(&g.m, g.k);
                    }
                }
                Op::Project => {
                    let inv = self.objective.kind == LossKind::InvProbability;
                    self.project(&mut b, &mut kept, &mut discarded, !inv)?;
                    if inv {
                        return Ok(mean(&discarded));
                    }
                }
            }
        }
        Ok(self.final_loss(&b, &discarded, targets))
    }

    /// Exact gradient of the objective by a reverse sweep over the snapshots.
    pub(crate) fn backward(&self, pass: &Pass, targets: &StateBatch) -> Vec<f64> {
        let mut grad = vec![0.0; self.n_params()];
        let (mut gbar, end) = match self.objective.kind {
            LossKind::Reconstruction => {
                let c = 2.0 * self.objective.scale;
                let data = pass
                    .output()
                    .raw()
                    .iter()
                    .zip(targets.raw())
                    .map(|(o, t)| (o - t) * c)
                    .collect();
                (StateBatch::from_raw(pass.output().dim(), data), self.ops.len())
            }
            LossKind::InvProbability => {
                let s = &pass.snaps[self.project_at];
                let c = 2.0 / s.len() as f64;
                let mut g = s.clone();
                for v in g.samples_mut() {
                    for (j, a) in v.iter_mut().enumerate() {
                        *a = if j < self.d { Complex64::new(0.0, 0.0) } else { *a * c };
                    }
                }
                (g, self.project_at)
            }
        };
        for i in (0..end).rev() {
            let x = &pass.snaps[i];
            match &self.ops[i] {
                Op::Gate(g) => {
                    let dt = GateMatrix::d_theta(g.theta, g.alpha, g.adjoint);
                    let da = GateMatrix::d_alpha(g.theta, g.alpha, g.adjoint);
                    let back = g.m.dagger();
                    let (mut st, mut sa) = (0.0, 0.0);
                    for (xs, gs) in x.samples().zip(gbar.samples_mut()) {
                        let (x0, x1) = (xs[g.k], xs[g.k + 1]);
                        let (g0, g1) = (gs[g.k], gs[g.k + 1]);
                        let (u0, u1) = dt.mix(x0, x1);
                        st += (g0.conj() * u0 + g1.conj() * u1).re;
                        let (v0, v1) = da.mix(x0, x1);
                        sa += (g0.conj() * v0 + g1.conj() * v1).re;
                        back.apply(gs, g.k);
                    }
                    grad[2 * g.slot] += st;
                    grad[2 * g.slot + 1] += sa;
                }
                Op::Project => {
                    for ((xs, gs), &kept) in x.samples().zip(gbar.samples_mut()).zip(&pass.kept) {
                        let n = math::sqrt(kept);
                        let c: f64 = gs[..self.d]
                            .iter()
                            .zip(&xs[..self.d])
                            .map(|(gj, xj)| (gj.conj() * xj).re)
                            .sum();
                        let n3 = n * n * n;
                        for (j, gj) in gs.iter_mut().enumerate() {
                            *gj = if j < self.d {
                                *gj / n - xs[j] * (c / n3)
                            } else {
                                Complex64::new(0.0, 0.0)
                            };
                        }
                    }
                }
            }
        }
        grad
    }
}

/// Validates a dataset against a mesh pair and packs it into batches.
pub(crate) fn batches(
    enc: &MeshNetwork,
    dec: &MeshNetwork,
    ch: &CompressionChannel,
    inputs: &[StateVector],
    targets: &[StateVector],
) -> Result<(StateBatch, StateBatch)> {
    let n = enc.n_modes();
    check_dims(n, dec.n_modes())?;
    check_dims(n, ch.n_modes())?;
    check_dims(inputs.len(), targets.len())?;
    if inputs.is_empty() {
        return Err(Error::InvalidParams("the dataset is empty".into()));
    }
    for s in inputs.iter().chain(targets) {
        check_dims(n, s.dim())?;
        s.ensure_normalized()?;
    }
    Ok((StateBatch::from_states(n, inputs), StateBatch::from_states(n, targets)))
}
