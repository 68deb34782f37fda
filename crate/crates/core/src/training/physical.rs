//! Folding trained parameters into the hardware ranges θ ∈ [0, π/2],
//! α ∈ [0, 2π).
//!
//! A lone gate cannot always be folded on its own: its (0,1) entry is −sinθ,
//! which is never positive for θ ∈ [0, π/2]. Sign flips are therefore pushed
//! through the mesh as per-mode phases, which collect in a diagonal phase
//! screen at one end of the mesh.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::CMatrix;
use crate::math::{cis, wrap_tau, FRAC_PI_2, PI, TAU};
use crate::mesh::MeshNetwork;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScreenSide {
    /// Phases applied before the first gate.
    Input,
    /// Phases applied after the last gate.
    Output,
}

/// An in-range mesh plus the phase screen that makes it equivalent to the
/// original.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalExport {
    pub net: MeshNetwork,
    /// One phase per mode, in [0, 2π).
    pub phases: Vec<f64>,
    pub side: ScreenSide,
}

impl PhysicalExport {
    /// Dense matrix of screen and mesh together.
    pub fn materialize(&self) -> CMatrix {
        let m = self.net.materialize();
        let n = m.rows();
        let mut out = m.clone();
        for i in 0..n {
            for j in 0..n {
                let phase = match self.side {
                    ScreenSide::Output => self.phases[i],
                    ScreenSide::Input => self.phases[j],
                };
                out[(i, j)] = m[(i, j)] * cis(phase);
            }
        }
        out
    }

    /// Whether the screen is trivial, so `net` alone reproduces the original.
    pub fn screen_is_trivial(&self) -> bool {
        self.phases.iter().all(|&p| p == 0.0)
    }
}

/// Folds a direct-form mesh; the screen ends up on the output side.
fn fold_direct(net: &MeshNetwork) -> (MeshNetwork, Vec<f64>) {
    let mut out = net.clone();
    let mut pending = vec![0.0; net.n_modes()];
    for g in out.gates_mut() {
        let (pk, pk1) = (pending[g.k], pending[g.k + 1]);
        let mut alpha = g.alpha + (pk - pk1);
        let mut shift_k = pk1;
        let mut shift_k1 = pk1;
        let mut theta = g.theta;
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            theta = wrap_tau(theta);
            if theta >= PI {
                // G(θ) = −G(θ − π)
                theta -= PI;
                shift_k += PI;
                shift_k1 += PI;
            }
            if theta > FRAC_PI_2 {
                // G(θ, α) = diag(1, −1)·G(π − θ, α + π)
                theta = PI - theta;
                alpha += PI;
                shift_k1 += PI;
            }
        }
        g.theta = theta;
        g.alpha = wrap_tau(alpha);
        pending[g.k] = wrap_tau(shift_k);
        pending[g.k + 1] = wrap_tau(shift_k1);
    }
    (out, pending)
}

/// An equivalent mesh with every θ ∈ [0, π/2] and α ∈ [0, 2π), plus the
/// diagonal phase screen needed for exact equivalence. Adjoint meshes get an
/// input-side screen, direct meshes an output-side one.
pub fn export_physical(net: &MeshNetwork) -> PhysicalExport {
    if net.is_adjoint() {
        let (folded, phases) = fold_direct(&net.inverse());
        PhysicalExport {
            net: folded.inverse(),
            phases: phases.into_iter().map(|p| wrap_tau(TAU - p)).collect(),
            side: ScreenSide::Input,
        }
    } else {
        let (net, phases) = fold_direct(net);
        PhysicalExport {
            net,
            phases,
            side: ScreenSide::Output,
        }
    }
}
