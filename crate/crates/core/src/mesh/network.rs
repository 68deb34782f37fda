use alloc::format;
use alloc::vec::Vec;

use super::{GateMatrix, GateParam, StateBatch};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::math::{PI, TAU};
use crate::statevec::{check_dims, StateVector};

/// Initial (θ, α) for every gate.
pub const DEFAULT_INIT: (f64, f64) = (PI / 3.0, TAU / 3.0);

/// Gate layout within one layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Topology {
    /// N/2 gates on pairs (0,1), (2,3), … followed by N/2 − 1 gates on
    /// (1,2), (3,4), …; needs even N.
    Cross,
    /// N − 1 gates at k = 0, 1, …, N − 2 in sequence.
    Order,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Encoder,
    /// Gates within each layer run in the reverse of the encoder order.
    Decoder,
    /// Exact adjoint of another mesh: every gate applies its conjugate
    /// transpose.
    InverseOfEncoder,
}

/// An ordered stack of gate layers over `n_modes` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshNetwork {
    n_modes: usize,
    topology: Topology,
    role: Role,
    layers: Vec<Vec<GateParam>>,
}

impl Topology {
    /// Mode indices of one layer in canonical (encoder) order.
    pub fn layer_modes(self, n_modes: usize) -> Result<Vec<usize>> {
        if n_modes < 2 {
            return Err(Error::InvalidParams(format!(
                "a mesh needs at least 2 modes, got {n_modes}"
            )));
        }
        match self {
            Topology::Cross => {
                if !n_modes.is_multiple_of(2) {
                    return Err(Error::OddModesForCross(n_modes));
                }
                Ok((0..n_modes - 1)
                    .step_by(2)
                    .chain((1..n_modes - 1).step_by(2))
                    .collect())
            }
            Topology::Order => Ok((0..n_modes - 1).collect()),
        }
    }
}

impl MeshNetwork {
    /// Builds `n_layers` layers with every gate set to `init`.
    pub fn build(
        n_modes: usize,
        topology: Topology,
        n_layers: usize,
        role: Role,
        init: (f64, f64),
    ) -> Result<Self> {
        if n_layers == 0 {
            return Err(Error::InvalidParams("a mesh needs at least one layer".into()));
        }
        let mut modes = topology.layer_modes(n_modes)?;
        if role != Role::Encoder {
            modes.reverse();
        }
        let layer: Vec<GateParam> = modes
            .iter()
            .map(|&k| GateParam::new(k, init.0, init.1))
            .collect();
        Ok(Self {
            n_modes,
            topology,
            role,
            layers: alloc::vec![layer; n_layers],
        })
    }

    /// Assembles a mesh from explicit layers, checking the layout against
    /// the topology and role.
    pub fn from_layers(
        n_modes: usize,
        topology: Topology,
        role: Role,
        layers: Vec<Vec<GateParam>>,
    ) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidParams("a mesh needs at least one layer".into()));
        }
        let canonical = topology.layer_modes(n_modes)?;
        let mut reversed = canonical.clone();
        reversed.reverse();
        for (l, layer) in layers.iter().enumerate() {
            let ks: Vec<usize> = layer.iter().map(|g| g.k).collect();
            let ok = match role {
                Role::Encoder => ks == canonical,
                Role::Decoder => ks == reversed,
                Role::InverseOfEncoder => ks == canonical || ks == reversed,
            };
            if !ok {
                return Err(Error::InvalidLayout(format!(
                    "layer {l} has modes {ks:?}, which does not match a {topology:?} {role:?} layer on {n_modes} modes"
                )));
            }
        }
        Ok(Self {
            n_modes,
            topology,
            role,
            layers,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn layers(&self) -> &[Vec<GateParam>] {
        &self.layers
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    /// Whether gates apply their conjugate transpose.
    pub fn is_adjoint(&self) -> bool {
        self.role == Role::InverseOfEncoder
    }

    /// Gates in application order.
    pub fn gates(&self) -> impl Iterator<Item = &GateParam> + '_ {
        self.layers.iter().flatten()
    }

    pub fn gates_mut(&mut self) -> impl Iterator<Item = &mut GateParam> + '_ {
        self.layers.iter_mut().flatten()
    }

    pub fn n_gates(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Real parameter count, 2·l·(N − 1).
    pub fn n_params(&self) -> usize {
        2 * self.n_gates()
    }

    /// Flat parameters `[θ₀, α₀, θ₁, α₁, …]` in application order.
    pub fn params(&self) -> Vec<f64> {
        self.gates().flat_map(|g| [g.theta, g.alpha]).collect()
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        check_dims(self.n_params(), params.len())?;
        for (g, p) in self.gates_mut().zip(params.chunks_exact(2)) {
            g.theta = p[0];
            g.alpha = p[1];
        }
        Ok(())
    }

    pub(crate) fn matrices(&self) -> impl Iterator<Item = (usize, GateMatrix)> + '_ {
        let adjoint = self.is_adjoint();
        self.gates()
            .map(move |g| (g.k, GateMatrix::new(g.theta, g.alpha, adjoint)))
    }

    pub(crate) fn apply_batch(&self, batch: &mut StateBatch) {
        for (k, m) in self.matrices() {
            batch.apply_gate(&m, k);
        }
    }

    /// Applies every gate, layer by layer, in stored order.
    pub fn forward(&self, state: &StateVector) -> Result<StateVector> {
        check_dims(self.n_modes, state.dim())?;
        let mut out = state.clone();
        for (k, m) in self.matrices() {
            m.apply(out.amps_mut(), k);
        }
        Ok(out)
    }

    /// The mesh implementing the adjoint transformation: layers reversed,
    /// gates within each layer reversed, every gate conjugate-transposed.
    pub fn inverse(&self) -> MeshNetwork {
        let layers: Vec<Vec<GateParam>> = self
            .layers
            .iter()
            .rev()
            .map(|layer| layer.iter().rev().copied().collect())
            .collect();
        let role = if self.is_adjoint() {
            // A direct-form mesh in canonical order is an encoder.
            let canonical = self
                .topology
                .layer_modes(self.n_modes)
                .expect("layout was validated on construction");
            let first: Vec<usize> = layers[0].iter().map(|g| g.k).collect();
            if first == canonical {
                Role::Encoder
            } else {
                Role::Decoder
            }
        } else {
            Role::InverseOfEncoder
        };
        MeshNetwork {
            n_modes: self.n_modes,
            topology: self.topology,
            role,
            layers,
        }
    }

    /// Dense N×N matrix whose column n is `forward(|n⟩)`.
    pub fn materialize(&self) -> CMatrix {
        let n = self.n_modes;
        let basis: Vec<StateVector> = (0..n).map(|i| StateVector::basis(n, i)).collect();
        let mut batch = StateBatch::from_states(n, &basis);
        self.apply_batch(&mut batch);
        let columns: Vec<Vec<_>> = batch.samples().map(<[_]>::to_vec).collect();
        CMatrix::from_columns(n, &columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_net(n: usize, topo: Topology, l: usize, seed: u64) -> MeshNetwork {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut net = MeshNetwork::build(n, topo, l, Role::Encoder, DEFAULT_INIT).unwrap();
        let p: Vec<f64> = (0..net.n_params()).map(|_| rng.random_range(-4.0..4.0)).collect();
        net.set_params(&p).unwrap();
        net
    }

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        crate::statevec::normalize(&v).unwrap().0
    }

    #[test]
    fn cross_layer_layout() {
        let net = MeshNetwork::build(8, Topology::Cross, 1, Role::Encoder, DEFAULT_INIT).unwrap();
        let ks: Vec<usize> = net.gates().map(|g| g.k).collect();
        assert_eq!(ks, [0, 2, 4, 6, 1, 3, 5]);
        let dec = MeshNetwork::build(8, Topology::Cross, 1, Role::Decoder, DEFAULT_INIT).unwrap();
        let ks: Vec<usize> = dec.gates().map(|g| g.k).collect();
        assert_eq!(ks, [5, 3, 1, 6, 4, 2, 0]);
    }

    #[test]
    fn parameter_counts() {
        let net = MeshNetwork::build(32, Topology::Cross, 20, Role::Encoder, DEFAULT_INIT).unwrap();
        assert_eq!(net.n_gates(), 620);
        assert_eq!(net.n_params(), 1240);
        let enc = MeshNetwork::build(8, Topology::Cross, 10, Role::Encoder, DEFAULT_INIT).unwrap();
        assert_eq!(enc.n_params(), 140);
        let dec = MeshNetwork::build(8, Topology::Cross, 12, Role::Decoder, DEFAULT_INIT).unwrap();
        assert_eq!(dec.n_params(), 168);
        let tiny = MeshNetwork::build(2, Topology::Order, 1, Role::Encoder, DEFAULT_INIT).unwrap();
        assert_eq!(tiny.gates().map(|g| g.k).collect::<Vec<_>>(), [0]);
    }

    #[test]
    fn default_init_everywhere() {
        let net = MeshNetwork::build(6, Topology::Order, 3, Role::Encoder, DEFAULT_INIT).unwrap();
        assert!(net
            .gates()
            .all(|g| g.theta == PI / 3.0 && g.alpha == 2.0 * PI / 3.0));
        assert!(net.layers().iter().all(|l| l.len() == 5));
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            MeshNetwork::build(5, Topology::Cross, 1, Role::Encoder, DEFAULT_INIT),
            Err(Error::OddModesForCross(5))
        );
        assert!(MeshNetwork::build(5, Topology::Order, 1, Role::Encoder, DEFAULT_INIT).is_ok());
        assert!(MeshNetwork::build(1, Topology::Order, 1, Role::Encoder, DEFAULT_INIT).is_err());
        assert!(MeshNetwork::build(4, Topology::Order, 0, Role::Encoder, DEFAULT_INIT).is_err());
    }

    #[test]
    fn from_layers_rejects_wrong_order() {
        let layer = vec![GateParam::new(1, 0.0, 0.0), GateParam::new(0, 0.0, 0.0), GateParam::new(2, 0.0, 0.0)];
        assert!(matches!(
            MeshNetwork::from_layers(4, Topology::Cross, Role::Encoder, vec![layer]),
            Err(Error::InvalidLayout(_))
        ));
    }

    #[test]
    fn single_gate_net_matches_gate_apply() {
        let mut net = MeshNetwork::build(2, Topology::Order, 1, Role::Encoder, (0.3, 1.1)).unwrap();
        net.set_params(&[0.3, 1.1]).unwrap();
        let s = random_state(2, 1);
        let via_net = net.forward(&s).unwrap();
        let via_gate = super::super::gate_apply(&s, &GateParam::new(0, 0.3, 1.1)).unwrap();
        assert_eq!(via_net, via_gate);
    }

    #[test]
    fn single_gate_matrix() {
        let (t, a) = (0.9, 2.5);
        let net = MeshNetwork::build(2, Topology::Cross, 1, Role::Encoder, (t, a)).unwrap();
        let m = net.materialize();
        let e = Complex64::new(a.cos(), a.sin());
        let want = [
            [e * t.cos(), Complex64::new(-t.sin(), 0.0)],
            [e * t.sin(), Complex64::new(t.cos(), 0.0)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - want[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_net_and_its_inverse() {
        let net = MeshNetwork::build(6, Topology::Cross, 3, Role::Encoder, (0.0, 0.0)).unwrap();
        assert_eq!(net.materialize(), CMatrix::identity(6));
        assert_eq!(net.inverse().materialize(), CMatrix::identity(6));
    }

    #[test]
    fn forward_then_inverse_round_trips() {
        for (i, topo) in [Topology::Cross, Topology::Order].into_iter().enumerate() {
            let net = random_net(8, topo, 4, 10 + i as u64);
            let s = random_state(8, 3);
            let back = net.inverse().forward(&net.forward(&s).unwrap()).unwrap();
            for (x, y) in back.amps().iter().zip(s.amps()) {
                assert!((x - y).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn inverse_roles() {
        let enc = random_net(6, Topology::Cross, 2, 4);
        let inv = enc.inverse();
        assert_eq!(inv.role(), Role::InverseOfEncoder);
        assert_eq!(inv.inverse(), enc);
        let dec = MeshNetwork::build(6, Topology::Cross, 2, Role::Decoder, (0.2, 0.4)).unwrap();
        assert_eq!(dec.inverse().inverse(), dec);
    }

    #[test]
    fn inverse_matrix_oracle() {
        let net = random_net(8, Topology::Cross, 3, 77);
        let prod = net.inverse().materialize().matmul(&net.materialize()).unwrap();
        assert!(prod.max_abs_diff(&CMatrix::identity(8)) <= 1e-10);
    }

    #[test]
    fn forward_matches_product_of_gate_matrices() {
        // Brute-force oracle: embed each 2×2 block into an N×N matrix and multiply.
        let n = 4;
        let net = random_net(n, Topology::Cross, 3, 5);
        let mut total = CMatrix::identity(n);
        for g in net.gates() {
            let b = GateMatrix::direct(g.theta, g.alpha).0;
            let mut full = CMatrix::identity(n);
            full[(g.k, g.k)] = b[0];
            full[(g.k, g.k + 1)] = b[1];
            full[(g.k + 1, g.k)] = b[2];
            full[(g.k + 1, g.k + 1)] = b[3];
            total = full.matmul(&total).unwrap();
        }
        let s = random_state(n, 8);
        let want = total.mul_vec(s.amps()).unwrap();
        let got = net.forward(&s).unwrap();
        for (x, y) in got.amps().iter().zip(&want) {
            assert!((x - y).norm() <= 1e-12);
        }
    }

    #[test]
    fn materialized_nets_are_unitary() {
        for seed in 0..100 {
            let net = random_net(8, Topology::Cross, 5, seed);
            assert!(net.materialize().unitarity_defect() <= 1e-10);
        }
    }

    #[test]
    fn dim_mismatch() {
        let net = random_net(4, Topology::Order, 1, 0);
        assert_eq!(
            net.forward(&StateVector::basis(3, 0)),
            Err(Error::DimMismatch { expected: 4, found: 3 })
        );
    }
}
