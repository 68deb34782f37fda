//! Layered two-mode unitary meshes, the compression channel between them and
//! dense materialization for verification.

mod batch;
mod channel;
mod gate;
mod network;

pub(crate) use batch::StateBatch;
pub(crate) use channel::renormalize;
pub use channel::{compress_decode, project, CompressionChannel};
pub use gate::{gate_apply, GateMatrix, GateParam};
pub use network::{MeshNetwork, Role, Topology, DEFAULT_INIT};
