//! Simulation and training of layered two-mode unitary meshes that compress
//! quantum states into a few retained modes and decode them back.
//!
//! The crate is `no_std` with `alloc`; enable the `std` feature to use the
//! platform math library instead of `libm`.
//!
//! Data flow for one sample: a classical vector is amplitude-encoded into a
//! [`StateVector`], pushed through an encoder [`MeshNetwork`], projected onto
//! the first `d` modes by a [`CompressionChannel`], renormalized and decoded
//! by a second mesh. Training adjusts the gate parameters of both meshes.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod codec;
pub mod error;
pub mod letters;
pub mod linalg;
pub(crate) mod math;
pub mod mesh;
pub mod metrics;
pub mod statevec;
pub mod training;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use codec::{EncodedSample, GenMode, ImageSample};
pub use linalg::CMatrix;
pub use mesh::{CompressionChannel, GateParam, MeshNetwork, Role, Topology};
pub use metrics::MetricReport;
pub use statevec::StateVector;
pub use training::{TrainingConfig, TrainingHistory};
