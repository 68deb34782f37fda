//! Losses, gradients and the gradient-descent loop.

mod analytic;
mod config;
mod exec;
mod fd;
mod loss;
mod physical;
mod pipeline;
mod train;

pub use analytic::{analytic_gradient, objective};
pub use config::{DecoderMode, FdScheme, GradientSource, LossKind, LossScale, TrainingConfig};
pub use exec::{Executor, Sequential};
pub use fd::fd_gradient;
pub use loss::{loss_inv, loss_reconstruction};
pub use physical::{export_physical, PhysicalExport, ScreenSide};
pub use train::{evaluate, train, train_with, IterationRecord, TrainHooks, TrainingHistory};
