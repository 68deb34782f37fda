use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vector has no entry with magnitude above 1e-15")]
    ZeroVector,
    #[error("image has no nonzero pixel")]
    ZeroImage,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("gate on modes ({k}, {}) does not fit {n_modes} modes", k + 1)]
    IndexOutOfRange { k: usize, n_modes: usize },
    #[error("cross topology needs an even number of modes, got {0}")]
    OddModesForCross(usize),
    #[error("sample {sample} has kept probability {kept_prob:e}; nothing reaches the retained modes")]
    FullyRejected { sample: usize, kept_prob: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid network layout: {0}")]
    InvalidLayout(String),
    #[error("loss became non-finite at iteration {iteration}")]
    NonFiniteLoss { iteration: usize },
}
