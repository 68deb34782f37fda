use alloc::format;

use crate::error::{Error, Result};
use crate::mesh::{Topology, DEFAULT_INIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecoderMode {
    /// Decoder has its own parameters, updated from the same loss evaluation.
    Trained,
    /// Decoder is the adjoint of the encoder, rebuilt every iteration.
    MirrorInverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LossKind {
    /// Σ_m Σ_n |Ψ_mn − ψ_mn|².
    Reconstruction,
    /// Mean probability discarded by the channel.
    InvProbability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FdScheme {
    /// (L(p + Δ) − L(p)) / Δ; loses about half the significant digits at Δ = 1e-8.
    Forward,
    /// (L(p + Δ) − L(p − Δ)) / 2Δ.
    Central,
}

impl FdScheme {
    pub fn default_delta(self) -> f64 {
        match self {
            FdScheme::Forward => 1e-8,
            FdScheme::Central => 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradientSource {
    FiniteDifference,
    Analytic,
}

/// Factor applied to the reconstruction sum before differentiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LossScale {
    /// ½·Σ|Ψ − ψ|².
    HalfSum,
    /// Σ|Ψ − ψ|².
    Sum,
    /// Σ|Ψ − ψ|² / (M·N).
    MeanPerComponent,
}

impl LossScale {
    pub fn factor(self, samples: usize, n_modes: usize) -> f64 {
        match self {
            LossScale::HalfSum => 0.5,
            LossScale::Sum => 1.0,
            LossScale::MeanPerComponent => 1.0 / (samples * n_modes) as f64,
        }
    }
}

/// Hyperparameters of one training run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingConfig {
    pub topology: Topology,
    pub l_e: usize,
    pub l_d: usize,
    pub d: usize,
    pub eta: f64,
    pub iterations: usize,
    pub delta: f64,
    pub init: (f64, f64),
    pub decoder_mode: DecoderMode,
    pub loss_kind: LossKind,
    pub loss_scale: LossScale,
    pub fd_scheme: FdScheme,
    pub gradient: GradientSource,
    pub train_alpha: bool,
    pub freeze_encoder: bool,
    pub freeze_decoder: bool,
    /// Seed of the dataset generator; training itself draws no randomness.
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            topology: Topology::Cross,
            l_e: 10,
            l_d: 10,
            d: 4,
            eta: 0.01,
            iterations: 300,
            delta: FdScheme::Central.default_delta(),
            init: DEFAULT_INIT,
            decoder_mode: DecoderMode::Trained,
            loss_kind: LossKind::Reconstruction,
            loss_scale: LossScale::HalfSum,
            fd_scheme: FdScheme::Central,
            gradient: GradientSource::FiniteDifference,
            train_alpha: true,
            freeze_encoder: false,
            freeze_decoder: false,
            seed: 0,
        }
    }
}

impl TrainingConfig {
    /// 5×5 letters: N = 32, l_E = 20, l_D = 25, d = 4, θ only.
    pub fn letters() -> Self {
        Self {
            l_e: 20,
            l_d: 25,
            iterations: 300,
            train_alpha: false,
            ..Self::default()
        }
    }

    /// Complex states: N = 8, l_E = 10, l_D = 12, d = 4, θ and α.
    pub fn complex_states() -> Self {
        Self {
            l_e: 10,
            l_d: 12,
            iterations: 500,
            train_alpha: true,
            seed: 7,
            ..Self::default()
        }
    }

    pub fn validate(&self, n_modes: usize) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidParams(msg));
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return bad(format!("eta must be positive, got {}", self.eta));
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if self.d == 0 || self.d > n_modes {
            return bad(format!("d = {} must lie in 1..={n_modes}", self.d));
        }
        if self.l_e == 0 || (self.decoder_mode == DecoderMode::Trained && self.l_d == 0) {
            return bad("layer counts must be at least 1".into());
        }
        if !self.init.0.is_finite() || !self.init.1.is_finite() {
            return bad("initial gate parameters must be finite".into());
        }
        self.topology.layer_modes(n_modes).map(|_| ())
    }
}
