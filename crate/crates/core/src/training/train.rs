use alloc::vec::Vec;

use super::config::{DecoderMode, GradientSource, LossKind, TrainingConfig};
use super::exec::{Executor, Sequential};
use super::fd::pipeline_fd_gradient;
use super::pipeline::{batches, Objective, Pass, Pipeline};
use crate::error::{Error, Result};
use crate::metrics::{amp_phase_errors, MetricReport};
use crate::mesh::{CompressionChannel, MeshNetwork, Role, StateBatch};
use crate::statevec::StateVector;

/// State of the run after one parameter update (iteration 0 is the start).
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// Mean squared error per component, or the mean discarded probability
    /// when that is the objective.
    pub loss: f64,
    pub loss_inv: f64,
    pub e_amp: f64,
    pub e_pha: f64,
    /// Mean |g| over the trainable coordinates of each group, taken from the
    /// gradient that produced this update.
    pub grad_theta_enc: f64,
    pub grad_theta_dec: f64,
    pub grad_alpha_enc: f64,
    pub grad_alpha_dec: f64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingHistory {
    pub initial: IterationRecord,
    pub records: Vec<IterationRecord>,
    pub encoder_params: Vec<f64>,
    pub decoder_params: Vec<f64>,
}

impl TrainingHistory {
    pub fn last(&self) -> &IterationRecord {
        self.records.last().unwrap_or(&self.initial)
    }
}

/// Optional services for [`train_with`].
pub struct TrainHooks<'a> {
    pub executor: &'a dyn Executor,
    /// Milliseconds since an arbitrary origin.
    pub clock_ms: Option<&'a dyn Fn() -> f64>,
    pub on_iteration: Option<&'a mut dyn FnMut(&IterationRecord)>,
}

impl Default for TrainHooks<'_> {
    fn default() -> Self {
        Self {
            executor: &Sequential,
            clock_ms: None,
            on_iteration: None,
        }
    }
}

struct Model {
    cfg: TrainingConfig,
    ch: CompressionChannel,
    enc: MeshNetwork,
    dec: MeshNetwork,
    scale: f64,
}

impl Model {
    fn tied(&self) -> bool {
        self.cfg.decoder_mode == DecoderMode::MirrorInverse
    }

    fn compile(&self) -> Pipeline {
        let objective = Objective {
            kind: self.cfg.loss_kind,
            scale: self.scale,
        };
        Pipeline::new(&self.enc, &self.dec, &self.ch, objective, self.tied())
    }

    fn trainable(&self) -> Vec<bool> {
        let n_enc = self.enc.n_params();
        let n_total = n_enc + self.dec.n_params();
        (0..n_total)
            .map(|c| {
                let frozen = if c < n_enc {
                    self.cfg.freeze_encoder
                } else {
                    self.tied() || self.cfg.freeze_decoder
                };
                !frozen && (c % 2 == 0 || self.cfg.train_alpha)
            })
            .collect()
    }

    fn step(&mut self, grad: &[f64], trainable: &[bool]) -> Result<()> {
        let n_enc = self.enc.n_params();
        let eta = self.cfg.eta;
        let update = |params: Vec<f64>, offset: usize| -> Vec<f64> {
            params
                .into_iter()
                .enumerate()
                .map(|(i, p)| if trainable[offset + i] { p - eta * grad[offset + i] } else { p })
                .collect()
        };
        let enc_params = update(self.enc.params(), 0);
        self.enc.set_params(&enc_params)?;
        if self.tied() {
            self.dec = self.enc.inverse();
        } else {
            let dec_params = update(self.dec.params(), n_enc);
            self.dec.set_params(&dec_params)?;
        }
        Ok(())
    }
}

fn group_means(grad: &[f64], trainable: &[bool], n_enc: usize) -> [f64; 4] {
    // θ enc, θ dec, α enc, α dec
    let mut sums = [0.0; 4];
    let mut counts = [0usize; 4];
    for (c, (g, &t)) in grad.iter().zip(trainable).enumerate() {
        if !t {
            continue;
        }
        let idx = usize::from(c >= n_enc) + 2 * (c % 2);
        sums[idx] += g.abs();
        counts[idx] += 1;
    }
    let mut out = [0.0; 4];
    for i in 0..4 {
        if counts[i] > 0 {
            out[i] = sums[i] / counts[i] as f64;
        }
    }
    out
}

fn record(
    iter: usize,
    pass: &Pass,
    targets: &[StateVector],
    kind: LossKind,
    grads: [f64; 4],
    wall_ms: f64,
) -> Result<IterationRecord> {
    let n = pass.output().dim();
    let outputs = pass.output().to_states();
    let (e_amp, e_pha) = amp_phase_errors(&outputs, targets)?;
    let loss = match kind {
        LossKind::Reconstruction => {
            super::loss_reconstruction(&outputs, targets)? / (targets.len() * n) as f64
        }
        LossKind::InvProbability => pass.loss,
    };
    if !loss.is_finite() {
        return Err(Error::NonFiniteLoss { iteration: iter });
    }
    Ok(IterationRecord {
        iter,
        loss,
        loss_inv: pass.loss_inv(),
        e_amp,
        e_pha,
        grad_theta_enc: grads[0],
        grad_theta_dec: grads[1],
        grad_alpha_enc: grads[2],
        grad_alpha_dec: grads[3],
        wall_ms,
    })
}

/// Trains with [`TrainHooks::default`].
pub fn train(
    cfg: &TrainingConfig,
    inputs: &[StateVector],
    targets: &[StateVector],
) -> Result<(MeshNetwork, MeshNetwork, TrainingHistory)> {
    train_with(cfg, inputs, targets, TrainHooks::default())
}

/// Full-batch gradient descent on encoder and decoder gate parameters.
pub fn train_with(
    cfg: &TrainingConfig,
    inputs: &[StateVector],
    targets: &[StateVector],
    mut hooks: TrainHooks<'_>,
) -> Result<(MeshNetwork, MeshNetwork, TrainingHistory)> {
    let n = inputs
        .first()
        .map(StateVector::dim)
        .ok_or_else(|| Error::InvalidParams("the dataset is empty".into()))?;
    cfg.validate(n)?;
    let ch = CompressionChannel::new(n, cfg.d)?;
    let enc = MeshNetwork::build(n, cfg.topology, cfg.l_e, Role::Encoder, cfg.init)?;
    let dec = match cfg.decoder_mode {
        DecoderMode::Trained => MeshNetwork::build(n, cfg.topology, cfg.l_d, Role::Decoder, cfg.init)?,
        DecoderMode::MirrorInverse => enc.inverse(),
    };
    let (x, t) = batches(&enc, &dec, &ch, inputs, targets)?;
    let mut model = Model {
        scale: cfg.loss_scale.factor(inputs.len(), n),
        cfg: cfg.clone(),
        ch,
        enc,
        dec,
    };
    let trainable = model.trainable();
    let n_enc = model.enc.n_params();
    let clock = |start: f64| hooks.clock_ms.map_or(0.0, |c| c() - start);
    let start = clock(0.0);

    let mut pipe = model.compile();
    let mut pass = pipe.run(&x, &t)?;
    let initial = record(0, &pass, targets, cfg.loss_kind, [0.0; 4], 0.0)?;
    let mut records = Vec::with_capacity(cfg.iterations);
    for iter in 1..=cfg.iterations {
        let grad = gradient(&model, &pipe, &pass, &t, &trainable, hooks.executor)?;
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFiniteLoss { iteration: iter });
        }
        model.step(&grad, &trainable)?;
        pipe = model.compile();
        pass = pipe.run(&x, &t)?;
        let rec = record(
            iter,
            &pass,
            targets,
            cfg.loss_kind,
            group_means(&grad, &trainable, n_enc),
            clock(start),
        )?;
        if let Some(cb) = hooks.on_iteration.as_mut() {
            cb(&rec);
        }
        records.push(rec);
    }
    let history = TrainingHistory {
        initial,
        records,
        encoder_params: model.enc.params(),
        decoder_params: model.dec.params(),
    };
    Ok((model.enc, model.dec, history))
}

fn gradient(
    model: &Model,
    pipe: &Pipeline,
    pass: &Pass,
    targets: &StateBatch,
    trainable: &[bool],
    exec: &dyn Executor,
) -> Result<Vec<f64>> {
    match model.cfg.gradient {
        GradientSource::FiniteDifference => pipeline_fd_gradient(
            pipe,
            pass,
            targets,
            model.cfg.fd_scheme,
            model.cfg.delta,
            trainable,
            exec,
        ),
        GradientSource::Analytic => {
            let mut g = pipe.backward(pass, targets);
            for (gi, &t) in g.iter_mut().zip(trainable) {
                if !t {
                    *gi = 0.0;
                }
            }
            Ok(g)
        }
    }
}

/// Inference pass over a dataset: reconstructions plus their metrics.
/// `support` is the number of leading components carrying data.
pub fn evaluate(
    enc: &MeshNetwork,
    dec: &MeshNetwork,
    ch: &CompressionChannel,
    inputs: &[StateVector],
    targets: &[StateVector],
    support: usize,
) -> Result<(Vec<StateVector>, MetricReport)> {
    let (x, t) = batches(enc, dec, ch, inputs, targets)?;
    let objective = Objective {
        kind: LossKind::Reconstruction,
        scale: 1.0,
    };
    let pass = Pipeline::new(enc, dec, ch, objective, false).run(&x, &t)?;
    let outputs = pass.output().to_states();
    let mut report = MetricReport::compare(&outputs, targets, support)?;
    report.loss_inv = Some(pass.loss_inv());
    Ok((outputs, report))
}
