//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line and then
//! asserts the same condition. Run with `--nocapture` to see the lines.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::{Path, PathBuf};
use std::process::Command;

use qscd::qscd_core::codec::{gen_complex_states, GenMode};
use qscd::qscd_core::statevec::fidelity;
use qscd::qscd_core::training::{
    analytic_gradient, evaluate, fd_gradient, loss_reconstruction, objective, train, DecoderMode, FdScheme,
    GradientSource, LossKind, TrainingConfig,
};
use qscd::qscd_core::{CompressionChannel, MeshNetwork, Role, StateVector, Topology};
use qscd::run::{run_spec_file, RunOptions, RunOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, title: &str, pass: bool, detail: &str) -> bool {
    println!("[{}] criterion {id} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run_preset(name: &str, out: &Path) -> RunOutcome {
    let opts = RunOptions {
        threads: None,
        output_dir: Some(out.to_path_buf()),
        quiet: true,
    };
    run_spec_file(&preset(name), &opts).expect("preset run succeeds")
}

fn random_net(n: usize, topo: Topology, layers: usize, role: Role, rng: &mut ChaCha8Rng) -> MeshNetwork {
    let mut net = MeshNetwork::build(n, topo, layers, role, (0.0, 0.0)).unwrap();
    let p: Vec<f64> = (0..net.n_params()).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
    net.set_params(&p).unwrap();
    net
}

const LETTERS_MIN_SIMILARITY: f64 = 95.0;
const LETTERS_MAX_LOSS: f64 = 0.02;
const LETTERS_WINDOW: usize = 50;
const LETTERS_WINDOW_NOISE: f64 = 1e-3;

#[test]
fn criterion_1_letters_reconstruction() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_preset("letters.spec", dir.path());
    let losses: Vec<f64> = run.history.records.iter().map(|r| r.loss).collect();
    assert_eq!(losses.len(), 300);
    let tail = &losses[losses.len() - LETTERS_WINDOW..];
    let tail_monotone = tail.windows(2).all(|w| w[1] <= w[0] + LETTERS_WINDOW_NOISE);
    let windows_descend = losses
        .windows(LETTERS_WINDOW + 1)
        .all(|w| w[LETTERS_WINDOW] <= w[0] + LETTERS_WINDOW_NOISE);
    let r = &run.report;
    let checks = [
        r.similarity >= LETTERS_MIN_SIMILARITY,
        r.loss <= LETTERS_MAX_LOSS,
        tail_monotone && windows_descend,
    ];
    let pass = checks.iter().all(|&c| c);
    verdict(
        1,
        "letters reconstruction",
        pass,
        &format!(
            "similarity {:.3}% (need >= {LETTERS_MIN_SIMILARITY}) [{}], loss {:.5} (need <= {LETTERS_MAX_LOSS}) [{}], \
             trailing {LETTERS_WINDOW}-iteration descent [{}]; 1 - loss = {:.3}%, mean fidelity {:.4}",
            r.similarity,
            if checks[0] { "ok" } else { "miss" },
            r.loss,
            if checks[1] { "ok" } else { "miss" },
            if checks[2] { "ok" } else { "miss" },
            100.0 * (1.0 - r.loss),
            r.mean_fidelity,
        ),
    );
    assert!(checks[1], "final loss {}", r.loss);
    assert!(checks[2], "loss not descending over trailing windows");
    assert!(checks[0], "similarity {:.3}% below {LETTERS_MIN_SIMILARITY}%", r.similarity);
}

const COMPLEX_MIN_FIDELITY: f64 = 0.97;
const COMPLEX_MAX_E_AMP: f64 = 1e-2;
const COMPLEX_MAX_E_PHA: f64 = 0.1;

#[test]
fn criterion_2_complex_state_compression() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_preset("complex.spec", dir.path());
    let counts = (run.encoder.n_params(), run.decoder.n_params());
    let r = &run.report;
    let pass = counts == (140, 168)
        && r.mean_fidelity >= COMPLEX_MIN_FIDELITY
        && r.e_amp_mean <= COMPLEX_MAX_E_AMP
        && r.e_pha_mean <= COMPLEX_MAX_E_PHA;
    verdict(
        2,
        "complex-state compression",
        pass,
        &format!(
            "parameters {}+{}, mean fidelity {:.5} (need >= {COMPLEX_MIN_FIDELITY}), \
             E_amp per component {:.3e} (need <= {COMPLEX_MAX_E_AMP}), E_pha per component {:.3e} \
             (need <= {COMPLEX_MAX_E_PHA}); summed E_amp {:.4}, summed E_pha {:.4}",
            counts.0, counts.1, r.mean_fidelity, r.e_amp_mean, r.e_pha_mean, r.e_amp, r.e_pha
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_3_unitarity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_unitary, mut worst_forward) = (0.0f64, 0.0f64);
    let sizes = [2, 4, 8, 16];
    let depths = [1, 5, 20];
    let topologies = [Topology::Cross, Topology::Order];
    for i in 0..100 {
        let n = sizes[i % 4];
        let l = depths[(i / 4) % 3];
        let topo = topologies[(i / 12) % 2];
        let net = random_net(n, topo, l, Role::Encoder, &mut rng);
        let m = net.materialize();
        worst_unitary = worst_unitary.max(m.unitarity_defect());
        let amps: Vec<_> = (0..n)
            .map(|_| qscd::qscd_core::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let s = qscd::qscd_core::statevec::normalize(&amps).unwrap().0;
        let direct = net.forward(&s).unwrap();
        let via_matrix = m.mul_vec(s.amps()).unwrap();
        for (a, b) in direct.amps().iter().zip(&via_matrix) {
            worst_forward = worst_forward.max((a - b).norm());
        }
    }
    let pass = worst_unitary <= 1e-10 && worst_forward <= 1e-12;
    verdict(
        3,
        "unitarity",
        pass,
        &format!("max |M^dag M - I| {worst_unitary:.2e} (<= 1e-10), max forward vs matrix gap {worst_forward:.2e} (<= 1e-12)"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_gradient_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_rel = 0.0f64;
    let mut worst_abs = 0.0f64;
    let mut failures = 0;
    for case in 0..20u64 {
        let n = if case % 2 == 0 { 4 } else { 8 };
        let kind = if case % 4 < 2 { LossKind::Reconstruction } else { LossKind::InvProbability };
        let topo = if case % 3 == 0 { Topology::Order } else { Topology::Cross };
        let enc = random_net(n, topo, 1 + (case as usize % 3), Role::Encoder, &mut rng);
        let dec = random_net(n, topo, 1 + (case as usize % 2), Role::Decoder, &mut rng);
        let ch = CompressionChannel::new(n, n / 2).unwrap();
        let psi = gen_complex_states(3, n, GenMode::UniformRandom, 100 + case).unwrap();
        let exact = analytic_gradient(&enc, &dec, &ch, &psi, &psi, kind).unwrap();
        let split = enc.n_params();
        let mut params = enc.params();
        params.extend(dec.params());
        let loss = |p: &[f64]| {
            let (mut e, mut d) = (enc.clone(), dec.clone());
            e.set_params(&p[..split]).unwrap();
            d.set_params(&p[split..]).unwrap();
            objective(&e, &d, &ch, &psi, &psi, kind).unwrap()
        };
        let fd = fd_gradient(loss, &params, FdScheme::Central, 1e-6, None);
        for (a, f) in exact.iter().zip(&fd) {
            if a.abs() < 1e-6 {
                worst_abs = worst_abs.max((a - f).abs());
                failures += usize::from((a - f).abs() > 1e-8);
            } else {
                let rel = ((a - f) / a).abs();
                worst_rel = worst_rel.max(rel);
                failures += usize::from(rel > 1e-4);
            }
        }
    }
    let pass = failures == 0;
    verdict(
        4,
        "gradient oracle",
        pass,
        &format!("20 configs, worst relative error {worst_rel:.2e} (<= 1e-4), worst absolute error near zero {worst_abs:.2e} (<= 1e-8)"),
    );
    assert!(pass);
}

#[test]
fn criterion_5_lossless_regime() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_fidelity = 1.0f64;
    let mut worst_loss = 0.0f64;
    for (i, &n) in [2usize, 4, 8, 16, 32].iter().enumerate() {
        let enc = random_net(n, Topology::Cross, 6, Role::Encoder, &mut rng);
        let dec = enc.inverse();
        let ch = CompressionChannel::new(n, n).unwrap();
        let psi = gen_complex_states(20, n, GenMode::UniformRandom, 50 + i as u64).unwrap();
        let (out, _) = evaluate(&enc, &dec, &ch, &psi, &psi, n).unwrap();
        for (o, p) in out.iter().zip(&psi) {
            worst_fidelity = worst_fidelity.min(fidelity(p, o).unwrap());
        }
        worst_loss = worst_loss.max(loss_reconstruction(&out, &psi).unwrap());
    }
    let pass = worst_fidelity >= 1.0 - 1e-10 && worst_loss <= 1e-18;
    verdict(
        5,
        "lossless regime",
        pass,
        &format!("min fidelity 1 - {:.2e} (gap <= 1e-10), max reconstruction loss {worst_loss:.2e} (<= 1e-18)", 1.0 - worst_fidelity),
    );
    assert!(pass);
}

#[test]
fn criterion_6_compressibility_toy() {
    let h = FRAC_1_SQRT_2;
    let psi = vec![
        StateVector::from_real(&[h, 0.0, h, 0.0]),
        StateVector::from_real(&[0.0, h, 0.0, -h]),
    ];
    let cfg = TrainingConfig {
        topology: Topology::Cross,
        l_e: 4,
        d: 2,
        eta: 0.05,
        iterations: 2000,
        decoder_mode: DecoderMode::MirrorInverse,
        loss_kind: LossKind::InvProbability,
        ..TrainingConfig::default()
    };
    let oracle = TrainingConfig { gradient: GradientSource::Analytic, ..cfg.clone() };
    let (_, _, exact) = train(&oracle, &psi, &psi).unwrap();
    let (_, _, fd) = train(&cfg, &psi, &psi).unwrap();
    let first = fd.records.iter().find(|r| r.loss < 1e-3).map(|r| r.iter);
    let pass = exact.last().loss < 1e-3 && first.is_some();
    verdict(
        6,
        "compressibility toy",
        pass,
        &format!(
            "discarded probability {:.4} -> {:.2e}, first below 1e-3 at iteration {:?} of 2000; analytic-gradient run ends at {:.2e}",
            fd.initial.loss,
            fd.last().loss,
            first,
            exact.last().loss
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_probability_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for i in 0..1000u64 {
        let n = [2usize, 4, 8, 16][(i % 4) as usize];
        let topo = if i % 2 == 0 { Topology::Cross } else { Topology::Order };
        let net = random_net(n, topo, 1 + (i % 5) as usize, Role::Encoder, &mut rng);
        let d = rng.random_range(1..=n);
        let psi = gen_complex_states(1, n, GenMode::UniformRandom, i).unwrap().remove(0);
        let ch = CompressionChannel::new(n, d).unwrap();
        let (_, kept) = qscd::qscd_core::mesh::project(&net.forward(&psi).unwrap(), &ch).unwrap();
        // ⟨ψ|T†P₁T|ψ⟩ through the dense matrix.
        let t_psi = net.materialize().mul_vec(psi.amps()).unwrap();
        let discarded: f64 = t_psi[d..].iter().map(|a| a.norm_sqr()).sum();
        worst = worst.max((kept + discarded - 1.0).abs());
    }
    let pass = worst <= 1e-12;
    verdict(7, "probability conservation", pass, &format!("1000 triples, max |kept + discarded - 1| {worst:.2e} (<= 1e-12)"));
    assert!(pass);
}

#[test]
fn criterion_8_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let spec = preset("complex.spec");
    let outs: Vec<PathBuf> = ["a", "b"].iter().map(|s| dir.path().join(s)).collect();
    for out in &outs {
        let status = Command::new(env!("CARGO_BIN_EXE_qscd"))
            .args(["run", spec.to_str().unwrap(), "--quiet", "--output-dir", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let same = |f: &str| std::fs::read(outs[0].join(f)).unwrap() == std::fs::read(outs[1].join(f)).unwrap();
    let (history, metrics) = (same("history.csv"), same("metrics.json"));
    let pass = history && metrics;
    verdict(
        8,
        "determinism",
        pass,
        &format!("history.csv identical: {history}, metrics.json identical: {metrics}"),
    );
    assert!(pass);
}
