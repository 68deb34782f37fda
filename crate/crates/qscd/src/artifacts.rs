//! Files written by a run.

use std::fmt::Write as _;

use qscd_core::training::{export_physical, IterationRecord, TrainingHistory};
use qscd_core::{MeshNetwork, MetricReport};
use serde::Serialize;

pub const HISTORY_HEADER: &str = "iter,loss,loss_inv,e_amp,e_pha,grad_norm_theta_enc,grad_norm_theta_dec,\
grad_norm_alpha_enc,grad_norm_alpha_dec,wall_ms";

fn history_row(out: &mut String, r: &IterationRecord) {
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        r.iter,
        r.loss,
        r.loss_inv,
        r.e_amp,
        r.e_pha,
        r.grad_theta_enc,
        r.grad_theta_dec,
        r.grad_alpha_enc,
        r.grad_alpha_dec,
        r.wall_ms
    )
    .unwrap();
}

/// One row per completed iteration.
pub fn history_csv(h: &TrainingHistory) -> String {
    let mut out = format!("{HISTORY_HEADER}\n");
    for r in &h.records {
        history_row(&mut out, r);
    }
    out
}

#[derive(Serialize)]
struct MetricsJson {
    similarity: f64,
    mean_fidelity: f64,
    e_amp: f64,
    e_pha: f64,
    e_amp_mean: f64,
    e_pha_mean: f64,
    e_complex: [f64; 2],
    loss: f64,
    loss_inv: Option<f64>,
    per_sample: Vec<[f64; 3]>,
}

/// Single-line JSON; `per_sample` holds `[fidelity, amp_err, pha_err]`.
pub fn metrics_json(report: &MetricReport) -> String {
    let doc = MetricsJson {
        similarity: report.similarity,
        mean_fidelity: report.mean_fidelity,
        e_amp: report.e_amp,
        e_pha: report.e_pha,
        e_amp_mean: report.e_amp_mean,
        e_pha_mean: report.e_pha_mean,
        e_complex: [report.e_complex.re, report.e_complex.im],
        loss: report.loss,
        loss_inv: report.loss_inv,
        per_sample: report
            .per_sample
            .iter()
            .map(|s| [s.fidelity, s.amp_err, s.pha_err])
            .collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("metrics serialize");
    s.push('\n');
    s
}

/// Loss curve including the starting point as iteration 0.
pub fn loss_curve_csv(h: &TrainingHistory) -> String {
    let mut out = String::from("iter,loss,loss_inv,e_amp,e_pha\n");
    for r in std::iter::once(&h.initial).chain(&h.records) {
        writeln!(out, "{},{},{},{},{}", r.iter, r.loss, r.loss_inv, r.e_amp, r.e_pha).unwrap();
    }
    out
}

const THETA_BINS: usize = 18;
const ALPHA_BINS: usize = 36;

fn histogram(out: &mut String, network: &str, param: &str, values: &[f64], hi: f64, bins: usize) {
    let mut counts = vec![0usize; bins];
    for v in values {
        let b = ((v / hi) * bins as f64).floor() as usize;
        counts[b.min(bins - 1)] += 1;
    }
    let width = hi / bins as f64;
    for (i, c) in counts.iter().enumerate() {
        writeln!(out, "{network},{param},{},{},{c}", i as f64 * width, (i + 1) as f64 * width).unwrap();
    }
}

/// Histograms of the gate parameters after folding into the physical ranges.
pub fn param_hist_csv(enc: &MeshNetwork, dec: &MeshNetwork) -> String {
    use std::f64::consts::{FRAC_PI_2, TAU};
    let mut out = String::from("network,param,bin_start,bin_end,count\n");
    for (name, net) in [("encoder", enc), ("decoder", dec)] {
        let folded = export_physical(net).net;
        let thetas: Vec<f64> = folded.gates().map(|g| g.theta).collect();
        let alphas: Vec<f64> = folded.gates().map(|g| g.alpha).collect();
        histogram(&mut out, name, "theta", &thetas, FRAC_PI_2, THETA_BINS);
        histogram(&mut out, name, "alpha", &alphas, TAU, ALPHA_BINS);
    }
    out
}
