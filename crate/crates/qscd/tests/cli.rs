use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qscd::netfile;

fn qscd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qscd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_spec(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("exp.spec");
    fs::write(&path, body).unwrap();
    path
}

const SMALL: &str = "name = small\ndataset = complex-gen\ngen_n = 4\ngen_m = 6\ngen_d = 2\n\
                     gen_noise = 0.1\nseed = 3\nl_e = 2\nl_d = 2\nd = 2\niterations = 1\noutput_dir = out\n";

fn metrics(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn version() {
    let out = qscd(&["version"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("qscd {}\n", env!("CARGO_PKG_VERSION")));
}

#[test]
fn gen_data_letters() {
    let out = qscd(&["gen-data", "letters"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# 5 5 26"));
    assert_eq!(lines.count(), 26);
}

#[test]
fn gen_data_complex_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let args = ["gen-data", "complex", "--n", "8", "--m", "50", "--mode", "subspace", "--d", "4", "--seed", "7"];
        let mut args: Vec<&str> = args.to_vec();
        args.extend(["--out", p.to_str().unwrap()]);
        assert!(qscd(&args).status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert!(text.starts_with("# 8 50 7 subspace(d=4,eps=0.05)\n"));
    assert_eq!(text.lines().count(), 51);
    assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 16);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn gen_data_rejects_bad_params() {
    let out = qscd(&["gen-data", "complex", "--n", "8", "--d", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn one_iteration_run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), SMALL);
    let out = qscd(&["run", spec.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = dir.path().join("out");
    for f in ["encoder.net", "decoder.net", "history.csv", "metrics.json", "reconstructions.csv", "manifest.txt"] {
        assert!(run.join(f).is_file(), "{f} missing");
    }
    let history = fs::read_to_string(run.join("history.csv")).unwrap();
    assert_eq!(history.lines().count(), 2);
    assert!(history.starts_with("iter,loss,loss_inv,e_amp,e_pha,grad_norm_theta_enc,"));
    assert!(!run.join("plots").exists());
    let recon = fs::read_to_string(run.join("reconstructions.csv")).unwrap();
    assert!(recon.starts_with("# 4 6 3 reconstruction\n"));
}

#[test]
fn image_csv_run_with_plots() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("img.csv"), "# 2 2 3\n1,0,0,0.5\n0,1,0.5,0\n0.2,0.2,1,1\n").unwrap();
    let spec = write_spec(
        dir.path(),
        "dataset = image-csv\ndataset_path = img.csv\nl_e = 2\nl_d = 2\nd = 2\niterations = 3\n\
         train_alpha = false\noutput_dir = out\nemit_plots_data = true\n",
    );
    let out = qscd(&["run", spec.to_str().unwrap(), "-q"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = dir.path().join("out");
    let recon = fs::read_to_string(run.join("reconstructions.csv")).unwrap();
    assert!(recon.starts_with("# 2 2 3\n"));
    for line in recon.lines().skip(1) {
        assert!(line.split(',').all(|v| (0.0..=1.0).contains(&v.parse::<f64>().unwrap())));
    }
    let curve = fs::read_to_string(run.join("plots/loss_curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 1 + 4);
    assert!(run.join("plots/param_hist.csv").is_file());
}

#[test]
fn missing_dataset_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "dataset = complex-csv\ndataset_path = nowhere.csv\n");
    let out = qscd(&["run", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere.csv"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "dataset = letters\neta = -1\n");
    assert_eq!(qscd(&["run", spec.to_str().unwrap()]).status.code(), Some(2));
    let spec = write_spec(dir.path(), "dataset = letters\ncolour = blue\n");
    assert_eq!(qscd(&["run", spec.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qscd(&["run"]).status.code(), Some(2));
}

#[test]
fn rejected_photon_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.csv"), "# 4 1 0 handmade\n0,0,0,0,0,0,1,0\n").unwrap();
    let spec = write_spec(
        dir.path(),
        "dataset = complex-csv\ndataset_path = s.csv\ntopology = order\nl_e = 1\nl_d = 1\nd = 1\n\
         init_theta = 0\ninit_alpha = 0\niterations = 1\noutput_dir = out\n",
    );
    let out = qscd(&["run", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn eval_reproduces_run_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), &SMALL.replace("iterations = 1", "iterations = 4"));
    assert!(qscd(&["run", spec.to_str().unwrap(), "-q"]).status.success());
    let run = dir.path().join("out");
    fs::write(
        dir.path().join("data.csv"),
        qscd(&["gen-data", "complex", "--n", "4", "--m", "6", "--d", "2", "--eps", "0.1", "--seed", "3"]).stdout,
    )
    .unwrap();
    let out = qscd(&[
        "eval",
        "--enc",
        run.join("encoder.net").to_str().unwrap(),
        "--dec",
        run.join("decoder.net").to_str().unwrap(),
        "--data",
        dir.path().join("data.csv").to_str().unwrap(),
        "--d",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let evaluated: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let trained = metrics(&run.join("metrics.json"));
    for key in ["similarity", "mean_fidelity", "e_amp", "e_pha", "loss", "loss_inv"] {
        let (a, b) = (evaluated[key].as_f64().unwrap(), trained[key].as_f64().unwrap());
        assert!((a - b).abs() <= 1e-12, "{key}: {a} vs {b}");
    }
    let history = fs::read_to_string(run.join("history.csv")).unwrap();
    let last: Vec<f64> = history.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[1] - trained["loss"].as_f64().unwrap()).abs() <= 1e-12);
    assert!((last[3] - trained["e_amp"].as_f64().unwrap()).abs() <= 1e-12);
}

#[test]
fn eval_identity_meshes_lossless() {
    use qscd::qscd_core::{MeshNetwork, Role, Topology};
    let dir = tempfile::tempdir().unwrap();
    let enc = MeshNetwork::build(32, Topology::Cross, 2, Role::Encoder, (0.0, 0.0)).unwrap();
    netfile::save(&dir.path().join("e.net"), &enc).unwrap();
    netfile::save(&dir.path().join("d.net"), &enc.inverse()).unwrap();
    fs::write(dir.path().join("l.csv"), qscd(&["gen-data", "letters"]).stdout).unwrap();
    let p = |f: &str| dir.path().join(f).to_str().unwrap().to_string();
    let out_file = p("m.json");
    let out = qscd(&["eval", "--enc", &p("e.net"), "--dec", &p("d.net"), "--data", &p("l.csv"), "--d", "32", "--out", &out_file]);
    assert!(out.status.success());
    let m = metrics(Path::new(&out_file));
    assert!((m["similarity"].as_f64().unwrap() - 100.0).abs() < 1e-9);
}

#[test]
fn eval_dimension_mismatch_is_a_data_error() {
    use qscd::qscd_core::{MeshNetwork, Role, Topology};
    let dir = tempfile::tempdir().unwrap();
    let enc = MeshNetwork::build(8, Topology::Cross, 1, Role::Encoder, (0.0, 0.0)).unwrap();
    netfile::save(&dir.path().join("e.net"), &enc).unwrap();
    fs::write(dir.path().join("l.csv"), qscd(&["gen-data", "letters"]).stdout).unwrap();
    let p = |f: &str| dir.path().join(f).to_str().unwrap().to_string();
    let out = qscd(&["eval", "--enc", &p("e.net"), "--dec", &p("e.net"), "--data", &p("l.csv"), "--d", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn inverse_decoder_matches_mirror_training() {
    use qscd::qscd_core::MeshNetwork;
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        &SMALL.replace("iterations = 1", "iterations = 5\ndecoder_mode = mirror_inverse"),
    );
    assert!(qscd(&["run", spec.to_str().unwrap(), "-q"]).status.success());
    let run = dir.path().join("out");
    let enc: MeshNetwork = netfile::load(&run.join("encoder.net")).unwrap();
    netfile::save(&dir.path().join("inv.net"), &enc.inverse()).unwrap();
    fs::write(
        dir.path().join("data.csv"),
        qscd(&["gen-data", "complex", "--n", "4", "--m", "6", "--d", "2", "--eps", "0.1", "--seed", "3"]).stdout,
    )
    .unwrap();
    let p = |f: &Path| f.to_str().unwrap().to_string();
    let out = qscd(&[
        "eval",
        "--enc",
        &p(&run.join("encoder.net")),
        "--dec",
        &p(&dir.path().join("inv.net")),
        "--data",
        &p(&dir.path().join("data.csv")),
        "--d",
        "2",
    ]);
    assert!(out.status.success());
    let a: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let b = metrics(&run.join("metrics.json"));
    for key in ["mean_fidelity", "e_amp", "e_pha", "loss"] {
        assert!((a[key].as_f64().unwrap() - b[key].as_f64().unwrap()).abs() <= 1e-12, "{key}");
    }
}

#[test]
fn manifest_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), &SMALL.replace("iterations = 1", "iterations = 3"));
    assert!(qscd(&["run", spec.to_str().unwrap(), "-q"]).status.success());
    let first = dir.path().join("out");
    let manifest = first.join("manifest.txt");
    let text = fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("# spec_sha256 = "));
    let second = dir.path().join("again");
    let out = qscd(&["run", manifest.to_str().unwrap(), "--output-dir", second.to_str().unwrap(), "-q"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["history.csv", "metrics.json", "encoder.net", "decoder.net", "reconstructions.csv"] {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(second.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), &SMALL.replace("iterations = 1", "iterations = 3"));
    let s = spec.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(qscd(&["--threads", "1", "run", s, "--output-dir", a.to_str().unwrap(), "-q"]).status.success());
    assert!(qscd(&["run", s, "--threads", "3", "--output-dir", b.to_str().unwrap(), "-q"]).status.success());
    assert_eq!(fs::read(a.join("history.csv")).unwrap(), fs::read(b.join("history.csv")).unwrap());
}
