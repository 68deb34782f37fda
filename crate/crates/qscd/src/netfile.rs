//! Plain-text mesh files.
//!
//! ```text
//! 8 cross 2 encoder
//! 0 0 1.0471975511965976e0 2.0943951023931953e0
//! 0 2 1.0471975511965976e0 2.0943951023931953e0
//! ...
//! ```
//!
//! The header is `n_modes topology n_layers role`; each further line is one
//! gate as `layer k theta alpha` in application order, with 17 significant
//! digits so parameters round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qscd_core::mesh::GateParam;
use qscd_core::{MeshNetwork, Role, Topology};

use crate::error::{Result, RunError};

pub fn topology_name(t: Topology) -> &'static str {
    match t {
        Topology::Cross => "cross",
        Topology::Order => "order",
    }
}

pub fn parse_topology(s: &str) -> Option<Topology> {
    match s {
        "cross" => Some(Topology::Cross),
        "order" => Some(Topology::Order),
        _ => None,
    }
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Encoder => "encoder",
        Role::Decoder => "decoder",
        Role::InverseOfEncoder => "inverse_of_encoder",
    }
}

fn parse_role(s: &str) -> Option<Role> {
    match s {
        "encoder" => Some(Role::Encoder),
        "decoder" => Some(Role::Decoder),
        "inverse_of_encoder" => Some(Role::InverseOfEncoder),
        _ => None,
    }
}

pub fn render(net: &MeshNetwork) -> String {
    let mut out = format!(
        "{} {} {} {}\n",
        net.n_modes(),
        topology_name(net.topology()),
        net.n_layers(),
        role_name(net.role())
    );
    for (l, layer) in net.layers().iter().enumerate() {
        for g in layer {
            writeln!(out, "{l} {} {:.16e} {:.16e}", g.k, g.theta, g.alpha).unwrap();
        }
    }
    out
}

pub fn parse(text: &str) -> Result<MeshNetwork> {
    let bad = |line: usize, msg: &str| RunError::Data(format!("network file line {}: {msg}", line + 1));
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| bad(0, "missing header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 {
        return Err(bad(hl, "header must be `n_modes topology n_layers role`"));
    }
    let n_modes: usize = h[0].parse().map_err(|_| bad(hl, "bad n_modes"))?;
    let topology = parse_topology(h[1]).ok_or_else(|| bad(hl, "unknown topology"))?;
    let n_layers: usize = h[2].parse().map_err(|_| bad(hl, "bad n_layers"))?;
    let role = parse_role(h[3]).ok_or_else(|| bad(hl, "unknown role"))?;

    let mut layers: Vec<Vec<GateParam>> = vec![Vec::new(); n_layers];
    for (i, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(bad(i, "expected `layer k theta alpha`"));
        }
        let layer: usize = f[0].parse().map_err(|_| bad(i, "bad layer index"))?;
        let k: usize = f[1].parse().map_err(|_| bad(i, "bad mode index"))?;
        let theta: f64 = f[2].parse().map_err(|_| bad(i, "bad theta"))?;
        let alpha: f64 = f[3].parse().map_err(|_| bad(i, "bad alpha"))?;
        if layer >= n_layers {
            return Err(bad(i, "layer index beyond header count"));
        }
        if !theta.is_finite() || !alpha.is_finite() {
            return Err(bad(i, "non-finite parameter"));
        }
        layers[layer].push(GateParam::new(k, theta, alpha));
    }
    MeshNetwork::from_layers(n_modes, topology, role, layers).map_err(RunError::data)
}

pub fn save(path: &Path, net: &MeshNetwork) -> Result<()> {
    fs::write(path, render(net)).map_err(RunError::io(path))
}

pub fn load(path: &Path) -> Result<MeshNetwork> {
    let text = fs::read_to_string(path).map_err(RunError::io(path))?;
    parse(&text).map_err(|e| RunError::Data(format!("{}: {e}", path.display())))
}
