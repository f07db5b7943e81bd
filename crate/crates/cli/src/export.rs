//! Deterministic CSV/JSON writers. Every figure-reproduction file starts
//! with a provenance header naming the exact parameters and grid.

use std::fmt::Write as _;

use kmm_core::model::{ModeSet, ModelParams};
use kmm_core::spectra::{CorrelationFunction, DensityGrid};
use serde::Serialize;

/// Output format, inferred from `--format` or the output extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn provenance(command: &str, params: &ModelParams, extra: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# kmm {command}");
    let _ = writeln!(
        s,
        "# epsilon={} b={} M={} B={}{}",
        params.epsilon(),
        params.b(),
        params.m(),
        params.b_ratio(),
        if extra.is_empty() { String::new() } else { format!(" {extra}") }
    );
    s
}

/// Serde wrapper reused by every JSON artifact: provenance + payload.
#[derive(Serialize)]
pub struct JsonArtifact<T: Serialize> {
    pub command: String,
    pub epsilon: f64,
    pub b: f64,
    pub m: usize,
    pub b_ratio: f64,
    #[serde(flatten)]
    pub payload: T,
}

pub fn json_artifact<T: Serialize>(
    command: &str,
    params: &ModelParams,
    payload: T,
) -> anyhow::Result<String> {
    let artifact = JsonArtifact {
        command: command.to_string(),
        epsilon: params.epsilon(),
        b: params.b(),
        m: params.m(),
        b_ratio: params.b_ratio(),
        payload,
    };
    let mut s = serde_json::to_string_pretty(&artifact)?;
    s.push('\n');
    Ok(s)
}

/// Mode-grid CSV: both sectors, one row per mode.
pub fn modes_csv(params: &ModelParams, alpha: &ModeSet, beta: &ModeSet) -> String {
    let mut s = provenance("dispersion", params, "");
    s.push_str("sector,index,k,e0,e,theta,occupied_in_vacuum\n");
    for (name, set) in [("periodic", alpha), ("antiperiodic", beta)] {
        for (i, m) in set.modes().iter().enumerate() {
            let _ = writeln!(
                s,
                "{name},{i},{},{},{},{},{}",
                m.k, m.e0, m.e, m.theta, m.occupied_in_vacuum
            );
        }
    }
    s
}

/// Density CSV: `(k_center, E_center, density)` rows over the full grid, in
/// row-major order.
pub fn density_csv(params: &ModelParams, grid: &DensityGrid) -> String {
    let spec = &grid.spec;
    let extra = format!(
        "manifold={} grid={}x{} k=[{},{}) E=[{},{}) tuples={} total_strength={}",
        grid.manifold,
        spec.n_k,
        spec.n_e,
        spec.k_min,
        spec.k_max,
        spec.e_min,
        spec.e_max,
        grid.tuple_count,
        grid.total_strength
    );
    let mut s = provenance("density", params, &extra);
    s.reserve(grid.bins.len() * 24);
    s.push_str("k_center,e_center,density\n");
    for ik in 0..spec.n_k {
        let k = spec.k_min + (ik as f64 + 0.5) * spec.dk();
        for ie in 0..spec.n_e {
            let e = spec.e_min + (ie as f64 + 0.5) * spec.de();
            let _ = writeln!(s, "{k},{e},{}", grid.bin(ik, ie));
        }
    }
    s
}

#[derive(Serialize)]
pub struct DensityJson {
    pub manifold: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub n_k: usize,
    pub e_min: f64,
    pub e_max: f64,
    pub n_e: usize,
    pub tuple_count: u128,
    pub total_strength: f64,
    /// Row-major `n_k x n_e` densities.
    pub bins: Vec<f64>,
}

pub fn density_json(params: &ModelParams, grid: &DensityGrid) -> anyhow::Result<String> {
    json_artifact(
        "density",
        params,
        DensityJson {
            manifold: grid.manifold,
            k_min: grid.spec.k_min,
            k_max: grid.spec.k_max,
            n_k: grid.spec.n_k,
            e_min: grid.spec.e_min,
            e_max: grid.spec.e_max,
            n_e: grid.spec.n_e,
            tuple_count: grid.tuple_count,
            total_strength: grid.total_strength,
            bins: grid.bins.clone(),
        },
    )
}

pub fn correlations_csv(params: &ModelParams, c: &CorrelationFunction) -> String {
    let extra = format!(
        "correlation_length={} sum_rule={}",
        c.correlation_length, c.sum_rule
    );
    let mut s = provenance("correlations", params, &extra);
    s.push_str("m,c\n");
    for (m, v) in c.values.iter().enumerate() {
        let _ = writeln!(s, "{m},{v}");
    }
    s
}
