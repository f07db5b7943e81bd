//! Serde-facing molecule records and their mapping onto the core types.

use anyhow::{bail, Context};
use kmm_core::emulator::{self, MoleculeParams, Units};
use kmm_core::model::ModelParams;
use serde::{Deserialize, Serialize};

/// One molecule record as read from a JSON input file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoleculeRecord {
    /// `"debye_nm_khz"` (default) or `"si"`.
    #[serde(default = "default_units")]
    pub units: String,
    /// Optional label carried through to the output table.
    #[serde(default)]
    pub label: String,
    pub d: f64,
    pub r: f64,
    pub theta: f64,
    pub eta: f64,
    pub delta: f64,
    pub epsilon_e: f64,
    pub gamma_f: f64,
    pub x: f64,
}

fn default_units() -> String {
    "debye_nm_khz".to_string()
}

impl MoleculeRecord {
    pub fn to_params(&self) -> anyhow::Result<MoleculeParams> {
        let units = match self.units.as_str() {
            "debye_nm_khz" => Units::DebyeNmKilohertz,
            "si" => Units::Si,
            other => bail!("unknown unit system {other:?} (expected debye_nm_khz or si)"),
        };
        Ok(MoleculeParams {
            units,
            d: self.d,
            r: self.r,
            theta: self.theta,
            eta: self.eta,
            delta: self.delta,
            epsilon_e: self.epsilon_e,
            gamma_f: self.gamma_f,
            x: self.x,
        })
    }
}

/// One row of the emulator output table.
#[derive(Debug, Clone, Serialize)]
pub struct EmulatorRow {
    pub label: String,
    /// Site energy `ε` in the record's energy units.
    pub epsilon: f64,
    /// Coupling `b` in the record's energy units.
    pub b: f64,
    pub b_ratio: f64,
    pub m: usize,
    /// Closed-form collective decay rate, Hz.
    pub gamma_m_hz: f64,
    /// Finite-size decay rate from the chain's own oscillator strength, Hz.
    pub gamma_m_finite_hz: f64,
    /// `1/γ_M`, seconds.
    pub lifetime_s: f64,
    pub warnings: Vec<String>,
}

pub fn evaluate(record: &MoleculeRecord, m: usize) -> anyhow::Result<EmulatorRow> {
    let mol = record.to_params()?;
    mol.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    let b = emulator::coupling(&mol).map_err(|e| anyhow::anyhow!("{e}"))?;
    let params: ModelParams = emulator::chain_params(&mol, m)
        .map_err(|e| anyhow::anyhow!("{e}"))
        .context("molecule does not realize a valid chain")?;
    let gamma = emulator::decay_rate(&params, &mol).map_err(|e| anyhow::anyhow!("{e}"))?;
    let gamma_finite =
        emulator::decay_rate_finite(&params, &mol).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(EmulatorRow {
        label: record.label.clone(),
        epsilon: params.epsilon(),
        b,
        b_ratio: params.b_ratio(),
        m,
        gamma_m_hz: gamma,
        gamma_m_finite_hz: gamma_finite,
        lifetime_s: 1.0 / gamma,
        warnings: mol.warnings().iter().map(|s| s.to_string()).collect(),
    })
}
