//! Subcommand definitions and the pipeline orchestration.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use kmm_core::model::{self, ModeSet, ModelParams};
use kmm_core::spectra::{self, GridSpec, SpectrumEngine};
use kmm_core::Error as CoreError;

use crate::cache;
use crate::exit_codes;
use crate::export::{self, Format};
use crate::molecule::{self, MoleculeRecord};

#[derive(Parser, Debug)]
#[command(
    name = "kmm",
    version,
    about = "Exact linear spectroscopy of a dipole-coupled two-level chain"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cap on worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

/// Model parameters shared by most subcommands. `--B` sets the dimensionless
/// coupling and overrides `--b` via `b = -B ε / 2`.
#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Site excitation energy ε (energy unit of all outputs).
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    /// Nearest-neighbour coupling b (must be ≤ 0).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Dimensionless coupling B = 2|b|/ε; overrides --b.
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b_ratio: Option<f64>,
    /// Chain length.
    #[arg(long = "M")]
    pub m: usize,
}

impl ModelArgs {
    pub fn params(&self) -> anyhow::Result<ModelParams> {
        let b = match (self.b_ratio, self.b) {
            (Some(b_ratio), _) => -0.5 * b_ratio * self.epsilon,
            (None, Some(b)) => b,
            (None, None) => bail!("one of --b or --B is required"),
        };
        ModelParams::new(self.epsilon, b, self.m).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// csv or json; inferred from the output extension when omitted.
    #[arg(long)]
    pub format: Option<String>,
}

impl OutputArgs {
    fn format(&self, default: Format) -> anyhow::Result<Format> {
        if let Some(f) = &self.format {
            return match f.as_str() {
                "csv" => Ok(Format::Csv),
                "json" => Ok(Format::Json),
                other => bail!("unknown format {other:?} (expected csv or json)"),
            };
        }
        if let Some(path) = &self.output {
            match path.extension().and_then(|e| e.to_str()) {
                Some("csv") => return Ok(Format::Csv),
                Some("json") => return Ok(Format::Json),
                _ => {}
            }
        }
        Ok(default)
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.output {
            Some(path) => fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Wavenumber grids with dispersion, quasiparticle energy, and angle.
    Dispersion {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sector ground energies and the finite-size gap (mode sum and, for
    /// B > 1, the contour integral).
    Gap {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Total oscillator strength of the lowest transition plus the
    /// infinite-size closed form.
    Oscillator {
        #[command(flatten)]
        model: ModelArgs,
        /// Also break down per-manifold strengths up to this count.
        #[arg(long, default_value_t = 0)]
        max_manifold: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Per-manifold oscillator strengths (per molecule) and tuple counts.
    Manifolds {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 4)]
        max_manifold: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Momentum-resolved absorption density of one manifold on a (k, E)
    /// grid.
    Density {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        manifold: usize,
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        k_min: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        k_max: f64,
        #[arg(long, default_value_t = 639)]
        n_k: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        e_min: f64,
        #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
        e_max: f64,
        #[arg(long, default_value_t = 480)]
        n_e: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Transition-dipole pair correlations C(m) and their decay length.
    Correlations {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 200)]
        m_max: usize,
        /// Emit the uncoupled-chain reference C(m) = δ_{m0} instead.
        #[arg(long, default_value_t = false)]
        hl: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Map molecule lattice parameters onto chain parameters and predict
    /// collective decay rates.
    Emulator {
        /// JSON file with one molecule record or an array of records.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Chain length to evaluate.
        #[arg(long = "M")]
        m: usize,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long)]
        epsilon_e: Option<f64>,
        #[arg(long)]
        gamma_f: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        x: f64,
        /// debye_nm_khz or si.
        #[arg(long, default_value = "debye_nm_khz")]
        units: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the brute-force validation suite over a parameter grid.
    Verify {
        /// Comma-separated chain lengths.
        #[arg(long, default_value = "8")]
        m_values: String,
        /// Comma-separated B values.
        #[arg(long, default_value = "0.3,0.8,1.2,2.0")]
        b_values: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Run the parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<CoreError>() {
                Some(CoreError::BudgetExceeded { .. }) => exit_codes::BUDGET_REFUSAL,
                _ => exit_codes::USAGE,
            }
        }
    }
}

fn core_err(e: CoreError) -> anyhow::Error {
    anyhow::Error::new(e)
}

/// Build the regime engine, going through the kernel cache for the
/// strong-coupling side.
fn engine_via_cache(params: &ModelParams) -> anyhow::Result<SpectrumEngine> {
    if params.is_strong_coupling() {
        let table = cache::cached_solve_k2(params).map_err(core_err)?;
        // conditioning is diagnostics, not artifact content: log to stderr
        if table.condition().is_finite() {
            eprintln!("kernel system condition estimate: {:.3e}", table.condition());
        }
        let energies = model::ground_energies(params);
        Ok(SpectrumEngine::Strong { table, energies })
    } else {
        let engine = SpectrumEngine::new(params).map_err(core_err)?;
        if let SpectrumEngine::Weak { table, .. } = &engine {
            eprintln!("kernel system condition estimate: {:.3e}", table.condition());
        }
        Ok(engine)
    }
}

#[derive(Serialize)]
struct GapPayload {
    e_plus: f64,
    e_minus: f64,
    mode_sum_gap: f64,
    /// Contour-integral gap; absent for B ≤ 1 where the representation does
    /// not apply.
    integral_gap: Option<f64>,
}

#[derive(Serialize)]
struct OscillatorPayload {
    chi1: Option<f64>,
    chi0: Option<f64>,
    /// χ₁/M (weak) or χ₀/M² (strong).
    per_molecule: f64,
    /// Infinite-size counterpart: A[B] for B < 1, Ã[B] for B > 1.
    infinite_size: f64,
    per_manifold: BTreeMap<usize, f64>,
}

#[derive(Serialize)]
struct ManifoldsPayload {
    per_manifold: BTreeMap<usize, f64>,
    completeness_fraction: BTreeMap<usize, f64>,
    tuple_counts: BTreeMap<usize, u128>,
    truncated_completeness: f64,
}

#[derive(Serialize)]
struct CorrelationsPayload {
    m_max: usize,
    values: Vec<f64>,
    correlation_length: f64,
    sum_rule: f64,
    infinite_size_strength: Option<f64>,
}

fn binomial_u128(m: usize, n: usize) -> u128 {
    if n > m {
        return 0;
    }
    let n = n.min(m - n);
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn execute(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Dispersion { model, out } => {
            let params = model.params()?;
            let alpha = ModeSet::periodic(&params);
            let beta = ModeSet::antiperiodic(&params);
            match out.format(Format::Csv)? {
                Format::Csv => out.emit(&export::modes_csv(&params, &alpha, &beta))?,
                Format::Json => {
                    #[derive(Serialize)]
                    struct ModeRow {
                        k: f64,
                        e0: f64,
                        e: f64,
                        theta: f64,
                        occupied_in_vacuum: bool,
                    }
                    #[derive(Serialize)]
                    struct Payload {
                        periodic: Vec<ModeRow>,
                        antiperiodic: Vec<ModeRow>,
                    }
                    let row = |m: &kmm_core::model::Mode| ModeRow {
                        k: m.k,
                        e0: m.e0,
                        e: m.e,
                        theta: m.theta,
                        occupied_in_vacuum: m.occupied_in_vacuum,
                    };
                    let payload = Payload {
                        periodic: alpha.modes().iter().map(row).collect(),
                        antiperiodic: beta.modes().iter().map(row).collect(),
                    };
                    out.emit(&export::json_artifact("dispersion", &params, payload)?)?;
                }
            }
            Ok(exit_codes::SUCCESS)
        }

        Command::Gap { model, out } => {
            let params = model.params()?;
            let energies = model::ground_energies(&params);
            let integral_gap = if params.is_strong_coupling() {
                Some(model::gap_integral(&params).map_err(core_err)?)
            } else {
                None
            };
            let payload = GapPayload {
                e_plus: energies.e_plus,
                e_minus: energies.e_minus,
                mode_sum_gap: energies.gap,
                integral_gap,
            };
            out.emit(&export::json_artifact("gap", &params, payload)?)?;
            Ok(exit_codes::SUCCESS)
        }

        Command::Oscillator { model, max_manifold, out } => {
            let params = model.params()?;
            let engine = engine_via_cache(&params)?;
            let strengths = engine.oscillator_strengths(max_manifold).map_err(core_err)?;
            let m = params.m() as f64;
            let (per_molecule, infinite_size) = match &engine {
                SpectrumEngine::Weak { table, .. } => (
                    strengths.chi1.unwrap() / m,
                    spectra::infinite_a(params.b_ratio()).map_err(core_err)?,
                ),
                SpectrumEngine::Strong { table, .. } => (
                    strengths.chi0.unwrap() / (m * m),
                    spectra::infinite_a_tilde(params.b_ratio()).map_err(core_err)?,
                ),
            };
            let payload = OscillatorPayload {
                chi1: strengths.chi1,
                chi0: strengths.chi0,
                per_molecule,
                infinite_size,
                per_manifold: strengths.per_manifold,
            };
            out.emit(&export::json_artifact("oscillator", &params, payload)?)?;
            Ok(exit_codes::SUCCESS)
        }

        Command::Manifolds { model, max_manifold, out } => {
            let params = model.params()?;
            let engine = engine_via_cache(&params)?;
            let mut per_manifold = BTreeMap::new();
            let mut fractions = BTreeMap::new();
            let mut counts = BTreeMap::new();
            for n in 0..=max_manifold {
                if !engine.manifold_allowed(n) {
                    continue;
                }
                per_manifold.insert(n, engine.manifold_contribution(n).map_err(core_err)?);
                fractions.insert(n, engine.manifold_completeness(n).map_err(core_err)?);
                counts.insert(n, binomial_u128(params.m(), n));
            }
            let payload = ManifoldsPayload {
                truncated_completeness: fractions.values().sum(),
                per_manifold,
                completeness_fraction: fractions,
                tuple_counts: counts,
            };
            out.emit(&export::json_artifact("manifolds", &params, payload)?)?;
            Ok(exit_codes::SUCCESS)
        }

        Command::Density { model, manifold, k_min, k_max, n_k, e_min, e_max, n_e, out } => {
            let params = model.params()?;
            let spec = GridSpec { k_min, k_max, n_k, e_min, e_max, n_e };
            let engine = engine_via_cache(&params)?;
            let grid = engine.absorption_density(manifold, &spec).map_err(core_err)?;
            match out.format(Format::Csv)? {
                Format::Csv => out.emit(&export::density_csv(&params, &grid))?,
                Format::Json => out.emit(&export::density_json(&params, &grid)?)?,
            }
            Ok(exit_codes::SUCCESS)
        }

        Command::Correlations { model, m_max, hl, out } => {
            let params = model.params()?;
            let c = if hl {
                spectra::CorrelationFunction::heitler_london(m_max)
            } else {
                spectra::correlations(&params, m_max).map_err(core_err)?
            };
            match out.format(Format::Json)? {
                Format::Csv => out.emit(&export::correlations_csv(&params, &c))?,
                Format::Json => {
                    let payload = CorrelationsPayload {
                        m_max,
                        values: c.values.clone(),
                        correlation_length: c.correlation_length,
                        sum_rule: c.sum_rule,
                        infinite_size_strength: spectra::infinite_a(params.b_ratio()).ok(),
                    };
                    out.emit(&export::json_artifact("correlations", &params, payload)?)?;
                }
            }
            Ok(exit_codes::SUCCESS)
        }

        Command::Emulator {
            input,
            m,
            d,
            r,
            theta,
            eta,
            delta,
            epsilon_e,
            gamma_f,
            x,
            units,
            out,
        } => {
            let records: Vec<MoleculeRecord> = match input {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    match serde_json::from_str::<Vec<MoleculeRecord>>(&text) {
                        Ok(list) => list,
                        Err(_) => vec![serde_json::from_str::<MoleculeRecord>(&text)
                            .context("input is neither a molecule record nor a list")?],
                    }
                }
                None => {
                    let (Some(d), Some(r), Some(epsilon_e), Some(gamma_f)) =
                        (d, r, epsilon_e, gamma_f)
                    else {
                        bail!("without --input, all of --d --r --epsilon-e --gamma-f are required");
                    };
                    vec![MoleculeRecord {
                        units,
                        label: String::new(),
                        d,
                        r,
                        theta,
                        eta,
                        delta,
                        epsilon_e,
                        gamma_f,
                        x,
                    }]
                }
            };
            let rows: Vec<molecule::EmulatorRow> = records
                .iter()
                .map(|rec| molecule::evaluate(rec, m))
                .collect::<anyhow::Result<_>>()?;
            for row in &rows {
                for w in &row.warnings {
                    eprintln!("warning: {}: {w}", if row.label.is_empty() { "molecule" } else { &row.label });
                }
            }
            match out.format(Format::Csv)? {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&rows)?;
                    s.push('\n');
                    out.emit(&s)?;
                }
                Format::Csv => {
                    let mut s = String::from(
                        "label,epsilon,b,b_ratio,m,gamma_m_hz,gamma_m_finite_hz,lifetime_s\n",
                    );
                    for row in &rows {
                        use std::fmt::Write as _;
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{},{}",
                            row.label,
                            row.epsilon,
                            row.b,
                            row.b_ratio,
                            row.m,
                            row.gamma_m_hz,
                            row.gamma_m_finite_hz,
                            row.lifetime_s
                        );
                    }
                    out.emit(&s)?;
                }
            }
            Ok(exit_codes::SUCCESS)
        }

        Command::Verify { m_values, b_values, out } => {
            let ms: Vec<usize> = m_values
                .split(',')
                .map(|s| s.trim().parse().context("bad --m-values entry"))
                .collect::<anyhow::Result<_>>()?;
            let bs: Vec<f64> = b_values
                .split(',')
                .map(|s| s.trim().parse().context("bad --b-values entry"))
                .collect::<anyhow::Result<_>>()?;
            let mut points: Vec<(usize, f64)> = Vec::new();
            for &m in &ms {
                for &b in &bs {
                    points.push((m, b));
                }
            }
            let results: Vec<_> = points
                .par_iter()
                .map(|&(m, b_ratio)| {
                    let params = ModelParams::from_b_ratio(b_ratio, m).map_err(core_err)?;
                    kmm_oracle::report::run_point(&params).map_err(core_err)
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let checks: Vec<_> = results.into_iter().flatten().collect();
            let mut all_pass = true;
            for c in &checks {
                all_pass &= c.pass;
                println!(
                    "[{}] {:<22} {:<26} deviation={:.3e} tol={:.0e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.params,
                    c.max_deviation,
                    c.tolerance
                );
            }
            if out.output.is_some() {
                let mut s = serde_json::to_string_pretty(&checks)?;
                s.push('\n');
                out.emit(&s)?;
            }
            Ok(if all_pass {
                exit_codes::SUCCESS
            } else {
                exit_codes::VALIDATION_FAILURE
            })
        }
    }
}
