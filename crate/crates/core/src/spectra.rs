//! Oscillator strengths, manifold contributions, absorption-density grids,
//! infinite-size closed forms, and transition-dipole correlation functions.
//!
//! Matrix elements are computed for `σ₁ˣ` only; the full-chain dipole
//! `Σ_m σ_mˣ` is recovered by translational symmetry, which multiplies the
//! squared element by `M²` and restricts total-dipole absorption to states of
//! zero total momentum (mod 2π). Momentum-resolved absorption densities keep
//! every state at its own total momentum, with each wavenumber mapped to
//! `(-π, π]` and summed without zone reduction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{self, TAU};
use crate::model::{self, GroundStateEnergies, ModeSet, ModelParams};
use crate::wick::{self, ContractionTable, WeakCouplingTable};
use crate::{quad, Error, Result};

/// Infinite-size per-molecule strength `A[B] = (1-B)^{-3/4} (1+B)^{1/4}` for
/// the one-excitation manifold, valid on `0 ≤ B < 1`; diverges as `B → 1⁻`.
pub fn infinite_a(b_ratio: f64) -> Result<f64> {
    if b_ratio == 1.0 {
        return Err(Error::CriticalPoint("A[B] diverges at B = 1"));
    }
    if !(0.0..1.0).contains(&b_ratio) {
        return Err(Error::WrongRegime { required: "0 <= B < 1", b_ratio });
    }
    Ok(math::powf(1.0 - b_ratio, -0.75) * math::powf(1.0 + b_ratio, 0.25))
}

/// Infinite-size per-molecule-squared strength `Ã[B] = (1 - 1/B²)^{1/4}` for
/// the lowest strong-coupling transition, valid for `B > 1`; vanishes as
/// `B → 1⁺` and tends to 1 as `B → ∞`.
pub fn infinite_a_tilde(b_ratio: f64) -> Result<f64> {
    if b_ratio == 1.0 {
        return Err(Error::CriticalPoint("Ã[B] vanishes at B = 1"));
    }
    if b_ratio < 1.0 {
        return Err(Error::WrongRegime { required: "B > 1", b_ratio });
    }
    Ok(math::powf(1.0 - 1.0 / (b_ratio * b_ratio), 0.25))
}

/// Total oscillator strength `χ₁ = M² |⟨Φ₋|G(0) σ₁ˣ|Φ₊⟩|²` of the
/// one-excitation manifold (weak coupling).
///
/// By translational invariance this equals the coherent sum over the manifold
/// of full-chain elements: only the zero-momentum mode absorbs.
pub fn chi1(params: &ModelParams) -> Result<f64> {
    params.require_weak("chi1")?;
    let table = wick::weak_table(params)?;
    Ok(chi1_from(&table))
}

pub(crate) fn chi1_from(table: &WeakCouplingTable) -> f64 {
    let m = table.params().m() as f64;
    let k0 = table.k_one()[0]; // alpha = 0 is grid index 0
    let a2 = k0.norm_sqr();
    m * m * a2 * table.overlap().value_sq
}

/// Total oscillator strength `χ₀ = M² |⟨Φ₋|σ₁ˣ|Φ₊⟩|²` of the lowest
/// strong-coupling transition `|Φ₊⟩ → |Φ₋⟩`; scales as `M²`.
pub fn chi0(params: &ModelParams) -> Result<f64> {
    params.require_strong("chi0")?;
    let table = wick::solve_k2(params)?;
    Ok(chi0_from(&table))
}

pub(crate) fn chi0_from(table: &ContractionTable) -> f64 {
    let m = table.params().m() as f64;
    m * m * table.sigma_norm()
}

/// Total oscillator strengths with per-manifold breakdown (per molecule).
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorStrengths {
    /// Weak-coupling one-excitation strength, present for `B < 1`.
    pub chi1: Option<f64>,
    /// Strong-coupling `|Φ₊⟩ → |Φ₋⟩` strength, present for `B > 1`.
    pub chi0: Option<f64>,
    /// Per-molecule full-chain strength of each excitation manifold. Only
    /// parity-allowed manifolds appear (odd for `B < 1`, even for `B > 1`).
    pub per_manifold: BTreeMap<usize, f64>,
}

fn binomial(m: usize, n: usize) -> u128 {
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

/// Hard cap on enumerated tuples per manifold.
pub const TUPLE_BUDGET: u128 = 200_000_000;

fn check_budget(m: usize, manifold: usize) -> Result<u128> {
    let tuples = binomial(m, manifold);
    if m > 12 && manifold > 4 {
        return Err(Error::BudgetExceeded { tuples, limit: binomial(m, 4) });
    }
    if tuples > TUPLE_BUDGET {
        return Err(Error::BudgetExceeded { tuples, limit: TUPLE_BUDGET });
    }
    Ok(tuples)
}

/// Visit all ascending index tuples of size `n` drawn from `0..m`, in
/// lexicographic order (deterministic for binning and caching).
fn for_each_combination(m: usize, n: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        f(&[]);
        return;
    }
    if n > m {
        return;
    }
    let mut c: Vec<usize> = (0..n).collect();
    loop {
        f(&c);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] != i + m - n {
                break;
            }
        }
        c[i] += 1;
        for j in i + 1..n {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Regime-dispatched spectroscopic engine: builds the kernel once and reuses
/// it across manifold sums, density grids, and completeness checks.
#[derive(Debug, Clone)]
pub enum SpectrumEngine {
    Weak { table: WeakCouplingTable, energies: GroundStateEnergies },
    Strong { table: ContractionTable, energies: GroundStateEnergies },
}

impl SpectrumEngine {
    /// Build the engine for the regime selected by `B`; rejects `B = 1`.
    pub fn new(params: &ModelParams) -> Result<SpectrumEngine> {
        let energies = model::ground_energies(params);
        if params.is_strong_coupling() {
            Ok(SpectrumEngine::Strong { table: wick::solve_k2(params)?, energies })
        } else if params.b_ratio() < 1.0 {
            Ok(SpectrumEngine::Weak { table: wick::weak_table(params)?, energies })
        } else {
            Err(Error::CriticalPoint("spectra are regime-resolved away from B = 1"))
        }
    }

    pub fn params(&self) -> &ModelParams {
        match self {
            SpectrumEngine::Weak { table, .. } => table.params(),
            SpectrumEngine::Strong { table, .. } => table.params(),
        }
    }

    pub fn energies(&self) -> &GroundStateEnergies {
        match self {
            SpectrumEngine::Weak { energies, .. } | SpectrumEngine::Strong { energies, .. } => {
                energies
            }
        }
    }

    pub fn modes(&self) -> &ModeSet {
        match self {
            SpectrumEngine::Weak { table, .. } => table.modes(),
            SpectrumEngine::Strong { table, .. } => table.modes(),
        }
    }

    /// True if the `n`-excitation manifold is dipole-allowed from the ground
    /// state in this regime.
    pub fn manifold_allowed(&self, n: usize) -> bool {
        match self {
            SpectrumEngine::Weak { .. } => n % 2 == 1,
            SpectrumEngine::Strong { .. } => n % 2 == 0,
        }
    }

    /// σ₁ˣ-normalized squared element for one index tuple.
    fn tuple_strength(&self, idx: &[usize]) -> f64 {
        match self {
            SpectrumEngine::Weak { table, .. } => table.tuple_strength(idx),
            SpectrumEngine::Strong { table, .. } => table.tuple_strength(idx),
        }
    }

    /// Completeness fraction `Σ_S |⟨Φ₋, S|σ₁ˣ|Φ₊⟩|²` of one manifold.
    pub fn manifold_completeness(&self, n: usize) -> Result<f64> {
        let m = self.params().m();
        if !self.manifold_allowed(n) {
            return Ok(0.0);
        }
        check_budget(m, n)?;
        let mut acc = 0.0;
        for_each_combination(m, n, |idx| acc += self.tuple_strength(idx));
        Ok(acc)
    }

    /// Per-molecule full-chain strength of one manifold:
    /// `(1/M) Σ_{Σα ≡ 0} M² |⟨Φ₋, S|σ₁ˣ|Φ₊⟩|²`.
    ///
    /// All `C(M, n)` tuples are enumerated; only zero-total-momentum tuples
    /// carry total-dipole strength. Parity-forbidden manifolds return 0.
    pub fn manifold_contribution(&self, n: usize) -> Result<f64> {
        let m = self.params().m();
        if !self.manifold_allowed(n) {
            return Ok(0.0);
        }
        check_budget(m, n)?;
        let mut acc = 0.0;
        for_each_combination(m, n, |idx| {
            if idx.iter().sum::<usize>() % m == 0 {
                acc += self.tuple_strength(idx);
            }
        });
        Ok(acc * m as f64)
    }

    /// Strengths of the lowest transitions plus per-manifold totals up to
    /// `max_manifold`.
    pub fn oscillator_strengths(&self, max_manifold: usize) -> Result<OscillatorStrengths> {
        let mut per_manifold = BTreeMap::new();
        for n in 0..=max_manifold {
            if self.manifold_allowed(n) {
                per_manifold.insert(n, self.manifold_contribution(n)?);
            }
        }
        Ok(match self {
            SpectrumEngine::Weak { table, .. } => OscillatorStrengths {
                chi1: Some(chi1_from(table)),
                chi0: None,
                per_manifold,
            },
            SpectrumEngine::Strong { table, .. } => OscillatorStrengths {
                chi1: None,
                chi0: Some(chi0_from(table)),
                per_manifold,
            },
        })
    }

    /// Momentum-resolved absorption density of one manifold on a `(k, E)`
    /// grid.
    pub fn absorption_density(&self, manifold: usize, spec: &GridSpec) -> Result<DensityGrid> {
        spec.validate()?;
        if !(1..=4).contains(&manifold) {
            return Err(Error::BudgetExceeded {
                tuples: binomial(self.params().m(), manifold),
                limit: binomial(self.params().m(), 4),
            });
        }
        let m = self.params().m();
        let tuple_count = check_budget(m, manifold)?;
        let mut grid = DensityGrid::empty(spec.clone(), manifold);
        if !self.manifold_allowed(manifold) {
            return Ok(grid);
        }
        let gap = self.energies().gap;
        let modes = self.modes();
        // wavenumbers mapped to (-pi, pi], summed without zone reduction
        let k_mapped: Vec<f64> = modes
            .modes()
            .iter()
            .map(|md| if md.k > core::f64::consts::PI { md.k - TAU } else { md.k })
            .collect();
        let e_of: Vec<f64> = modes.modes().iter().map(|md| md.e).collect();
        let m2 = (m * m) as f64;
        for_each_combination(m, manifold, |idx| {
            let k_tot: f64 = idx.iter().map(|&i| k_mapped[i]).sum();
            let e_tot: f64 = gap + idx.iter().map(|&i| e_of[i]).sum::<f64>();
            let strength = m2 * self.tuple_strength(idx);
            grid.deposit(k_tot, e_tot, strength);
        });
        grid.tuple_count = tuple_count;
        Ok(grid)
    }

    /// Sum of manifold completeness fractions over allowed manifolds up to
    /// `max_manifold`; tends to 1 as the truncation is lifted.
    pub fn completeness(&self, max_manifold: usize) -> Result<f64> {
        let mut acc = 0.0;
        for n in 0..=max_manifold {
            if self.manifold_allowed(n) {
                acc += self.manifold_completeness(n)?;
            }
        }
        Ok(acc)
    }

    /// Excitation energy of a tuple state above the chain ground state:
    /// `gap + Σ E(α_i)`.
    pub fn state_energy(&self, idx: &[usize]) -> f64 {
        self.energies().gap + idx.iter().map(|&i| self.modes().mode(i).e).sum::<f64>()
    }

    /// Visit every tuple of one allowed manifold with its σ₁ˣ-normalized
    /// squared element. Tuples are ascending index lists in lexicographic
    /// order; parity-forbidden manifolds visit nothing.
    pub fn enumerate_states(
        &self,
        manifold: usize,
        mut f: impl FnMut(&[usize], f64),
    ) -> Result<()> {
        if !self.manifold_allowed(manifold) {
            return Ok(());
        }
        check_budget(self.params().m(), manifold)?;
        for_each_combination(self.params().m(), manifold, |idx| {
            f(idx, self.tuple_strength(idx));
        });
        Ok(())
    }
}

/// Per-manifold per-molecule strengths up to `max_manifold`.
pub fn manifold_contributions(
    params: &ModelParams,
    max_manifold: usize,
) -> Result<OscillatorStrengths> {
    SpectrumEngine::new(params)?.oscillator_strengths(max_manifold)
}

/// Rectangular `(k, E)` binning window.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub k_min: f64,
    pub k_max: f64,
    pub n_k: usize,
    pub e_min: f64,
    pub e_max: f64,
    pub n_e: usize,
}

impl GridSpec {
    /// The 639 × 480 window over `k ∈ [-10, 10) × E ∈ [0, 6)` used by the
    /// reference figures.
    pub fn figure_default() -> GridSpec {
        GridSpec { k_min: -10.0, k_max: 10.0, n_k: 639, e_min: 0.0, e_max: 6.0, n_e: 480 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_max > self.k_min) || !(self.e_max > self.e_min) {
            return Err(Error::InvalidParams("grid window must have positive extent"));
        }
        if self.n_k == 0 || self.n_e == 0 {
            return Err(Error::InvalidParams("grid must have at least one bin per axis"));
        }
        Ok(())
    }

    pub fn dk(&self) -> f64 {
        (self.k_max - self.k_min) / self.n_k as f64
    }

    pub fn de(&self) -> f64 {
        (self.e_max - self.e_min) / self.n_e as f64
    }
}

/// Binned absorption density `ρ_A(k, E) = Σ |μ|² / (δk δE)`.
///
/// Binning conserves strength: the sum of bins times the bin area equals the
/// total manifold strength that fell inside the window.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub spec: GridSpec,
    pub manifold: usize,
    /// Row-major `n_k × n_e` densities.
    pub bins: Vec<f64>,
    /// Total strength deposited inside the window.
    pub total_strength: f64,
    /// Number of tuples enumerated for this manifold.
    pub tuple_count: u128,
}

impl DensityGrid {
    fn empty(spec: GridSpec, manifold: usize) -> DensityGrid {
        let bins = vec![0.0; spec.n_k * spec.n_e];
        DensityGrid { spec, manifold, bins, total_strength: 0.0, tuple_count: 0 }
    }

    fn deposit(&mut self, k: f64, e: f64, strength: f64) {
        let s = &self.spec;
        if k < s.k_min || k >= s.k_max || e < s.e_min || e >= s.e_max {
            return;
        }
        let ik = (((k - s.k_min) / s.dk()) as usize).min(s.n_k - 1);
        let ie = (((e - s.e_min) / s.de()) as usize).min(s.n_e - 1);
        self.bins[ik * s.n_e + ie] += strength / (s.dk() * s.de());
        self.total_strength += strength;
    }

    pub fn bin(&self, ik: usize, ie: usize) -> f64 {
        self.bins[ik * self.spec.n_e + ie]
    }

    pub fn max_bin(&self) -> f64 {
        self.bins.iter().copied().fold(0.0, f64::max)
    }

    /// `(k_center, E_center, density)` of the maximum-density bin.
    pub fn max_bin_location(&self) -> (f64, f64, f64) {
        let mut best = (0usize, 0usize, 0.0f64);
        for ik in 0..self.spec.n_k {
            for ie in 0..self.spec.n_e {
                let v = self.bin(ik, ie);
                if v > best.2 {
                    best = (ik, ie, v);
                }
            }
        }
        (
            self.spec.k_min + (best.0 as f64 + 0.5) * self.spec.dk(),
            self.spec.e_min + (best.1 as f64 + 0.5) * self.spec.de(),
            best.2,
        )
    }

    /// Integrated strength `Σ bins · δk δE`; equals `total_strength` by
    /// construction and is exposed for conservation checks.
    pub fn integrated_strength(&self) -> f64 {
        self.bins.iter().sum::<f64>() * self.spec.dk() * self.spec.de()
    }
}

/// Momentum-resolved absorption density of one manifold.
pub fn absorption_density(
    params: &ModelParams,
    manifold: usize,
    spec: &GridSpec,
) -> Result<DensityGrid> {
    SpectrumEngine::new(params)?.absorption_density(manifold, spec)
}

/// Transition-dipole pair correlations and their decay length.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationFunction {
    /// `C(m)` for `m = 0..=m_max`.
    pub values: Vec<f64>,
    /// Decay length from a log-linear fit of the tail window.
    pub correlation_length: f64,
    /// `C(0) + 2 Σ_{m≥1} C(m)`, the fluctuation-sum route to `A[B]`.
    pub sum_rule: f64,
}

impl CorrelationFunction {
    /// The uncoupled-chain reference: `C(m) = δ_{m0}`, zero-range
    /// correlations and unit sum rule.
    pub fn heitler_london(m_max: usize) -> CorrelationFunction {
        let mut values = vec![0.0; m_max + 1];
        values[0] = 1.0;
        CorrelationFunction { values, correlation_length: 0.0, sum_rule: 1.0 }
    }
}

/// Evaluate
/// `C(m) = (1-B²)^{1/4}/(2π) ∫_0^{2π} dk e^{imk} (1 + B² - 2B cos k)^{-1/2}`
/// by quadrature for `m = 0..=m_max`, fit the tail decay length over
/// `m ∈ [3/(1-B), 8/(1-B)]` (clipped to the data), and return the sum rule.
pub fn correlations(params: &ModelParams, m_max: usize) -> Result<CorrelationFunction> {
    params.require_weak("dipole correlations")?;
    let b_ratio = params.b_ratio();
    let prefactor = math::powf(1.0 - b_ratio * b_ratio, 0.25) / core::f64::consts::PI;
    let mut values = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let f = move |k: f64| {
            math::cos(m as f64 * k)
                / math::sqrt(1.0 + b_ratio * b_ratio - 2.0 * b_ratio * math::cos(k))
        };
        // enough initial bisections to resolve the cos(mk) oscillations
        let depth = 4 + (usize::BITS - m.leading_zeros());
        let v = quad::integrate_with_min_depth(&f, 0.0, core::f64::consts::PI, 1e-13, depth)?;
        values.push(prefactor * v);
    }
    let sum_rule = values[0] + 2.0 * values[1..].iter().sum::<f64>();
    let correlation_length = fit_tail_length(&values, b_ratio);
    Ok(CorrelationFunction { values, correlation_length, sum_rule })
}

/// Least-squares slope of `ln |C(m)|` over the tail window; returns NaN when
/// fewer than two usable points remain after clipping.
fn fit_tail_length(values: &[f64], b_ratio: f64) -> f64 {
    if b_ratio <= 0.0 {
        return 0.0; // delta-correlated limit
    }
    let scale = 1.0 / (1.0 - b_ratio);
    let lo = libm::ceil(3.0 * scale) as usize;
    let hi = (libm::floor(8.0 * scale) as usize).min(values.len().saturating_sub(1));
    let pts: Vec<(f64, f64)> = (lo..=hi.max(lo))
        .filter(|&m| m < values.len() && math::abs(values[m]) > 1e-280)
        .map(|m| (m as f64, math::ln(math::abs(values[m]))))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    -1.0 / slope
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(b_ratio: f64, m: usize) -> ModelParams {
        ModelParams::from_b_ratio(b_ratio, m).unwrap()
    }

    #[test]
    fn closed_forms_hit_reference_anchors() {
        assert_abs_diff_eq!(infinite_a(0.0).unwrap(), 1.0);
        assert_relative_eq!(infinite_a(0.98).unwrap(), 22.3, max_relative = 0.1 / 22.3);
        assert_relative_eq!(infinite_a_tilde(1.02).unwrap(), 0.444, max_relative = 0.002 / 0.444);
        assert_relative_eq!(infinite_a_tilde(1.4).unwrap(), 0.8365, max_relative = 0.002 / 0.8365);
        assert!(infinite_a(1.0).is_err());
        assert!(infinite_a_tilde(1.0).is_err());
        assert!(infinite_a(1.2).is_err());
        assert!(infinite_a_tilde(0.8).is_err());
    }

    #[test]
    fn chi1_uncoupled_chain_equals_m() {
        for m in [4usize, 6, 9] {
            let v = chi1(&ModelParams::new(1.0, 0.0, m).unwrap()).unwrap();
            assert_relative_eq!(v, m as f64, max_relative = 1e-10);
        }
    }

    #[test]
    fn chi_regime_guards() {
        assert!(chi1(&params(1.2, 6)).is_err());
        assert!(chi0(&params(0.8, 6)).is_err());
        assert!(SpectrumEngine::new(&params(1.0, 6)).is_err());
    }

    #[test]
    fn chi0_approaches_m_squared_at_large_coupling() {
        let m = 8;
        let v = chi0(&ModelParams::new(1.0, -10.0, m).unwrap()).unwrap();
        let ratio = v / (m * m) as f64;
        assert_relative_eq!(ratio, infinite_a_tilde(20.0).unwrap(), max_relative = 1e-3);
    }

    #[test]
    fn parity_forbidden_manifolds_vanish() {
        let weak = SpectrumEngine::new(&params(0.5, 6)).unwrap();
        assert_eq!(weak.manifold_contribution(2).unwrap(), 0.0);
        let strong = SpectrumEngine::new(&params(1.4, 6)).unwrap();
        assert_eq!(strong.manifold_contribution(3).unwrap(), 0.0);
    }

    #[test]
    fn exhaustive_completeness_is_unity() {
        for b_ratio in [0.4, 0.8, 1.2, 2.0] {
            let m = 8;
            let engine = SpectrumEngine::new(&params(b_ratio, m)).unwrap();
            let total = engine.completeness(m).unwrap();
            assert_relative_eq!(total, 1.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn binning_conserves_strength() {
        let engine = SpectrumEngine::new(&params(0.5, 8)).unwrap();
        let spec = GridSpec { k_min: -4.0, k_max: 4.0, n_k: 64, e_min: 0.0, e_max: 4.0, n_e: 64 };
        let grid = engine.absorption_density(1, &spec).unwrap();
        assert_relative_eq!(grid.integrated_strength(), grid.total_strength, max_relative = 1e-12);
        // manifold-1 window covers the whole band: total = M^2 * sum_a |m(a)|^2
        let total_direct = 64.0 * engine.manifold_completeness(1).unwrap();
        assert_relative_eq!(grid.total_strength, total_direct, max_relative = 1e-12);
        assert_eq!(grid.tuple_count, 8);
    }

    #[test]
    fn budget_refusal_reports_tuple_count() {
        let engine = SpectrumEngine::new(&params(0.5, 30)).unwrap();
        match engine.manifold_completeness(7) {
            Err(Error::BudgetExceeded { tuples, .. }) => {
                assert_eq!(tuples, binomial(30, 7));
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn correlations_uncoupled_chain_is_delta() {
        let c = correlations(&ModelParams::new(1.0, 0.0, 8).unwrap(), 12).unwrap();
        assert_relative_eq!(c.values[0], 1.0, max_relative = 1e-10);
        for v in &c.values[1..] {
            assert!(math::abs(*v) < 1e-10);
        }
        assert_relative_eq!(c.sum_rule, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn correlation_sum_rule_approaches_infinite_size_strength() {
        let b_ratio = 0.9;
        let c = correlations(&params(b_ratio, 8), 200).unwrap();
        assert_relative_eq!(c.sum_rule, infinite_a(b_ratio).unwrap(), max_relative = 1e-2);
    }

    #[test]
    fn heitler_london_reference() {
        let c = CorrelationFunction::heitler_london(5);
        assert_eq!(c.values, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(c.correlation_length, 0.0);
    }

    #[test]
    fn combination_enumeration_is_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_combination(5, 3, |c| seen.push(c.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
    }
}
