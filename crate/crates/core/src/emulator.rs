//! Mapping of trapped dipolar-molecule lattice parameters onto chain
//! parameters, plus superradiant decay rates for finite arrays.
//!
//! Two dressed single-molecule states serve as the two-level system; the
//! dipole-dipole interaction projects onto an effective nearest-neighbour
//! coupling
//!
//! ```text
//! b = (1/3) (d²/r³) (1 - 3 cos²Θ) (1 - η²) (1 - δ²)
//! ```
//!
//! valid for `η ≪ 1`, `δ ≪ 1`. A chain can only be built from `b < 0`; the
//! magic angle `cos²Θ = 1/3` (where `b = 0`) and sign-flipped geometries are
//! rejected.

use alloc::vec::Vec;

use crate::math;
use crate::model::ModelParams;
use crate::spectra;
use crate::{Error, Result};

/// Coulomb constant `1/(4πε₀)` in SI, exactly `c² × 10⁻⁷` by definition.
pub const COULOMB_CONSTANT: f64 = 8.987_551_787_368_176e9;
/// Planck constant, J·s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// `d²/(4πε₀ r³)` at `d = 1` Debye, `r = 1` nm, in joules. The Debye and the
/// Coulomb constant are both defined through `c`, so this is exactly 1e-22 J.
pub const DEBYE2_PER_NM3_JOULE: f64 = 1.0e-22;
/// Same energy expressed in kHz.
pub const DEBYE2_PER_NM3_KHZ: f64 = DEBYE2_PER_NM3_JOULE / PLANCK / 1.0e3;

/// Unit system a molecule record is declared in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// `d` in Debye, `r` in nm, energies (`coupling`, `epsilon_e`) in kHz.
    DebyeNmKilohertz,
    /// `d` in C·m, `r` in m, energies in J.
    Si,
}

/// Physical parameters of one molecular-array realization.
///
/// `gamma_f` (the fast electronic decay rate, in Hz) and the mixing fraction
/// `x` control the engineered radiative rate of the dressed excited state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoleculeParams {
    pub units: Units,
    /// Electric dipole moment in the molecule-fixed frame.
    pub d: f64,
    /// Intermolecular distance.
    pub r: f64,
    /// Angle between the quantization axis and the separation vector, rad.
    pub theta: f64,
    /// `γ_sr / (g_S μ_B B₀)`; must be small for the two-level reduction.
    pub eta: f64,
    /// `|π/2 - φ|` ground-state mixing defect; must be small.
    pub delta: f64,
    /// Two-level splitting between the dressed states, in record energy
    /// units.
    pub epsilon_e: f64,
    /// Electronic decay rate of the admixed fast state, Hz.
    pub gamma_f: f64,
    /// Excited-state mixing fraction, `0 < x < 1`.
    pub x: f64,
}

impl MoleculeParams {
    /// Validate hard invariants. `eta`/`delta` beyond 0.3 break the
    /// perturbative mapping and are rejected outright.
    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0) || !(self.r > 0.0) {
            return Err(Error::InvalidMolecule("dipole moment and distance must be positive"));
        }
        if !(self.eta >= 0.0 && self.eta < 0.3) || !(self.delta >= 0.0 && self.delta < 0.3) {
            return Err(Error::InvalidMolecule("eta and delta must lie in [0, 0.3)"));
        }
        if !(self.epsilon_e > 0.0) {
            return Err(Error::InvalidMolecule("two-level splitting must be positive"));
        }
        if !(self.gamma_f > 0.0) {
            return Err(Error::InvalidMolecule("electronic decay rate must be positive"));
        }
        if !(self.x > 0.0 && self.x < 1.0) {
            return Err(Error::InvalidMolecule("mixing fraction x must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Soft warnings: the mapping degrades above `eta, delta ≈ 0.1`.
    pub fn warnings(&self) -> Vec<&'static str> {
        let mut w = Vec::new();
        if self.eta > 0.1 {
            w.push("eta exceeds 0.1; the two-level reduction is marginal");
        }
        if self.delta > 0.1 {
            w.push("delta exceeds 0.1; the two-level reduction is marginal");
        }
        w
    }

    fn dipole_energy(&self) -> f64 {
        match self.units {
            Units::DebyeNmKilohertz => {
                DEBYE2_PER_NM3_KHZ * self.d * self.d / (self.r * self.r * self.r)
            }
            Units::Si => {
                COULOMB_CONSTANT * self.d * self.d / (self.r * self.r * self.r)
            }
        }
    }
}

/// Effective nearest-neighbour coupling `b`, in the record's energy units.
/// Sign follows the geometry; negative only for `cos²Θ > 1/3`.
pub fn coupling(mol: &MoleculeParams) -> Result<f64> {
    mol.validate()?;
    let c = math::cos(mol.theta);
    let geometry = 1.0 - 3.0 * c * c;
    Ok(mol.dipole_energy() / 3.0
        * geometry
        * (1.0 - mol.eta * mol.eta)
        * (1.0 - mol.delta * mol.delta))
}

/// Chain parameters `(ε, b, M)` realized by `M` molecules of this kind.
///
/// Rejects geometries with `b ≥ 0`: at the magic angle the chain decouples,
/// and positive `b` is outside the modeled sign convention.
pub fn chain_params(mol: &MoleculeParams, m: usize) -> Result<ModelParams> {
    let b = coupling(mol)?;
    if b == 0.0 {
        return Err(Error::InvalidMolecule(
            "magic-angle geometry (cos²Θ = 1/3) gives b = 0; no coupled chain",
        ));
    }
    if b > 0.0 {
        return Err(Error::InvalidMolecule(
            "geometry gives b > 0; chain construction requires b < 0",
        ));
    }
    ModelParams::new(mol.epsilon_e, b, m)
}

/// One-excitation collective decay rate `γ_M` (Hz) from the infinite-size
/// closed forms: `A[B] M x γ_f` in weak coupling, `Ã[B] M² x γ_f` in strong
/// coupling. Rejected exactly at `B = 1`.
pub fn decay_rate(params: &ModelParams, mol: &MoleculeParams) -> Result<f64> {
    mol.validate()?;
    let m = params.m() as f64;
    let b_ratio = params.b_ratio();
    if b_ratio < 1.0 {
        Ok(spectra::infinite_a(b_ratio)? * m * mol.x * mol.gamma_f)
    } else {
        Ok(spectra::infinite_a_tilde(b_ratio)? * m * m * mol.x * mol.gamma_f)
    }
}

/// Finite-size variant of [`decay_rate`], using the chain's own oscillator
/// strengths (`χ₁ x γ_f` or `χ₀ x γ_f`) instead of the `M → ∞` prefactors.
pub fn decay_rate_finite(params: &ModelParams, mol: &MoleculeParams) -> Result<f64> {
    mol.validate()?;
    let chi = if params.is_strong_coupling() {
        spectra::chi0(params)?
    } else {
        spectra::chi1(params)?
    };
    Ok(chi * mol.x * mol.gamma_f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn mol(theta: f64, eta: f64, delta: f64) -> MoleculeParams {
        MoleculeParams {
            units: Units::DebyeNmKilohertz,
            d: 3.5,
            r: 400.0,
            theta,
            eta,
            delta,
            epsilon_e: 20.0,
            gamma_f: 2.0e7,
            x: 0.1,
        }
    }

    #[test]
    fn magic_angle_decouples() {
        let theta = math::atan2(math::sqrt(2.0), 1.0); // cos^2 = 1/3
        let b = coupling(&mol(theta, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-12);
        assert!(chain_params(&mol(theta, 0.0, 0.0), 10).is_err());
    }

    #[test]
    fn aligned_geometry_closed_form() {
        // Theta = 0: b = -(2/3) d^2/r^3
        let b = coupling(&mol(0.0, 0.0, 0.0)).unwrap();
        let want = -2.0 / 3.0 * DEBYE2_PER_NM3_KHZ * 3.5 * 3.5 / 400.0_f64.powi(3);
        assert_relative_eq!(b, want, max_relative = 1e-14);
        // realistic magnitude: tens of kHz
        assert!(b < -10.0 && b > -30.0, "b = {b} kHz");
    }

    #[test]
    fn perpendicular_geometry_rejected_for_chain() {
        let m = mol(core::f64::consts::FRAC_PI_2, 0.1, 0.05);
        let b = coupling(&m).unwrap();
        let want = DEBYE2_PER_NM3_KHZ * 3.5 * 3.5 / 400.0_f64.powi(3) / 3.0 * 0.99 * 0.9975;
        assert_relative_eq!(b, want, max_relative = 1e-12);
        assert!(b > 0.0);
        assert!(chain_params(&m, 10).is_err());
    }

    #[test]
    fn eta_delta_validation_and_warnings() {
        assert!(mol(0.0, 0.31, 0.0).validate().is_err());
        assert!(mol(0.0, 0.0, 0.35).validate().is_err());
        assert!(mol(0.0, 0.05, 0.05).warnings().is_empty());
        assert_eq!(mol(0.0, 0.2, 0.15).warnings().len(), 2);
    }

    #[test]
    fn coupling_decreases_as_inverse_cube() {
        let near = coupling(&MoleculeParams { r: 200.0, ..mol(0.0, 0.0, 0.0) }).unwrap();
        let far = coupling(&MoleculeParams { r: 400.0, ..mol(0.0, 0.0, 0.0) }).unwrap();
        assert_relative_eq!(near / far, 8.0, max_relative = 1e-12);
    }

    #[test]
    fn enhancement_factors_match_quoted_values() {
        let m = 200usize;
        let molecule = mol(0.0, 0.0, 0.0);
        for (b_ratio, want, tol) in [(1.02, 88.0, 3.0), (1.4, 168.0, 4.0)] {
            let params = ModelParams::from_b_ratio(b_ratio, m).unwrap();
            let rate = decay_rate(&params, &molecule).unwrap();
            let hl_rate = m as f64 * molecule.x * molecule.gamma_f;
            let enhancement = rate / hl_rate;
            assert!(
                math::abs(enhancement - want) < tol,
                "B = {b_ratio}: enhancement {enhancement} vs {want} ± {tol}"
            );
        }
    }

    #[test]
    fn strong_coupling_lifetimes_in_quoted_band() {
        // x = 0.1, M = 200, B = 1.4, gamma_f in 10..50 MHz -> 0.005..0.03 ns
        let params = ModelParams::from_b_ratio(1.4, 200).unwrap();
        for gamma_f in [1.0e7, 5.0e7] {
            let molecule = MoleculeParams { gamma_f, ..mol(0.0, 0.0, 0.0) };
            let lifetime_ns = 1e9 / decay_rate(&params, &molecule).unwrap();
            assert!(
                (0.005..=0.031).contains(&lifetime_ns),
                "lifetime {lifetime_ns} ns outside the expected band"
            );
        }
    }

    #[test]
    fn critical_point_rejected() {
        let params = ModelParams::from_b_ratio(1.0, 100).unwrap();
        assert!(decay_rate(&params, &mol(0.0, 0.0, 0.0)).is_err());
    }
}
