//! Transition dipole matrix elements through the generalized Wick theorem.
//!
//! Strong coupling (`B > 1`): the even-manifold elements
//! `⟨Φ₋|G(α_{2n})…G(α₁) σ₁ˣ|Φ₊⟩` reduce to Pfaffians of the two-excitation
//! kernel `K(α₁, α₂)`, which solves `M` complex linear systems sharing one
//! coefficient matrix:
//!
//! ```text
//! Σ_{α₁} (α₁, β)₁ K(α₁, α₂) = -(-α₂, β)₂        for every β, α₂
//! ```
//!
//! The scalar normalization `|⟨Φ₋|σ₁ˣ|Φ₊⟩|²` follows from completeness as
//! `1/det(I + X)`, with `X` the real antisymmetric phase-stripped kernel.
//!
//! Weak coupling (`B < 1`): odd-manifold elements expand into a one-particle
//! function times Pfaffians of the vacuum-sector kernel `W(α₁, α₂) =
//! ⟨Φ₋|G(α₂)G(α₁)|Φ₊⟩ / ⟨Φ₋|Φ₊⟩`, which satisfies the analogous system with
//! the site-local phase factor removed from the coefficients:
//!
//! ```text
//! u(β, α) = 2 cos(θ(β) - θ(α)) / (M [e^{i(β-α)} - 1])
//! v(β, α) = 2i sin(θ(β) + θ(α)) / (M [e^{i(β+α)} - 1])
//! Σ_{α₁} u(β, α₁) W(α₁, α₂) = -v(β, α₂)
//! ```
//!
//! The ground-state overlap `|⟨Φ₋|Φ₊⟩|²` comes from the duality that swaps
//! `(ε, b) → (2|b|, -ε/2)`: it equals the dual chain's `|⟨Φ₋|σ₁ˣ|Φ₊⟩|²`
//! with unit normalization. An independent completeness route
//! `det(I + W W†)^{-1/2}` is kept for cross-validation.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, CLu, CMat, RMat};
use crate::math::{self, cis};
use crate::model::{ModeSet, ModelParams};
use crate::{C64, Error, Result};

/// Which of the two coefficient flavours `(α, β)_l` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    L1,
    L2,
}

/// The contraction coefficient
/// `(α, β)_l = [e^{iθ_{β,α}} e^{i(α-β)} - (-1)^l e^{-iθ_{β,α}}] / (M [e^{i(β-α)} - 1])`
/// with `θ_{β,α} = θ(β) - θ(α)`.
///
/// `alpha` must lie on the periodic grid and `beta` on the antiperiodic grid;
/// grid disjointness keeps the denominator away from zero,
/// `|denominator| ≥ M |e^{iπ/M} - 1|`.
pub fn contraction_coeff(
    periodic: &ModeSet,
    antiperiodic: &ModeSet,
    alpha: f64,
    beta: f64,
    l: CoeffKind,
) -> Result<C64> {
    let ia = periodic
        .index_of(alpha)
        .ok_or(Error::OffGrid("alpha must be a periodic-grid wavenumber"))?;
    let ib = antiperiodic
        .index_of(beta)
        .ok_or(Error::OffGrid("beta must be an antiperiodic-grid wavenumber"))?;
    if periodic.index_of(beta).is_some() || antiperiodic.index_of(alpha).is_some() {
        return Err(Error::OffGrid("alpha and beta must come from opposite grids"));
    }
    let m = periodic.len() as f64;
    let a = periodic.mode(ia);
    let b = antiperiodic.mode(ib);
    let theta_ba = b.theta - a.theta;
    let sign = match l {
        CoeffKind::L1 => 1.0,
        CoeffKind::L2 => -1.0,
    };
    let num = cis(theta_ba) * cis(a.k - b.k) + sign * cis(-theta_ba);
    let den = (cis(b.k - a.k) - C64::new(1.0, 0.0)) * m;
    Ok(num / den)
}

#[inline]
fn coeff_l1_idx(alpha: &ModeSet, beta: &ModeSet, ia: usize, ib: usize) -> C64 {
    let m = alpha.len() as f64;
    let a = alpha.mode(ia);
    let b = beta.mode(ib);
    let theta_ba = b.theta - a.theta;
    let num = cis(theta_ba) * cis(a.k - b.k) + cis(-theta_ba);
    num / ((cis(b.k - a.k) - C64::new(1.0, 0.0)) * m)
}

/// `(-α, β)₂` evaluated with the reflected angle `θ(-α) = -θ(α)`.
///
/// The branch convention stores `θ(0) = -π/2` in strong coupling; the
/// reflected argument of this coefficient needs `-θ(α)` even at `α = 0`,
/// where the two differ by `π`, so the angle is negated explicitly instead
/// of being looked up at the reflected grid point.
#[inline]
fn coeff_l2_neg_idx(alpha: &ModeSet, beta: &ModeSet, ia: usize, ib: usize) -> C64 {
    let m = alpha.len() as f64;
    let a = alpha.mode(ia);
    let b = beta.mode(ib);
    let g = alpha.mode(alpha.negate_index(ia)).k; // -alpha mod 2pi, exact on the grid
    let theta = b.theta + a.theta; // theta(beta) - theta(-alpha)
    let num = cis(theta) * cis(g - b.k) - cis(-theta);
    num / ((cis(b.k - g) - C64::new(1.0, 0.0)) * m)
}

#[inline]
fn weak_u_idx(alpha: &ModeSet, beta: &ModeSet, ia: usize, ib: usize) -> C64 {
    let m = alpha.len() as f64;
    let a = alpha.mode(ia);
    let b = beta.mode(ib);
    let num = C64::new(2.0 * math::cos(b.theta - a.theta), 0.0);
    num / ((cis(b.k - a.k) - C64::new(1.0, 0.0)) * m)
}

#[inline]
fn weak_v_idx(alpha: &ModeSet, beta: &ModeSet, ia: usize, ib: usize) -> C64 {
    let m = alpha.len() as f64;
    let a = alpha.mode(ia);
    let b = beta.mode(ib);
    let num = C64::new(0.0, 2.0 * math::sin(b.theta + a.theta));
    num / ((cis(b.k + a.k) - C64::new(1.0, 0.0)) * m)
}

/// Strong-coupling kernel data: the two-excitation kernel, its real
/// antisymmetric reduction, the paired eigenvalue magnitudes, and the scalar
/// `|⟨Φ₋|σ₁ˣ|Φ₊⟩|²`.
#[derive(Debug, Clone)]
pub struct ContractionTable {
    params: ModelParams,
    modes: ModeSet,
    k2: CMat,
    x: RMat,
    lambda: Vec<f64>,
    sigma_norm: f64,
    condition: f64,
    x_imag_residual: f64,
}

impl ContractionTable {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Periodic-grid mode set the kernel is indexed by.
    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    /// `K(α_i, α_j)`, antisymmetric in its indices.
    pub fn k2(&self) -> &CMat {
        &self.k2
    }

    /// Real antisymmetric reduction `X(α_i, α_j)`.
    pub fn x(&self) -> &RMat {
        &self.x
    }

    /// Eigenvalue magnitudes `λ_j` (spectrum of `X` is `{±iλ_j}` plus zeros),
    /// one entry per pair.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// `|⟨Φ₋|σ₁ˣ|Φ₊⟩|² = 1/det(I + X)`.
    pub fn sigma_norm(&self) -> f64 {
        self.sigma_norm
    }

    /// Conditioning estimate of the shared kernel system.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Largest imaginary part left after phase-stripping `K → X`.
    pub fn x_imag_residual(&self) -> f64 {
        self.x_imag_residual
    }

    /// `∏_j (1 + λ_j²)`, the eigenvalue route to `1/sigma_norm`.
    pub fn lambda_product(&self) -> f64 {
        self.lambda.iter().map(|l| 1.0 + l * l).product()
    }

    /// σ₁ˣ-normalized squared element `|⟨Φ₋|G…G σ₁ˣ|Φ₊⟩|²` for a tuple of
    /// distinct grid indices (even count), via `Pf² = det` on the restricted
    /// `X`.
    pub fn tuple_strength(&self, idx: &[usize]) -> f64 {
        self.sigma_norm * linalg::det_restricted_antisymmetric(&self.x, idx)
    }
}

/// Solve the kernel systems and assemble the [`ContractionTable`].
///
/// One LU factorization is shared by all `M` right-hand sides; the total
/// cost scales as `M³`.
pub fn solve_k2(params: &ModelParams) -> Result<ContractionTable> {
    params.require_strong("two-excitation kernel")?;
    build_table(params)
}

impl ContractionTable {
    /// Rebuild a table from a cached kernel (row-major `K2`, eigenvalue
    /// magnitudes, normalization). The phase-stripped `X` is recomputed and
    /// revalidated; inconsistent data is rejected so corrupt caches fall
    /// back to a fresh solve. The conditioning estimate of the original
    /// solve is not part of the cache format and comes back as NaN.
    pub fn from_cached_kernel(
        params: &ModelParams,
        k2_row_major: &[C64],
        lambda: &[f64],
        sigma_norm: f64,
    ) -> Result<ContractionTable> {
        params.require_strong("two-excitation kernel")?;
        let m = params.m();
        if k2_row_major.len() != m * m || lambda.len() != m / 2 {
            return Err(Error::InvalidParams("cached kernel has inconsistent dimensions"));
        }
        let alpha = ModeSet::periodic(params);
        let k2 = CMat::from_fn(m, |i, j| k2_row_major[i * m + j]);
        let mut antisym = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                antisym = antisym.max(math::cabs(k2.get(i, j) + k2.get(j, i)));
            }
        }
        if antisym > 1e-8 {
            return Err(Error::InvalidParams("cached kernel is not antisymmetric"));
        }
        let (x, x_imag_residual) = strip_phases(&alpha, &k2);
        if x_imag_residual > 1e-8 {
            return Err(Error::InvalidParams("cached kernel failed phase stripping"));
        }
        let table = ContractionTable {
            params: *params,
            modes: alpha,
            k2,
            x,
            lambda: lambda.to_vec(),
            sigma_norm,
            condition: f64::NAN,
            x_imag_residual,
        };
        if math::abs(table.sigma_norm * table.lambda_product() - 1.0) > 1e-6 {
            return Err(Error::InvalidParams("cached normalization fails the product identity"));
        }
        Ok(table)
    }
}

fn build_table(params: &ModelParams) -> Result<ContractionTable> {
    let m = params.m();
    let alpha = ModeSet::periodic(params);
    let beta = ModeSet::antiperiodic(params);

    let a = CMat::from_fn(m, |ib, ia| coeff_l1_idx(&alpha, &beta, ia, ib));
    let lu = CLu::factor(&a)?;
    let mut k2 = CMat::zeros(m);
    let mut rhs = vec![C64::new(0.0, 0.0); m];
    for ja in 0..m {
        for (ib, r) in rhs.iter_mut().enumerate() {
            *r = -coeff_l2_neg_idx(&alpha, &beta, ja, ib);
        }
        let col = lu.solve(&rhs);
        for (ia, v) in col.iter().enumerate() {
            k2.set(ia, ja, *v);
        }
    }

    let (x, x_imag_residual) = strip_phases(&alpha, &k2);
    let lambda = lambda_pairs(&x);
    let det = linalg::det_real(&RMat::from_fn(m, |i, j| {
        (if i == j { 1.0 } else { 0.0 }) + x.get(i, j)
    }));
    let sigma_norm = 1.0 / det;

    let table = ContractionTable {
        params: *params,
        modes: alpha,
        k2,
        x,
        lambda,
        sigma_norm,
        condition: lu.condition,
        x_imag_residual,
    };
    debug_assert!(
        math::abs(table.sigma_norm * table.lambda_product() - 1.0) < 1e-8,
        "determinant and eigenvalue routes to the normalization disagree"
    );
    Ok(table)
}

/// Strip unimodular per-index phases off `K` to obtain the real antisymmetric
/// `X`.
///
/// Candidate readings are tried in order and the one with the smallest
/// imaginary residual wins; in practice that is `X = -i e^{i(α₁+α₂)} K`,
/// with no angle dependence.
fn strip_phases(alpha: &ModeSet, k2: &CMat) -> (RMat, f64) {
    let m = k2.n();
    let phase = |sign_alpha: f64, with_theta: bool, i: usize, j: usize| -> C64 {
        let (ai, aj) = (alpha.mode(i), alpha.mode(j));
        let mut p = C64::new(0.0, -1.0) * cis(sign_alpha * (ai.k + aj.k));
        if with_theta {
            p *= cis(-(ai.theta + aj.theta));
            p = -p;
        }
        p
    };
    let mut best: Option<(RMat, f64)> = None;
    for &(sa, th) in &[(1.0, false), (1.0, true), (-1.0, false), (-1.0, true)] {
        let mut resid = 0.0_f64;
        let x = RMat::from_fn(m, |i, j| {
            if i == j {
                return 0.0;
            }
            let v = phase(sa, th, i, j) * k2.get(i, j);
            resid = resid.max(math::abs(v.im));
            v.re
        });
        if best.as_ref().map_or(true, |(_, r)| resid < *r) {
            best = Some((x, resid));
        }
    }
    let (x, resid) = best.unwrap();
    debug_assert!(resid < 1e-8, "no phase reading produced a real X (residual {resid})");
    (x, resid)
}

/// Paired eigenvalue magnitudes of a real antisymmetric matrix from the
/// symmetric positive-semidefinite `X Xᵀ`.
fn lambda_pairs(x: &RMat) -> Vec<f64> {
    let m = x.n();
    let s = RMat::from_fn(m, |i, j| (0..m).map(|k| x.get(i, k) * x.get(j, k)).sum());
    let mut nu = linalg::jacobi_eigenvalues(&s);
    nu.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let scale = nu.first().copied().unwrap_or(0.0).max(0.0);
    // Zero detection happens on the squared eigenvalues, whose noise floor
    // is machine epsilon times the scale; the effective threshold on |λ| is
    // therefore ~1e-7 λmax rather than the 1e-10 a direct antisymmetric
    // eigensolve would support.
    let cutoff = 1e-14 * scale;
    (0..m / 2)
        .map(|j| {
            let v = nu[2 * j];
            if v <= cutoff {
                0.0
            } else {
                math::sqrt(v)
            }
        })
        .collect()
}

/// A transition dipole matrix element `⟨Φ₋|G(α_n)…G(α₁) σ₁ˣ|Φ₊⟩`.
///
/// The global phase of `⟨Φ₋|σ₁ˣ|Φ₊⟩` (strong coupling) or `⟨Φ₋|Φ₊⟩` (weak
/// coupling) is unobservable and fixed to the positive real root; only
/// `|amplitude|²` is basis independent.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElement {
    pub wavenumbers: Vec<f64>,
    pub amplitude: C64,
    pub excitation_count: usize,
}

impl MatrixElement {
    pub fn strength(&self) -> f64 {
        let a = math::cabs(self.amplitude);
        a * a
    }
}

fn resolve_indices(modes: &ModeSet, wavenumbers: &[f64]) -> Result<(Vec<usize>, bool)> {
    let mut idx = Vec::with_capacity(wavenumbers.len());
    let mut repeated = false;
    for &k in wavenumbers {
        let i = modes.index_of(k).ok_or(Error::OffGrid("wavenumber not on the periodic grid"))?;
        if idx.contains(&i) {
            repeated = true;
        }
        idx.push(i);
    }
    Ok((idx, repeated))
}

/// Strong-coupling element with an even number of excitations:
/// `amplitude = Pf[K(α_i, α_j)] · ⟨Φ₋|σ₁ˣ|Φ₊⟩`.
///
/// A repeated wavenumber gives an exactly zero amplitude (degenerate
/// Pfaffian); an odd count is rejected.
pub fn higher_elements_strong(table: &ContractionTable, wavenumbers: &[f64]) -> Result<MatrixElement> {
    if wavenumbers.len() % 2 != 0 {
        return Err(Error::BadExcitationCount {
            expected: "an even number of",
            got: wavenumbers.len(),
        });
    }
    let (idx, repeated) = resolve_indices(&table.modes, wavenumbers)?;
    let amplitude = if repeated {
        C64::new(0.0, 0.0)
    } else {
        let k2 = &table.k2;
        let pf = linalg::pfaffian_complex(idx.len(), &|p, q| k2.get(idx[p], idx[q]));
        pf * math::sqrt(table.sigma_norm)
    };
    Ok(MatrixElement {
        wavenumbers: wavenumbers.to_vec(),
        amplitude,
        excitation_count: wavenumbers.len(),
    })
}

/// Squared ground-state overlap `|⟨Φ₋|Φ₊⟩|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundOverlap {
    pub value_sq: f64,
}

/// `|⟨Φ₋|Φ₊⟩|²` for `B < 1` by the duality argument: the kernel pipeline run
/// at the dual parameters `(2|b|, -ε/2)` yields exactly this overlap as its
/// scalar normalization.
pub fn ground_overlap(params: &ModelParams) -> Result<GroundOverlap> {
    params.require_weak("ground-state overlap")?;
    if params.b() == 0.0 {
        // uncoupled chain: both sector vacua are the bare vacuum
        return Ok(GroundOverlap { value_sq: 1.0 });
    }
    let dual = params.dual()?;
    let table = build_table(&dual)?;
    Ok(GroundOverlap { value_sq: table.sigma_norm })
}

/// Weak-coupling kernel data: the vacuum-sector kernel `W`, the one-particle
/// function `K(α_j)`, and the ground-state overlap.
#[derive(Debug, Clone)]
pub struct WeakCouplingTable {
    params: ModelParams,
    modes: ModeSet,
    w: CMat,
    k_one: Vec<C64>,
    overlap: GroundOverlap,
    condition: f64,
}

impl WeakCouplingTable {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    /// Vacuum-sector kernel `W(α_i, α_j) = ⟨Φ₋|G(α_j)G(α_i)|Φ₊⟩/⟨Φ₋|Φ₊⟩`.
    pub fn w(&self) -> &CMat {
        &self.w
    }

    /// One-particle function `K(α_j) = ⟨Φ₋|G(α_j)σ₁ˣ|Φ₊⟩/⟨Φ₋|Φ₊⟩`.
    pub fn k_one(&self) -> &[C64] {
        &self.k_one
    }

    pub fn overlap(&self) -> GroundOverlap {
        self.overlap
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Independent completeness route to the overlap:
    /// `|⟨Φ₋|Φ₊⟩|² = det(I + W W†)^{-1/2}`.
    ///
    /// Kept separate from the duality value so the two can be checked against
    /// each other.
    pub fn overlap_from_completeness(&self) -> f64 {
        let m = self.w.n();
        let mut g = CMat::zeros(m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                for k in 0..m {
                    acc += self.w.get(i, k) * self.w.get(j, k).conj();
                }
                g.set(i, j, acc);
            }
        }
        let det = CLu::factor(&g).map(|lu| lu.det().re).unwrap_or(f64::INFINITY);
        1.0 / math::sqrt(det)
    }

    /// Bordered antisymmetric matrix entry for a tuple: row/column 0 carries
    /// the one-particle function, the block carries `W`.
    #[inline]
    fn bordered(&self, idx: &[usize], p: usize, q: usize) -> C64 {
        match (p, q) {
            (0, q) => self.k_one[idx[q - 1]],
            (p, 0) => -self.k_one[idx[p - 1]],
            (p, q) => self.w.get(idx[p - 1], idx[q - 1]),
        }
    }

    /// σ₁ˣ-normalized squared element for a tuple of distinct grid indices
    /// (odd count).
    pub fn tuple_strength(&self, idx: &[usize]) -> f64 {
        let pf = linalg::pfaffian_complex(idx.len() + 1, &|p, q| self.bordered(idx, p, q));
        let a = math::cabs(pf);
        a * a * self.overlap.value_sq
    }
}

/// Solve the vacuum-sector kernel system and the one-particle function for
/// `B < 1`.
pub fn weak_table(params: &ModelParams) -> Result<WeakCouplingTable> {
    params.require_weak("vacuum-sector kernel")?;
    let m = params.m();
    let alpha = ModeSet::periodic(params);
    let beta = ModeSet::antiperiodic(params);

    let a = CMat::from_fn(m, |ib, ia| weak_u_idx(&alpha, &beta, ia, ib));
    let lu = CLu::factor(&a)?;
    let mut w = CMat::zeros(m);
    let mut rhs = vec![C64::new(0.0, 0.0); m];
    for ja in 0..m {
        for (ib, r) in rhs.iter_mut().enumerate() {
            *r = -weak_v_idx(&alpha, &beta, ja, ib);
        }
        let col = lu.solve(&rhs);
        for (ia, v) in col.iter().enumerate() {
            w.set(ia, ja, *v);
        }
    }

    // K(α_j) = M^{-1/2} [ Σ_{α₀} e^{i(α₀-θ(α₀))} W(α₀, α_j) + e^{-i(α_j-θ(α_j))} ]
    let inv_sqrt_m = 1.0 / math::sqrt(m as f64);
    let k_one: Vec<C64> = (0..m)
        .map(|j| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..m {
                let md = alpha.mode(i);
                acc += cis(md.k - md.theta) * w.get(i, j);
            }
            let mj = alpha.mode(j);
            (acc + cis(-(mj.k - mj.theta))) * inv_sqrt_m
        })
        .collect();

    let overlap = ground_overlap(params)?;
    Ok(WeakCouplingTable { params: *params, modes: alpha, w, k_one, overlap, condition: lu.condition })
}

/// The `M` one-particle amplitudes `K(α_j)` for `B < 1`.
pub fn weak_one_particle(params: &ModelParams) -> Result<Vec<C64>> {
    Ok(weak_table(params)?.k_one)
}

/// Weak-coupling element with an odd number of excitations, expanded into
/// one-particle functions times vacuum-sector Pfaffians and normalized by
/// the ground-state overlap.
pub fn higher_elements_weak(table: &WeakCouplingTable, wavenumbers: &[f64]) -> Result<MatrixElement> {
    if wavenumbers.len() % 2 != 1 {
        return Err(Error::BadExcitationCount {
            expected: "an odd number of",
            got: wavenumbers.len(),
        });
    }
    let (idx, repeated) = resolve_indices(&table.modes, wavenumbers)?;
    let amplitude = if repeated {
        C64::new(0.0, 0.0)
    } else {
        let pf = linalg::pfaffian_complex(idx.len() + 1, &|p, q| table.bordered(&idx, p, q));
        pf * math::sqrt(table.overlap.value_sq)
    };
    Ok(MatrixElement {
        wavenumbers: wavenumbers.to_vec(),
        amplitude,
        excitation_count: wavenumbers.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn strong(m: usize, b: f64) -> ContractionTable {
        solve_k2(&ModelParams::new(1.0, b, m).unwrap()).unwrap()
    }

    #[test]
    fn coeff_matches_uncoupled_closed_form() {
        // b -> 0 so theta = 0: (0, pi/4)_1 = [e^{i(0-pi/4)} + 1]/(4[e^{i pi/4}-1])
        let params = ModelParams::new(1.0, 0.0, 4).unwrap();
        let a = ModeSet::periodic(&params);
        let b = ModeSet::antiperiodic(&params);
        let beta = core::f64::consts::FRAC_PI_4;
        let got = contraction_coeff(&a, &b, 0.0, beta, CoeffKind::L1).unwrap();
        let want = (cis(-beta) + C64::new(1.0, 0.0)) / ((cis(beta) - C64::new(1.0, 0.0)) * 4.0);
        assert!(math::cabs(got - want) < 1e-15);
    }

    #[test]
    fn coeff_frozen_high_precision_value() {
        // (pi/3, pi/6)_2 at eps=1, b=-0.7, M=6; reference computed with
        // 130-digit arithmetic and frozen here.
        let params = ModelParams::new(1.0, -0.7, 6).unwrap();
        let a = ModeSet::periodic(&params);
        let b = ModeSet::antiperiodic(&params);
        let got = contraction_coeff(
            &a,
            &b,
            core::f64::consts::FRAC_PI_3,
            core::f64::consts::FRAC_PI_6,
            CoeffKind::L2,
        )
        .unwrap();
        assert_relative_eq!(got.re, 0.00379522261049832430063, max_relative = 1e-13);
        assert_relative_eq!(got.im, 0.002191172795805761748016, max_relative = 1e-13);
    }

    #[test]
    fn coeff_rejects_same_grid_arguments() {
        let params = ModelParams::new(1.0, -0.7, 6).unwrap();
        let a = ModeSet::periodic(&params);
        let b = ModeSet::antiperiodic(&params);
        assert!(contraction_coeff(&a, &b, 0.0, core::f64::consts::FRAC_PI_3, CoeffKind::L1).is_err());
        assert!(matches!(
            contraction_coeff(&a, &b, core::f64::consts::FRAC_PI_6, 0.3, CoeffKind::L1),
            Err(Error::OffGrid(_))
        ));
    }

    #[test]
    fn denominator_lower_bound() {
        let params = ModelParams::new(1.0, -0.7, 8).unwrap();
        let a = ModeSet::periodic(&params);
        let b = ModeSet::antiperiodic(&params);
        let m = 8.0;
        let bound = m * math::cabs(cis(core::f64::consts::PI / m) - C64::new(1.0, 0.0)) - 1e-12;
        for ma in a.modes() {
            for mb in b.modes() {
                let den = math::cabs(cis(mb.k - ma.k) - C64::new(1.0, 0.0)) * m;
                assert!(den >= bound);
            }
        }
    }

    #[test]
    fn kernel_is_antisymmetric_with_zero_diagonal() {
        for (m, b) in [(4usize, -0.7), (5, -0.8), (6, -0.6), (9, -2.0)] {
            let t = strong(m, b);
            for i in 0..m {
                for j in 0..m {
                    let d = math::cabs(t.k2().get(i, j) + t.k2().get(j, i));
                    assert!(d < 1e-10, "K2 antisymmetry broken at ({i},{j}): {d}");
                }
            }
        }
    }

    #[test]
    fn x_is_real_antisymmetric_with_paired_spectrum() {
        for (m, b) in [(4usize, -0.7), (7, -0.9), (8, -1.0)] {
            let t = strong(m, b);
            assert!(t.x_imag_residual() < 1e-10);
            for i in 0..m {
                for j in 0..m {
                    assert!(math::abs(t.x().get(i, j) + t.x().get(j, i)) < 1e-10);
                }
            }
            assert_eq!(t.lambda().len(), m / 2);
            assert_relative_eq!(t.sigma_norm() * t.lambda_product(), 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn odd_chain_has_odd_zero_count() {
        // X is odd-dimensional for odd M, so its spectrum must carry an odd
        // number of zeros: the pairing leaves exactly one unpaired
        // eigenvalue, which has to sit at the numerical noise floor.
        for m in [5usize, 7, 9] {
            let t = strong(m, -0.8);
            let x = t.x();
            let s = RMat::from_fn(m, |i, j| (0..m).map(|k| x.get(i, k) * x.get(j, k)).sum());
            let mut nu = linalg::jacobi_eigenvalues(&s);
            nu.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert!(nu[m - 1].max(0.0) <= 1e-12 * nu[0], "M = {m}: {:?}", nu);
            assert_eq!(t.lambda().len(), m / 2);
            assert!(t.lambda().iter().all(|&l| l > 1e-7 * t.lambda()[0] || l == 0.0));
        }
    }

    #[test]
    fn strong_base_cases() {
        let t = strong(6, -0.7);
        let empty = higher_elements_strong(&t, &[]).unwrap();
        assert_relative_eq!(empty.strength(), t.sigma_norm(), max_relative = 1e-12);
        // n = 1 pair: |amplitude|^2 = |K(a1,a2)|^2 sigma_norm
        let a = t.modes().mode(1).k;
        let b = t.modes().mode(3).k;
        let el = higher_elements_strong(&t, &[a, b]).unwrap();
        let k = t.k2().get(1, 3);
        assert_relative_eq!(
            el.strength(),
            math::cabs(k) * math::cabs(k) * t.sigma_norm(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn strong_rejects_odd_and_zeroes_repeats() {
        let t = strong(6, -0.7);
        let k1 = t.modes().mode(1).k;
        assert!(higher_elements_strong(&t, &[k1]).is_err());
        let el = higher_elements_strong(&t, &[k1, k1]).unwrap();
        assert_eq!(el.amplitude, C64::new(0.0, 0.0));
    }

    #[test]
    fn pfaffian_squared_equals_restricted_determinant() {
        let t = strong(8, -0.9);
        let idx = [0usize, 2, 3, 5];
        let pf = linalg::pfaffian_real(t.x(), &idx);
        let sub = RMat::from_fn(4, |p, q| t.x().get(idx[p], idx[q]));
        assert_relative_eq!(pf * pf, linalg::det_real(&sub), max_relative = 1e-9);
    }

    #[test]
    fn antisymmetry_of_elements_under_exchange() {
        let t = strong(8, -0.9);
        let ks: Vec<f64> = [1usize, 2, 5, 6].iter().map(|&i| t.modes().mode(i).k).collect();
        let base = higher_elements_strong(&t, &ks).unwrap();
        let mut swapped = ks.clone();
        swapped.swap(0, 2);
        let other = higher_elements_strong(&t, &swapped).unwrap();
        assert!(math::cabs(base.amplitude + other.amplitude) < 1e-12);
    }

    #[test]
    fn weak_elements_antisymmetric_under_exchange() {
        let t = weak_table(&ModelParams::new(1.0, -0.45, 8).unwrap()).unwrap();
        let ks: Vec<f64> = [1usize, 4, 6].iter().map(|&i| t.modes().mode(i).k).collect();
        let base = higher_elements_weak(&t, &ks).unwrap();
        let mut swapped = ks.clone();
        swapped.swap(0, 1);
        let other = higher_elements_weak(&t, &swapped).unwrap();
        assert!(math::cabs(base.amplitude + other.amplitude) < 1e-12);
        let repeated = higher_elements_weak(&t, &[ks[0], ks[0], ks[1]]).unwrap();
        assert_eq!(repeated.amplitude, C64::new(0.0, 0.0));
    }

    #[test]
    fn weak_table_b_zero_limit() {
        let params = ModelParams::new(1.0, 0.0, 8).unwrap();
        let t = weak_table(&params).unwrap();
        assert_abs_diff_eq!(t.overlap().value_sq, 1.0);
        for (j, k) in t.k_one().iter().enumerate() {
            // K(alpha_j) -> M^{-1/2} e^{-i alpha_j}
            let want = cis(-t.modes().mode(j).k) / math::sqrt(8.0);
            assert!(math::cabs(*k - want) < 1e-12);
        }
    }

    #[test]
    fn weak_rejects_even_counts_and_strong_regime() {
        let params = ModelParams::new(1.0, -0.3, 6).unwrap();
        let t = weak_table(&params).unwrap();
        let k1 = t.modes().mode(1).k;
        let k2 = t.modes().mode(2).k;
        assert!(higher_elements_weak(&t, &[k1, k2]).is_err());
        assert!(weak_table(&ModelParams::new(1.0, -0.8, 6).unwrap()).is_err());
        assert!(ground_overlap(&ModelParams::new(1.0, -0.8, 6).unwrap()).is_err());
    }

    #[test]
    fn overlap_duality_and_completeness_routes_agree() {
        for (m, b) in [(4usize, -0.25), (5, -0.3), (6, -0.4), (8, -0.45)] {
            let t = weak_table(&ModelParams::new(1.0, b, m).unwrap()).unwrap();
            assert_relative_eq!(
                t.overlap().value_sq,
                t.overlap_from_completeness(),
                max_relative = 1e-9
            );
            assert!(t.overlap().value_sq > 0.0 && t.overlap().value_sq <= 1.0);
        }
    }

    #[test]
    fn overlap_decreases_toward_critical_coupling() {
        let m = 10;
        let vals: Vec<f64> = [0.2, 0.5, 0.8]
            .iter()
            .map(|&b_ratio| {
                ground_overlap(&ModelParams::from_b_ratio(b_ratio, m).unwrap())
                    .unwrap()
                    .value_sq
            })
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2]);
    }
}
