//! Dense site-basis diagonalization of the chain Hamiltonian.
//!
//! The Hamiltonian conserves excitation-count parity, so the two parity
//! sectors are built and diagonalized separately; this keeps parity labels
//! exact and halves the dense eigenproblem.

use kmm_core::model::{ModeSet, ModelParams};
use kmm_core::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Hard cap on the dense oracle; `2^M` grows out of hand beyond this.
pub const ORACLE_M_CAP: usize = 12;

fn check_cap(params: &ModelParams) -> Result<()> {
    if params.m() > ORACLE_M_CAP {
        return Err(Error::InvalidParams("chain length exceeds the dense oracle cap of 12"));
    }
    Ok(())
}

#[inline]
fn rotate_down(s: usize, m: usize) -> usize {
    (s >> 1) | ((s & 1) << (m - 1))
}

#[inline]
fn rotate_up(s: usize, m: usize) -> usize {
    ((s << 1) | (s >> (m - 1))) & ((1 << m) - 1)
}

/// Matrix element `⟨s'|H|s⟩` of the site-basis Hamiltonian, evaluated on the
/// fly. Diagonal: `ε · (number of excitations)`. Off-diagonal: `b` for every
/// bond `m` whose two sites are flipped between `s` and `s'`; the cyclic sum
/// runs over `m = 1..M`, so for `M = 2` the single physical pair is visited
/// twice and carries `2b`.
fn h_entry(params: &ModelParams, sp: usize, s: usize) -> f64 {
    let m = params.m();
    let mut v = 0.0;
    if sp == s {
        v += params.epsilon() * s.count_ones() as f64;
    }
    for bond in 0..m {
        let mask = (1usize << bond) | (1usize << ((bond + 1) % m));
        if sp == s ^ mask {
            v += params.b();
        }
    }
    v
}

/// Full `2^M × 2^M` site-basis Hamiltonian.
pub fn build_hamiltonian(params: &ModelParams) -> Result<DMatrix<f64>> {
    check_cap(params)?;
    let dim = 1usize << params.m();
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        h[(s, s)] = params.epsilon() * s.count_ones() as f64;
        for bond in 0..params.m() {
            let mask = (1usize << bond) | (1usize << ((bond + 1) % params.m()));
            h[(s ^ mask, s)] += params.b();
        }
    }
    Ok(h)
}

/// Maximum absolute entries of `[H, Q]` (parity) and `[H, T]` (translation),
/// computed entrywise without materializing the commutators.
pub fn commutator_checks(params: &ModelParams) -> Result<(f64, f64)> {
    check_cap(params)?;
    let m = params.m();
    let dim = 1usize << m;
    let mut parity_max = 0.0f64;
    let mut translation_max = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let h = h_entry(params, i, j);
            if h != 0.0 {
                let qi = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                let qj = if j.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                parity_max = parity_max.max((h * (qj - qi)).abs());
            }
            let ht = h_entry(params, i, rotate_down(j, m));
            let th = h_entry(params, rotate_up(i, m), j);
            translation_max = translation_max.max((ht - th).abs());
        }
    }
    Ok((parity_max, translation_max))
}

struct SectorEigen {
    /// Basis bitmasks of this sector, index-aligned with eigenvector rows.
    states: Vec<usize>,
    /// Ascending eigenvalues.
    values: Vec<f64>,
    /// Eigenvectors as columns, aligned with `values`.
    vectors: DMatrix<f64>,
}

fn diagonalize_sector(params: &ModelParams, even: bool) -> SectorEigen {
    let m = params.m();
    let dim = 1usize << m;
    let states: Vec<usize> =
        (0..dim).filter(|s| (s.count_ones() % 2 == 0) == even).collect();
    let mut pos = vec![usize::MAX; dim];
    for (i, &s) in states.iter().enumerate() {
        pos[s] = i;
    }
    let n = states.len();
    let mut h = DMatrix::zeros(n, n);
    for (i, &s) in states.iter().enumerate() {
        h[(i, i)] = params.epsilon() * s.count_ones() as f64;
        for bond in 0..m {
            let mask = (1usize << bond) | (1usize << ((bond + 1) % m));
            h[(pos[s ^ mask], i)] += params.b();
        }
    }
    let (values, vectors) = crate::eigen::symmetric_eigen_accurate(&h);
    SectorEigen { states, values, vectors }
}

/// One dipole transition from the ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleLine {
    /// Excitation energy above the ground state.
    pub energy: f64,
    /// `|⟨n| Σ_m σ_mˣ |0⟩|²`.
    pub strength: f64,
}

/// Full spectral data of the dense oracle.
pub struct DenseSpectrum {
    params: ModelParams,
    even: SectorEigen,
    odd: SectorEigen,
    /// All `2^M` eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Parity (`+1` even, `-1` odd) aligned with `eigenvalues`.
    pub parities: Vec<i8>,
}

impl DenseSpectrum {
    pub fn build(params: &ModelParams) -> Result<DenseSpectrum> {
        check_cap(params)?;
        let even = diagonalize_sector(params, true);
        let odd = diagonalize_sector(params, false);
        let mut merged: Vec<(f64, i8)> = even
            .values
            .iter()
            .map(|&e| (e, 1i8))
            .chain(odd.values.iter().map(|&e| (e, -1i8)))
            .collect();
        merged.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let eigenvalues = merged.iter().map(|p| p.0).collect();
        let parities = merged.iter().map(|p| p.1).collect();
        Ok(DenseSpectrum { params: *params, even, odd, eigenvalues, parities })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Ground-state energy; the ground state always lives in the even sector.
    pub fn ground_energy(&self) -> f64 {
        self.even.values[0]
    }

    /// Lowest energy of the odd-parity sector.
    pub fn odd_sector_ground(&self) -> f64 {
        self.odd.values[0]
    }

    /// All dipole transitions `|0⟩ → |n⟩` under the full-chain operator
    /// `Σ_m σ_mˣ`. The operator flips parity, so every line targets the odd
    /// sector; strengths to even states vanish identically (selection rule).
    pub fn dipole_elements(&self) -> Vec<DipoleLine> {
        let m = self.params.m();
        let dim = 1usize << m;
        let ground = self.even.vectors.column(0);
        let e0 = self.ground_energy();
        let mut pos_odd = vec![usize::MAX; dim];
        for (i, &s) in self.odd.states.iter().enumerate() {
            pos_odd[s] = i;
        }
        let mut applied = DVector::zeros(self.odd.states.len());
        for (i, &s) in self.even.states.iter().enumerate() {
            let amp = ground[i];
            for site in 0..m {
                applied[pos_odd[s ^ (1usize << site)]] += amp;
            }
        }
        let overlaps = self.odd.vectors.transpose() * applied;
        self.odd
            .values
            .iter()
            .zip(overlaps.iter())
            .map(|(&e, &o)| DipoleLine { energy: e - e0, strength: o * o })
            .collect()
    }

    /// All dipole transitions `|0⟩ → |n⟩` under the single-site operator
    /// `σ₁ˣ`. Unlike the full-chain operator these reach every total
    /// momentum, so they pin the momentum-resolved strength distribution.
    pub fn site_dipole_elements(&self) -> Vec<DipoleLine> {
        let dim = 1usize << self.params.m();
        let ground = self.even.vectors.column(0);
        let e0 = self.ground_energy();
        let mut pos_odd = vec![usize::MAX; dim];
        for (i, &s) in self.odd.states.iter().enumerate() {
            pos_odd[s] = i;
        }
        let mut applied = DVector::zeros(self.odd.states.len());
        for (i, &s) in self.even.states.iter().enumerate() {
            applied[pos_odd[s ^ 1]] += ground[i];
        }
        let overlaps = self.odd.vectors.transpose() * applied;
        self.odd
            .values
            .iter()
            .zip(overlaps.iter())
            .map(|(&e, &o)| DipoleLine { energy: e - e0, strength: o * o })
            .collect()
    }

    /// Translation eigenphase `⟨n|T|n⟩` for every odd-sector eigenstate that
    /// is nondegenerate within `tol`; `None` where degeneracy makes the
    /// single-state phase gauge dependent. Real nondegenerate eigenstates can
    /// only carry momentum `0` or `π`, i.e. phase `±1`.
    pub fn odd_translation_phases(&self, tol: f64) -> Vec<Option<f64>> {
        let m = self.params.m();
        let n = self.odd.values.len();
        let dim = 1usize << m;
        let mut pos = vec![usize::MAX; dim];
        for (i, &s) in self.odd.states.iter().enumerate() {
            pos[s] = i;
        }
        (0..n)
            .map(|j| {
                let isolated = (j == 0 || self.odd.values[j] - self.odd.values[j - 1] > tol)
                    && (j + 1 == n || self.odd.values[j + 1] - self.odd.values[j] > tol);
                if !isolated {
                    return None;
                }
                let v = self.odd.vectors.column(j);
                let mut phase = 0.0;
                for (i, &s) in self.odd.states.iter().enumerate() {
                    phase += v[pos[rotate_down(s, m)]] * v[i];
                }
                Some(phase)
            })
            .collect()
    }
}

/// Parity selection rule checked through the full-space path: diagonalize
/// the complete `2^M` Hamiltonian with no sector bookkeeping, and return the
/// largest dipole strength from the ground state into any parity-pure even
/// eigenstate (`⟨Q⟩ > 0.999`). Exactly zero in exact arithmetic.
///
/// States mixed across parities by degeneracy are skipped; their individual
/// strengths are gauge dependent.
pub fn parity_selection_residual(params: &ModelParams) -> Result<f64> {
    let h = build_hamiltonian(params)?;
    let m = params.m();
    let dim = 1usize << m;
    let (_, vectors) = crate::eigen::symmetric_eigen_accurate(&h);
    let ground = vectors.column(0);
    let mut applied = DVector::zeros(dim);
    for s in 0..dim {
        for site in 0..m {
            applied[s ^ (1usize << site)] += ground[s];
        }
    }
    let mut worst = 0.0f64;
    for j in 1..dim {
        let v = vectors.column(j);
        let q: f64 = v
            .iter()
            .enumerate()
            .map(|(s, &a)| if s.count_ones() % 2 == 0 { a * a } else { -a * a })
            .sum();
        if q > 0.999 {
            let overlap: f64 = v.dot(&applied);
            worst = worst.max(overlap * overlap);
        }
    }
    Ok(worst)
}

/// Merge `(energy, strength)` lines into degeneracy groups: only
/// subspace-summed strengths are gauge independent.
pub fn group_by_energy(lines: &[(f64, f64)], tol: f64) -> Vec<(f64, f64)> {
    let mut sorted: Vec<(f64, f64)> = lines.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (e, s) in sorted {
        match out.last_mut() {
            Some(last) if e - last.0 <= tol => last.1 += s,
            _ => out.push((e, s)),
        }
    }
    out
}

/// The full `2^M` spectrum predicted by the mode structure: even-size subsets
/// of antiperiodic quasiparticles on the `H₊` vacuum, plus periodic-grid
/// subsets of parity fixed by the regime (odd for `B < 1`, even for `B > 1`)
/// on the `H₋` vacuum. Ascending.
pub fn analytic_level_enumeration(params: &ModelParams) -> Result<Vec<f64>> {
    check_cap(params)?;
    let m = params.m();
    let energies = kmm_core::model::ground_energies(params);
    let alpha = ModeSet::periodic(params);
    let beta = ModeSet::antiperiodic(params);
    let odd_sector_parity = if alpha.mode(0).occupied_in_vacuum { 0 } else { 1 };
    let mut levels = Vec::with_capacity(1usize << m);
    for subset in 0..(1usize << m) {
        let count = subset.count_ones() as usize;
        let e_beta: f64 = (0..m)
            .filter(|i| subset & (1 << i) != 0)
            .map(|i| beta.mode(i).e)
            .sum();
        if count % 2 == 0 {
            levels.push(energies.e_plus + e_beta);
        }
        let e_alpha: f64 = (0..m)
            .filter(|i| subset & (1 << i) != 0)
            .map(|i| alpha.mode(i).e)
            .sum();
        if count % 2 == odd_sector_parity {
            levels.push(energies.e_minus + e_alpha);
        }
    }
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(levels)
}

/// One-excitation reference with the double-(de)excitation terms dropped.
pub struct HlReference {
    /// Eigenvalues of the `M × M` hopping block, ascending.
    pub eigenvalues: Vec<f64>,
    /// Total one-excitation oscillator strength; equals `M` at every
    /// coupling (the approximation has no coupling-dependent enhancement).
    pub chi1: f64,
}

/// Diagonalize the one-excitation hopping block `ε δ_{pq} + b δ_{p,q±1}`
/// (cyclic) and sum the oscillator strengths from the uncoupled ground state.
pub fn hl_reference(params: &ModelParams) -> HlReference {
    let m = params.m();
    let mut h = DMatrix::zeros(m, m);
    for p in 0..m {
        h[(p, p)] = params.epsilon();
        h[(p, (p + 1) % m)] += params.b();
        h[((p + 1) % m, p)] += params.b();
    }
    let (eigenvalues, vectors) = crate::eigen::symmetric_eigen_accurate(&h);
    // |<v| Sum_m sx_m |vac>|^2 = (Sum_m v_m)^2, summed over the block
    let chi1 = (0..m)
        .map(|j| {
            let s: f64 = vectors.column(j).iter().sum();
            s * s
        })
        .sum();
    HlReference { eigenvalues, chi1 }
}
