//! Fermion Fock-space constructions used to validate the analytic pipeline
//! at the operator level: the sector quadratic forms, their BCS-like vacua,
//! quasiparticle operators, and kernel matrix elements extracted by direct
//! state manipulation.
//!
//! Site fermions come from the string transformation: bit `j` of a basis
//! index is the occupation of site `j + 1`, and `f†_m` carries the sign
//! `(-1)^{n_1 + … + n_{m-1}}`.

use kmm_core::model::{bogoliubov_angle, ModeSet, ModelParams, Sector};
use kmm_core::{C64, Error, Result};
use nalgebra::DMatrix;

/// Dense state vectors and operator applications for `M ≤ 12` sites.
pub struct FockSpace {
    m: usize,
    dim: usize,
}

pub type State = Vec<C64>;

impl FockSpace {
    pub fn new(m: usize) -> Result<FockSpace> {
        if m > super::ORACLE_M_CAP {
            return Err(Error::InvalidParams("chain length exceeds the dense oracle cap of 12"));
        }
        Ok(FockSpace { m, dim: 1usize << m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero(&self) -> State {
        vec![C64::new(0.0, 0.0); self.dim]
    }

    fn jw_sign(s: usize, site: usize) -> f64 {
        if (s & ((1 << site) - 1)).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Apply `f†_{site+1}`.
    pub fn apply_fdag(&self, site: usize, v: &State) -> State {
        let mut out = self.zero();
        let bit = 1usize << site;
        for (s, &amp) in v.iter().enumerate() {
            if s & bit == 0 {
                out[s | bit] += amp * Self::jw_sign(s, site);
            }
        }
        out
    }

    /// Apply `f_{site+1}`.
    pub fn apply_f(&self, site: usize, v: &State) -> State {
        let mut out = self.zero();
        let bit = 1usize << site;
        for (s, &amp) in v.iter().enumerate() {
            if s & bit != 0 {
                out[s & !bit] += amp * Self::jw_sign(s & !bit, site);
            }
        }
        out
    }

    /// Apply `σ₁ˣ = f†_1 + f_1` (no string on the first site).
    pub fn apply_sigma_x1(&self, v: &State) -> State {
        let mut out = self.zero();
        for (s, &amp) in v.iter().enumerate() {
            out[s ^ 1] += amp;
        }
        out
    }

    /// Apply `F†(k) = M^{-1/2} Σ_m e^{ikm} f†_m`.
    pub fn apply_fourier_dag(&self, k: f64, v: &State) -> State {
        let norm = 1.0 / (self.m as f64).sqrt();
        let mut out = self.zero();
        for site in 0..self.m {
            let phase = C64::from_polar(norm, k * (site + 1) as f64);
            let t = self.apply_fdag(site, v);
            for (o, a) in out.iter_mut().zip(t.iter()) {
                *o += phase * a;
            }
        }
        out
    }

    /// Apply `F(k)`, the adjoint of [`Self::apply_fourier_dag`].
    pub fn apply_fourier(&self, k: f64, v: &State) -> State {
        let norm = 1.0 / (self.m as f64).sqrt();
        let mut out = self.zero();
        for site in 0..self.m {
            let phase = C64::from_polar(norm, -k * (site + 1) as f64);
            let t = self.apply_f(site, v);
            for (o, a) in out.iter_mut().zip(t.iter()) {
                *o += phase * a;
            }
        }
        out
    }

    /// Apply the quasiparticle annihilator
    /// `G(k) = cos θ(k) F(k) + i sin θ(k) F†(-k)`.
    pub fn apply_g(&self, params: &ModelParams, k: f64, v: &State) -> State {
        let theta = bogoliubov_angle(params, k);
        let a = self.apply_fourier(k, v);
        let b = self.apply_fourier_dag(-k, v);
        let (c, s) = (theta.cos(), theta.sin());
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x * c + C64::new(0.0, s) * y)
            .collect()
    }

    /// Apply `G†(k) = cos θ(k) F†(k) - i sin θ(k) F(-k)`.
    pub fn apply_gdag(&self, params: &ModelParams, k: f64, v: &State) -> State {
        let theta = bogoliubov_angle(params, k);
        let a = self.apply_fourier_dag(k, v);
        let b = self.apply_fourier(-k, v);
        let (c, s) = (theta.cos(), theta.sin());
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x * c - C64::new(0.0, s) * y)
            .collect()
    }

    /// Dense matrix of the fermion quadratic form for one sector:
    /// `ε Σ n_m + b Σ_{bonds} (f†_m - f_m)(f†_{m+1} + f_{m+1})`, with the
    /// wrap bond entering antiperiodically (`f_{M+1} = -f_1`) for the even
    /// sector and periodically for the odd sector.
    pub fn quadratic_form(&self, params: &ModelParams, sector: Sector) -> DMatrix<f64> {
        let boundary = match sector {
            Sector::Antiperiodic => -1.0,
            Sector::Periodic => 1.0,
        };
        let mut h = DMatrix::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            let mut v = self.zero();
            v[col] = C64::new(1.0, 0.0);
            let mut out: Vec<C64> = v
                .iter()
                .enumerate()
                .map(|(s, &a)| a * params.epsilon() * s.count_ones() as f64)
                .collect();
            for bond in 0..self.m {
                let (p, q, sign) = if bond + 1 < self.m {
                    (bond, bond + 1, 1.0)
                } else {
                    (self.m - 1, 0, boundary)
                };
                // (f†_p - f_p)(f†_q + f_q)
                let right: State = {
                    let a = self.apply_fdag(q, &v);
                    let b = self.apply_f(q, &v);
                    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
                };
                let a = self.apply_fdag(p, &right);
                let b = self.apply_f(p, &right);
                for (o, (x, y)) in out.iter_mut().zip(a.iter().zip(b.iter())) {
                    *o += (x - y) * params.b() * sign;
                }
            }
            for (row, val) in out.iter().enumerate() {
                debug_assert!(val.im.abs() < 1e-12);
                h[(row, col)] = val.re;
            }
        }
        h
    }

    /// Ground state of a sector quadratic form: `(energy, vector)`.
    pub fn sector_vacuum(&self, params: &ModelParams, sector: Sector) -> (f64, State) {
        let h = self.quadratic_form(params, sector);
        let (values, vectors) = crate::eigen::symmetric_eigen_accurate(&h);
        let v = vectors.column(0);
        (values[0], v.iter().map(|&x| C64::new(x, 0.0)).collect())
    }
}

pub fn inner(a: &State, b: &State) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &State) -> f64 {
    inner(a, a).re.sqrt()
}

/// Kernel matrix elements extracted directly from the sector vacua. The
/// ratios are independent of the arbitrary phases of the vacua, so they can
/// be compared entrywise against the linear-system kernels.
pub struct KernelOracle {
    /// `K(α_i, α_j) = ⟨Φ₋|G(α_j)G(α_i)σ₁ˣ|Φ₊⟩ / ⟨Φ₋|σ₁ˣ|Φ₊⟩`.
    pub k2: DMatrix<C64>,
    /// `W(α_i, α_j) = ⟨Φ₋|G(α_j)G(α_i)|Φ₊⟩ / ⟨Φ₋|Φ₊⟩` (weak coupling only).
    pub w: Option<DMatrix<C64>>,
    /// One-particle function `⟨Φ₋|G(α_j)σ₁ˣ|Φ₊⟩ / ⟨Φ₋|Φ₊⟩` (weak only).
    pub k_one: Option<Vec<C64>>,
    /// `|⟨Φ₋|σ₁ˣ|Φ₊⟩|²`.
    pub sigma_norm: f64,
    /// `|⟨Φ₋|Φ₊⟩|²`.
    pub overlap_sq: f64,
}

impl KernelOracle {
    pub fn build(params: &ModelParams) -> Result<KernelOracle> {
        let space = FockSpace::new(params.m())?;
        let m = params.m();
        let alpha = ModeSet::periodic(params);
        let (_, phi_plus) = space.sector_vacuum(params, Sector::Antiperiodic);
        let (_, phi_minus) = space.sector_vacuum(params, Sector::Periodic);

        let sx = space.apply_sigma_x1(&phi_plus);
        let sigma = inner(&phi_minus, &sx);
        let overlap = inner(&phi_minus, &phi_plus);

        let g_applied: Vec<State> =
            (0..m).map(|i| space.apply_g(params, alpha.mode(i).k, &sx)).collect();
        let mut k2 = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let both = space.apply_g(params, alpha.mode(j).k, &g_applied[i]);
                k2[(i, j)] = inner(&phi_minus, &both) / sigma;
            }
        }

        let weak = params.b_ratio() < 1.0 && params.b() != 0.0;
        let (w, k_one) = if weak {
            let gv: Vec<State> =
                (0..m).map(|i| space.apply_g(params, alpha.mode(i).k, &phi_plus)).collect();
            let mut w = DMatrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    let both = space.apply_g(params, alpha.mode(j).k, &gv[i]);
                    w[(i, j)] = inner(&phi_minus, &both) / overlap;
                }
            }
            let k_one: Vec<C64> =
                (0..m).map(|i| inner(&phi_minus, &g_applied[i]) / overlap).collect();
            (Some(w), Some(k_one))
        } else {
            (None, None)
        };

        Ok(KernelOracle {
            k2,
            w,
            k_one,
            sigma_norm: sigma.norm_sqr(),
            overlap_sq: overlap.norm_sqr(),
        })
    }
}
