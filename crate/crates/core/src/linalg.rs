//! Dense kernels sized for the `O(M³)` pipeline: complex LU with partial
//! pivoting (the kernel systems), a real LU determinant, cyclic Jacobi
//! eigenvalues for symmetric matrices, and Pfaffians of small antisymmetric
//! blocks.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{C64, Error, Result};

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    a: Vec<C64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, a: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.a[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.a
    }

    pub fn max_abs(&self, other: impl Fn(usize, usize) -> C64) -> f64 {
        let mut worst = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = math::cabs(self.get(i, j) - other(i, j));
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

/// Row-major square real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RMat {
    n: usize,
    a: Vec<f64>,
}

impl RMat {
    pub fn zeros(n: usize) -> Self {
        RMat { n, a: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = RMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }
}

/// LU factorization (partial pivoting) of a complex matrix.
///
/// Factors once, solves many right-hand sides; this is the backbone of the
/// kernel systems, which share one coefficient matrix across all columns.
pub struct CLu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    swaps: usize,
    /// Crude conditioning estimate `max|U_kk| / min|U_kk|`.
    pub condition: f64,
}

impl CLu {
    pub fn factor(m: &CMat) -> Result<CLu> {
        let n = m.n;
        let mut lu = m.a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut umax: f64 = 0.0;
        let mut umin: f64 = f64::INFINITY;
        for k in 0..n {
            let mut p = k;
            let mut best = math::cabs(lu[k * n + k]);
            for i in k + 1..n {
                let v = math::cabs(lu[i * n + k]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < 1e-300 {
                return Err(Error::SingularSystem { condition: f64::INFINITY });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let piv = lu[k * n + k];
            let pa = math::cabs(piv);
            umax = umax.max(pa);
            umin = umin.min(pa);
            for i in k + 1..n {
                let l = lu[i * n + k] / piv;
                lu[i * n + k] = l;
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= l * u;
                }
            }
        }
        Ok(CLu { n, lu, perm, swaps, condition: umax / umin })
    }

    /// Determinant from the factorization (pivot-sign corrected).
    pub fn det(&self) -> C64 {
        let sign = if self.swaps % 2 == 0 { 1.0 } else { -1.0 };
        let mut det = C64::new(sign, 0.0);
        for k in 0..self.n {
            det *= self.lu[k * self.n + k];
        }
        det
    }

    /// Solve `A x = b` for one right-hand side.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}

/// Determinant of a real matrix by LU with partial pivoting.
pub fn det_real(m: &RMat) -> f64 {
    let n = m.n;
    let mut a = m.a.clone();
    let mut det = 1.0;
    for k in 0..n {
        let mut p = k;
        let mut best = math::abs(a[k * n + k]);
        for i in k + 1..n {
            let v = math::abs(a[i * n + k]);
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        det *= piv;
        for i in k + 1..n {
            let l = a[i * n + k] / piv;
            for j in k + 1..n {
                let u = a[k * n + j];
                a[i * n + j] -= l * u;
            }
        }
    }
    det
}

/// Eigenvalues of a symmetric real matrix by cyclic Jacobi rotations.
///
/// Plenty for the `M × M` spectra sizes here; returns eigenvalues in
/// unspecified order.
pub fn jacobi_eigenvalues(m: &RMat) -> Vec<f64> {
    let n = m.n;
    let mut a = m.a.clone();
    if n == 0 {
        return Vec::new();
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        let scale: f64 = (0..n).map(|i| math::abs(a[i * n + i])).fold(1e-300, f64::max);
        if math::sqrt(off) < 1e-14 * scale * (n as f64) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if math::abs(apq) < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + math::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Pfaffian of the antisymmetric restriction of `x` to `idx`, by first-row
/// expansion. `idx.len()` must be even; intended for small restrictions.
pub fn pfaffian_real(x: &RMat, idx: &[usize]) -> f64 {
    let n = idx.len();
    debug_assert!(n % 2 == 0);
    match n {
        0 => 1.0,
        2 => x.get(idx[0], idx[1]),
        4 => {
            x.get(idx[0], idx[1]) * x.get(idx[2], idx[3])
                - x.get(idx[0], idx[2]) * x.get(idx[1], idx[3])
                + x.get(idx[0], idx[3]) * x.get(idx[1], idx[2])
        }
        _ => {
            let mut total = 0.0;
            let mut sub: Vec<usize> = Vec::with_capacity(n - 2);
            for j in 1..n {
                let aij = x.get(idx[0], idx[j]);
                if aij != 0.0 {
                    sub.clear();
                    sub.extend(idx[1..j].iter().copied());
                    sub.extend(idx[j + 1..].iter().copied());
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    total += sign * aij * pfaffian_real(x, &sub);
                }
            }
            total
        }
    }
}

/// Pfaffian of a small dense complex antisymmetric matrix given by a lookup.
pub fn pfaffian_complex(n: usize, at: &impl Fn(usize, usize) -> C64) -> C64 {
    fn recurse(idx: &[usize], at: &impl Fn(usize, usize) -> C64) -> C64 {
        let n = idx.len();
        match n {
            0 => C64::new(1.0, 0.0),
            2 => at(idx[0], idx[1]),
            4 => {
                at(idx[0], idx[1]) * at(idx[2], idx[3]) - at(idx[0], idx[2]) * at(idx[1], idx[3])
                    + at(idx[0], idx[3]) * at(idx[1], idx[2])
            }
            _ => {
                let mut total = C64::new(0.0, 0.0);
                let mut sub: Vec<usize> = Vec::with_capacity(n - 2);
                for j in 1..n {
                    sub.clear();
                    sub.extend(idx[1..j].iter().copied());
                    sub.extend(idx[j + 1..].iter().copied());
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    total += sign * at(idx[0], idx[j]) * recurse(&sub, at);
                }
                total
            }
        }
    }
    if n % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let idx: Vec<usize> = (0..n).collect();
    recurse(&idx, at)
}

/// Determinant of the restriction of an antisymmetric real matrix, through
/// the squared Pfaffian. Restrictions of odd size have determinant zero.
pub fn det_restricted_antisymmetric(x: &RMat, idx: &[usize]) -> f64 {
    if idx.len() % 2 == 1 {
        return 0.0;
    }
    let p = pfaffian_real(x, idx);
    p * p
}
