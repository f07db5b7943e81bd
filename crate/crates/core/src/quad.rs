//! Adaptive Simpson quadrature with Richardson error control.
//!
//! Integrands in this crate are smooth after the endpoint substitutions, so a
//! recursive Simpson rule with the standard `|S2 - S1|/15` estimate reaches
//! absolute tolerances near machine precision quickly.

use crate::{Error, Result};

const MAX_DEPTH: u32 = 60;

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_with_min_depth(f, a, b, tol, 4)
}

/// Like [`integrate`], but refuses to accept an interval before `min_depth`
/// bisections. Oscillatory integrands sampled at dyadic points can alias to
/// a spuriously zero error estimate; forcing the first levels of refinement
/// breaks the symmetry.
pub fn integrate_with_min_depth(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    min_depth: u32,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::QuadratureFailure("tolerance must be positive"));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, min_depth.min(MAX_DEPTH))
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    force: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if force == 0 && err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure("max refinement depth reached"));
    }
    let half = 0.5 * tol;
    let deeper = force.saturating_sub(1);
    Ok(step(f, a, m, fa, flm, fm, left, half, depth - 1, deeper)?
        + step(f, m, b, fm, frm, fb, right, half, depth - 1, deeper)?)
}
