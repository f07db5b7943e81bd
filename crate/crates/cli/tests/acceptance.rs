//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p kmm-cli --test acceptance -- --nocapture` to see
//! the per-criterion lines; failures panic with the measured numbers.

use std::time::Instant;

use kmm_core::model::{gap_integral, ground_energies, ModelParams};
use kmm_core::spectra::{self, GridSpec, SpectrumEngine};
use kmm_core::wick;
use rayon::prelude::*;

fn params(b_ratio: f64, m: usize) -> ModelParams {
    ModelParams::from_b_ratio(b_ratio, m).unwrap()
}

fn report(criterion: &str, detail: &str) {
    println!("criterion {criterion}: PASS — {detail}");
}

/// Criterion 1: the analytic pipeline matches brute-force diagonalization
/// for M = 2..10 and B in {0.3, 0.8, 1.2, 2.0} — energies to 1e-9 relative,
/// degeneracy-grouped squared dipole elements to 1e-7 absolute, parity
/// selection exact to 1e-12 — in under two minutes.
#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let b_values = [0.3, 0.8, 1.2, 2.0];
    let mut points = Vec::new();
    for m in 2..=10usize {
        for &b in &b_values {
            points.push((m, b));
        }
    }
    let results: Vec<_> = points
        .par_iter()
        .map(|&(m, b)| kmm_oracle::report::run_point(&params(b, m)).unwrap())
        .collect();
    let mut n_checks = 0;
    let mut worst: (f64, String) = (0.0, String::new());
    for checks in &results {
        for c in checks {
            n_checks += 1;
            assert!(
                c.pass,
                "check {} at {} failed: deviation {:.3e} > tol {:.0e}",
                c.name, c.params, c.max_deviation, c.tolerance
            );
            let rel = c.max_deviation / c.tolerance;
            if rel > worst.0 {
                worst = (rel, format!("{} at {}", c.name, c.params));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "oracle equivalence took {elapsed:.1} s (budget 120 s)");
    report(
        "1 (oracle equivalence)",
        &format!(
            "{n_checks} checks over 36 parameter points, tightest margin {:.1e} of tolerance ({}), {elapsed:.1} s",
            worst.0, worst.1
        ),
    );
}

/// Criterion 2: completeness sums. Exhaustive manifold sums equal 1 ± 1e-8
/// for M ≤ 10; sums truncated at four excitations stay in [0.999, 1] for
/// M = 200 at B in {0.4, 1.4}; all in under ten minutes.
#[test]
fn criterion_2_completeness() {
    let start = Instant::now();
    for m in 2..=10usize {
        for b in [0.4, 1.4] {
            let engine = SpectrumEngine::new(&params(b, m)).unwrap();
            let total = engine.completeness(m).unwrap();
            assert!(
                (total - 1.0).abs() <= 1e-8,
                "exhaustive completeness at M={m} B={b}: {total}"
            );
        }
    }
    let mut truncated = Vec::new();
    for b in [0.4, 1.4] {
        let engine = SpectrumEngine::new(&params(b, 200)).unwrap();
        let total = engine.completeness(4).unwrap();
        assert!(
            (0.999..=1.0 + 1e-9).contains(&total),
            "truncated completeness at M=200 B={b}: {total}"
        );
        truncated.push(total);
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "completeness took {elapsed:.1} s (budget 600 s)");
    report(
        "2 (completeness sums)",
        &format!(
            "exhaustive at M ≤ 10 within 1e-8; truncated at M = 200: {:.10} (B=0.4), {:.10} (B=1.4); {elapsed:.1} s",
            truncated[0], truncated[1]
        ),
    );
}

/// Criterion 3: infinite-size closed-form anchors.
#[test]
fn criterion_3_closed_form_anchors() {
    let a98 = spectra::infinite_a(0.98).unwrap();
    let at102 = spectra::infinite_a_tilde(1.02).unwrap();
    let at14 = spectra::infinite_a_tilde(1.4).unwrap();
    assert!((a98 - 22.3).abs() <= 0.1, "A[0.98] = {a98}");
    assert!((at102 - 0.444).abs() <= 0.002, "Ã[1.02] = {at102}");
    assert!((at14 - 0.8365).abs() <= 0.002, "Ã[1.4] = {at14}");
    report(
        "3 (closed-form anchors)",
        &format!("A[0.98] = {a98:.4}, Ã[1.02] = {at102:.4}, Ã[1.4] = {at14:.4}"),
    );
}

/// Criterion 4: finite-size strengths track the closed forms within 2% at
/// M = 200 away from the critical point, and stay bounded next to it while
/// the closed forms diverge (weak side) or vanish (strong side).
#[test]
fn criterion_4_finite_vs_infinite_size() {
    let m = 200;
    let mut details = Vec::new();
    for b in [0.3, 0.5, 0.7, 0.9] {
        let chi1 = spectra::chi1(&params(b, m)).unwrap();
        let a = spectra::infinite_a(b).unwrap();
        let rel = (chi1 / m as f64 / a - 1.0).abs();
        assert!(rel <= 0.02, "chi1/M at B={b}: {} vs A={a} ({rel:.2e})", chi1 / m as f64);
        details.push(format!("B={b}: {rel:.1e}"));
    }
    for b in [1.2, 1.4, 2.0] {
        let chi0 = spectra::chi0(&params(b, m)).unwrap();
        let at = spectra::infinite_a_tilde(b).unwrap();
        let rel = (chi0 / (m * m) as f64 / at - 1.0).abs();
        assert!(rel <= 0.02, "chi0/M² at B={b}: {} vs Ã={at} ({rel:.2e})", chi0 / (m * m) as f64);
        details.push(format!("B={b}: {rel:.1e}"));
    }
    // near-critical: finite-M values bounded, closed forms divergent/vanishing
    let chi1_near = spectra::chi1(&params(0.998, m)).unwrap() / m as f64;
    let a_near = spectra::infinite_a(0.998).unwrap();
    assert!(chi1_near.is_finite() && chi1_near > 1.0 && chi1_near < a_near,
        "near-critical weak side: chi1/M = {chi1_near}, A = {a_near}");
    let chi0_near = spectra::chi0(&params(1.002, m)).unwrap() / (m * m) as f64;
    let at_near = spectra::infinite_a_tilde(1.002).unwrap();
    assert!(chi0_near.is_finite() && chi0_near > at_near && chi0_near < 1.0,
        "near-critical strong side: chi0/M² = {chi0_near}, Ã = {at_near}");
    report(
        "4 (finite vs infinite size)",
        &format!(
            "relative deviations {}; near B=1: chi1/M = {chi1_near:.2} < A = {a_near:.2}, chi0/M² = {chi0_near:.3} > Ã = {at_near:.3}",
            details.join(", ")
        ),
    );
}

/// Criterion 5: size-scaling laws and quoted enhancement factors.
#[test]
fn criterion_5_scaling_laws() {
    let sizes = [50usize, 100, 200];
    let per_site: Vec<f64> = sizes
        .iter()
        .map(|&m| spectra::chi1(&params(0.5, m)).unwrap() / m as f64)
        .collect();
    let spread = per_site.iter().cloned().fold(f64::MIN, f64::max)
        / per_site.iter().cloned().fold(f64::MAX, f64::min)
        - 1.0;
    assert!(spread < 0.01, "chi1/M at B=0.5 varies by {spread:.2e} over M={sizes:?}");
    let per_site2: Vec<f64> = sizes
        .iter()
        .map(|&m| spectra::chi0(&params(1.4, m)).unwrap() / (m * m) as f64)
        .collect();
    let spread2 = per_site2.iter().cloned().fold(f64::MIN, f64::max)
        / per_site2.iter().cloned().fold(f64::MAX, f64::min)
        - 1.0;
    assert!(spread2 < 0.01, "chi0/M² at B=1.4 varies by {spread2:.2e} over M={sizes:?}");
    // enhancement over the coupling-independent reference rate M x gamma_f
    let m = 200.0;
    let e102 = spectra::infinite_a_tilde(1.02).unwrap() * m;
    let e14 = spectra::infinite_a_tilde(1.4).unwrap() * m;
    assert!((e102 - 88.0).abs() <= 3.0, "enhancement at B=1.02: {e102}");
    assert!((e14 - 168.0).abs() <= 4.0, "enhancement at B=1.4: {e14}");
    report(
        "5 (scaling laws)",
        &format!(
            "chi1/M spread {spread:.1e}, chi0/M² spread {spread2:.1e}; enhancements {e102:.1} (B=1.02), {e14:.1} (B=1.4)"
        ),
    );
}

/// Criterion 6: the contour-integral gap equals the mode-sum gap to 1e-8
/// relative for B in {1.1, 1.4, 2.0} and M in {10, 50, 200}, and decreases
/// strictly with M.
///
/// At large M·ln B the sums cancel dozens of digits below what f64 can
/// carry, so the mode-sum reference values were evaluated once in 130-digit
/// arithmetic and frozen here; the live f64 mode sums are additionally
/// compared wherever they can still resolve the gap.
#[test]
fn criterion_6_gap_consistency() {
    const FROZEN_MODE_SUM_GAPS: [(f64, usize, f64); 9] = [
        (1.1, 10, 0.04277404236668942440329),
        (1.1, 50, 0.0003347140388068782057564),
        (1.1, 200, 9.813859813594026826905e-11),
        (1.4, 10, 0.006708731143966035146401),
        (1.4, 50, 3.948898494036155385229e-9),
        (1.4, 200, 2.338479611517304910891e-31),
        (2.0, 10, 0.0003207266806837757777487),
        (2.0, 50, 1.242782962167861139296e-16),
        (2.0, 200, 4.313467190915990088275e-62),
    ];
    let mut worst = 0.0f64;
    for &(b, m, frozen) in &FROZEN_MODE_SUM_GAPS {
        let p = params(b, m);
        let integral = gap_integral(&p).unwrap();
        let rel = (integral / frozen - 1.0).abs();
        assert!(rel <= 1e-8, "integral vs mode-sum at B={b} M={m}: rel {rel:.2e}");
        worst = worst.max(rel);
        if frozen > 1e-6 {
            let live = ground_energies(&p).gap;
            let rel_live = (live / integral - 1.0).abs();
            assert!(rel_live <= 1e-8, "live f64 mode sum at B={b} M={m}: rel {rel_live:.2e}");
        }
    }
    for b in [1.1, 1.4, 2.0] {
        let gaps: Vec<f64> =
            [10, 50, 200].iter().map(|&m| gap_integral(&params(b, m)).unwrap()).collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] > 0.0,
            "gap not strictly decreasing at B={b}: {gaps:?}");
    }
    report(
        "6 (gap consistency)",
        &format!("9 (B, M) points, worst relative deviation {worst:.2e}; strictly decreasing in M"),
    );
}

/// Criterion 7: correlation structure. The fluctuation sum C(0) + 2 Σ C(m)
/// reproduces A[B] within 1% at B in {0.5, 0.9}; the fitted decay length is
/// required to lie within 15% of 1/(1-B); the uncoupled-chain reference is
/// exactly δ_{m0}.
#[test]
fn criterion_7_correlation_structure() {
    let hl = spectra::CorrelationFunction::heitler_london(16);
    assert_eq!(hl.values[0], 1.0);
    assert!(hl.values[1..].iter().all(|&v| v == 0.0));

    let mut lengths = Vec::new();
    for b in [0.5, 0.9] {
        let c = spectra::correlations(&params(b, 8), 200).unwrap();
        let a = spectra::infinite_a(b).unwrap();
        let rel = (c.sum_rule / a - 1.0).abs();
        assert!(rel <= 0.01, "sum rule at B={b}: {} vs A={a}", c.sum_rule);
        lengths.push((b, c.correlation_length));
    }
    for &(b, length) in &lengths {
        let target = 1.0 / (1.0 - b);
        let rel = (length / target - 1.0).abs();
        assert!(
            rel <= 0.15,
            "fitted correlation length at B={b}: {length:.4} vs 1/(1-B) = {target}; \
             the exact tail decays as B^m, i.e. on the length 1/ln(1/B) = {:.4}, \
             which only approaches 1/(1-B) as B -> 1",
            1.0 / (1.0 / b).ln()
        );
    }
    report(
        "7 (correlation structure)",
        &format!(
            "sum rules within 1%; fitted lengths {:?}; HL reference exact",
            lengths
        ),
    );
}

/// Criterion 8: three-excitation absorption density at M = 200 peaks within
/// 0.5 of k = ±π for B in {0.4, 0.9}, and the manifold state counts are
/// C(200,2) = 19900 and C(200,3) = 1313400.
#[test]
fn criterion_8_density_qualitative() {
    let spec = GridSpec::figure_default();
    let strong = SpectrumEngine::new(&params(1.4, 200)).unwrap();
    let grid2 = strong.absorption_density(2, &spec).unwrap();
    assert_eq!(grid2.tuple_count, 19_900, "two-excitation count");

    let mut maxima = Vec::new();
    for b in [0.4, 0.9] {
        let engine = SpectrumEngine::new(&params(b, 200)).unwrap();
        let grid = engine.absorption_density(3, &spec).unwrap();
        assert_eq!(grid.tuple_count, 1_313_400, "three-excitation count at B={b}");
        let (k, e, rho) = grid.max_bin_location();
        // highest bin restricted to the zone-boundary band, for diagnosis
        let mut band_max = (0.0f64, 0.0f64, 0.0f64);
        for ik in 0..spec.n_k {
            let kc = spec.k_min + (ik as f64 + 0.5) * spec.dk();
            if (kc.abs() - std::f64::consts::PI).abs() >= 0.5 {
                continue;
            }
            for ie in 0..spec.n_e {
                let v = grid.bin(ik, ie);
                if v > band_max.2 {
                    band_max = (kc, spec.e_min + (ie as f64 + 0.5) * spec.de(), v);
                }
            }
        }
        let dist = (k.abs() - std::f64::consts::PI).abs();
        assert!(
            dist < 0.5,
            "density maximum at B={b} sits at (k={k:.3}, E={e:.3}, ρ={rho:.3}), \
             |k∓π| = {dist:.3}; the highest bin inside the |k∓π| < 0.5 band is \
             ρ={:.3} at (k={:.3}, E={:.3}). The per-state strengths match brute \
             force to 1e-14, so the global maximum genuinely lies on the \
             strength ridge rather than the zone-boundary caustic at this \
             coupling.",
            band_max.2, band_max.0, band_max.1
        );
        maxima.push(format!("B={b}: max ρ={rho:.3} at (k={k:.2}, E={e:.2})"));
    }
    report("8 (density figures)", &maxima.join("; "));
}

/// Criterion 9: the kernel solve at M = 200 finishes well inside 60 s and
/// its cost grows like M³ (timing ratio M=200/M=100 within [6, 12]).
#[test]
fn criterion_9_performance() {
    let p100 = params(1.4, 100);
    let p200 = params(1.4, 200);
    // warm up
    wick::solve_k2(&p100).unwrap();
    wick::solve_k2(&p200).unwrap();
    let time_of = |p: &ModelParams| -> f64 {
        let mut times = Vec::new();
        for _ in 0..7 {
            let t = Instant::now();
            let table = wick::solve_k2(p).unwrap();
            let dt = t.elapsed().as_secs_f64();
            assert!(table.sigma_norm() > 0.0);
            times.push(dt);
        }
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times[times.len() / 2]
    };
    let t100 = time_of(&p100);
    let t200 = time_of(&p200);
    assert!(t200 < 60.0, "solve at M=200 took {t200:.2} s (budget 60 s)");
    let ratio = t200 / t100;
    assert!(
        (6.0..=12.0).contains(&ratio),
        "M=200/M=100 runtime ratio {ratio:.2} outside the cubic-scaling band [6, 12] \
         (t100 = {t100:.4} s, t200 = {t200:.4} s)"
    );
    report(
        "9 (performance)",
        &format!("solve at M=200: {t200:.3} s; scaling ratio {ratio:.1}"),
    );
}
