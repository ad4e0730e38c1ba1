//! The acceptance suite: each criterion runs at its stated tolerance and
//! runtime budget and reports pass/fail with a short detail line.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cattaneo_core::catalog::preset;
use cattaneo_core::exact::{half, int, ratio, Rational};
use cattaneo_core::grid::logspace;
use cattaneo_core::linalg;
use cattaneo_core::region::{decay_order, ParameterPoint, VerdictKind};
use cattaneo_core::resolvent::{growth_exponent, Envelope};
use cattaneo_core::semigroup::{
    certified_window, decay_fit, dissipation_residual, energy_trace, ModalState, SemigroupModes,
};
use cattaneo_core::spectrum::{modal_eigenvalues, optimality_exponent, solve_quartic, table::p234_constants, QuarticCoeffs};
use cattaneo_core::verify::{representative, verify_tables};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: Option<f64>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({:.2}s) — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn run(id: u32, name: &'static str, budget: Option<f64>, body: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (ok, mut detail) = body();
    let seconds = start.elapsed().as_secs_f64();
    let in_budget = budget.is_none_or(|b| seconds < b);
    if !in_budget {
        detail.push_str(&format!("; over runtime budget {}s", budget.unwrap_or_default()));
    }
    CriterionResult {
        id,
        name,
        passed: ok && in_budget,
        detail,
        seconds,
        budget_seconds: budget,
    }
}

fn inertial(a: Rational, b: Rational, g: Rational) -> ParameterPoint {
    ParameterPoint::inertial(a, b, g, 1.0).expect("valid point")
}

fn noninertial(a: Rational, b: Rational) -> ParameterPoint {
    ParameterPoint::noninertial(a, b).expect("valid point")
}

/// 1. Decay orders of the worked examples, as exact rationals.
pub fn rate_golden() -> CriterionResult {
    run(1, "exact decay orders of the worked examples", Some(1.0), || {
        let cases = [
            (inertial(int(0), int(1), half()), ratio(1, 6)),
            (inertial(half(), int(0), half()), half()),
            (inertial(int(1), int(1), half()), ratio(3, 2)),
            (noninertial(int(0), int(1)), half()),
            (noninertial(half(), int(0)), half()),
            (noninertial(int(1), int(1)), int(1)),
        ];
        let mut bad = Vec::new();
        for (p, k) in &cases {
            match decay_order(p) {
                Ok(v) if v.kind == VerdictKind::Polynomial && v.order.as_ref() == Some(k) => {}
                other => bad.push(format!("{p}: {other:?}")),
            }
        }
        (bad.is_empty(), if bad.is_empty() { "6/6 exact".into() } else { bad.join("; ") })
    })
}

fn table_criterion(id: u32, inertial: bool, budget: f64) -> CriterionResult {
    let name = if inertial { "table 1 branches (m = 1)" } else { "table 2 branches (m = 0)" };
    run(id, name, Some(budget), || {
        let report = verify_tables(inertial);
        let failed: Vec<String> = report
            .rows
            .iter()
            .filter(|r| !r.passed)
            .map(|r| {
                format!(
                    "{} ({}{})",
                    r.region,
                    r.final_error.map(|e| format!("{:.1}% at 1e8", 100.0 * e)).unwrap_or_default(),
                    r.failure.as_ref().map(|f| format!(", {f}")).unwrap_or_default()
                )
            })
            .collect();
        let mut detail = format!("{}/{} rows within 5% and non-increasing", report.passed_rows, report.total_rows);
        if !failed.is_empty() {
            detail.push_str(&format!("; failing: {}", failed.join(", ")));
        }
        (report.passed(), detail)
    })
}

/// 2. Every row of the `m = 1` table.
pub fn table1() -> CriterionResult {
    table_criterion(2, true, 10.0)
}

/// 3. Every row of the `m = 0` table.
pub fn table2() -> CriterionResult {
    table_criterion(3, false, 5.0)
}

/// 4. Roots of the P234 cubic.
pub fn p234_cubic() -> CriterionResult {
    run(4, "P234 cubic constants", None, || {
        let j = p234_constants();
        let want = [-24.0858, -5.52312, 0.608892];
        let dev = j.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        (dev <= 1e-4, format!("j = {j:.6?}, max deviation {dev:.1e}"))
    })
}

/// Random point with `beta >= 2 alpha - 1`; half of them without inertia.
pub fn random_wellposed_point(rng: &mut ChaCha8Rng) -> ParameterPoint {
    loop {
        let a: f64 = rng.random_range(0.0..=1.0);
        let b: f64 = rng.random_range(0.0..=1.0);
        if b < 2.0 * a - 1.0 {
            continue;
        }
        let inertial = rng.random_bool(0.5);
        let m = if inertial { rng.random_range(0.05..3.0) } else { 0.0 };
        let g = inertial.then(|| rng.random_range(0.01..=1.0));
        let sigma = 10f64.powf(rng.random_range(-1.0..1.0));
        let tau = 10f64.powf(rng.random_range(-1.0..1.0));
        return ParameterPoint::from_f64(a, b, g, m, sigma, tau).expect("sampled in range");
    }
}

/// 5. No root in the closed right half plane for well-posed points.
pub fn strong_stability() -> CriterionResult {
    run(5, "strong stability on random well-posed points", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
        let mus = logspace(1.0, 1e10, 20);
        let mut violations = 0;
        let mut failures = 0;
        let mut first = None;
        for _ in 0..1000 {
            let p = random_wellposed_point(&mut rng);
            for &mu in &mus {
                match modal_eigenvalues(&p, mu) {
                    Ok(r) if r.max_real_part() < 0.0 => {}
                    Ok(r) => {
                        violations += 1;
                        first.get_or_insert(format!("{p} mu={mu:e}: {r:?}"));
                    }
                    Err(e) => {
                        failures += 1;
                        first.get_or_insert(format!("{p} mu={mu:e}: {e}"));
                    }
                }
            }
        }
        let ok = violations == 0 && failures == 0;
        let mut detail = format!("20000 spectra, {violations} violations, {failures} solver errors");
        if let Some(f) = first {
            detail.push_str(&format!("; first: {f}"));
        }
        (ok, detail)
    })
}

/// Deviation of the closed-form roots from the companion-matrix oracle,
/// relative to the largest root modulus, and the Vieta residuals relative
/// to `sum |l_i|` and `prod |l_i|`.
pub fn oracle_deviation(c: &QuarticCoeffs) -> Option<(f64, f64)> {
    let roots = solve_quartic(c).ok()?.roots;
    let oracle = linalg::companion_roots(&c.to_array());
    let oracle = [oracle[0], oracle[1], oracle[2], oracle[3]];
    let scale = oracle.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let dev = cattaneo_core::spectrum::multiset_distance(&roots, &oracle) / scale;
    let sum: Complex64 = roots.iter().sum();
    let prod: Complex64 = roots.iter().product();
    let abs_sum: f64 = roots.iter().map(|z| z.norm()).sum();
    let abs_prod: f64 = roots.iter().map(|z| z.norm()).product();
    let vieta = ((sum + c.c3 / c.c4).norm() / abs_sum).max((prod - c.c0 / c.c4).norm() / abs_prod);
    Some((dev, vieta))
}

/// 6. Closed-form quartic against the companion-matrix oracle.
pub fn quartic_oracle() -> CriterionResult {
    run(6, "quartic solver vs companion-matrix oracle", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
        let (mut worst_dev, mut worst_vieta, mut errors) = (0.0f64, 0.0f64, 0);
        for _ in 0..1000 {
            let lead = rng.random_range(0.5..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let c = QuarticCoeffs::new(
                lead,
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            match oracle_deviation(&c) {
                Some((d, v)) => {
                    worst_dev = worst_dev.max(d);
                    worst_vieta = worst_vieta.max(v);
                }
                None => errors += 1,
            }
        }
        (
            errors == 0 && worst_dev < 1e-8 && worst_vieta < 1e-9,
            format!("max deviation {worst_dev:.2e} (< 1e-8), max Vieta residual {worst_vieta:.2e} (< 1e-9), {errors} errors"),
        )
    })
}

/// 7. Critical-branch slopes against `-1/k`.
pub fn optimality_fits() -> CriterionResult {
    run(7, "optimality exponents along the critical branch", None, || {
        let mus = logspace(1e4, 1e10, 13);
        let cases = [
            ("V1 L124", inertial(half(), int(0), half())),
            ("V2 T2", inertial(ratio(1, 4), ratio(1, 4), ratio(1, 4))),
            ("V3 T3", inertial(int(0), int(1), half())),
            ("V1* F14s", noninertial(int(1), int(1))),
            ("V2* L23s", noninertial(int(0), int(1))),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, p) in &cases {
            let k = decay_order(p).ok().and_then(|v| v.order_f64()).unwrap_or(f64::NAN);
            let want = -1.0 / k;
            match optimality_exponent(p, &mus) {
                Ok(f) => {
                    let rel = ((f.slope - want) / want).abs();
                    ok &= rel <= 0.03;
                    parts.push(format!("{name} {:.4} vs {:.4}", f.slope, want));
                }
                Err(e) => {
                    ok = false;
                    parts.push(format!("{name}: {e}"));
                }
            }
        }
        (ok, parts.join(", "))
    })
}

/// 8. Resolvent growth `~ lambda^{1/k}`, and boundedness on F13.
pub fn resolvent_growth() -> CriterionResult {
    run(8, "resolvent growth exponents", Some(60.0), || {
        let modes = logspace(1e-1, 1e13, 701);
        // name, point, lambda window, expected slope (None: bounded)
        type Case = (&'static str, ParameterPoint, (f64, f64), Option<f64>);
        let cases: [Case; 3] = [
            ("example2", preset("example2").expect("preset").point, (1e1, 1e3), Some(2.0)),
            ("example3-m0", preset("example3-m0").expect("preset").point, (1e2, 1e4), Some(1.0)),
            ("F13", representative(cattaneo_core::region::RegionLabel::F13).expect("F13 point"), (1e1, 1e3), None),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, p, (lo, hi), want) in cases {
            match growth_exponent(&p, &logspace(lo, hi, 25), &modes, Envelope::Continuous) {
                Ok(g) => {
                    let s = g.fit.slope;
                    match want {
                        Some(w) => {
                            ok &= ((s - w) / w).abs() <= 0.10;
                            parts.push(format!("{name} {s:.4} vs {w}"));
                        }
                        None => {
                            ok &= s.abs() < 0.1;
                            parts.push(format!("{name} {s:.4} (bounded)"));
                        }
                    }
                }
                Err(e) => {
                    ok = false;
                    parts.push(format!("{name}: {e}"));
                }
            }
        }
        (ok, parts.join(", "))
    })
}

/// 9. Semigroup norm decay for example 2, energy identity and monotonicity.
pub fn semigroup_decay() -> CriterionResult {
    run(9, "semigroup norm decay and energy identity", Some(120.0), || {
        let pre = preset("example2").expect("preset");
        let modes = pre.sequence.values();
        let mut parts = Vec::new();
        let mut ok = true;

        let ts = logspace(1e2, 1e5, 30);
        match SemigroupModes::new(&pre.point, &modes) {
            Ok(flows) => {
                let series = flows.norm_series(&ts);
                match certified_window(&series, modes.len()) {
                    Some(window) => {
                        let values: Vec<f64> = series.iter().map(|s| s.norm).collect();
                        match decay_fit(&ts, &values, window) {
                            Ok(f) => {
                                let s = f.power.slope;
                                ok &= ((s + 0.5) / 0.5).abs() <= 0.15;
                                parts.push(format!("slope {s:.4} vs -0.5 on t in [{:.0}, {:.0}]", window.0, window.1));
                            }
                            Err(e) => {
                                ok = false;
                                parts.push(e.to_string());
                            }
                        }
                    }
                    None => {
                        ok = false;
                        parts.push("no certified window".into());
                    }
                }
            }
            Err(e) => {
                ok = false;
                parts.push(e.to_string());
            }
        }

        // energy identity, O(h^2)
        let mode = [(3000.0, ModalState::real(0.01, 0.3, -0.5, 0.8))];
        match (
            dissipation_residual(&pre.point, &mode, 0.37, 1e-4),
            dissipation_residual(&pre.point, &mode, 0.37, 1e-5),
        ) {
            (Ok(a), Ok(b)) => {
                let ratio = a.residual / b.residual;
                ok &= (ratio / 100.0 - 1.0).abs() <= 0.2;
                parts.push(format!("residual ratio {ratio:.1}"));
            }
            _ => {
                ok = false;
                parts.push("dissipation residual failed".into());
            }
        }

        // energy monotone along random multi-mode trajectories
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
        let times = logspace(1e-3, 1e3, 200);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let p = random_wellposed_point(&mut rng);
            let state: Vec<(f64, ModalState)> = (1..=8)
                .map(|n| {
                    let mu = (n as f64).powi(4);
                    let mut r = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    (mu, ModalState::new(r(), r(), r(), r()))
                })
                .collect();
            match energy_trace(&p, &state, &times) {
                Ok(tr) => worst = worst.max(tr.max_increase()),
                Err(_) => worst = f64::INFINITY,
            }
        }
        ok &= worst <= 1e-9;
        parts.push(format!("max energy increase {worst:.1e}"));
        (ok, parts.join("; "))
    })
}

/// 10. Table verification reports are byte-identical across runs.
pub fn determinism() -> CriterionResult {
    run(10, "deterministic table reports", None, || {
        let same = [true, false].iter().all(|&m| {
            let a = verify_tables(m);
            let b = verify_tables(m);
            a.to_json() == b.to_json() && a.to_csv() == b.to_csv()
        });
        (same, if same { "JSON and CSV identical".into() } else { "reports differ between runs".into() })
    })
}

/// Every criterion, indexed by `id - 1`.
pub const CRITERIA: [fn() -> CriterionResult; 10] = [
    rate_golden,
    table1,
    table2,
    p234_cubic,
    strong_stability,
    quartic_oracle,
    optimality_fits,
    resolvent_growth,
    semigroup_decay,
    determinism,
];

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|f| f()).collect()
}
