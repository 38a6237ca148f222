//! Acceptance criteria.  Runs without the test harness and prints one line
//! per criterion; exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use rogers_core::fluctuation::{
    cm_cbf_check, kappa_circ, kappa_product_continued, kappa_ratio_tau_continued, kappa_ratio_xi_continued,
    pr_laplace, space_time_check, sup_tail, CheckMode, CmCheckConfig, SupTail, DEFAULT_EPS_LADDER,
};
use rogers_core::montecarlo::{mc_estimates, simulate_sup_samples, McQuery};
use rogers_core::numerics::Complex;
use rogers_core::rogers::{f_limits, RogersSpec};
use rogers_core::spine::build_spine_table;
use rogers_core::spine::spine_invariant_report;
use rogers_core::wiener_hopf::{
    bm_drift_spec, factorization_check, wh_eval_from_phi, wh_ratio, FactorHandle, Method, Side,
};
use rogers_core::VerifyReport;

type Outcome = Result<String, String>;

/// Collects failures while keeping the worst observed value.
struct Tally {
    worst: f64,
    margin: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: 0.0, margin: f64::INFINITY, failures: Vec::new() }
    }

    fn err(&mut self, what: String, err: f64, tol: f64) {
        self.worst = self.worst.max(err);
        if !(err <= tol) {
            self.failures.push(format!("{what}: {err:.3e} > {tol:.0e}"));
        }
    }

    fn report(&mut self, what: &str, r: &VerifyReport) {
        self.margin = self.margin.min(r.worst_margin);
        if r.n_checks == 0 {
            self.failures.push(format!("{what}: no checks ran"));
        } else if !r.passed() {
            let first = r.witnesses.first().map(|w| w.check.clone()).unwrap_or_default();
            self.failures.push(format!("{what}: {} of {} checks failed ({first})", r.n_failures, r.n_checks));
        }
    }

    fn broken(&mut self, what: String, e: rogers_core::Error) {
        self.failures.push(format!("{what}: {e}"));
    }

    fn finish(self, label: &str) -> Outcome {
        if !self.failures.is_empty() {
            return Err(self.failures.join("; "));
        }
        if self.margin.is_finite() {
            Ok(format!("{label}, smallest margin to tolerance {:.2e}", self.margin))
        } else {
            Ok(format!("{label} {:.2e}", self.worst))
        }
    }
}

fn bm_drift_factors() -> Outcome {
    let mut t = Tally::new();
    for b in [0.0, 1.0, -1.0] {
        let spec = bm_drift_spec(b, 1.0);
        let r = (b * b + 2.0f64).sqrt() - b;
        let want = (1.0 + r) / (2.0 + r);
        for (m, tol) in [(Method::Bd, 1e-6), (Method::Spine, 1e-6), (Method::Phi, 1e-4)] {
            match wh_ratio(&spec, m, Side::Plus, 1.0, 2.0) {
                Ok(v) => t.err(format!("b={b} {m:?}"), rel(v.value, want), tol),
                Err(e) => t.broken(format!("b={b} {m:?}"), e),
            }
        }
    }
    t.finish("worst rel err")
}

fn stable_positivity() -> Outcome {
    let mut t = Tally::new();
    let spec = figure("b");
    let want = 2f64.powf(2f64.atan() / PI);
    for (m, tol) in [(Method::Bd, 1e-5), (Method::Spine, 1e-5), (Method::Phi, 1e-4)] {
        match wh_ratio(&spec, m, Side::Plus, 2.0, 1.0) {
            Ok(v) => t.err(format!("fig b {m:?}"), rel(v.value, want), tol),
            Err(e) => t.broken(format!("fig b {m:?}"), e),
        }
    }
    for alpha in [0.5, 1.2, 2.0] {
        let spec = RogersSpec::symmetric_power(alpha);
        for (x1, x2) in [(2.0, 1.0), (0.3, 5.0)] {
            let want = (x1 / x2 as f64).powf(alpha / 2.0);
            for m in [Method::Bd, Method::Spine, Method::Phi] {
                match wh_ratio(&spec, m, Side::Plus, x1, x2) {
                    Ok(v) => t.err(format!("alpha={alpha} {m:?} ({x1},{x2})"), rel(v.value, want), 1e-6),
                    Err(e) => t.broken(format!("alpha={alpha} {m:?}"), e),
                }
            }
        }
    }
    t.finish("worst rel err")
}

fn spine_closed_form() -> Outcome {
    let mut t = Tally::new();
    let spec = figure("a");
    let z = match build_spine_table(&spec, 1.0 + 1e-6, 10.0, 200) {
        Ok(z) => z,
        Err(e) => return Err(format!("fig a table: {e}")),
    };
    for p in &z.points {
        t.err(format!("im zeta at r={}", p.r), (p.zeta.im - 1.0).abs(), 1e-8);
    }
    let full = match build_spine_table(&spec, 0.1, 10.0, 200) {
        Ok(z) => z,
        Err(e) => return Err(format!("fig a table: {e}")),
    };
    for p in &full.points {
        let want = if p.r >= 1.0 { 0.5 * p.r * p.r } else { p.r - 0.5 * p.r * p.r };
        t.err(format!("lambda at r={}", p.r), (p.lambda - want).abs(), 1e-8);
    }
    match build_spine_table(&figure("g"), 1e-3, 1e3, 400) {
        Ok(g) if g.z_intervals.len() == 3 => {}
        Ok(g) => t.failures.push(format!("fig g has {} Z components, expected 3", g.z_intervals.len())),
        Err(e) => t.broken("fig g table".into(), e),
    }
    t.finish("worst abs err")
}

fn geometric_invariants() -> Outcome {
    let mut t = Tally::new();
    for (tag, spec) in figure_specs() {
        match build_spine_table(&spec, 1e-2, 1e2, 400) {
            Ok(z) => t.report(&format!("fig {tag}"), &spine_invariant_report(&z, &spec)),
            Err(e) => t.broken(format!("fig {tag}"), e),
        }
    }
    t.finish("figures checked: 8")
}

fn factorization_identity() -> Outcome {
    let mut t = Tally::new();
    // rotate the upper half-plane onto the right one
    let pts: Vec<Complex> = upper_half_plane(5, 20).into_iter().map(|z| z * Complex::new(0.0, -1.0)).collect();
    for (tag, spec) in figure_specs() {
        let tol = if matches!(tag, "a" | "b" | "e" | "f") { 1e-4 } else { 1e-3 };
        let r = factorization_check(&spec, &pts, tol);
        t.report(&format!("fig {tag}"), &r);
    }
    t.finish("figures checked: 8")
}

fn fluctuation_identities() -> Outcome {
    let mut t = Tally::new();
    let bm = RogersSpec::brownian(0.5, 0.0);
    for (tau, xi) in [(0.0, 1.0), (1.5, 0.0)] {
        match pr_laplace(&bm, 0.5, tau, xi, Side::Plus) {
            Ok(v) => t.err(format!("pr_laplace({tau},{xi})"), (v.value - 0.5).abs(), 1e-6),
            Err(e) => t.broken(format!("pr_laplace({tau},{xi})"), e),
        }
    }
    match SupTail::new(&bm, 0.5) {
        Ok(tail) => {
            for k in 0..50 {
                let x = 0.1 + 4.9 * k as f64 / 49.0;
                match tail.tail(x, &DEFAULT_EPS_LADDER) {
                    Ok(v) => t.err(format!("sup_tail({x})"), (v.value - (-x).exp()).abs(), 1e-3),
                    Err(e) => t.broken(format!("sup_tail({x})"), e),
                }
            }
        }
        Err(e) => t.broken("sup_tail".into(), e),
    }
    let taus = log_uniform(6, 10, 0.05, 10.0);
    let xis = log_uniform(7, 10, 0.05, 20.0);
    let pts: Vec<(f64, f64)> = taus.into_iter().zip(xis).collect();
    let closed = format!("closed forms worst abs err {:.2e}, space-time", t.worst);
    for (tag, spec) in figure_specs() {
        t.report(&format!("space-time fig {tag}"), &space_time_check(&spec, &pts, 1e-3));
    }
    t.finish(&closed)
}

fn frullani() -> Outcome {
    let mut t = Tally::new();
    let atoms = [(1.0, 0.5 * PI), (-2.0, PI)];
    let spec = levy(0.0, pure_jump_drift(&atoms), 0.0, &atoms);
    let rate = f_limits(&spec).f_at_infinity.value();
    t.err("jump rate".into(), (rate - 1.0).abs(), 1e-12);
    for tau in [0.5, 1.0, 2.0, 10.0] {
        match kappa_circ(&spec, tau) {
            Ok(v) => t.err(format!("tau={tau}"), (v - frullani_kappa_circ(1.0, tau)).abs(), 1e-6),
            Err(e) => t.broken(format!("tau={tau}"), e),
        }
    }
    t.finish("worst abs err")
}

fn cbf_in(t: &mut Tally, what: String, h: impl FnMut(Complex) -> rogers_core::Result<Complex>) {
    let cfg = CmCheckConfig::upper_half_plane(CheckMode::CbfArg, 30);
    t.report(&what, &cm_cbf_check(h, &cfg));
}

fn complete_bernstein() -> Outcome {
    let mut t = Tally::new();
    let one = Complex::new(1.0, 0.0);
    for tag in ["a", "b", "e"] {
        let spec = figure(tag);
        for side in [Side::Plus, Side::Minus] {
            for xi in [0.0, 1.0, 5.0] {
                cbf_in(&mut t, format!("fig {tag} {side:?} in tau at xi={xi}"), |tau| {
                    kappa_ratio_tau_continued(&spec, side, xi, tau, one)
                });
            }
            for tau in [0.0, 1.0, 5.0] {
                match FactorHandle::new(&spec.shifted(tau), side) {
                    Ok(h) => cbf_in(&mut t, format!("fig {tag} {side:?} in xi at tau={tau}"), |xi| {
                        wh_eval_from_phi(&h, xi)
                    }),
                    Err(e) => t.broken(format!("fig {tag} handle tau={tau}"), e),
                }
            }
            match (FactorHandle::new(&spec.shifted(0.5), side), FactorHandle::new(&spec.shifted(2.0), side)) {
                (Ok(lo), Ok(hi)) => cbf_in(&mut t, format!("fig {tag} {side:?} tau ratio in xi"), |xi| {
                    Ok(wh_eval_from_phi(&lo, xi)? / wh_eval_from_phi(&hi, xi)?)
                }),
                (Err(e), _) | (_, Err(e)) => t.broken(format!("fig {tag} ratio handles"), e),
            }
            cbf_in(&mut t, format!("fig {tag} {side:?} xi ratio in tau"), |tau| {
                kappa_ratio_xi_continued(&spec, side, tau, 0.5, 2.0)
            });
        }
        for (x1, x2) in [(0.0, 0.0), (0.5, 2.0), (3.0, 0.2)] {
            cbf_in(&mut t, format!("fig {tag} product ({x1},{x2}) in tau"), |tau| {
                kappa_product_continued(&spec, tau, x1, x2)
            });
        }
    }
    t.finish("figures checked: 3")
}

fn complete_monotonicity() -> Outcome {
    let mut t = Tally::new();
    let grid: Vec<f64> = (0..12).map(|k| 0.25 + 0.25 * k as f64).collect();
    let cm = CmCheckConfig::new(CheckMode::CmDifferences, grid);
    let st = CmCheckConfig::upper_half_plane(CheckMode::StieltjesArg, 30);
    for (name, spec) in [("bm", RogersSpec::brownian(0.5, 0.0)), ("cp", two_sided_cp())] {
        t.report(
            &format!("{name} sup tail"),
            &cm_cbf_check(|x| Ok(Complex::new(sup_tail(&spec, 1.0, x.re, &DEFAULT_EPS_LADDER)?.value, 0.0)), &cm),
        );
        for xi in [0.5, 2.0] {
            t.report(
                &format!("{name} sigma transform xi={xi}"),
                &cm_cbf_check(|s| Ok(kappa_ratio_xi_continued(&spec, Side::Plus, s, 0.0, xi)? / s), &st),
            );
        }
    }
    t.finish("tails and transforms checked: 6")
}

fn monte_carlo() -> Outcome {
    let mut t = Tally::new();
    let (n, seed) = (200_000, 2024);
    let specs = [("bm drift", bm_drift_spec(0.4, 0.0)), ("two-sided cp", two_sided_cp()), ("cp gaussian", cp_gaussian())];
    for (name, spec) in specs {
        let samples = match simulate_sup_samples(&spec, 1.0, n, seed) {
            Ok(s) => s,
            Err(e) => {
                t.broken(name.into(), e);
                continue;
            }
        };
        let mut queries = Vec::new();
        for xi in [0.5, 1.0, 2.0] {
            for tau in [0.0, 1.0] {
                queries.push(McQuery::Joint { xi, tau });
            }
        }
        let est = mc_estimates(&samples, seed, &queries).map_err(|e| e.to_string())?;
        for (q, e) in queries.iter().zip(est) {
            let McQuery::Joint { xi, tau } = *q else { unreachable!() };
            match pr_laplace(&spec, 1.0, tau, xi, Side::Plus) {
                Ok(v) => t.err(format!("{name} xi={xi} tau={tau}"), (e.mean - v.value).abs() / e.std_error, 3.0),
                Err(e) => t.broken(format!("{name} xi={xi} tau={tau}"), e),
            }
        }
    }
    t.finish("worst |z|")
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<f64>); 10] = [
        ("bm drift factors", bm_drift_factors, Some(5.0)),
        ("stable positivity", stable_positivity, None),
        ("spine closed form", spine_closed_form, None),
        ("geometric invariants", geometric_invariants, Some(60.0)),
        ("factorization identity", factorization_identity, None),
        ("fluctuation identities", fluctuation_identities, None),
        ("kappa circ frullani", frullani, None),
        ("complete bernstein in both variables", complete_bernstein, None),
        ("complete monotonicity", complete_monotonicity, None),
        ("monte carlo cross-validation", monte_carlo, Some(120.0)),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let secs = start.elapsed().as_secs_f64();
        if let (Ok(msg), Some(b)) = (&out, budget) {
            if secs > *b {
                out = Err(format!("{msg}, but took {secs:.1} s > {b} s"));
            }
        }
        match out {
            Ok(msg) => println!("criterion {:2} PASS {name}: {msg} ({secs:.1} s)", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:2} FAIL {name}: {msg} ({secs:.1} s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
