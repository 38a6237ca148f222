//! Verification suites run by `rogers verify`.

use std::f64::consts::PI;

use rogers_core::fluctuation::{
    cm_cbf_check, kappa_ratio_tau_continued, pr_laplace, space_time_check, CheckMode, CmCheckConfig, SupTail,
    DEFAULT_EPS_LADDER,
};
use rogers_core::montecarlo::{mc_estimates, McQuery};
use rogers_core::numerics::Complex;
use rogers_core::rogers::{check_function_bounds, eval_f, RogersSpec};
use rogers_core::spine::{build_spine_table, spine_invariant_report};
use rogers_core::wiener_hopf::{factorization_check, wh_eval_from_phi, wh_ratio, FactorHandle, Method, Side};
use rogers_core::{Error, VerifyReport};

use crate::commands::{polar_samples, right_half_plane, simulate_parallel, worker_count};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    Spine,
    Wh,
    Fluct,
    Mc,
}

impl Suite {
    /// Tolerance used when `--tol` is absent.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Core => 1e-12,
            Suite::Spine => 1e-6,
            Suite::Wh => 1e-4,
            Suite::Fluct => 1e-3,
            Suite::Mc => 3.0,
        }
    }
}

/// Settings of the Monte Carlo suite.
#[derive(Debug, Clone, Copy)]
pub struct McSettings {
    pub sigma: f64,
    pub n: usize,
    pub seed: u64,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings { sigma: 1.0, n: 50_000, seed: 2024 }
    }
}

pub fn run_suite(spec: &RogersSpec, suite: Suite, tol: f64, mc: McSettings) -> Result<VerifyReport, CliError> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::new("argument", "tol must be nonnegative").with_field("tol"));
    }
    Ok(match suite {
        Suite::Core => core_suite(spec, tol),
        Suite::Spine => spine_suite(spec, tol),
        Suite::Wh => wh_suite(spec, tol),
        Suite::Fluct => fluct_suite(spec, tol),
        Suite::Mc => mc_suite(spec, tol, mc)?,
    })
}

/// Argument and magnitude bounds, and `f(−ξ̄) = conj f(ξ)` to relative `tol`.
fn core_suite(spec: &RogersSpec, tol: f64) -> VerifyReport {
    let mut rep = VerifyReport::new("core");
    let pts = polar_samples(100, 1e-3, 1e3, -0.5 * PI, 0.5 * PI);
    let mut bounds = check_function_bounds(spec, &pts);
    bounds.suite = rep.suite.clone();
    rep.merge(bounds);
    for xi in polar_samples(40, 1e-2, 1e2, -0.5 * PI, 0.5 * PI) {
        let at = [xi.re, xi.im];
        match (eval_f(spec, xi), eval_f(spec, -xi.conj())) {
            (Ok(a), Ok(b)) => {
                let rel = (b - a.conj()).norm() / a.norm().max(1e-300);
                rep.record("conjugation", &at, tol - rel);
            }
            _ => rep.fail("conjugation", &at),
        }
    }
    rep
}

/// Geometric invariants on a 400-point table over `[1e-2, 1e2]` and
/// continuity of `λ` across `Z` boundaries to relative `tol`.
fn spine_suite(spec: &RogersSpec, tol: f64) -> VerifyReport {
    let mut rep = VerifyReport::new("spine");
    match build_spine_table(spec, 1e-2, 1e2, 400) {
        Ok(t) => {
            rep.record("boundary_continuity", &[], tol - t.boundary_jump);
            rep.merge(spine_invariant_report(&t, spec));
        }
        Err(e) => rep.fail(&format!("table: {e}"), &[]),
    }
    rep
}

/// The factorization identity at 20 points and agreement of the three
/// ratio methods, both to relative `tol`.
fn wh_suite(spec: &RogersSpec, tol: f64) -> VerifyReport {
    let mut rep = VerifyReport::new("wh");
    let mut fact = factorization_check(spec, &right_half_plane(20), tol);
    fact.suite = rep.suite.clone();
    rep.merge(fact);
    let pairs = [(0.3, 1.0), (1.0, 2.0), (2.5, 0.7), (0.05, 8.0), (12.0, 1.5)];
    for side in [Side::Plus, Side::Minus] {
        for &(x1, x2) in &pairs {
            let at = [x1, x2];
            let bd = match wh_ratio(spec, Method::Bd, side, x1, x2) {
                Ok(v) => v.value,
                Err(_) => {
                    rep.fail("ratio_bd", &at);
                    continue;
                }
            };
            for (name, m) in [("bd_vs_spine", Method::Spine), ("bd_vs_phi", Method::Phi)] {
                match wh_ratio(spec, m, side, x1, x2) {
                    Ok(v) => rep.record(name, &at, tol - (v.value - bd).abs() / bd),
                    // degenerate exponents have no spine route
                    Err(Error::Unsupported(_)) => {}
                    Err(_) => rep.fail(name, &at),
                }
            }
        }
    }
    rep
}

/// The space-time identity at 10 points to relative `tol`, complete
/// monotonicity of the supremum tail at `σ = 1`, and the complete
/// Bernstein property of `κ⁺` in each variable.
fn fluct_suite(spec: &RogersSpec, tol: f64) -> VerifyReport {
    let mut rep = VerifyReport::new("fluct");
    let pts: Vec<(f64, f64)> = (0..10)
        .map(|k| {
            let tau = 0.1 * 50f64.powf(k as f64 / 9.0);
            let xi = 0.2 * 20f64.powf(((3 * k) % 10) as f64 / 9.0);
            (tau, if k % 2 == 0 { xi } else { -xi })
        })
        .collect();
    let mut st = space_time_check(spec, &pts, tol);
    st.suite = rep.suite.clone();
    rep.merge(st);

    match SupTail::new(spec, 1.0) {
        Ok(t) => {
            let grid: Vec<f64> = (0..12).map(|k| 0.25 + 0.25 * k as f64).collect();
            let cfg = CmCheckConfig::new(CheckMode::CmDifferences, grid);
            let r = cm_cbf_check(|x| Ok(Complex::new(t.tail(x.re, &DEFAULT_EPS_LADDER)?.value, 0.0)), &cfg);
            rep.merge(renamed(r, "sup_tail_cm"));
        }
        Err(e) => rep.fail(&format!("sup_tail: {e}"), &[]),
    }

    let cfg = CmCheckConfig::upper_half_plane(CheckMode::CbfArg, 30);
    match FactorHandle::new(&spec.shifted(1.0), Side::Plus) {
        Ok(h) => {
            let r = cm_cbf_check(|xi| wh_eval_from_phi(&h, xi), &cfg);
            rep.merge(renamed(r, "kappa_plus_cbf_in_xi"));
        }
        Err(e) => rep.fail(&format!("factor_handle: {e}"), &[]),
    }
    let one = Complex::new(1.0, 0.0);
    match kappa_ratio_tau_continued(spec, Side::Plus, 1.0, one, one) {
        Ok(_) => {
            let r = cm_cbf_check(|tau| kappa_ratio_tau_continued(spec, Side::Plus, 1.0, tau, one), &cfg);
            rep.merge(renamed(r, "kappa_plus_cbf_in_tau"));
        }
        Err(Error::Unsupported(_)) | Err(Error::SpineUndefined) => {}
        Err(e) => rep.fail(&format!("kappa_tau: {e}"), &[]),
    }
    rep
}

fn renamed(mut r: VerifyReport, prefix: &str) -> VerifyReport {
    for w in &mut r.witnesses {
        w.check = format!("{prefix}/{}", w.check);
    }
    r
}

/// Simulated Laplace and joint transforms against the analytic values;
/// passes when each lies within `tol` standard errors.
fn mc_suite(spec: &RogersSpec, tol: f64, s: McSettings) -> Result<VerifyReport, CliError> {
    let mut rep = VerifyReport::new("mc");
    let samples = simulate_parallel(spec, s.sigma, s.n, s.seed, worker_count())?;
    let mut queries = Vec::new();
    for xi in [0.5, 1.0, 2.0] {
        queries.push(McQuery::Laplace { xi });
        queries.push(McQuery::Joint { xi, tau: 1.0 });
    }
    let est = mc_estimates(&samples, s.seed, &queries)?;
    for (q, e) in queries.iter().zip(est) {
        let (tau, xi, name) = match *q {
            McQuery::Laplace { xi } => (0.0, xi, "laplace"),
            McQuery::Joint { xi, tau } => (tau, xi, "joint"),
            McQuery::Tail { .. } => unreachable!(),
        };
        let at = [xi, tau];
        match pr_laplace(spec, s.sigma, tau, xi, Side::Plus) {
            Ok(v) => {
                let z = (e.mean - v.value).abs() / e.std_error.max(1e-300);
                rep.record(name, &at, tol - z);
            }
            Err(_) => rep.fail(name, &at),
        }
    }
    Ok(rep)
}
