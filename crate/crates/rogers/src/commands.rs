//! The computations behind each subcommand, returning serializable results.

use std::f64::consts::PI;
use std::thread;

use rogers_core::fluctuation::{
    kappa_circ, kappa_ratio_tau, kappa_ratio_xi, pr_laplace, sup_tail, DEFAULT_EPS_LADDER,
};
use rogers_core::montecarlo::{mc_estimates, shard_count, simulate_shard, McQuery, SupSample};
use rogers_core::numerics::Complex;
use rogers_core::rogers::{eval_f, f_limits, RogersSpec};
use rogers_core::spine::build_spine_table;
use rogers_core::wiener_hopf::{wh_product, wh_ratio, Method, Side};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::{fmt_f64, ComplexOut};

#[derive(Debug, Clone, Serialize)]
pub struct EvalOut {
    pub xi: ComplexOut,
    pub value: ComplexOut,
}

pub fn eval(spec: &RogersSpec, xi: Complex) -> Result<EvalOut, CliError> {
    let v = eval_f(spec, xi)?;
    Ok(EvalOut { xi: xi.into(), value: v.into() })
}

impl EvalOut {
    pub fn to_csv(&self) -> Result<String, CliError> {
        csv_table(&["xi_re", "xi_im", "re", "im"], &[vec![self.xi.re, self.xi.im, self.value.re, self.value.im]])
    }
}

/// Spine table as CSV and its `Z` structure as JSON.
pub fn spine(spec: &RogersSpec, r_min: f64, r_max: f64, n: usize) -> Result<(String, Value), CliError> {
    let t = build_spine_table(spec, r_min, r_max, n)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "theta", "re_zeta", "im_zeta", "lambda", "in_Z"])?;
    for p in &t.points {
        w.write_record([
            fmt_f64(p.r),
            fmt_f64(p.theta),
            fmt_f64(p.zeta.re),
            fmt_f64(p.zeta.im),
            fmt_f64(p.lambda),
            p.in_z.to_string(),
        ])?;
    }
    let csv = finish(w)?;
    let meta = json!({
        "r_min": t.r_min,
        "r_max": t.r_max,
        "n": t.n,
        "z_intervals": t.z_intervals.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        "boundary_jump": t.boundary_jump,
    });
    Ok((csv, meta))
}

/// Which factor quantity `factor` computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorSide {
    Plus,
    Minus,
    /// `f⁺(ξ₁) f⁻(ξ₂)`
    Product,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorOut {
    pub method: Method,
    pub side: FactorSide,
    pub xi1: f64,
    pub xi2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub value: f64,
    pub err_estimate: f64,
}

impl FactorOut {
    pub fn to_csv(&self) -> Result<String, CliError> {
        csv_table(&["xi1", "xi2", "value", "err_estimate"], &[vec![self.xi1, self.xi2, self.value, self.err_estimate]])
    }
}

#[allow(clippy::too_many_arguments)]
pub fn factor(
    spec: &RogersSpec,
    method: Method,
    side: FactorSide,
    xi1: f64,
    xi2: f64,
    tau: Option<f64>,
    r: f64,
) -> Result<FactorOut, CliError> {
    if let Some(t) = tau {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::new("argument", "tau must be nonnegative").with_field("tau"));
        }
    }
    let shifted = spec.shifted(tau.unwrap_or(0.0));
    let est = match side {
        FactorSide::Plus => wh_ratio(&shifted, method, Side::Plus, xi1, xi2)?,
        FactorSide::Minus => wh_ratio(&shifted, method, Side::Minus, xi1, xi2)?,
        FactorSide::Product => wh_product(&shifted, method, xi1, xi2, r)?,
    };
    Ok(FactorOut {
        method,
        side,
        xi1,
        xi2,
        tau,
        r: (side == FactorSide::Product).then_some(r),
        value: est.value,
        err_estimate: est.err_estimate,
    })
}

/// A fluctuation query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluctQuery {
    /// `E e^{−ξ X̄_S}`
    SupLaplace { sigma: f64, xi: f64, side: Side },
    /// `P(X̄_S > x)`
    SupTail { sigma: f64, x: f64 },
    /// `E e^{−ξ X̄_S − τ T̄_S}`
    Pr { sigma: f64, tau: f64, xi: f64, side: Side },
    /// `κ^±(τ, ξ₁)/κ^±(τ, ξ₂)`
    KappaRatioXi { tau: f64, xi1: f64, xi2: f64, side: Side },
    /// `κ^±(τ₁, ξ)/κ^±(τ₂, ξ)`
    KappaRatioTau { xi: f64, tau1: f64, tau2: f64, side: Side },
    /// `κ°(τ)`
    KappaCirc { tau: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct FluctOut {
    pub query: Value,
    pub value: f64,
    pub method_chain: Vec<String>,
    pub err_estimate: f64,
}

impl FluctOut {
    pub fn to_csv(&self) -> Result<String, CliError> {
        csv_table(&["value", "err_estimate"], &[vec![self.value, self.err_estimate]])
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Plus => "plus",
        Side::Minus => "minus",
    }
}

fn bounded(spec: &RogersSpec) -> bool {
    f_limits(spec).f_at_infinity.value().is_finite()
}

pub fn fluct(spec: &RogersSpec, q: FluctQuery) -> Result<FluctOut, CliError> {
    let chain = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let (query, est, method_chain) = match q {
        FluctQuery::SupLaplace { sigma, xi, side } => (
            json!({"kind": "sup_laplace", "sigma": sigma, "xi": xi, "side": side_name(side)}),
            pr_laplace(spec, sigma, 0.0, xi, side)?,
            chain(&["kappa_ratio_xi:bd"]),
        ),
        FluctQuery::SupTail { sigma, x } => (
            json!({"kind": "sup_tail", "sigma": sigma, "x": x, "eps_ladder": DEFAULT_EPS_LADDER}),
            sup_tail(spec, sigma, x, &DEFAULT_EPS_LADDER)?,
            chain(&["factor_handle:phi", "stieltjes_inversion", "richardson"]),
        ),
        FluctQuery::Pr { sigma, tau, xi, side } => {
            let mut m = Vec::new();
            if tau > 0.0 {
                m.push(if bounded(spec) { "kappa_ratio_tau:spine" } else { "kappa_ratio_tau:bd" });
            }
            m.push("kappa_ratio_xi:bd");
            (
                json!({"kind": "pr", "sigma": sigma, "tau": tau, "xi": xi, "side": side_name(side)}),
                pr_laplace(spec, sigma, tau, xi, side)?,
                chain(&m),
            )
        }
        FluctQuery::KappaRatioXi { tau, xi1, xi2, side } => (
            json!({"kind": "kappa_ratio_xi", "tau": tau, "xi1": xi1, "xi2": xi2, "side": side_name(side)}),
            kappa_ratio_xi(spec, tau, xi1, xi2, side)?,
            chain(&["wh_ratio:bd"]),
        ),
        FluctQuery::KappaRatioTau { xi, tau1, tau2, side } => (
            json!({"kind": "kappa_ratio_tau", "xi": xi, "tau1": tau1, "tau2": tau2, "side": side_name(side)}),
            kappa_ratio_tau(spec, xi, tau1, tau2, side)?,
            chain(&["log_ratio_integral:bd"]),
        ),
        FluctQuery::KappaCirc { tau } => {
            let v = kappa_circ(spec, tau)?;
            let m = if bounded(spec) { "frullani" } else { "identity" };
            (
                json!({"kind": "kappa_circ", "tau": tau}),
                rogers_core::wiener_hopf::Estimate { value: v, err_estimate: 0.0 },
                chain(&[m]),
            )
        }
    };
    Ok(FluctOut { query, value: est.value, method_chain, err_estimate: est.err_estimate })
}

/// Shards of [`rogers_core::montecarlo::simulate_sup_samples`] spread over
/// `workers` threads.  The result is identical to the sequential one.
pub fn simulate_parallel(
    spec: &RogersSpec,
    sigma: f64,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<SupSample>, CliError> {
    let shards = shard_count(n);
    let workers = workers.clamp(1, shards.max(1));
    let mut parts: Vec<Option<Vec<SupSample>>> = vec![None; shards];
    let results = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..shards)
                        .step_by(workers)
                        .map(|k| simulate_shard(spec, sigma, n, seed, k).map(|v| (k, v)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("simulation worker panicked")).collect::<Vec<_>>()
    });
    for r in results {
        let (k, v) = r?;
        parts[k] = Some(v);
    }
    if n == 0 {
        // still reject bad inputs
        simulate_shard(spec, sigma, 0, seed, 0)?;
    }
    Ok(parts.into_iter().flat_map(|p| p.expect("every shard simulated")).collect())
}

pub fn worker_count() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Debug, Clone, Serialize)]
pub struct McRow {
    pub query: McQuery,
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct McOut {
    pub sigma: f64,
    pub n: usize,
    pub seed: u64,
    pub estimates: Vec<McRow>,
}

pub fn mc(
    spec: &RogersSpec,
    sigma: f64,
    n: usize,
    seed: u64,
    queries: &[McQuery],
) -> Result<(McOut, Vec<SupSample>), CliError> {
    if n == 0 {
        return Err(CliError::new("argument", "n must be positive").with_field("n"));
    }
    let samples = simulate_parallel(spec, sigma, n, seed, worker_count())?;
    let est = mc_estimates(&samples, seed, queries)?;
    let estimates = queries
        .iter()
        .zip(est)
        .map(|(q, e)| McRow { query: *q, mean: e.mean, std_error: e.std_error, n: e.n, seed: e.seed })
        .collect();
    Ok((McOut { sigma, n, seed, estimates }, samples))
}

impl McOut {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kind", "xi", "tau", "x", "mean", "std_error", "n", "seed"])?;
        for r in &self.estimates {
            let (kind, xi, tau, x) = match r.query {
                McQuery::Laplace { xi } => ("laplace", fmt_f64(xi), String::new(), String::new()),
                McQuery::Tail { x } => ("tail", String::new(), String::new(), fmt_f64(x)),
                McQuery::Joint { xi, tau } => ("joint", fmt_f64(xi), fmt_f64(tau), String::new()),
            };
            w.write_record([
                kind.to_string(),
                xi,
                tau,
                x,
                fmt_f64(r.mean),
                fmt_f64(r.std_error),
                r.n.to_string(),
                r.seed.to_string(),
            ])?;
        }
        finish(w)
    }
}

/// Sample dump with header `sup_value,argmax_time,horizon,killed`.
pub fn samples_csv(samples: &[SupSample]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sup_value", "argmax_time", "horizon", "killed"])?;
    for s in samples {
        w.write_record([fmt_f64(s.sup_value), fmt_f64(s.argmax_time), fmt_f64(s.horizon), s.killed.to_string()])?;
    }
    finish(w)
}

fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|x| fmt_f64(*x)))?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::new("io", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

/// `n` points `r e^{iα}` with radii log-spaced in `[r_lo, r_hi]` and angles
/// spread over `(α_lo, α_hi)`, visited in a stride-7 order.
pub fn polar_samples(n: usize, r_lo: f64, r_hi: f64, a_lo: f64, a_hi: f64) -> Vec<Complex> {
    (0..n)
        .map(|k| {
            let r = r_lo * (r_hi / r_lo).powf(k as f64 / (n.max(2) - 1) as f64);
            let j = (7 * k) % n;
            let a = a_lo + (a_hi - a_lo) * (j as f64 + 0.5) / n as f64;
            Complex::from_polar(r, a)
        })
        .collect()
}

/// Right half-plane sample points.
pub fn right_half_plane(n: usize) -> Vec<Complex> {
    polar_samples(n, 0.05, 20.0, -0.5 * PI, 0.5 * PI)
}
