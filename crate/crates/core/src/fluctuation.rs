//! Space-time Wiener–Hopf factors `κ^±(τ, ξ)` of `f_τ = τ + f`, the
//! transforms of the supremum over an exponential horizon, and numerical
//! testers for complete monotonicity and the complete Bernstein property.
//!
//! Absolute values of `κ^±` are never formed: every quantity is a ratio or
//! a product that the factorization pins down.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{c, extrapolate_to_zero, integrate_adaptive, Complex, Domain, QuadratureConfig};
use crate::report::VerifyReport;
use crate::rogers::{checks, Model, RogersSpec};
use crate::wiener_hopf::bd::{accept_small, Bd, Pole};
use crate::wiener_hopf::spine_route::SpineRoute;
use crate::wiener_hopf::{wh_eval_from_phi, Estimate, FactorHandle, Side};

/// Arguments of `κ^±(τ, ξ)` for a horizon killed at rate `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpaceTimeQuery {
    pub sigma: f64,
    pub tau: f64,
    pub xi: f64,
    pub side: Side,
}

impl SpaceTimeQuery {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::field("sigma", "must be positive"));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::field("tau", "must be nonnegative"));
        }
        if !(self.xi >= 0.0 && self.xi.is_finite()) {
            return Err(Error::field("xi", "must be nonnegative"));
        }
        Ok(())
    }
}

fn nonneg(x: f64, name: &str) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be nonnegative and finite")))
    }
}

fn positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite")))
    }
}

fn breaks_of(model: &Model, extra: &[f64]) -> Vec<f64> {
    let (p, m) = model.base.special_radii();
    let mut v: Vec<f64> = p.into_iter().chain(m).chain(extra.iter().copied()).collect();
    v.push(1.0);
    v.retain(|x| *x > 0.0 && x.is_finite());
    v
}

/// `κ^±(τ, ξ₁)/κ^±(τ, ξ₂)` for `ξ₁, ξ₂ ≥ 0`; a zero argument is read as the
/// limit `0⁺` and needs `τ + f(0⁺) > 0`.
pub fn kappa_ratio_xi(spec: &RogersSpec, tau: f64, xi1: f64, xi2: f64, side: Side) -> Result<Estimate> {
    nonneg(tau, "tau")?;
    nonneg(xi1, "xi1")?;
    nonneg(xi2, "xi2")?;
    if xi1 == xi2 {
        return Ok(Estimate { value: 1.0, err_estimate: 0.0 });
    }
    let model = Model::new(&spec.shifted(tau));
    if checks::is_constant(&model) {
        return Ok(Estimate { value: 1.0, err_estimate: 0.0 });
    }
    let bd = Bd::new(&model);
    let (l, e) = match side {
        Side::Plus => bd.log_pair(Pole::Upper(xi1), Pole::Upper(xi2))?,
        Side::Minus => bd.log_pair(Pole::Lower(xi2), Pole::Lower(xi1))?,
    };
    let v = l.exp();
    Ok(Estimate { value: v, err_estimate: v * e })
}

/// `κ^±(τ₁, ξ)/κ^±(τ₂, ξ)` for `ξ ≥ 0`, from the integral of
/// `log((τ₁ + f)/(τ₂ + f))` along the real line.  Requires `f` unbounded.
pub fn kappa_ratio_tau(spec: &RogersSpec, xi: f64, tau1: f64, tau2: f64, side: Side) -> Result<Estimate> {
    nonneg(xi, "xi")?;
    positive(tau1, "tau1")?;
    positive(tau2, "tau2")?;
    if tau1 == tau2 {
        return Ok(Estimate { value: 1.0, err_estimate: 0.0 });
    }
    let model = Model::new(spec);
    let lim = checks::limits_of(&model);
    if !lim.f_at_infinity.value().is_infinite() {
        return Err(Error::Unsupported(
            "tau ratio needs an unbounded exponent; use kappa_circ and the product identity".into(),
        ));
    }
    let sg = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    let log_ratio = |z: f64| -> Complex {
        let f = model.raw(c(z, 0.0));
        (f + tau1).ln() - (f + tau2).ln()
    };
    let mut constant = 0.0;
    if xi == 0.0 {
        let f0 = lim.f_at_zero.value();
        constant = 0.5 * ((tau1 + f0) / (tau2 + f0)).ln();
    }
    let cfg = QuadratureConfig::with_tol(1e-12, 1e-14).singular(&breaks_of(&model, &[xi])).max_subdivisions(4000);
    let q = integrate_adaptive(
        |z| {
            let l = log_ratio(z);
            // Re[L/(ξ ± iz)], folded over z ↦ −z
            let v = if xi == 0.0 { sg * l.im / z } else { (l / c(xi, sg * z)).re };
            c(v, 0.0)
        },
        Domain::HalfLine(0.0),
        &cfg,
    );
    let (i, e) = accept_small(q)?;
    let v = (i / PI + constant).exp();
    Ok(Estimate { value: v, err_estimate: v * e / PI })
}

/// `κ°(τ)`, which differs from `1` only for compound Poisson processes
/// (bounded `f`), where it is `(τ + Λ)/(1 + Λ)` with `Λ = f(∞⁻)` the total
/// jump and killing rate.
pub fn kappa_circ(spec: &RogersSpec, tau: f64) -> Result<f64> {
    nonneg(tau, "tau")?;
    let inf = checks::f_limits(spec).f_at_infinity.value();
    if inf.is_finite() {
        Ok((tau + inf) / (1.0 + inf))
    } else {
        Ok(1.0)
    }
}

/// `κ°(τ) κ⁺(τ, ξ₁) κ⁻(τ, ξ₂) = f_τ⁺(ξ₁) f_τ⁻(ξ₂)/(1 + f(0⁺))`.
pub fn kappa_product(spec: &RogersSpec, tau: f64, xi1: f64, xi2: f64) -> Result<Estimate> {
    nonneg(tau, "tau")?;
    nonneg(xi1, "xi1")?;
    nonneg(xi2, "xi2")?;
    let shifted = spec.shifted(tau);
    let model = Model::new(&shifted);
    let f0 = checks::f_limits(spec).f_at_zero.value();
    let (l, e) = Bd::new(&model).log_pair(Pole::Upper(xi1), Pole::Lower(xi2))?;
    let v = l.exp() / (1.0 + f0);
    Ok(Estimate { value: v, err_estimate: v * e })
}

/// `κ^±(σ, 0)/κ^±(τ, 0)` for real `σ, τ > 0`, by whichever route the
/// growth of `f` allows.
fn horizon_ratio(spec: &RogersSpec, sigma: f64, tau: f64, side: Side) -> Result<Estimate> {
    match kappa_ratio_tau(spec, 0.0, sigma, tau, side) {
        Err(Error::Unsupported(_)) => {
            let v = kappa_ratio_tau_continued(spec, side, 0.0, c(sigma, 0.0), c(tau, 0.0))?;
            Ok(Estimate { value: v.re, err_estimate: 1e-9 * v.re })
        }
        other => other,
    }
}

/// `E exp(−ξ X̄_S − τ T̄_S)` for `S ~ Exp(σ)`: `κ⁺(σ, 0)/κ⁺(τ + σ, ξ)`, and
/// the analogous infimum transform on the minus side.
pub fn pr_laplace(spec: &RogersSpec, sigma: f64, tau: f64, xi: f64, side: Side) -> Result<Estimate> {
    SpaceTimeQuery { sigma, tau, xi, side }.validate()?;
    let time = if tau == 0.0 {
        Estimate { value: 1.0, err_estimate: 0.0 }
    } else {
        horizon_ratio(spec, sigma, tau + sigma, side)?
    };
    let space = kappa_ratio_xi(spec, tau + sigma, 0.0, xi, side)?;
    let v = time.value * space.value;
    Ok(Estimate { value: v, err_estimate: time.err_estimate * space.value + space.err_estimate * time.value })
}

/// `κ^±(τ, ξ₁)/κ^±(τ, ξ₂)` for `ξ₁, ξ₂ ≥ 0` and complex `τ` off `(−∞, 0]`.
pub fn kappa_ratio_xi_continued(spec: &RogersSpec, side: Side, tau: Complex, xi1: f64, xi2: f64) -> Result<Complex> {
    nonneg(xi1, "xi1")?;
    nonneg(xi2, "xi2")?;
    let (base, t0) = spec.unshifted();
    let model = Model::new(base);
    let route = SpineRoute::new(&model, &[xi1, xi2])?;
    Ok(route.ratio(side, xi1, xi2, tau + t0)?.0)
}

/// `κ^±(τ, ξ)/κ^±(τ₀, ξ)` for `ξ ≥ 0` and complex `τ, τ₀` off `(−∞, 0]`.
pub fn kappa_ratio_tau_continued(spec: &RogersSpec, side: Side, xi: f64, tau: Complex, tau0: Complex) -> Result<Complex> {
    nonneg(xi, "xi")?;
    let (base, t0) = spec.unshifted();
    let model = Model::new(base);
    let route = SpineRoute::new(&model, &[xi])?;
    Ok(route.tau_ratio(side, xi, tau + t0, tau0 + t0)?.0)
}

/// `κ°(τ) κ⁺(τ, ξ₁) κ⁻(τ, ξ₂)` for complex `τ` off `(−∞, 0]`.
pub fn kappa_product_continued(spec: &RogersSpec, tau: Complex, xi1: f64, xi2: f64) -> Result<Complex> {
    nonneg(xi1, "xi1")?;
    nonneg(xi2, "xi2")?;
    let (base, t0) = spec.unshifted();
    let model = Model::new(base);
    let f0 = checks::limits_of(&model).f_at_zero.value() + t0;
    let route = SpineRoute::new(&model, &[xi1, xi2])?;
    let big_r = if f0 > 0.0 { 0.0 } else { 1.0 };
    Ok(route.product(xi1, xi2, big_r, tau + t0)?.0 / (1.0 + f0))
}

/// Tail `P(X̄_S > x)` of the supremum over `S ~ Exp(σ)`, recovered from the
/// Stieltjes function `g(ξ) = (1 − f_σ⁺(0)/f_σ⁺(ξ))/ξ` just above its cut.
#[derive(Debug, Clone)]
pub struct SupTail {
    handle: FactorHandle,
    log_h0: f64,
    breaks: Vec<f64>,
}

impl SupTail {
    pub fn new(spec: &RogersSpec, sigma: f64) -> Result<Self> {
        positive(sigma, "sigma")?;
        let handle = FactorHandle::new(&spec.shifted(sigma), Side::Plus)?;
        let log_h0 = handle.log_eval(c(0.0, 0.0)).re;
        if !log_h0.is_finite() {
            return Err(Error::Inversion("factor vanishes at the origin".into()));
        }
        let mut breaks = handle.jump_points(0.05);
        let mut r = 1e-3;
        while r < 1e3 {
            breaks.push(r);
            r *= 10f64.sqrt();
        }
        breaks.sort_by(f64::total_cmp);
        Ok(SupTail { handle, log_h0, breaks })
    }

    fn g(&self, xi: Complex) -> Complex {
        let ratio = (c(self.log_h0, 0.0) - self.handle.log_eval(xi)).exp();
        (c(1.0, 0.0) - ratio) / xi
    }

    /// `(1/π) ∫ e^{−xt} (−Im g(−t + iε(1+t))) dt` for one `ε`.
    fn smoothed(&self, x: f64, eps: f64) -> Result<(f64, f64)> {
        let cfg = QuadratureConfig::with_tol(1e-11, 1e-14).singular(&self.breaks).max_subdivisions(8000);
        let q = integrate_adaptive(
            |t| {
                let w = (-x * t).exp();
                if w == 0.0 {
                    return c(0.0, 0.0);
                }
                c(-w * self.g(c(-t, eps * (1.0 + t))).im, 0.0)
            },
            Domain::HalfLine(0.0),
            &cfg,
        );
        let (v, e) = accept_small(q)?;
        Ok((v / PI, e / PI))
    }

    /// Tail at `x > 0`, extrapolating the smoothed tails over `eps_ladder`
    /// to `ε = 0`.
    pub fn tail(&self, x: f64, eps_ladder: &[f64]) -> Result<Estimate> {
        positive(x, "x")?;
        if eps_ladder.is_empty() || eps_ladder.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::arg("eps_ladder must be non-empty and positive"));
        }
        let mut ys = Vec::with_capacity(eps_ladder.len());
        let mut qerr: f64 = 0.0;
        for &eps in eps_ladder {
            let (v, e) = self.smoothed(x, eps)?;
            ys.push(v);
            qerr = qerr.max(e);
        }
        let value = extrapolate_to_zero(eps_ladder, &ys);
        let n = eps_ladder.len();
        let lower = if n > 1 { extrapolate_to_zero(&eps_ladder[1..], &ys[1..]) } else { ys[0] };
        if !(value >= -1e-6 && value <= 1.0 + 1e-6) {
            return Err(Error::Inversion(format!("extrapolated tail {value} outside [0, 1]")));
        }
        Ok(Estimate { value: value.clamp(0.0, 1.0), err_estimate: (value - lower).abs() + qerr })
    }
}

/// Default smoothing ladder for [`sup_tail`].
pub const DEFAULT_EPS_LADDER: [f64; 3] = [1e-2, 3e-3, 1e-3];

/// `P(X̄_S > x)` for `S ~ Exp(σ)`.
pub fn sup_tail(spec: &RogersSpec, sigma: f64, x: f64, eps_ladder: &[f64]) -> Result<Estimate> {
    SupTail::new(spec, sigma)?.tail(x, eps_ladder)
}

/// `τ + f(ξ) = (1 + f(0⁺)) κ°(τ) κ⁺(τ, −iξ) κ⁻(τ, iξ)` at `(τ, ξ)` pairs
/// with real `ξ ≠ 0`; the factors at imaginary arguments come from the
/// tabulated boundary angle of `f_τ`, and the product at real arguments
/// from the real-line integral.
pub fn space_time_check(spec: &RogersSpec, samples: &[(f64, f64)], tol: f64) -> VerifyReport {
    let mut rep = VerifyReport::new("space_time");
    let f0 = checks::f_limits(spec).f_at_zero.value();
    for &(tau, xi) in samples {
        let at = [tau, xi];
        let run = || -> Result<f64> {
            let shifted = spec.shifted(tau);
            let lhs = Model::new(&shifted).eval(c(xi, 0.0))?;
            let plus = FactorHandle::new(&shifted, Side::Plus)?;
            let minus = plus.other_side();
            // κ°κ⁺κ⁻ at (1, 1) from the real-line integral fixes the scale
            let anchor = kappa_product(spec, tau, 1.0, 1.0)?.value;
            let scale = anchor / (wh_eval_from_phi(&plus, c(1.0, 0.0))? * wh_eval_from_phi(&minus, c(1.0, 0.0))?).re;
            let kappas = wh_eval_from_phi(&plus, c(0.0, -xi))? * wh_eval_from_phi(&minus, c(0.0, xi))? * scale;
            let rhs = kappas * (1.0 + f0);
            Ok((lhs - rhs).norm() / lhs.norm())
        };
        match run() {
            Ok(rel) => rep.record("identity", &at, tol - rel),
            Err(_) => rep.fail("evaluation", &at),
        }
    }
    rep
}

/// Property tested by [`cm_cbf_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum CheckMode {
    /// Alternating signs of forward differences on a real grid.
    CmDifferences,
    /// `0 ≥ Arg h(ξ) ≥ −Arg ξ` in the upper half-plane.
    StieltjesArg,
    /// `0 ≤ Arg h(ξ) ≤ Arg ξ` in the upper half-plane.
    CbfArg,
}

/// Settings for [`cm_cbf_check`].  In the argument modes the grid gives the
/// radii of the sample points, whose angles sweep `(0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmCheckConfig {
    pub mode: CheckMode,
    pub grid: Vec<f64>,
    pub order: usize,
    pub tol: f64,
}

impl CmCheckConfig {
    pub fn new(mode: CheckMode, grid: Vec<f64>) -> Self {
        CmCheckConfig { mode, grid, order: 8, tol: 1e-9 }
    }

    /// Argument-mode config with `n` log-spaced radii in `[1e-2, 1e2]`.
    pub fn upper_half_plane(mode: CheckMode, n: usize) -> Self {
        let n = n.max(2);
        let grid = (0..n).map(|k| 10f64.powf(-2.0 + 4.0 * k as f64 / (n - 1) as f64)).collect();
        Self::new(mode, grid)
    }

    /// Sample points of the argument modes.
    pub fn samples(&self) -> Vec<Complex> {
        let n = self.grid.len();
        // angles visit (0, π) in a stride-7 order so radius and angle decorrelate
        self.grid
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                let j = (7 * k) % n;
                Complex::from_polar(r, PI * (j as f64 + 0.5) / n as f64)
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() || self.grid.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::field("grid", "must be non-empty and positive"));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::field("grid", "must be increasing"));
        }
        if self.order < 2 {
            return Err(Error::field("order", "must be at least 2"));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::field("tol", "must be nonnegative"));
        }
        Ok(())
    }
}

/// `(−1)^k Δ^k h` on the stencil `x_i..x_{i+k}`, generalized to uneven grids
/// through divided differences and scaled by `2^k max |h|` over the stencil.
fn normalized_difference(xs: &[f64], hs: &[f64], i: usize, k: usize) -> f64 {
    let mut d: Vec<f64> = hs[i..=i + k].to_vec();
    for level in 1..=k {
        for j in 0..=(k - level) {
            d[j] = (d[j + 1] - d[j]) / (xs[i + j + level] - xs[i + j]);
        }
    }
    let step = (xs[i + k] - xs[i]) / k as f64;
    let mut fact = 1.0;
    for m in 1..=k {
        fact *= m as f64 * step;
    }
    let scale = hs[i..=i + k].iter().fold(0.0f64, |a, v| a.max(v.abs())) * 2f64.powi(k as i32);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    if scale == 0.0 {
        0.0
    } else {
        sign * d[0] * fact / scale
    }
}

/// Sample `h` and test complete monotonicity or the argument condition of
/// complete Bernstein / Stieltjes functions.
pub fn cm_cbf_check<H>(mut h: H, cfg: &CmCheckConfig) -> VerifyReport
where
    H: FnMut(Complex) -> Result<Complex>,
{
    let name = match cfg.mode {
        CheckMode::CmDifferences => "cm_differences",
        CheckMode::StieltjesArg => "stieltjes_arg",
        CheckMode::CbfArg => "cbf_arg",
    };
    let mut rep = VerifyReport::new(name);
    if let Err(e) = cfg.validate() {
        rep.fail(&format!("config: {e}"), &[]);
        return rep;
    }
    match cfg.mode {
        CheckMode::CmDifferences => {
            let mut hs = Vec::with_capacity(cfg.grid.len());
            for &x in &cfg.grid {
                match h(c(x, 0.0)) {
                    Ok(v) if v.re.is_finite() => hs.push(v.re),
                    _ => {
                        rep.fail("evaluation", &[x]);
                        return rep;
                    }
                }
            }
            for (i, &v) in hs.iter().enumerate() {
                let scale = v.abs().max(1e-300);
                rep.record("order_0", &[cfg.grid[i]], v / scale + cfg.tol);
            }
            for k in 1..=cfg.order.min(hs.len().saturating_sub(1)) {
                let check = format!("order_{k}");
                for i in 0..hs.len() - k {
                    let d = normalized_difference(&cfg.grid, &hs, i, k);
                    rep.record(&check, &[cfg.grid[i], k as f64], d + cfg.tol);
                }
            }
        }
        CheckMode::StieltjesArg | CheckMode::CbfArg => {
            for xi in cfg.samples() {
                let at = [xi.re, xi.im];
                let v = match h(xi) {
                    Ok(v) if v.re.is_finite() && v.im.is_finite() && v.norm() > 0.0 => v,
                    _ => {
                        rep.fail("evaluation", &at);
                        continue;
                    }
                };
                let a = v.im.atan2(v.re);
                let bound = xi.im.atan2(xi.re);
                let margin = match cfg.mode {
                    CheckMode::CbfArg => a.min(bound - a),
                    _ => (-a).min(bound + a),
                };
                rep.record("arg_wedge", &at, margin + cfg.tol);
            }
        }
    }
    rep
}
