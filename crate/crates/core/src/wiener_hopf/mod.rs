//! Wiener–Hopf factors `f⁺`, `f⁻` with `f(ξ) = f⁺(−iξ) f⁻(iξ)`.
//!
//! Factors are normalized so that `f⁺(1) = f⁻(1) = √c`, where `c` is the
//! constant of the exponential representation of `f`.

pub(crate) mod bd;
pub(crate) mod spine_route;

use alloc::format;
use alloc::vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{c, Complex};
use crate::report::VerifyReport;
use crate::rogers::{build_phi_table, checks, HalfProfile, Model, PhiTable, RogersSpec};
use bd::{Bd, Pole};
use spine_route::SpineRoute;

/// Which factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Side {
    Plus,
    Minus,
}

/// How a factor ratio or product is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Method {
    /// Integral of `log f` along the real line.
    Bd,
    /// Stieltjes integral against the profile along the spine.
    Spine,
    /// Exponential formula over the tabulated boundary angle.
    Phi,
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub err_estimate: f64,
}

/// Normalization tag carried by every handle.
pub const NORMALIZATION: &str = "c_plus = c_minus = sqrt(c)";

/// Nominal relative accuracy of the tabulated-angle route.
const PHI_REL_ERR: f64 = 1e-6;

/// One Wiener–Hopf factor, backed by a tabulated boundary angle.
#[derive(Debug, Clone)]
pub struct FactorHandle {
    pub spec: RogersSpec,
    pub side: Side,
    pub normalization: &'static str,
    pub phi_cache: PhiTable,
    profile: HalfProfile,
    /// `log` of the factor's constant, `½ log c` before rescaling.
    log_scale: f64,
}

impl FactorHandle {
    pub fn new(spec: &RogersSpec, side: Side) -> Result<Self> {
        let model = Model::new(spec);
        if checks::is_constant(&model) && model.raw(c(1.0, 0.0)).re <= 0.0 {
            return Err(Error::domain("factorization of the zero function"));
        }
        let (table, log_c) = match spec {
            RogersSpec::PhiRep(p) => (p.phi.clone(), p.c.ln()),
            _ => {
                let table = build_phi_table(&model);
                let (plus, minus) = table.profiles();
                let f1 = model.raw(c(1.0, 0.0)).norm();
                let j = plus.j(c(0.0, -1.0)) + minus.j(c(0.0, 1.0));
                (table, f1.ln() - j.re / PI)
            }
        };
        let (plus, minus) = table.profiles();
        let profile = match side {
            Side::Plus => plus,
            Side::Minus => minus,
        };
        Ok(FactorHandle {
            spec: spec.clone(),
            side,
            normalization: NORMALIZATION,
            phi_cache: table,
            profile,
            log_scale: 0.5 * log_c,
        })
    }

    /// The opposite factor, sharing the table.
    pub fn other_side(&self) -> Self {
        let (plus, minus) = self.phi_cache.profiles();
        let side = match self.side {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        };
        let profile = if side == Side::Plus { plus } else { minus };
        FactorHandle { side, profile, ..self.clone() }
    }

    /// The factor multiplied by `kappa > 0`.
    pub fn rescaled(&self, kappa: f64) -> Self {
        FactorHandle { log_scale: self.log_scale + kappa.ln(), ..self.clone() }
    }

    /// The factor's constant, `h(1)`.
    pub fn constant(&self) -> f64 {
        self.log_scale.exp()
    }

    /// `log h(ξ)` for `ξ` off `(−∞, 0)`.
    pub(crate) fn log_eval(&self, xi: Complex) -> Complex {
        self.profile.j(xi) / PI + self.log_scale
    }

    /// Points where the boundary angle of this side jumps up by more than
    /// `min_jump`.
    pub(crate) fn jump_points(&self, min_jump: f64) -> alloc::vec::Vec<f64> {
        self.profile.jump_points(min_jump)
    }
}

/// Evaluate the factor `h = f^±` at `ξ` off the cut `(−∞, 0)`; `ξ = 0` is
/// read as the limit from the right half-plane.
pub fn wh_eval_from_phi(handle: &FactorHandle, xi: Complex) -> Result<Complex> {
    if !(xi.re.is_finite() && xi.im.is_finite()) {
        return Err(Error::arg("xi must be finite"));
    }
    if xi.im == 0.0 && xi.re < 0.0 {
        return Err(Error::domain("xi on the cut (-inf, 0)"));
    }
    let xi = if xi == c(0.0, 0.0) { c(0.0, 0.0) } else { xi };
    Ok(handle.log_eval(xi).exp())
}

fn check_positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite")))
    }
}

/// `f^±(ξ₁)/f^±(ξ₂)` for `ξ₁, ξ₂ > 0`.
pub fn wh_ratio(spec: &RogersSpec, method: Method, side: Side, xi1: f64, xi2: f64) -> Result<Estimate> {
    check_positive(xi1, "xi1")?;
    check_positive(xi2, "xi2")?;
    let model = Model::new(spec);
    if checks::is_constant(&model) {
        return Ok(Estimate { value: 1.0, err_estimate: 0.0 });
    }
    match method {
        Method::Bd => {
            let b = Bd::new(&model);
            let (l, e) = match side {
                Side::Plus => b.log_pair(Pole::Upper(xi1), Pole::Upper(xi2))?,
                Side::Minus => b.log_pair(Pole::Lower(xi2), Pole::Lower(xi1))?,
            };
            let v = l.exp();
            Ok(Estimate { value: v, err_estimate: v * e })
        }
        Method::Spine => {
            let base = Model::new(&model.base);
            let route = SpineRoute::new(&base, &[xi1, xi2])?;
            let (v, e) = route.ratio(side, xi1, xi2, c(model.tau, 0.0))?;
            Ok(Estimate { value: v.re, err_estimate: e })
        }
        Method::Phi => {
            let h = FactorHandle::new(spec, side)?;
            let v = (h.log_eval(c(xi1, 0.0)) - h.log_eval(c(xi2, 0.0))).exp().re;
            Ok(Estimate { value: v, err_estimate: v * PHI_REL_ERR })
        }
    }
}

/// `f⁺(ξ₁) f⁻(ξ₂)` for `ξ₁, ξ₂ > 0`.  The spine route anchors the profile
/// at radius `big_r`; `big_r = 0` uses `f(0⁺)`, which must be positive.
pub fn wh_product(spec: &RogersSpec, method: Method, xi1: f64, xi2: f64, big_r: f64) -> Result<Estimate> {
    check_positive(xi1, "xi1")?;
    check_positive(xi2, "xi2")?;
    if !(big_r >= 0.0 && big_r.is_finite()) {
        return Err(Error::domain("R must be nonnegative and finite"));
    }
    let model = Model::new(spec);
    if big_r == 0.0 && checks::limits_of(&model).f_at_zero.value() <= 0.0 {
        return Err(Error::Convention("R = 0 requires f(0+) > 0".into()));
    }
    if checks::is_constant(&model) {
        let v = model.raw(c(1.0, 0.0)).re;
        return Ok(Estimate { value: v, err_estimate: 0.0 });
    }
    match method {
        Method::Bd => {
            let (l, e) = Bd::new(&model).log_pair(Pole::Upper(xi1), Pole::Lower(xi2))?;
            let v = l.exp();
            Ok(Estimate { value: v, err_estimate: v * e })
        }
        Method::Spine => {
            let base = Model::new(&model.base);
            let route = SpineRoute::new(&base, &[xi1, xi2, big_r])?;
            let (v, e) = route.product(xi1, xi2, big_r, c(model.tau, 0.0))?;
            Ok(Estimate { value: v.re, err_estimate: e })
        }
        Method::Phi => {
            let p = FactorHandle::new(spec, Side::Plus)?;
            let m = p.other_side();
            let v = (p.log_eval(c(xi1, 0.0)) + m.log_eval(c(xi2, 0.0))).exp().re;
            Ok(Estimate { value: v, err_estimate: v * PHI_REL_ERR })
        }
    }
}

/// Relative defect `|f(ξ) − f⁺(−iξ) f⁻(iξ)|/|f(ξ)|` at each sample, checked
/// against `tol`.
pub fn factorization_check(spec: &RogersSpec, samples: &[Complex], tol: f64) -> VerifyReport {
    let mut rep = VerifyReport::new("factorization");
    let plus = match FactorHandle::new(spec, Side::Plus) {
        Ok(h) => h,
        Err(e) => {
            rep.fail(&format!("factor_handle: {e}"), &[]);
            return rep;
        }
    };
    let minus = plus.other_side();
    let model = Model::new(spec);
    for &xi in samples {
        let at = [xi.re, xi.im];
        let f = match model.eval(xi) {
            Ok(f) => f,
            Err(_) => {
                rep.record("sample_in_domain", &at, f64::NEG_INFINITY);
                continue;
            }
        };
        let w = c(xi.im, -xi.re);
        let wm = c(-xi.im, xi.re);
        let prod = match (wh_eval_from_phi(&plus, w), wh_eval_from_phi(&minus, wm)) {
            (Ok(a), Ok(b)) => a * b,
            _ => {
                rep.record("factor_domain", &at, f64::NEG_INFINITY);
                continue;
            }
        };
        let rel = (f - prod).norm() / f.norm();
        rep.record("identity", &at, tol - rel);
    }
    rep
}

/// Families with explicit factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFamily {
    /// `σ + ½ξ² − ibξ`.
    BmDrift { b: f64, sigma: f64 },
    /// `c ξ^α` on `(0, ∞)`.
    Stable { c: Complex, alpha: f64 },
}

impl ClosedFamily {
    /// Positivity parameter of the stable family.
    pub fn positivity(&self) -> Result<f64> {
        match *self {
            ClosedFamily::Stable { c, alpha } => {
                if !(alpha > 0.0 && alpha <= 2.0) || c.norm() == 0.0 {
                    return Err(Error::domain("stable family needs 0 < alpha <= 2 and c != 0"));
                }
                let a = c.arg();
                if a.abs() > 0.5 * PI * alpha.min(2.0 - alpha) + 1e-15 {
                    return Err(Error::domain("|Arg c| exceeds (pi/2) min(alpha, 2 - alpha)"));
                }
                Ok(0.5 - a / (alpha * PI))
            }
            ClosedFamily::BmDrift { .. } => Err(Error::arg("positivity is defined for the stable family")),
        }
    }
}

/// Factor value at `ξ > 0` for a family with explicit factors.
pub fn closed_form_factors(family: ClosedFamily, side: Side, xi: f64) -> Result<f64> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::domain("xi must be nonnegative"));
    }
    match family {
        ClosedFamily::BmDrift { b, sigma } => {
            if !(sigma >= 0.0) || !b.is_finite() {
                return Err(Error::domain("bm_drift needs sigma >= 0 and finite b"));
            }
            let q = (b * b + 2.0 * sigma).sqrt();
            let r = match side {
                Side::Plus => q - b,
                Side::Minus => q + b,
            };
            Ok(0.5f64.sqrt() * (xi + r))
        }
        ClosedFamily::Stable { c, alpha } => {
            let rho = family.positivity()?;
            let e = match side {
                Side::Plus => alpha * rho,
                Side::Minus => alpha * (1.0 - rho),
            };
            Ok(c.norm().sqrt() * xi.powf(e))
        }
    }
}

/// Spec of `σ + ½ξ² − ibξ`.
pub fn bm_drift_spec(b: f64, sigma: f64) -> RogersSpec {
    RogersSpec::LevyAtomic(crate::rogers::LevyAtomic { a: 0.5, b, c: sigma, atoms: vec![] })
}
