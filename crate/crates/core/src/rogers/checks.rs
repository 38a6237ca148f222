use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;
use super::eval::Model;
use super::{Interpolation, LevyAtomic, RogersSpec};
use crate::error::{Error, Result};
use crate::numerics::{c, extrapolate_to_zero, Complex};
use crate::report::VerifyReport;

/// Default horizontal approach distances for [`estimate_phi`], scaled by
/// `1 + |s|`.
pub const DEFAULT_PHI_LADDER: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// A spec that passed structural checks and sampled positivity of
/// `re(f(ξ)/ξ)`.  Sampling is a necessary condition only.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedSpec {
    pub spec: RogersSpec,
    pub sampled_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Limit {
    Finite(f64),
    Infinite,
}

impl Limit {
    pub fn value(self) -> f64 {
        match self {
            Limit::Finite(v) => v,
            Limit::Infinite => f64::INFINITY,
        }
    }

    fn from_f64(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            Limit::Infinite
        } else {
            Limit::Finite(v)
        }
    }
}

/// `f(0⁺)` and `f(∞⁻)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitsResult {
    pub f_at_zero: Limit,
    pub f_at_infinity: Limit,
}

fn finite(field: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::field(field, "must be finite"))
    }
}

fn structural(spec: &RogersSpec) -> Result<()> {
    match spec {
        RogersSpec::LevyAtomic(l) => {
            finite("a", l.a)?;
            finite("b", l.b)?;
            finite("c", l.c)?;
            if l.a < 0.0 {
                return Err(Error::field("a", "must be nonnegative"));
            }
            if l.c < 0.0 {
                return Err(Error::field("c", "must be nonnegative"));
            }
            for (i, at) in l.atoms.iter().enumerate() {
                finite(&format!("atoms[{i}].s"), at.s)?;
                finite(&format!("atoms[{i}].w"), at.w)?;
                if at.s == 0.0 {
                    return Err(Error::field(format!("atoms[{i}].s"), "must be nonzero"));
                }
                if at.w <= 0.0 {
                    return Err(Error::field(format!("atoms[{i}].w"), "must be positive"));
                }
            }
        }
        RogersSpec::StableSum(s) => {
            if s.terms.is_empty() {
                return Err(Error::field("terms", "must not be empty"));
            }
            for (i, t) in s.terms.iter().enumerate() {
                finite(&format!("terms[{i}].w"), t.w)?;
                finite(&format!("terms[{i}].m"), t.m)?;
                finite(&format!("terms[{i}].alpha"), t.alpha)?;
                if t.w < 0.0 {
                    return Err(Error::field(format!("terms[{i}].w"), "must be nonnegative"));
                }
                if t.m < 0.0 {
                    return Err(Error::field(format!("terms[{i}].m"), "must be nonnegative"));
                }
                if !(t.alpha > 0.0 && t.alpha <= 2.0) {
                    return Err(Error::field(format!("terms[{i}].alpha"), "must lie in (0, 2]"));
                }
                if t.alpha > 1.0 && t.m != 0.0 {
                    return Err(Error::field(format!("terms[{i}].m"), "must be 0 when alpha > 1"));
                }
            }
        }
        RogersSpec::RationalProduct(r) => {
            finite("prefactor", r.prefactor)?;
            if r.prefactor <= 0.0 {
                return Err(Error::field("prefactor", "must be positive"));
            }
            for (i, f) in r.factors.iter().enumerate() {
                finite(&format!("factors[{i}].m"), f.m)?;
                if f.m < 0.0 {
                    return Err(Error::field(format!("factors[{i}].m"), "must be nonnegative"));
                }
                if f.exponent != 1 && f.exponent != -1 {
                    return Err(Error::field(format!("factors[{i}].exponent"), "must be 1 or -1"));
                }
            }
        }
        RogersSpec::PhiRep(p) => {
            finite("c", p.c)?;
            if p.c <= 0.0 {
                return Err(Error::field("c", "must be positive"));
            }
            let t = &p.phi;
            let nb = t.breakpoints.len();
            let want = match t.interpolation {
                Interpolation::PiecewiseConstant => nb.saturating_sub(1),
                Interpolation::PiecewiseLinear => nb,
            };
            if nb < 2 {
                return Err(Error::field("phi.breakpoints", "needs at least two breakpoints"));
            }
            if t.values.len() != want {
                return Err(Error::field("phi.values", format!("expected {want} values, found {}", t.values.len())));
            }
            for (i, b) in t.breakpoints.iter().enumerate() {
                finite(&format!("phi.breakpoints[{i}]"), *b)?;
            }
            if t.breakpoints.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::field("phi.breakpoints", "must be strictly increasing"));
            }
            for (i, v) in t.values.iter().enumerate() {
                if !(*v >= 0.0 && *v <= PI) {
                    return Err(Error::field(format!("phi.values[{i}]"), "must lie in [0, pi]"));
                }
            }
        }
        RogersSpec::Shifted { tau, base } => {
            finite("tau", *tau)?;
            if *tau < 0.0 {
                return Err(Error::field("tau", "must be nonnegative"));
            }
            structural(base)?;
        }
    }
    Ok(())
}

fn canonical(spec: &RogersSpec) -> RogersSpec {
    let mut spec = spec.clone();
    match &mut spec {
        RogersSpec::LevyAtomic(l) => {
            l.atoms.sort_by(|x, y| x.s.total_cmp(&y.s).then(x.w.total_cmp(&y.w)));
        }
        RogersSpec::StableSum(s) => s.terms.sort_by(|x, y| {
            x.orientation
                .cmp(&y.orientation)
                .then(x.m.total_cmp(&y.m))
                .then(x.alpha.total_cmp(&y.alpha))
                .then(x.w.total_cmp(&y.w))
        }),
        RogersSpec::RationalProduct(r) => r.factors.sort_by(|x, y| {
            x.orientation.cmp(&y.orientation).then(x.m.total_cmp(&y.m)).then(x.exponent.cmp(&y.exponent))
        }),
        RogersSpec::Shifted { base, .. } => **base = canonical(base),
        RogersSpec::PhiRep(_) => {}
    }
    spec
}

/// Log-polar sample points in the open right half-plane.
pub(crate) fn log_polar_samples(n: usize) -> Vec<Complex> {
    let n = n.max(4);
    let n_r = (n as f64).sqrt().ceil() as usize;
    let n_a = n.div_ceil(n_r);
    let mut out = Vec::with_capacity(n_r * n_a + 2 * n_r);
    for i in 0..n_r {
        let r = 10f64.powf(-4.0 + 8.0 * i as f64 / (n_r - 1).max(1) as f64);
        for k in 0..n_a {
            let a = -FRAC_PI_2 + PI * (k as f64 + 0.5) / n_a as f64;
            out.push(Complex::from_polar(r, a));
        }
        out.push(Complex::from_polar(r, FRAC_PI_2 - 0.01));
        out.push(Complex::from_polar(r, -FRAC_PI_2 + 0.01));
    }
    out
}

/// Check the payload and sample `re(f(ξ)/ξ) ≥ 0` on a log-polar grid.
///
/// Returns the spec with atoms, terms and factors in canonical order.
pub fn validate_spec(spec: &RogersSpec, n_samples: usize) -> Result<ValidatedSpec> {
    structural(spec)?;
    let spec = canonical(spec);
    let model = Model::new(&spec);
    let pts = log_polar_samples(n_samples);
    for xi in &pts {
        let f = model.raw(*xi);
        let q = f / xi;
        let tol = 1e-10 * (1.0 + f.norm() / xi.norm());
        if !(q.re >= -tol) {
            return Err(Error::RogersViolation { re: xi.re, im: xi.im, value: q.re });
        }
    }
    Ok(ValidatedSpec { spec, sampled_points: pts.len() })
}

/// `(1/π) Σ sign(s) w / (|s|(1+|s|))`: the drift at which the atomic part
/// is a pure compound Poisson process.
pub(crate) fn compensator_drift(l: &LevyAtomic) -> f64 {
    l.atoms.iter().map(|at| at.s.signum() * at.w / (at.s.abs() * (1.0 + at.s.abs()))).sum::<f64>() / PI
}

/// Total jump intensity `∫ν = (1/π) Σ w/|s|`.
pub(crate) fn jump_rate(l: &LevyAtomic) -> f64 {
    l.atoms.iter().map(|at| at.w / at.s.abs()).sum::<f64>() / PI
}

/// Whether the process is compound Poisson (possibly killed).
pub(crate) fn is_compound_poisson(l: &LevyAtomic) -> bool {
    let bc = compensator_drift(l);
    l.a == 0.0 && (l.b - bc).abs() <= 1e-12 * (1.0 + l.b.abs() + bc.abs())
}

/// Lévy density of a [`LevyAtomic`] spec.
pub fn levy_density(spec: &RogersSpec, x: f64) -> Result<f64> {
    let RogersSpec::LevyAtomic(l) = spec else {
        return Err(Error::Unsupported("Lévy density needs a levy_atomic spec".into()));
    };
    if x == 0.0 || !x.is_finite() {
        return Err(Error::domain("Lévy density is defined for finite x != 0"));
    }
    let v: f64 = l
        .atoms
        .iter()
        .filter(|at| at.s.signum() == x.signum())
        .map(|at| at.w * (-at.s.abs() * x.abs()).exp())
        .sum();
    Ok(v / PI)
}

pub(crate) fn limits_of(model: &Model) -> LimitsResult {
    let (z, inf) = match &model.base {
        RogersSpec::LevyAtomic(l) => {
            let inf = if is_compound_poisson(l) { l.c + jump_rate(l) } else { f64::INFINITY };
            (l.c, inf)
        }
        RogersSpec::StableSum(s) => {
            let z = s.terms.iter().map(|t| t.w * t.m.powf(t.alpha)).sum();
            let inf = if s.terms.iter().any(|t| t.w > 0.0) { f64::INFINITY } else { 0.0 };
            (z, inf)
        }
        RogersSpec::RationalProduct(r) => {
            let k0: i32 = r.factors.iter().filter(|f| f.m == 0.0).map(|f| f.exponent).sum();
            let d: i32 = r.factors.iter().map(|f| f.exponent).sum();
            let z = match k0.cmp(&0) {
                core::cmp::Ordering::Greater => 0.0,
                core::cmp::Ordering::Less => f64::INFINITY,
                core::cmp::Ordering::Equal => r
                    .factors
                    .iter()
                    .filter(|f| f.m != 0.0)
                    .fold(r.prefactor, |acc, f| acc * f.m.powi(f.exponent)),
            };
            let inf = match d.cmp(&0) {
                core::cmp::Ordering::Greater => f64::INFINITY,
                core::cmp::Ordering::Less => 0.0,
                core::cmp::Ordering::Equal => r.prefactor,
            };
            (z, inf)
        }
        RogersSpec::PhiRep(_) => {
            let (p, m, lc) = model.profiles().expect("phi model");
            let z0 = (lc + (p.j(c(0.0, 0.0)).re + m.j(c(0.0, 0.0)).re) / PI).exp();
            let i0 = (lc + (p.integral_inf() + m.integral_inf()) / PI).exp();
            (z0, i0)
        }
        RogersSpec::Shifted { .. } => unreachable!(),
    };
    LimitsResult { f_at_zero: Limit::from_f64(z + model.tau), f_at_infinity: Limit::from_f64(inf + model.tau) }
}

/// `f(0⁺)` and `f(∞⁻)`, with `+∞` flagged.
pub fn f_limits(spec: &RogersSpec) -> LimitsResult {
    limits_of(&Model::new(spec))
}

/// Whether `f` is constant.
pub(crate) fn is_constant(model: &Model) -> bool {
    let a = model.raw(c(1.0, 0.0));
    [c(2.0, 0.5), c(0.3, -1.7), c(5.0, 3.0)].iter().all(|&z| (model.raw(z) - a).norm() <= 1e-13 * (1.0 + a.norm()))
}

/// Whether `re(f(ξ)/ξ)` vanishes identically, i.e. `f(ξ) = −ibξ`.
pub(crate) fn is_degenerate(model: &Model) -> bool {
    [c(1.0, 0.0), c(0.5, 2.0), c(3.0, -1.0), c(0.2, 0.1)].iter().all(|&z| {
        let q = model.raw(z) / z;
        q.re.abs() <= 1e-12 * q.norm().max(1e-300) || q.norm() == 0.0
    })
}

/// Boundary angle `φ(s) = −sign(s) lim_{t→0⁺} Arg f(t − is)`, estimated on
/// a ladder of `t` values and extrapolated to `t = 0`.
pub fn estimate_phi(spec: &RogersSpec, s: f64, eps_ladder: &[f64]) -> Result<f64> {
    estimate_phi_model(&Model::new(spec), s, eps_ladder)
}

pub(crate) fn estimate_phi_model(model: &Model, s: f64, eps_ladder: &[f64]) -> Result<f64> {
    if s == 0.0 || !s.is_finite() {
        return Err(Error::domain("boundary angle needs finite s != 0"));
    }
    let default: Vec<f64> = DEFAULT_PHI_LADDER.iter().map(|e| e * (1.0 + s.abs())).collect();
    let ladder = if eps_ladder.is_empty() { &default[..] } else { eps_ladder };
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for &t in ladder {
        if !(t > 0.0) {
            return Err(Error::arg("eps_ladder entries must be positive"));
        }
        let f = model.raw(c(t, -s));
        if f.re.is_finite() && f.im.is_finite() && f.norm() > 0.0 {
            ts.push(t);
            vs.push(-s.signum() * f.im.atan2(f.re));
        }
    }
    if ts.is_empty() {
        return Err(Error::Estimation(s));
    }
    let v = if ts.len() == 1 { vs[0] } else { extrapolate_to_zero(&ts, &vs) };
    Ok(v.clamp(0.0, PI))
}

/// The §3 bounds at each sample: argument wedge, magnitude sandwich against
/// `|f(|ξ|)|`, and `|f'/f| ≤ π / re ξ` with finite-difference slack `1e-3`.
pub fn check_function_bounds(spec: &RogersSpec, samples: &[Complex]) -> VerifyReport {
    let model = Model::new(spec);
    let mut rep = VerifyReport::new("function_bounds");
    const TOL: f64 = 1e-12;
    for &xi in samples {
        let at = [xi.re, xi.im];
        if !(xi.re > 0.0) || !xi.im.is_finite() {
            rep.fail("sample_in_half_plane", &at);
            continue;
        }
        let f = model.raw(xi);
        let r = xi.norm();
        let fr = model.raw(c(r, 0.0)).norm();
        if !(f.re.is_finite() && f.im.is_finite()) || f.norm() == 0.0 {
            rep.fail("evaluation", &at);
            continue;
        }
        let da = f.im.atan2(f.re) - xi.im.atan2(xi.re);
        rep.record("arg_wedge", &at, (FRAC_PI_2 - da.abs()) + TOL);

        let cosr = xi.re / r;
        let lower = 0.5f64.sqrt() * (r * r / (r * r + r * r)) * cosr * fr;
        let upper = 2f64.sqrt() * 2.0 * fr / cosr;
        let lf = f.norm().ln();
        rep.record("magnitude_sandwich", &at, (lf - lower.ln()).min(upper.ln() - lf) + TOL);

        let h = (1e-6 * r).min(0.5 * xi.re);
        let d = (model.raw(xi + h) - model.raw(xi - h)) / (2.0 * h);
        let ratio = (d / f).norm() * xi.re / PI;
        rep.record("log_derivative", &at, 1.0 + 1e-3 - ratio);
    }
    rep
}
