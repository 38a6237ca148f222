//! The spine `ζ(r) = r e^{iθ(r)}`: the curve in the closed right half-plane
//! on which `f` is real and positive, the profile `λ(r) = f(ζ(r))`, the set
//! `Z` of radii where the spine leaves the imaginary axis, and the geometric
//! invariant suite.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{bisect_monotone, c, Complex};
use crate::report::VerifyReport;
use crate::rogers::{checks, Model, RogersSpec};

/// Z membership: `|θ| < π/2 − Z_ANGLE_TOL`.
pub const Z_ANGLE_TOL: f64 = 1e-7;
const EDGE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpinePoint {
    pub r: f64,
    pub theta: f64,
    pub zeta: Complex,
    pub lambda: f64,
    pub in_z: bool,
    /// Set when the point sits within `1e-5` rad of a Z boundary, where `λ`
    /// is pinned down only by continuity.
    pub boundary_interpolated: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpineTable {
    pub points: Vec<SpinePoint>,
    pub z_intervals: Vec<(f64, f64)>,
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    /// Largest relative mismatch of the one-sided values of `λ` at the
    /// interior Z boundaries.
    pub boundary_jump: f64,
}

/// `D⁺`, `D⁻` or the symmetrized spine itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Region {
    DPlus,
    DMinus,
    OnSpine,
}

/// One spine sample with the logarithmic slope of the profile.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    pub theta: f64,
    pub zeta: Complex,
    pub lambda: f64,
    /// `dλ/dr`
    pub dlambda: f64,
    pub in_z: bool,
}

/// Spine evaluation for a prepared model.
pub(crate) struct Tracer<'a> {
    pub model: &'a Model,
}

impl<'a> Tracer<'a> {
    pub fn new(model: &'a Model) -> Result<Self> {
        if checks::is_constant(model) {
            return Err(Error::SpineUndefined);
        }
        Ok(Tracer { model })
    }

    pub fn theta(&self, r: f64, tol: f64) -> f64 {
        let m = self.model;
        let g = |a: f64| {
            let v = m.raw(Complex::from_polar(r, a));
            v.im.atan2(v.re)
        };
        let (lo, hi) = (-FRAC_PI_2 + EDGE, FRAC_PI_2 - EDGE);
        match bisect_monotone(g, lo, hi, tol) {
            Ok(t) if t <= lo => -FRAC_PI_2,
            Ok(t) if t >= hi => FRAC_PI_2,
            Ok(t) => t,
            Err(_) => 0.0,
        }
    }

    pub fn sample(&self, r: f64) -> Sample {
        let theta = self.theta(r, 1e-13);
        self.sample_at(r, theta)
    }

    pub fn sample_at(&self, r: f64, theta: f64) -> Sample {
        let in_z = theta.abs() < FRAC_PI_2 - Z_ANGLE_TOL;
        if in_z {
            let e = Complex::from_polar(1.0, theta);
            let zeta = e * r;
            let (v, d) = self.model.raw_d(zeta);
            let l = d / v;
            let p = (l * e).re;
            let h = l.norm_sqr() / p;
            Sample { theta, zeta, lambda: v.re, dlambda: v.re * h, in_z }
        } else {
            let sg = theta.signum();
            let zeta = c(0.0, sg * r);
            let (v, d) = self.model.raw_d(zeta);
            let h = (c(0.0, sg) * d / v).re;
            Sample { theta: sg * FRAC_PI_2, zeta, lambda: v.re, dlambda: v.re * h, in_z }
        }
    }

    pub fn in_z(&self, r: f64) -> bool {
        self.theta(r, 1e-13).abs() < FRAC_PI_2 - Z_ANGLE_TOL
    }

    /// Radii in `[lo, hi]` where Z membership changes, located by a log
    /// scan with `per_decade` points and bisection.
    pub fn z_boundaries(&self, lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
        let n = ((hi / lo).log10() * per_decade as f64).ceil().max(2.0) as usize;
        let grid: Vec<f64> = (0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)).collect();
        let flags: Vec<bool> = grid.iter().map(|&r| self.in_z(r)).collect();
        let mut out = Vec::new();
        for k in 0..n {
            if flags[k] != flags[k + 1] {
                out.push(self.refine_boundary(grid[k], grid[k + 1], flags[k]));
            }
        }
        out
    }

    fn refine_boundary(&self, mut a: f64, mut b: f64, fa: bool) -> f64 {
        for _ in 0..200 {
            if b - a <= 1e-14 * b {
                break;
            }
            let m = (a * b).sqrt();
            if self.in_z(m) == fa {
                a = m;
            } else {
                b = m;
            }
        }
        (a * b).sqrt()
    }
}

/// Angle `θ(r) ∈ [−π/2, π/2]` of the spine at radius `r`: the sign change
/// of `α ↦ Arg f(r e^{iα})`, or `±π/2` when there is none.
pub fn theta_at(spec: &RogersSpec, r: f64, angle_tol: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::arg("r must be positive"));
    }
    let model = Model::new(spec);
    let t = Tracer::new(&model)?;
    Ok(t.theta(r, angle_tol.max(1e-15)))
}

/// Profile `λ(r) = f(ζ(r))`; off `Z` this is the boundary value `f(±ir)`.
pub fn lambda_at(spec: &RogersSpec, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::arg("r must be positive"));
    }
    let model = Model::new(spec);
    let t = Tracer::new(&model)?;
    Ok(t.sample(r).lambda)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

/// Sample the spine on a log-spaced grid of `n` radii.
pub fn build_spine_table(spec: &RogersSpec, r_min: f64, r_max: f64, n: usize) -> Result<SpineTable> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::arg("need 0 < r_min < r_max"));
    }
    if n < 16 {
        return Err(Error::arg("need at least 16 grid points"));
    }
    let model = Model::new(spec);
    let tr = Tracer::new(&model)?;
    let mut points = Vec::with_capacity(n);
    for r in log_grid(r_min, r_max, n) {
        let s = tr.sample(r);
        points.push(SpinePoint {
            r,
            theta: s.theta,
            zeta: s.zeta,
            lambda: s.lambda,
            in_z: s.in_z,
            boundary_interpolated: s.in_z && FRAC_PI_2 - s.theta.abs() < 1e-5,
        });
    }

    let mut z_intervals = Vec::new();
    let mut boundary_jump = 0.0f64;
    let mut start: Option<f64> = None;
    for k in 0..n {
        let p = points[k];
        if p.in_z && start.is_none() {
            start = Some(if k == 0 { r_min } else { tr.refine_boundary(points[k - 1].r, p.r, false) });
        }
        if !p.in_z {
            if let Some(s) = start.take() {
                let e = tr.refine_boundary(points[k - 1].r, p.r, true);
                z_intervals.push((s, e));
            }
        }
    }
    if let Some(s) = start {
        z_intervals.push((s, r_max));
    }
    for &(a, b) in &z_intervals {
        for (edge, dir) in [(a, 1.0), (b, -1.0)] {
            if edge == r_min || edge == r_max {
                continue;
            }
            let inside = tr.sample(edge * (1.0 + dir * 1e-9));
            let outside = tr.sample(edge * (1.0 - dir * 1e-9));
            let d = (inside.lambda - outside.lambda).abs() / outside.lambda.abs().max(1e-300);
            boundary_jump = boundary_jump.max(d);
        }
    }
    Ok(SpineTable { points, z_intervals, r_min, r_max, n, boundary_jump })
}

/// Which side of the symmetrized spine `ξ` lies on.
pub fn classify_point(spec: &RogersSpec, xi: Complex) -> Result<Region> {
    if xi == c(0.0, 0.0) || !(xi.re.is_finite() && xi.im.is_finite()) {
        return Err(Error::domain("classification needs a finite nonzero point"));
    }
    let model = Model::new(spec);
    if xi.re != 0.0 {
        let f = model.eval(xi)?;
        let tol = 1e-10 * (1.0 + f.norm());
        return Ok(if f.im > tol {
            Region::DPlus
        } else if f.im < -tol {
            Region::DMinus
        } else {
            Region::OnSpine
        });
    }
    let tr = Tracer::new(&model)?;
    let r = xi.im.abs();
    let up = xi.im > 0.0;
    let axis = if up { FRAC_PI_2 } else { -FRAC_PI_2 };
    let on_axis = |r: f64| tr.theta(r, 1e-13) == axis;
    if !on_axis(r) {
        return Ok(if up { Region::DPlus } else { Region::DMinus });
    }
    if on_axis(r * (1.0 - 1e-6)) && on_axis(r * (1.0 + 1e-6)) {
        return Ok(if up { Region::DMinus } else { Region::DPlus });
    }
    Ok(Region::OnSpine)
}

/// Geometric checks on a spine table: curvature bound on `Z`, annulus
/// length `≤ 300 r`, total variation of `θ` over log-windows of width
/// `log(1+√2)` at most 140, monotone profile, log-derivative bound on `Z`,
/// and for exponential-representation specs the growth bound on `log λ`.
pub fn spine_invariant_report(table: &SpineTable, spec: &RogersSpec) -> VerifyReport {
    const SLACK: f64 = 1.1;
    let mut rep = VerifyReport::new("spine");
    let pts = &table.points;
    let n = pts.len();
    let model = Model::new(spec);
    if n < 3 {
        rep.fail("table_size", &[n as f64]);
        return rep;
    }
    let du: Vec<f64> = pts.windows(2).map(|w| (w[1].r / w[0].r).ln()).collect();

    for k in 1..n - 1 {
        if !(pts[k - 1].in_z && pts[k].in_z && pts[k + 1].in_z) {
            continue;
        }
        let (h0, h1) = (du[k - 1], du[k]);
        let (t0, t1, t2) = (pts[k - 1].theta, pts[k].theta, pts[k + 1].theta);
        let d1 = (t2 - t0) / (h0 + h1);
        let d2 = 2.0 * ((t2 - t1) / h1 - (t1 - t0) / h0) / (h0 + h1);
        let bound = SLACK * 9.0 * (d1 * d1 + 1.0) / t1.cos();
        rep.record("curvature", &[pts[k].r], 1.0 - d2.abs() / bound);
    }

    for i in 0..n {
        let r = pts[i].r;
        if 2.0 * r > table.r_max * (1.0 + 1e-12) {
            break;
        }
        let mut len = 0.0;
        let mut j = i;
        while j + 1 < n && pts[j + 1].r <= 2.0 * r * (1.0 + 1e-12) {
            len += (pts[j + 1].zeta - pts[j].zeta).norm();
            j += 1;
        }
        rep.record("annulus_length", &[r], 1.0 - len / (300.0 * r));
    }

    let h = (1.0 + 2f64.sqrt()).ln();
    for i in 0..n {
        let u0 = pts[i].r.ln();
        let mut tv = 0.0;
        let mut j = i;
        while j + 1 < n && pts[j + 1].r.ln() <= u0 + h {
            tv += (pts[j + 1].theta - pts[j].theta).abs();
            j += 1;
        }
        rep.record("theta_variation", &[pts[i].r], 1.0 - tv / 140.0);
        if pts[n - 1].r.ln() < u0 + h {
            break;
        }
    }

    for w in pts.windows(2) {
        let scale = w[0].lambda.abs().max(w[1].lambda.abs()).max(1e-300);
        rep.record("lambda_monotone", &[w[0].r, w[1].r], (w[1].lambda - w[0].lambda) / scale + 1e-12);
    }

    for p in pts.iter().filter(|p| p.in_z) {
        let (v, d) = model.raw_d(p.zeta);
        let q = (d / v).norm() * p.r / PI;
        rep.record("log_derivative", &[p.r], 1.0 - q / SLACK);
    }

    if let RogersSpec::PhiRep(phi) = spec {
        let lc = phi.c.ln().abs();
        for p in pts {
            let bound = lc + (2.0 * PI).sqrt() * (1.0 + p.r) / p.r.sqrt() + 1e-9;
            rep.record("log_lambda_growth", &[p.r], 1.0 - p.lambda.ln().abs() / bound);
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_drift_spine() {
        let f = RogersSpec::brownian(0.5, 1.0);
        assert!((theta_at(&f, 2f64.sqrt(), 1e-13).unwrap() - PI / 4.0).abs() < 1e-10);
        assert_eq!(theta_at(&f, 0.5, 1e-12).unwrap(), FRAC_PI_2);
        assert!((lambda_at(&f, 2f64.sqrt()).unwrap() - 1.0).abs() < 1e-12);
        assert!((lambda_at(&f, 0.5).unwrap() - 0.375).abs() < 1e-14);
    }

    #[test]
    fn profile_slope_matches_difference() {
        let f = RogersSpec::brownian(0.5, 1.0);
        let m = Model::new(&f);
        let t = Tracer::new(&m).unwrap();
        for r in [0.3, 0.9, 1.5, 4.0] {
            let s = t.sample(r);
            let h = 1e-6 * r;
            let fd = (t.sample(r + h).lambda - t.sample(r - h).lambda) / (2.0 * h);
            assert!((s.dlambda - fd).abs() < 1e-6 * (1.0 + fd.abs()), "{r}: {} vs {fd}", s.dlambda);
        }
    }

    #[test]
    fn constant_has_no_spine() {
        let f = RogersSpec::LevyAtomic(crate::rogers::LevyAtomic { a: 0.0, b: 0.0, c: 2.0, atoms: Vec::new() });
        assert_eq!(theta_at(&f, 1.0, 1e-12), Err(Error::SpineUndefined));
    }
}
