//! One-sided boundary-angle profiles and their exact cellwise integrals.
//!
//! A profile is `φ` restricted to one side of the imaginary axis, written as
//! a function of `u = |s| > 0`: piecewise linear on `[0, u_n]` and constant
//! beyond.  For such a profile
//!
//! `J(γ) = ∫_0^∞ φ(u) (1/(1+u) − 1/(γ+u)) du`
//!
//! has a closed form on every cell, so the exponential representation is
//! evaluated without quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use super::eval::Model;
use super::{Interpolation, PhiTable};
use crate::numerics::{c, ln_1p, Complex};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Seg {
    pub a: f64,
    pub b: f64,
    pub va: f64,
    pub vb: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct HalfProfile {
    /// Contiguous cells covering `[0, u_n]`.
    pub segs: Vec<Seg>,
    /// Value on `(u_n, ∞)`, or on `(0, ∞)` when there are no cells.
    pub tail: f64,
}

/// `ln(γ + b) − ln(γ + a)` along the horizontal segment, `a < b`.
pub(crate) fn log_ratio(g: Complex, a: f64, b: f64) -> Complex {
    let ga = g + a;
    if (b - a) <= 0.5 * ga.norm() {
        ln_1p(c(b - a, 0.0) / ga)
    } else {
        (g + b).ln() - ga.ln()
    }
}

impl HalfProfile {
    pub fn constant(v: f64) -> Self {
        HalfProfile { segs: Vec::new(), tail: v }
    }

    fn from_nodes(nodes: &[(f64, f64)], tail: f64) -> Self {
        // nodes: increasing u > 0 (possibly starting at 0), values at nodes.
        let mut segs = Vec::with_capacity(nodes.len() + 1);
        if let Some(&(u0, v0)) = nodes.first() {
            if u0 > 0.0 {
                segs.push(Seg { a: 0.0, b: u0, va: v0, vb: v0 });
            }
        }
        for w in nodes.windows(2) {
            segs.push(Seg { a: w[0].0, b: w[1].0, va: w[0].1, vb: w[1].1 });
        }
        let mut p = HalfProfile { segs, tail };
        p.compact();
        p
    }

    /// Merge neighbouring constant cells with equal values.
    fn compact(&mut self) {
        let mut out: Vec<Seg> = Vec::with_capacity(self.segs.len());
        for s in self.segs.drain(..) {
            if s.b <= s.a {
                continue;
            }
            if let Some(last) = out.last_mut() {
                if last.va == last.vb && s.va == s.vb && last.vb == s.va {
                    last.b = s.b;
                    continue;
                }
            }
            out.push(s);
        }
        self.segs = out;
    }

    #[cfg(test)]
    pub fn value_at(&self, u: f64) -> f64 {
        let k = self.segs.partition_point(|s| s.b < u);
        match self.segs.get(k) {
            None => self.tail,
            Some(s) => {
                if s.b == s.a {
                    s.va
                } else {
                    s.va + (s.vb - s.va) * (u - s.a) / (s.b - s.a)
                }
            }
        }
    }

    /// Value of `φ` near `u = 0⁺`.
    pub fn head(&self) -> f64 {
        self.segs.first().map_or(self.tail, |s| s.va)
    }

    /// `J(γ)` for `γ` off `(−∞, 0)`; `γ = 0` gives `−∫ φ/(u(1+u))`, which
    /// is `−∞` when `φ(0⁺) > 0`.
    pub fn j(&self, g: Complex) -> Complex {
        if g == c(0.0, 0.0) {
            return c(self.j_at_zero(), 0.0);
        }
        let mut acc = c(0.0, 0.0);
        let Some(last) = self.segs.last() else {
            return g.ln() * self.tail;
        };
        for s in &self.segs {
            if s.va == 0.0 && s.vb == 0.0 {
                continue;
            }
            let l1 = (s.b - s.a) / (1.0 + s.a);
            let l1 = l1.ln_1p();
            let lg = log_ratio(g, s.a, s.b);
            acc += (c(l1, 0.0) - lg) * s.va;
            if s.vb != s.va {
                let slope = (s.vb - s.va) / (s.b - s.a);
                acc += ((g + s.a) * lg - (1.0 + s.a) * l1) * slope;
            }
        }
        if self.tail != 0.0 {
            let un = last.b;
            let t = if (g - 1.0).norm() <= 0.5 * (1.0 + un) {
                ln_1p((g - 1.0) / (1.0 + un))
            } else {
                (g + un).ln() - c(un.ln_1p(), 0.0)
            };
            acc += t * self.tail;
        }
        acc
    }

    fn j_at_zero(&self) -> f64 {
        if self.head() > 0.0 {
            return f64::NEG_INFINITY;
        }
        if self.segs.is_empty() {
            return 0.0;
        }
        let mut acc = 0.0;
        for s in &self.segs {
            if s.va == 0.0 && s.vb == 0.0 {
                continue;
            }
            let l1 = ((s.b - s.a) / (1.0 + s.a)).ln_1p();
            let slope = (s.vb - s.va) / (s.b - s.a);
            if s.a == 0.0 {
                // va = 0 here; ∫_0^b slope·u (1/(1+u) − 1/u) du
                acc += -slope * l1;
                continue;
            }
            let lg = (s.b / s.a).ln();
            acc += s.va * (l1 - lg) + slope * (s.a * lg - (1.0 + s.a) * l1);
        }
        let un = self.segs.last().unwrap().b;
        if self.tail != 0.0 {
            acc += self.tail * (un / (1.0 + un)).ln();
        }
        acc
    }

    /// `∫_0^∞ φ(u)/(1+u) du`, infinite when the tail is positive.
    pub fn integral_inf(&self) -> f64 {
        if self.tail > 0.0 {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for s in &self.segs {
            let l1 = ((s.b - s.a) / (1.0 + s.a)).ln_1p();
            let slope = (s.vb - s.va) / (s.b - s.a);
            acc += s.va * l1 + slope * ((s.b - s.a) - (1.0 + s.a) * l1);
        }
        acc
    }

    /// Points `u` where the profile jumps upward by more than `min_jump`.
    pub fn jump_points(&self, min_jump: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for s in &self.segs {
            if s.vb - s.va > min_jump && (s.b - s.a) <= 1e-9 * s.b {
                out.push(s.b);
            }
        }
        out
    }
}

/// Split a table into its `s > 0` and mirrored `s < 0` profiles.
pub(crate) fn split_table(t: &PhiTable) -> (HalfProfile, HalfProfile) {
    let b = &t.breakpoints;
    let v = &t.values;
    match t.interpolation {
        Interpolation::PiecewiseLinear => {
            let pos: Vec<(f64, f64)> =
                b.iter().zip(v).filter(|(x, _)| **x >= 0.0).map(|(x, y)| (*x, *y)).collect();
            let neg: Vec<(f64, f64)> =
                b.iter().zip(v).rev().filter(|(x, _)| **x <= 0.0).map(|(x, y)| (-*x, *y)).collect();
            let plus = if pos.is_empty() {
                HalfProfile::constant(v[v.len() - 1])
            } else {
                HalfProfile::from_nodes(&pos, pos[pos.len() - 1].1)
            };
            let minus = if neg.is_empty() {
                HalfProfile::constant(v[0])
            } else {
                HalfProfile::from_nodes(&neg, neg[neg.len() - 1].1)
            };
            (plus, minus)
        }
        Interpolation::PiecewiseConstant => {
            let n = v.len();
            // Cells on (0, ∞) as constant segments.
            let mut plus = Vec::new();
            if b[0] > 0.0 {
                plus.push(Seg { a: 0.0, b: b[0], va: v[0], vb: v[0] });
            }
            for k in 0..n {
                let (lo, hi) = (b[k].max(0.0), b[k + 1]);
                if hi > lo {
                    plus.push(Seg { a: lo, b: hi, va: v[k], vb: v[k] });
                }
            }
            let mut minus = Vec::new();
            if b[n] < 0.0 {
                minus.push(Seg { a: 0.0, b: -b[n], va: v[n - 1], vb: v[n - 1] });
            }
            for k in (0..n).rev() {
                let (lo, hi) = ((-b[k + 1]).max(0.0), -b[k]);
                if hi > lo {
                    minus.push(Seg { a: lo, b: hi, va: v[k], vb: v[k] });
                }
            }
            let mut p = HalfProfile { segs: plus, tail: v[n - 1] };
            let mut m = HalfProfile { segs: minus, tail: v[0] };
            p.compact();
            m.compact();
            (p, m)
        }
    }
}

/// Exact `φ(s)` for a closed-form spec, from the boundary value at `+0 − is`.
pub(crate) fn boundary_phi(model: &Model, s: f64) -> f64 {
    let g = model.raw(c(0.0, -s));
    let a = if s > 0.0 { -g.im.atan2(g.re) } else { g.im.atan2(g.re) };
    let a = if a < 0.0 {
        if a < -0.5 * PI {
            PI
        } else {
            0.0
        }
    } else {
        a
    };
    a.min(PI)
}

const GRID_LO: f64 = 1e-8;
const GRID_HI: f64 = 1e8;
const PER_DECADE: usize = 32;
const LIN_TOL: f64 = 1e-7;
const JUMP_TOL: f64 = 0.3;
const MIN_REL_WIDTH: f64 = 1e-13;

fn side_nodes(model: &Model, sign: f64, special: &[f64]) -> Vec<(f64, f64)> {
    let phi = |u: f64| boundary_phi(model, sign * u);
    let mut seeds: Vec<f64> = Vec::new();
    let decades = (GRID_HI / GRID_LO).log10();
    let n = (decades * PER_DECADE as f64).round() as usize;
    for k in 0..=n {
        seeds.push(GRID_LO * (GRID_HI / GRID_LO).powf(k as f64 / n as f64));
    }
    for &p in special {
        seeds.push(p);
        for k in 1..=45 {
            let h = (2.0f64).powi(-k);
            seeds.push(p * (1.0 - h));
            seeds.push(p * (1.0 + h));
        }
    }
    seeds.retain(|u| u.is_finite() && *u > 0.0);
    seeds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    seeds.dedup();

    let mut out: Vec<(f64, f64)> = Vec::with_capacity(seeds.len() * 4);
    let vals: Vec<f64> = seeds.iter().map(|&u| phi(u)).collect();
    for i in 0..seeds.len() {
        out.push((seeds[i], vals[i]));
        if i + 1 == seeds.len() {
            break;
        }
        let mut stack = alloc::vec![(seeds[i], vals[i], seeds[i + 1], vals[i + 1])];
        let mut inner: Vec<(f64, f64)> = Vec::new();
        while let Some((ua, va, ub, vb)) = stack.pop() {
            if ub - ua <= MIN_REL_WIDTH * ub {
                continue;
            }
            let um = if ua > 0.0 { (ua * ub).sqrt() } else { 0.5 * (ua + ub) };
            let vm = phi(um);
            let lin = va + (vb - va) * (um - ua) / (ub - ua);
            if (vm - lin).abs() > LIN_TOL || (vb - va).abs() > JUMP_TOL {
                inner.push((um, vm));
                stack.push((ua, va, um, vm));
                stack.push((um, vm, ub, vb));
            }
        }
        inner.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out.extend(inner);
    }
    out
}

/// Piecewise-linear boundary-angle table of a closed-form spec, refined
/// until linear interpolation is accurate to about `1e-7`.
pub(crate) fn build_phi_table(model: &Model) -> PhiTable {
    let (plus_sp, minus_sp) = model.base.special_radii();
    let plus = side_nodes(model, 1.0, &plus_sp);
    let minus = side_nodes(model, -1.0, &minus_sp);
    let mut breakpoints = Vec::with_capacity(plus.len() + minus.len());
    let mut values = Vec::with_capacity(plus.len() + minus.len());
    for &(u, v) in minus.iter().rev() {
        breakpoints.push(-u);
        values.push(v);
    }
    // f(0⁺) ∈ (0, ∞) forces φ(0±) = 0; the sampled grid stops short of it
    let f0 = super::checks::limits_of(model).f_at_zero.value();
    if f0 > 0.0 && f0.is_finite() {
        breakpoints.push(0.0);
        values.push(0.0);
    }
    for &(u, v) in &plus {
        breakpoints.push(u);
        values.push(v);
    }
    PhiTable { breakpoints, values, interpolation: Interpolation::PiecewiseLinear }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, Domain, QuadratureConfig};

    fn quad_j(p: &HalfProfile, g: Complex) -> Complex {
        let mut pts: Vec<f64> = p.segs.iter().map(|s| s.b).collect();
        pts.insert(0, 0.0);
        let cfg = QuadratureConfig::with_tol(1e-12, 1e-14).singular(&pts);
        integrate_adaptive(
            |u| (c(1.0 / (1.0 + u), 0.0) - (g + u).inv()) * p.value_at(u),
            Domain::HalfLine(0.0),
            &cfg,
        )
        .unwrap()
        .value
    }

    #[test]
    fn constant_profile_is_power() {
        let p = HalfProfile::constant(PI);
        let g = c(2.0, 1.0);
        assert!((p.j(g) - g.ln() * PI).norm() < 1e-14);
    }

    #[test]
    fn cellwise_matches_quadrature() {
        let p = HalfProfile::from_nodes(&[(0.5, 0.3), (1.0, 2.0), (4.0, 1.0), (9.0, 0.0)], 0.0);
        for g in [c(1.0, 0.0), c(0.3, 2.0), c(5.0, -1.0), c(0.01, 0.02)] {
            let a = p.j(g);
            let b = quad_j(&p, g);
            assert!((a - b).norm() < 1e-9, "{g}: {a} vs {b}");
        }
        let p = HalfProfile::from_nodes(&[(0.0, 0.0), (2.0, 1.0), (3.0, 1.0)], 0.5);
        for g in [c(1.0, 0.0), c(0.3, 2.0), c(7.0, -3.0)] {
            assert!((p.j(g) - quad_j(&p, g)).norm() < 1e-9);
        }
    }

    #[test]
    fn boundary_approach_from_correct_side() {
        // Profile with a cell crossing u = 2, evaluated at γ = −2 ± i0.
        let p = HalfProfile::from_nodes(&[(1.0, 1.0), (3.0, 1.0)], 0.0);
        let up = p.j(c(-2.0, 0.0));
        let near = p.j(c(-2.0, 1e-12));
        assert!((up - near).norm() < 1e-9);
        let down = p.j(c(-2.0, -0.0));
        let near = p.j(c(-2.0, -1e-12));
        assert!((down - near).norm() < 1e-9);
    }

    #[test]
    fn value_at_zero_and_infinity() {
        let p = HalfProfile::from_nodes(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)], 0.0);
        let z = p.j(c(0.0, 0.0));
        let near = p.j(c(1e-12, 0.0));
        assert!((z.re - near.re).abs() < 1e-9);
        let inf = p.integral_inf();
        let far = p.j(c(1e12, 0.0));
        assert!((inf - far.re).abs() < 1e-9, "{inf} {far}");
    }
}
