//! Evaluation of `f` and `f'` on the closed right half-plane.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use super::profile::{log_ratio, HalfProfile};
use super::{Orientation, RogersSpec};
use crate::error::{Error, Result};
use crate::numerics::{c, Complex};

/// A spec prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Model {
    pub base: RogersSpec,
    pub tau: f64,
    phi: Option<PhiParts>,
}

#[derive(Debug, Clone)]
struct PhiParts {
    log_c: f64,
    plus: HalfProfile,
    minus: HalfProfile,
}

#[inline]
fn block(o: Orientation, m: f64, xi: Complex) -> (Complex, f64) {
    // (∓iξ + m) built componentwise so that signed zeros survive, and the
    // sign of the derivative factor ∓i.
    match o {
        Orientation::MinusI => (c(m + xi.im, -xi.re), -1.0),
        Orientation::PlusI => (c(m - xi.im, xi.re), 1.0),
    }
}

#[inline]
fn cpow(z: Complex, p: f64) -> Complex {
    let r = z.norm();
    if r == 0.0 {
        return c(0.0, 0.0);
    }
    Complex::from_polar(r.powf(p), z.im.atan2(z.re) * p)
}

impl Model {
    pub fn new(spec: &RogersSpec) -> Self {
        let (base, tau) = spec.unshifted();
        let phi = match base {
            RogersSpec::PhiRep(p) => {
                let (plus, minus) = p.phi.profiles();
                Some(PhiParts { log_c: p.c.ln(), plus, minus })
            }
            _ => None,
        };
        Model { base: base.clone(), tau, phi }
    }

    pub fn profiles(&self) -> Option<(&HalfProfile, &HalfProfile, f64)> {
        self.phi.as_ref().map(|p| (&p.plus, &p.minus, p.log_c))
    }

    /// `f(ξ)` for `re ξ ≥ 0`; a zero real part is read as the limit from
    /// the right.
    pub fn raw(&self, xi: Complex) -> Complex {
        self.raw_unshifted(xi) + self.tau
    }

    fn raw_unshifted(&self, xi: Complex) -> Complex {
        if let Some(p) = &self.phi {
            return (p.log_c + log_sum(p, xi)).exp();
        }
        match &self.base {
            RogersSpec::LevyAtomic(l) => {
                let mut v = xi * xi * l.a - Complex::i() * xi * l.b + l.c;
                for at in &l.atoms {
                    let k = at.w / (PI * at.s.abs());
                    let d = c(xi.re, xi.im + at.s);
                    let corr = c(-xi.im, xi.re) * (at.s.signum() / (1.0 + at.s.abs()));
                    v += (xi / d + corr) * k;
                }
                v
            }
            RogersSpec::StableSum(s) => {
                let mut v = c(0.0, 0.0);
                for t in &s.terms {
                    let (z, _) = block(t.orientation, t.m, xi);
                    v += cpow(z, t.alpha) * t.w;
                }
                v
            }
            RogersSpec::RationalProduct(r) => {
                let mut v = c(r.prefactor, 0.0);
                for f in &r.factors {
                    let (z, _) = block(f.orientation, f.m, xi);
                    v = if f.exponent >= 0 { v * z } else { v / z };
                }
                v
            }
            RogersSpec::PhiRep(_) | RogersSpec::Shifted { .. } => unreachable!(),
        }
    }

    /// `(f(ξ), f'(ξ))` for `re ξ ≥ 0`.
    pub fn raw_d(&self, xi: Complex) -> (Complex, Complex) {
        let (v, d) = self.raw_d_unshifted(xi);
        (v + self.tau, d)
    }

    fn raw_d_unshifted(&self, xi: Complex) -> (Complex, Complex) {
        if let Some(p) = &self.phi {
            let v = (p.log_c + log_sum(p, xi)).exp();
            let gp = c(xi.im, -xi.re);
            let gm = c(-xi.im, xi.re);
            let dl = (dj(&p.plus, gp) * c(0.0, -1.0) + dj(&p.minus, gm) * c(0.0, 1.0)) / PI;
            return (v, v * dl);
        }
        match &self.base {
            RogersSpec::LevyAtomic(l) => {
                let i = Complex::i();
                let mut d = xi * (2.0 * l.a) - i * l.b;
                for at in &l.atoms {
                    let k = at.w / (PI * at.s.abs());
                    let den = c(xi.re, xi.im + at.s);
                    d += (i * at.s / (den * den) + i * (at.s.signum() / (1.0 + at.s.abs()))) * k;
                }
                (self.raw_unshifted(xi), d)
            }
            RogersSpec::StableSum(s) => {
                let mut v = c(0.0, 0.0);
                let mut d = c(0.0, 0.0);
                for t in &s.terms {
                    let (z, sg) = block(t.orientation, t.m, xi);
                    let zp = cpow(z, t.alpha);
                    v += zp * t.w;
                    d += zp / z * (t.w * t.alpha) * c(0.0, sg);
                }
                (v, d)
            }
            RogersSpec::RationalProduct(r) => {
                let v = self.raw_unshifted(xi);
                let mut dl = c(0.0, 0.0);
                for f in &r.factors {
                    let (z, sg) = block(f.orientation, f.m, xi);
                    dl += c(0.0, sg) / z * f64::from(f.exponent);
                }
                (v, v * dl)
            }
            RogersSpec::PhiRep(_) | RogersSpec::Shifted { .. } => unreachable!(),
        }
    }

    /// `f` on the whole plane off `iℝ`, and on `iℝ ∩ D_f`.
    pub fn eval(&self, xi: Complex) -> Result<Complex> {
        if !(xi.re.is_finite() && xi.im.is_finite()) {
            return Err(Error::arg("xi must be finite"));
        }
        if xi.re < 0.0 {
            return self.eval(c(-xi.re, xi.im)).map(|v| v.conj());
        }
        if xi.re > 0.0 {
            return Ok(self.raw(xi));
        }
        let v = self.raw(c(0.0, xi.im));
        if v.re.is_finite() && v.im.is_finite() && v.re > 0.0 && v.im.abs() <= 1e-12 * v.re {
            Ok(c(v.re, 0.0))
        } else {
            Err(Error::domain("point on the imaginary axis outside the domain of f"))
        }
    }
}

fn log_sum(p: &PhiParts, xi: Complex) -> Complex {
    let gp = c(xi.im, -xi.re);
    let gm = c(-xi.im, xi.re);
    (p.plus.j(gp) + p.minus.j(gm)) / PI
}

/// `J'(γ) = ∫ φ(u)/(γ+u)² du`.
fn dj(p: &HalfProfile, g: Complex) -> Complex {
    let mut acc = c(0.0, 0.0);
    let Some(last) = p.segs.last() else {
        return g.inv() * p.tail;
    };
    for s in &p.segs {
        if s.va == 0.0 && s.vb == 0.0 {
            continue;
        }
        let (ga, gb) = (g + s.a, g + s.b);
        acc += (ga.inv() - gb.inv()) * s.va;
        if s.vb != s.va {
            let slope = (s.vb - s.va) / (s.b - s.a);
            let lg = log_ratio(g, s.a, s.b);
            acc += (lg - (s.b - s.a) / gb) * slope;
        }
    }
    acc + (g + last.b).inv() * p.tail
}

/// Evaluate `f(ξ)`.  Points with `re ξ < 0` use the reflection
/// `f(−conj ξ) = conj f(ξ)`; points on the imaginary axis must lie in the
/// domain `D_f`, where `f` is real and positive.
pub fn eval_f(spec: &RogersSpec, xi: Complex) -> Result<Complex> {
    Model::new(spec).eval(xi)
}
