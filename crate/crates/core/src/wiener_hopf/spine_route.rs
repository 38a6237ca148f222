//! Factor ratios and products as Stieltjes integrals against the profile
//! `λ` along the spine, evaluated in `u = log r` with the integration range
//! split at every radius where the integrand may jump or kink.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use super::bd::accept_small_c;
use super::Side;
use crate::error::{Error, Result};
use crate::numerics::{c, integrate_adaptive, Complex, Domain, QuadratureConfig};
use crate::rogers::{checks, Model};
use crate::spine::{Sample, Tracer};

const SPAN: f64 = 1e10;
const SCAN_PER_DECADE: usize = 40;

pub(crate) struct SpineRoute<'a> {
    tr: Tracer<'a>,
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
    lam0: f64,
    lam_inf: f64,
}

fn arg(z: Complex) -> f64 {
    z.im.atan2(z.re)
}

impl<'a> SpineRoute<'a> {
    /// `model` must carry no shift; shifts enter the integrals explicitly.
    pub fn new(model: &'a Model, scales: &[f64]) -> Result<Self> {
        let tr = Tracer::new(model)?;
        if checks::is_degenerate(model) {
            return Err(Error::Unsupported("spine route needs a non-degenerate function".into()));
        }
        let (p, m) = model.base.special_radii();
        let mut all: Vec<f64> = p.into_iter().chain(m).chain(scales.iter().copied()).collect();
        all.push(1.0);
        all.retain(|x| *x > 0.0 && x.is_finite());
        let smin = all.iter().copied().fold(f64::INFINITY, f64::min);
        let smax = all.iter().copied().fold(0.0, f64::max);
        let (lo, hi) = (smin / SPAN, smax * SPAN);
        let mut breaks = tr.z_boundaries(lo, hi, SCAN_PER_DECADE);
        breaks.extend(all.iter().copied());
        let lim = checks::limits_of(model);
        Ok(SpineRoute { tr, lo, hi, breaks, lam0: lim.f_at_zero.value(), lam_inf: lim.f_at_infinity.value() })
    }

    /// `∫_lo^hi F(r, sample) dr`, integrated in `log r`.
    fn integrate<F>(&self, extra: &[f64], mut f: F) -> Result<(Complex, f64)>
    where
        F: FnMut(f64, &Sample) -> Complex,
    {
        let mut pts: Vec<f64> = self.breaks.iter().chain(extra).copied().filter(|r| *r > self.lo && *r < self.hi).map(f64::ln).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let cfg = QuadratureConfig::with_tol(1e-11, 1e-13).singular(&pts).max_subdivisions(6000);
        let q = integrate_adaptive(
            |u| {
                let r = u.exp();
                let s = self.tr.sample(r);
                let v = f(r, &s) * r;
                if v.re.is_finite() && v.im.is_finite() {
                    v
                } else {
                    c(0.0, 0.0)
                }
            },
            Domain::Finite(self.lo.ln(), self.hi.ln()),
            &cfg,
        );
        accept_small_c(q)
    }

    /// `f_τ^±(x₁)/f_τ^±(x₂)` for `f_τ = τ + f`.
    pub fn ratio(&self, side: Side, x1: f64, x2: f64, tau: Complex) -> Result<(Complex, f64)> {
        let (i, err) = self.integrate(&[x1, x2], |_, s| {
            let g = match side {
                Side::Plus => arg(s.zeta - c(0.0, x1)) - arg(s.zeta - c(0.0, x2)),
                Side::Minus => arg(s.zeta + c(0.0, x1)) - arg(s.zeta + c(0.0, x2)),
            };
            (tau + s.lambda).inv() * (g * s.dlambda)
        })?;
        let sg = match side {
            Side::Plus => -1.0,
            Side::Minus => 1.0,
        };
        let v = (i * (sg / PI)).exp();
        Ok((v, v.norm() * err / PI))
    }

    /// `f_τ⁺(x₁) f_τ⁻(x₂)`, anchored at the profile value at radius `big_r`.
    pub fn product(&self, x1: f64, x2: f64, big_r: f64, tau: Complex) -> Result<(Complex, f64)> {
        if big_r == 0.0 && (tau + self.lam0).norm() == 0.0 {
            return Err(Error::Convention("f(0+) = 0 needs an anchor radius R > 0".into()));
        }
        let r_eff = big_r.max(self.lo);
        let anchor = tau + self.tr.sample(r_eff).lambda;
        let (i, err) = self.integrate(&[x1, x2, r_eff], |r, s| {
            let mut g = arg(s.zeta + c(0.0, x2)) - arg(s.zeta - c(0.0, x1));
            if r < r_eff {
                g -= PI;
            }
            (tau + s.lambda).inv() * (g * s.dlambda)
        })?;
        let v = anchor * (i / PI).exp();
        Ok((v, v.norm() * err / PI))
    }

    /// `κ^±(τ, ξ)/κ^±(τ₀, ξ)`.
    pub fn tau_ratio(&self, side: Side, xi: f64, tau: Complex, tau0: Complex) -> Result<(Complex, f64)> {
        let weight = |s: &Sample| match side {
            Side::Plus => arg(s.zeta - c(0.0, xi)) + 0.5 * PI,
            Side::Minus => 0.5 * PI - arg(s.zeta + c(0.0, xi)),
        };
        let (i, err) = self.integrate(&[xi], |_, s| {
            ((tau0 + s.lambda).inv() - (tau + s.lambda).inv()) * (weight(s) * s.dlambda)
        })?;
        let ends = |l_a: f64, l_b: f64| -> Complex {
            // ∫_{l_a}^{l_b} (1/(τ₀+λ) − 1/(τ+λ)) dλ
            let at = |l: f64| -> Complex {
                if l.is_infinite() {
                    c(0.0, 0.0)
                } else {
                    (tau0 + l).ln() - (tau + l).ln()
                }
            };
            at(l_b) - at(l_a)
        };
        let s_lo = self.tr.sample(self.lo);
        let s_hi = self.tr.sample(self.hi);
        let tail = ends(self.lam0, s_lo.lambda) * weight(&s_lo) + ends(s_hi.lambda, self.lam_inf) * weight(&s_hi);
        let v = ((i + tail) / PI).exp();
        Ok((v, v.norm() * err / PI))
    }
}
