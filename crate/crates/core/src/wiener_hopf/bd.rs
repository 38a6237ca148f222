//! Factor ratios and products as integrals of `log f` along the real line.
//!
//! With `f(−z) = conj f(z)` the full-line integral
//! `(1/2πi) ∫ (1/(z−ξ₁) − 1/(z−ξ₂)) log f(z) dz` folds onto `(0, ∞)` as
//! `(1/π) ∫_0^∞ Im[(k₁(z) − k₂(z)) log f(z)] dz` with `k_j = 1/(z − ξ_j)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::{c, integrate_adaptive, principal_log, Complex, Domain, QuadratureConfig};
use crate::rogers::{checks, Model};

/// A pole `ξ = ±i x` with `x ≥ 0`; `x = 0` is read as the limit from the
/// indicated side.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Pole {
    Upper(f64),
    Lower(f64),
}

impl Pole {
    fn y(self) -> f64 {
        match self {
            Pole::Upper(x) => x,
            Pole::Lower(x) => -x,
        }
    }

    fn side(self) -> f64 {
        match self {
            Pole::Upper(_) => 1.0,
            Pole::Lower(_) => -1.0,
        }
    }
}

pub(crate) struct Bd<'a> {
    model: &'a Model,
    breaks: Vec<f64>,
}

impl<'a> Bd<'a> {
    pub fn new(model: &'a Model) -> Self {
        let (p, m) = model.base.special_radii();
        let mut breaks: Vec<f64> = p.into_iter().chain(m).collect();
        breaks.push(1.0);
        Bd { model, breaks }
    }

    /// `(1/π) ∫_0^∞ Im[(k₁ − k₂) log f] dz` plus the half-residues of poles at
    /// the origin, with an error estimate.
    ///
    /// `(Upper x₁, Upper x₂)` gives `log f⁺(x₁)/f⁺(x₂)`, `(Lower x₂, Lower x₁)`
    /// gives `log f⁻(x₁)/f⁻(x₂)`, `(Upper x₁, Lower x₂)` gives
    /// `log f⁺(x₁) f⁻(x₂)`.
    pub fn log_pair(&self, p1: Pole, p2: Pole) -> Result<(f64, f64)> {
        let mut constant = 0.0;
        let needs_zero = p1.y() == 0.0 || p2.y() == 0.0;
        if needs_zero {
            let f0 = checks::limits_of(self.model).f_at_zero.value();
            if !(f0 > 0.0 && f0.is_finite()) {
                return Err(Error::Convention("f(0+) must be positive and finite".into()));
            }
            if p1.y() == 0.0 {
                constant += 0.5 * p1.side() * f0.ln();
            }
            if p2.y() == 0.0 {
                constant -= 0.5 * p2.side() * f0.ln();
            }
        }
        let (y1, y2) = (p1.y(), p2.y());
        let mut pts: Vec<f64> = self.breaks.clone();
        pts.extend([y1.abs(), y2.abs()]);
        pts.retain(|&x| x > 0.0 && x.is_finite());
        let cfg = QuadratureConfig::with_tol(1e-12, 1e-14).singular(&pts).max_subdivisions(4000);
        let mut failure = None;
        let q = integrate_adaptive(
            |z| {
                let f = self.model.raw(c(z, 0.0));
                if z == 0.0 && f.norm() == 0.0 {
                    // a node subdivided down onto a zero of f at the origin;
                    // the log singularity is integrable
                    return c(0.0, 0.0);
                }
                let l = match principal_log(f) {
                    Ok(l) => l,
                    Err(e) => {
                        failure.get_or_insert(e);
                        return c(0.0, 0.0);
                    }
                };
                let k1 = c(z, -y1).inv();
                let k2 = c(z, -y2).inv();
                c(((k1 - k2) * l).im, 0.0)
            },
            Domain::HalfLine(0.0),
            &cfg,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let q = accept_small(q)?;
        Ok((q.0 / PI + constant, q.1 / PI))
    }
}

/// Accept a non-converged quadrature whose error estimate is still small.
pub(crate) fn accept_small(q: Result<crate::numerics::Quadrature>) -> Result<(f64, f64)> {
    match q {
        Ok(q) => Ok((q.value.re, q.err_estimate)),
        Err(Error::Quadrature { re, err_estimate, .. }) if err_estimate < 1e-8 * (1.0 + re.abs()) => {
            Ok((re, err_estimate))
        }
        Err(e) => Err(e),
    }
}

/// Complex analogue of [`accept_small`].
pub(crate) fn accept_small_c(q: Result<crate::numerics::Quadrature>) -> Result<(Complex, f64)> {
    match q {
        Ok(q) => Ok((q.value, q.err_estimate)),
        Err(Error::Quadrature { re, im, err_estimate }) if err_estimate < 1e-8 * (1.0 + c(re, im).norm()) => {
            Ok((c(re, im), err_estimate))
        }
        Err(e) => Err(e),
    }
}
