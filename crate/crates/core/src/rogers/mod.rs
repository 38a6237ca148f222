//! Concrete Rogers functions: four families, evaluation, limits, boundary
//! angles and the analytic bound checks.

pub(crate) mod checks;
mod eval;
mod profile;

use alloc::boxed::Box;
use alloc::vec::Vec;

pub use checks::{
    check_function_bounds, estimate_phi, f_limits, levy_density, validate_spec, Limit, LimitsResult,
    ValidatedSpec, DEFAULT_PHI_LADDER,
};
pub use eval::eval_f;
pub(crate) use eval::Model;
pub(crate) use profile::{build_phi_table, HalfProfile};

/// Direction of a `(∓iξ + m)` building block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Orientation {
    /// `−iξ + m`
    #[cfg_attr(feature = "serde", serde(rename = "minus-i"))]
    MinusI,
    /// `iξ + m`
    #[cfg_attr(feature = "serde", serde(rename = "plus-i"))]
    PlusI,
}

/// Point mass `w·δ_s` of the Stieltjes measure.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Atom {
    pub s: f64,
    pub w: f64,
}

/// Gaussian coefficient, drift, killing rate and an atomic Stieltjes measure.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevyAtomic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub atoms: Vec<Atom>,
}

/// One term `w·(∓iξ + m)^α`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StableTerm {
    pub w: f64,
    pub m: f64,
    pub alpha: f64,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StableSum {
    pub terms: Vec<StableTerm>,
}

/// One factor `(±iξ + m)^e` with `e = ±1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RationalFactor {
    pub orientation: Orientation,
    pub m: f64,
    pub exponent: i32,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RationalProduct {
    pub prefactor: f64,
    pub factors: Vec<RationalFactor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Interpolation {
    PiecewiseConstant,
    PiecewiseLinear,
}

/// Sampled boundary angle `φ(s) ∈ [0, π]`.
///
/// Piecewise-constant tables carry one value per cell
/// (`values.len() == breakpoints.len() - 1`); piecewise-linear tables carry
/// one value per breakpoint.  Outside the grid the boundary value is
/// extended as a constant.  Values for `s > 0` never mix with values for
/// `s < 0`: a linear cell straddling zero takes the value of its endpoint on
/// the same side.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhiTable {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub interpolation: Interpolation,
}

/// Exponential representation: constant `c` and boundary angle `φ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhiRep {
    pub c: f64,
    pub phi: PhiTable,
}

/// A Rogers function in one of four concrete families, optionally shifted
/// by a positive constant.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum RogersSpec {
    LevyAtomic(LevyAtomic),
    StableSum(StableSum),
    RationalProduct(RationalProduct),
    #[cfg_attr(feature = "serde", serde(rename = "phi_table"))]
    PhiRep(PhiRep),
    /// `tau + base`; not part of the file format.
    #[cfg_attr(feature = "serde", serde(skip))]
    Shifted { tau: f64, base: Box<RogersSpec> },
}

impl PhiTable {
    /// Value of `φ` at `s`, with constant extension beyond the grid.
    pub fn value_at(&self, s: f64) -> f64 {
        let b = &self.breakpoints;
        let v = &self.values;
        match self.interpolation {
            Interpolation::PiecewiseConstant => {
                if s <= b[0] {
                    return v[0];
                }
                let k = b.partition_point(|&x| x <= s);
                v[(k - 1).min(v.len() - 1)]
            }
            Interpolation::PiecewiseLinear => {
                let k = b.partition_point(|&x| x <= s);
                if k == 0 {
                    return v[0];
                }
                if k == b.len() {
                    return v[b.len() - 1];
                }
                let (x0, x1) = (b[k - 1], b[k]);
                if x0 < 0.0 && x1 > 0.0 {
                    return if s > 0.0 { v[k] } else { v[k - 1] };
                }
                let t = (s - x0) / (x1 - x0);
                v[k - 1] + t * (v[k] - v[k - 1])
            }
        }
    }

    /// Positive (`s > 0`) and negative (`s < 0`, mirrored) halves.
    pub(crate) fn profiles(&self) -> (HalfProfile, HalfProfile) {
        profile::split_table(self)
    }
}

impl RogersSpec {
    /// Fig 1(a)-type exponent `a ξ² − i b ξ`.
    pub fn brownian(a: f64, b: f64) -> Self {
        RogersSpec::LevyAtomic(LevyAtomic { a, b, c: 0.0, atoms: Vec::new() })
    }

    /// `ξ^α` with symmetric boundary angle `απ/2`.
    pub fn symmetric_power(alpha: f64) -> Self {
        let v = alpha * core::f64::consts::FRAC_PI_2;
        RogersSpec::PhiRep(PhiRep {
            c: 1.0,
            phi: PhiTable {
                breakpoints: alloc::vec![-1.0, 1.0],
                values: alloc::vec![v],
                interpolation: Interpolation::PiecewiseConstant,
            },
        })
    }

    /// `tau + f`; Lévy-atomic specs absorb the shift into the killing rate.
    pub fn shifted(&self, tau: f64) -> RogersSpec {
        if tau == 0.0 {
            return self.clone();
        }
        match self {
            RogersSpec::LevyAtomic(l) => {
                let mut l = l.clone();
                l.c += tau;
                RogersSpec::LevyAtomic(l)
            }
            RogersSpec::Shifted { tau: t, base } => RogersSpec::Shifted { tau: t + tau, base: base.clone() },
            other => RogersSpec::Shifted { tau, base: Box::new(other.clone()) },
        }
    }

    /// The underlying spec without any constant shift, and the shift.
    pub(crate) fn unshifted(&self) -> (&RogersSpec, f64) {
        match self {
            RogersSpec::Shifted { tau, base } => (base, *tau),
            other => (other, 0.0),
        }
    }

    /// Radii on the imaginary axis where the closed form has a pole, zero or
    /// branch point: `(plus-side, minus-side)` values of `|s|` for `−is`.
    pub(crate) fn special_radii(&self) -> (Vec<f64>, Vec<f64>) {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut push = |o: Orientation, m: f64| {
            if m > 0.0 {
                match o {
                    Orientation::MinusI => plus.push(m),
                    Orientation::PlusI => minus.push(m),
                }
            }
        };
        match self {
            RogersSpec::LevyAtomic(l) => {
                for at in &l.atoms {
                    if at.s > 0.0 {
                        push(Orientation::MinusI, at.s);
                    } else {
                        push(Orientation::PlusI, -at.s);
                    }
                }
            }
            RogersSpec::StableSum(s) => {
                for t in &s.terms {
                    push(t.orientation, t.m);
                }
            }
            RogersSpec::RationalProduct(r) => {
                for f in &r.factors {
                    push(f.orientation, f.m);
                }
            }
            RogersSpec::PhiRep(p) => {
                for &b in &p.phi.breakpoints {
                    if b > 0.0 {
                        plus.push(b);
                    } else if b < 0.0 {
                        minus.push(-b);
                    }
                }
            }
            RogersSpec::Shifted { base, .. } => return base.special_radii(),
        }
        (plus, minus)
    }
}
