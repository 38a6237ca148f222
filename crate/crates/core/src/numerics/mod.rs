//! Shared numerical kernels.

mod complex;
mod diff;
mod quadrature;
mod rng;
mod roots;

pub use complex::{arg, ln_1p, principal_log};
pub use diff::{central_diff, extrapolate_to_zero, forward_difference};
pub use quadrature::{integrate_adaptive, integrate_real, Domain, Quadrature, QuadratureConfig};
pub use rng::{seeded, Rng};
pub use roots::bisect_monotone;

pub type Complex = num_complex::Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}
