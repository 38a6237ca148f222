//! Principal-branch helpers.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Principal logarithm, rejecting the closed negative real axis.
pub fn principal_log(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("logarithm of a non-finite number"));
    }
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::domain("logarithm on the closed negative real axis"));
    }
    Ok(Complex64::new(z.norm().ln(), z.im.atan2(z.re)))
}

/// `log(1 + z)` accurate for small `|z|`.
pub fn ln_1p(z: Complex64) -> Complex64 {
    let m = 2.0 * z.re + z.norm_sqr();
    let re = if m.abs() < 0.5 { 0.5 * m.ln_1p() } else { (1.0 + z).norm().ln() };
    Complex64::new(re, z.im.atan2(1.0 + z.re))
}

/// Principal argument with signed-zero semantics (`atan2`).
#[inline]
pub fn arg(z: Complex64) -> f64 {
    z.im.atan2(z.re)
}
