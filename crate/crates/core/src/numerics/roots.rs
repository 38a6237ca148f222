//! Bracketing search for the sign change of a nondecreasing function.

use crate::error::{Error, Result};

/// Finds the sign change of a nondecreasing `g` on `[lo, hi]`.
///
/// When `g` has constant sign the matching endpoint is returned: `lo` if
/// `g > 0` throughout, `hi` if `g < 0` throughout.  Otherwise the result lies
/// in an interval of width at most `tol` that brackets the sign change.
pub fn bisect_monotone<G>(mut g: G, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::arg("bisection needs lo < hi"));
    }
    let glo = g(lo);
    if glo > 0.0 {
        return Ok(lo);
    }
    let ghi = g(hi);
    if ghi < 0.0 {
        return Ok(hi);
    }
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            break;
        }
        let gm = g(m);
        if gm < 0.0 {
            a = m;
        } else if gm > 0.0 {
            b = m;
        } else {
            return Ok(m);
        }
    }
    Ok(0.5 * (a + b))
}
