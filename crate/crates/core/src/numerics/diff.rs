//! Finite differences and extrapolation to zero.

use num_complex::Complex64;

/// Central first difference of a holomorphic function along the real direction.
pub fn central_diff<F: FnMut(Complex64) -> Complex64>(mut f: F, z: Complex64, h: f64) -> Complex64 {
    (f(z + h) - f(z - h)) / (2.0 * h)
}

/// Value at `x = 0` of the polynomial through the points `(xs[i], ys[i])`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len());
    let mut acc = 0.0;
    for i in 0..n {
        let mut w = 1.0;
        for j in 0..n {
            if j != i {
                w *= xs[j] / (xs[j] - xs[i]);
            }
        }
        acc += w * ys[i];
    }
    acc
}

/// Forward difference of order `k` starting at index `i`.
pub fn forward_difference(values: &[f64], i: usize, k: usize) -> Option<f64> {
    if i + k >= values.len() {
        return None;
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * values[i + j];
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    Some(acc)
}
