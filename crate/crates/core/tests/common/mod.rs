#![allow(dead_code)]

use rogers_core::rogers::{
    Orientation::{self, MinusI, PlusI},
    RationalFactor, RationalProduct, RogersSpec, StableSum, StableTerm,
};

fn stable(terms: &[(f64, f64, f64, Orientation)]) -> RogersSpec {
    RogersSpec::StableSum(StableSum {
        terms: terms.iter().map(|&(w, m, alpha, orientation)| StableTerm { w, m, alpha, orientation }).collect(),
    })
}

fn rational(factors: &[(Orientation, f64, i32)]) -> RogersSpec {
    RogersSpec::RationalProduct(RationalProduct {
        prefactor: 1.0,
        factors: factors.iter().map(|&(orientation, m, exponent)| RationalFactor { orientation, m, exponent }).collect(),
    })
}

/// The eight example exponents, in figure order (a)–(h).
pub fn figure_specs() -> Vec<(&'static str, RogersSpec)> {
    vec![
        ("a", RogersSpec::brownian(0.5, 1.0)),
        ("b", stable(&[(2.0, 0.0, 0.5, MinusI), (1.0, 0.0, 0.5, PlusI)])),
        ("c", stable(&[(1.0, 1.0, 0.5, MinusI), (3.0, 19.0, 0.5, PlusI)])),
        ("d", stable(&[(8.0, 0.0, 0.2, MinusI), (1.0, 0.0, 0.8, PlusI)])),
        ("e", rational(&[(MinusI, 0.0, 1), (PlusI, 0.0, 1), (PlusI, 2.0, -1)])),
        ("f", rational(&[(MinusI, 0.0, 1), (MinusI, 2.0, -1), (PlusI, 0.0, 1), (PlusI, 0.5, -1), (PlusI, 14.0, 1)])),
        (
            "g",
            rational(&[
                (MinusI, 0.5, 1),
                (MinusI, 1.0, -1),
                (PlusI, 0.0, 1),
                (PlusI, 0.05, -1),
                (PlusI, 1.25, 1),
                (PlusI, 1.26, -1),
                (PlusI, 30.0, 1),
            ]),
        ),
        (
            "h",
            rational(&[
                (MinusI, 0.5, 1),
                (MinusI, 1.0, -1),
                (PlusI, 0.0, 1),
                (PlusI, 0.06, -1),
                (PlusI, 0.95, 1),
                (PlusI, 0.97, -1),
                (PlusI, 30.0, 1),
            ]),
        ),
    ]
}

pub fn figure(tag: &str) -> RogersSpec {
    figure_specs().into_iter().find(|(t, _)| *t == tag).unwrap().1
}

/// Composite trapezoid in `u = log t` over `[lo, hi]`; exponentially accurate
/// for integrands decaying at both ends.
pub fn log_trapezoid<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut s = 0.0;
    for k in 0..=n {
        let t = (lo + h * k as f64).exp();
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        s += w * f(t) * t;
    }
    s * h
}

/// `exp ∫_0^∞ (e^{−t} − e^{−τt}) e^{−Λt} dt/t` by direct quadrature.
pub fn frullani_kappa_circ(rate: f64, tau: f64) -> f64 {
    log_trapezoid(|t| ((-t).exp() - (-tau * t).exp()) * (-rate * t).exp() / t, -40.0, 6.0, 20_000).exp()
}

/// Drift making a set of atoms a pure compound Poisson exponent.
pub fn pure_jump_drift(atoms: &[(f64, f64)]) -> f64 {
    atoms.iter().map(|&(s, w)| s.signum() * w / (s.abs() * (1.0 + s.abs()))).sum::<f64>() / std::f64::consts::PI
}

pub fn levy(a: f64, b: f64, c: f64, atoms: &[(f64, f64)]) -> RogersSpec {
    RogersSpec::LevyAtomic(rogers_core::rogers::LevyAtomic {
        a,
        b,
        c,
        atoms: atoms.iter().map(|&(s, w)| rogers_core::rogers::Atom { s, w }).collect(),
    })
}

/// Hyperexponential jumps in both directions with drift.
pub fn two_sided_cp() -> RogersSpec {
    levy(0.0, 0.3, 0.0, &[(1.0, 2.0), (3.0, 1.5), (-2.0, 3.0)])
}

/// Gaussian part with hyperexponential jumps.
pub fn cp_gaussian() -> RogersSpec {
    levy(0.3, -0.2, 0.0, &[(2.0, 1.0), (-1.5, 2.0)])
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `n` log-uniform draws from `[lo, hi]`.
pub fn log_uniform(seed: u64, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    use rand_distr::{Distribution, Uniform};
    let mut rng = rogers_core::numerics::seeded(seed, 0);
    let u = Uniform::new(lo.ln(), hi.ln());
    (0..n).map(|_| u.sample(&mut rng).exp()).collect()
}

/// `n` points of the open upper half-plane, log-uniform in modulus.
pub fn upper_half_plane(seed: u64, n: usize) -> Vec<rogers_core::numerics::Complex> {
    use rand_distr::{Distribution, Uniform};
    let mut rng = rogers_core::numerics::seeded(seed, 1);
    let a = Uniform::new(1e-3, std::f64::consts::PI - 1e-3);
    log_uniform(seed, n, 1e-2, 1e2)
        .into_iter()
        .map(|r| rogers_core::numerics::Complex::from_polar(r, a.sample(&mut rng)))
        .collect()
}
