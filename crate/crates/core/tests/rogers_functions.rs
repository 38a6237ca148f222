mod common;

use std::f64::consts::PI;

use common::*;
use rogers_core::numerics::Complex;
use rogers_core::rogers::{
    check_function_bounds, estimate_phi, eval_f, f_limits, levy_density, validate_spec, Interpolation, Limit,
    Orientation, PhiRep, PhiTable, RationalFactor, RationalProduct, RogersSpec, StableSum, StableTerm,
    DEFAULT_PHI_LADDER,
};
use rogers_core::Error;

fn cx(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn ladder(s: f64) -> Vec<f64> {
    DEFAULT_PHI_LADDER.iter().map(|e| e * (1.0 + s.abs())).collect()
}

/// `ξ/(ξ + i)` written as `(−iξ)/(−iξ + 1)`.
fn bounded_ratio() -> RogersSpec {
    RogersSpec::RationalProduct(RationalProduct {
        prefactor: 1.0,
        factors: vec![
            RationalFactor { orientation: Orientation::MinusI, m: 0.0, exponent: 1 },
            RationalFactor { orientation: Orientation::MinusI, m: 1.0, exponent: -1 },
        ],
    })
}

fn steep_one_sided() -> RogersSpec {
    RogersSpec::StableSum(StableSum {
        terms: vec![StableTerm { w: 1.0, m: 0.0, alpha: 1.5, orientation: Orientation::MinusI }],
    })
}

#[test]
fn figure_specs_validate() {
    for (tag, spec) in figure_specs() {
        let v = validate_spec(&spec, 256).unwrap_or_else(|e| panic!("fig {tag}: {e}"));
        assert!(v.sampled_points >= 256);
    }
}

#[test]
fn steep_one_sided_stable_is_rejected_with_witness() {
    // dense scan just inside the wedge boundary finds re(f/ξ) < 0
    let mut worst = f64::INFINITY;
    for k in 0..200 {
        let xi = Complex::from_polar(10f64.powf(-2.0 + 4.0 * k as f64 / 199.0), 0.5 * PI - 0.01);
        worst = worst.min(((cx(0.0, -1.0) * xi).powf(1.5) / xi).re);
    }
    assert!(worst < 0.0);
    match validate_spec(&steep_one_sided(), 256) {
        Err(Error::RogersViolation { re, im, value }) => {
            assert!(value < 0.0);
            let xi = cx(re, im);
            let direct = (cx(0.0, -1.0) * xi).powf(1.5) / xi;
            assert!((direct.re - value).abs() <= 1e-9 * (1.0 + direct.norm()));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn structural_errors_name_the_field() {
    let spec = levy(0.0, 0.0, 0.0, &[(1.0, 1.0), (2.0, 0.0)]);
    match validate_spec(&spec, 16) {
        Err(Error::Validation { field, .. }) => assert_eq!(field, "atoms[1].w"),
        other => panic!("{other:?}"),
    }
    let spec = RogersSpec::StableSum(StableSum {
        terms: vec![StableTerm { w: 1.0, m: 0.0, alpha: 2.5, orientation: Orientation::PlusI }],
    });
    match validate_spec(&spec, 16) {
        Err(Error::Validation { field, .. }) => assert_eq!(field, "terms[0].alpha"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn evaluation_examples() {
    let f = eval_f(&figure("a"), cx(1.0, 0.0)).unwrap();
    assert!((f - cx(0.5, -1.0)).norm() < 1e-15);

    let h = 0.5f64.sqrt();
    let f = eval_f(&figure("b"), cx(1.0, 0.0)).unwrap();
    assert!((f - cx(3.0 * h, -h)).norm() < 1e-12);

    let f = eval_f(&levy(0.0, 0.0, 0.0, &[(1.0, PI)]), cx(1.0, 0.0)).unwrap();
    assert!((f - cx(0.5, 0.0)).norm() < 1e-14);
}

#[test]
fn imaginary_axis_outside_the_domain() {
    // ξ/(ξ + i) has a pole at −i
    assert!(matches!(eval_f(&bounded_ratio(), cx(0.0, -1.0)), Err(Error::Domain(_))));
    assert!(eval_f(&bounded_ratio(), cx(0.0, 1.0)).is_ok());
}

#[test]
fn density_examples() {
    let one = levy(0.0, 0.0, 0.0, &[(1.0, PI)]);
    assert!((levy_density(&one, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
    let neg = levy(0.0, 0.0, 0.0, &[(-2.0, 2.0 * PI)]);
    assert_eq!(levy_density(&neg, 1.0).unwrap(), 0.0);
    assert!((levy_density(&neg, -1.0).unwrap() - 2.0 * (-2f64).exp()).abs() < 1e-15);
    assert!(matches!(levy_density(&one, 0.0), Err(Error::Domain(_))));
    assert!(matches!(levy_density(&figure("b"), 1.0), Err(Error::Unsupported(_))));
}

/// `aξ² − ibξ + c + iξ b_c + ∫(1 − e^{iξx}) ν(dx)` with the jump integral
/// done by quadrature against the density.
fn levy_khintchine(spec: &RogersSpec, a: f64, b: f64, c: f64, bc: f64, xi: f64) -> Complex {
    let mut jumps = cx(0.0, 0.0);
    for sign in [1.0, -1.0] {
        let nu = |x: f64| levy_density(spec, sign * x).unwrap();
        let re = log_trapezoid(|x| (1.0 - (sign * xi * x).cos()) * nu(x), -30.0, 5.0, 40_000);
        let im = log_trapezoid(|x| -(sign * xi * x).sin() * nu(x), -30.0, 5.0, 40_000);
        jumps += cx(re, im);
    }
    cx(a * xi * xi + c, -b * xi + bc * xi) + jumps
}

#[test]
fn stieltjes_form_matches_levy_khintchine() {
    let atoms = [(1.0, 2.0), (3.0, 1.5), (-2.0, 3.0), (-0.5, 0.7)];
    let (a, b, c) = (0.3, 0.4, 0.2);
    let spec = levy(a, b, c, &atoms);
    let bc = pure_jump_drift(&atoms);
    for xi in [0.05, 0.3, 1.0, 2.0, 7.5, -0.2, -1.0, -4.0, 12.0, 0.9] {
        let want = levy_khintchine(&spec, a, b, c, bc, xi);
        let got = eval_f(&spec, cx(xi, 0.0)).unwrap();
        assert!((got - want).norm() <= 1e-6 * want.norm(), "xi={xi}: {got} vs {want}");
    }
}

#[test]
fn limit_examples() {
    let l = f_limits(&RogersSpec::brownian(1.0, 0.0));
    assert_eq!(l.f_at_zero, Limit::Finite(0.0));
    assert_eq!(l.f_at_infinity, Limit::Infinite);

    let l = f_limits(&bounded_ratio());
    assert!(l.f_at_zero.value().abs() < 1e-15);
    assert!((l.f_at_infinity.value() - 1.0).abs() < 1e-12);

    let l = f_limits(&figure("c"));
    assert!((l.f_at_zero.value() - (1.0 + 3.0 * 19f64.sqrt())).abs() < 1e-12);
    assert_eq!(l.f_at_infinity, Limit::Infinite);
}

#[test]
fn limits_agree_with_evaluation() {
    let mut specs = figure_specs();
    specs.push(("bounded", bounded_ratio()));
    specs.push(("cp", levy(0.0, pure_jump_drift(&[(1.0, 2.0), (-2.0, 1.0)]), 0.5, &[(1.0, 2.0), (-2.0, 1.0)])));
    for (tag, spec) in specs {
        let l = f_limits(&spec);
        // ξ^{0.2} terms converge slowly near zero; near infinity the
        // compensated drift of a bounded exponent cancels only to rounding
        for (limit, xi) in [(l.f_at_zero, 1e-40), (l.f_at_infinity, 1e9)] {
            let f = eval_f(&spec, cx(xi, 0.0)).unwrap().norm();
            match limit {
                Limit::Infinite => assert!(f > 1e3, "{tag}: |f({xi})| = {f}"),
                Limit::Finite(v) if v == 0.0 => assert!(f < 1e-4, "{tag}: |f({xi})| = {f}"),
                Limit::Finite(v) => assert!(rel(f, v) < 1e-6, "{tag}: |f({xi})| = {f} vs {v}"),
            }
        }
    }
}

#[test]
fn boundary_angle_examples() {
    let square = RogersSpec::brownian(1.0, 0.0);
    for s in [-3.0, -0.1, 0.5, 4.0] {
        assert!((estimate_phi(&square, s, &[]).unwrap() - PI).abs() < 1e-9);
    }
    let drift = RogersSpec::brownian(0.0, 1.0);
    assert!((estimate_phi(&drift, 1.0, &[]).unwrap() - PI).abs() < 1e-9);
    assert!(estimate_phi(&drift, -1.0, &[]).unwrap().abs() < 1e-9);

    let b = figure("b");
    assert!((estimate_phi(&b, 1.0, &ladder(1.0)).unwrap() - 2f64.atan()).abs() < 1e-6);
    assert!((estimate_phi(&b, -1.0, &ladder(1.0)).unwrap() - 0.5f64.atan()).abs() < 1e-6);
    assert!(matches!(estimate_phi(&b, 0.0, &[]), Err(Error::Domain(_))));
}

#[test]
fn tabulated_angle_round_trips() {
    let breakpoints = vec![-8.0, -2.0, -0.5, 0.5, 2.0, 8.0];
    let values = vec![0.4, 1.0, 2.0, 2.5, 1.2];
    let spec = RogersSpec::PhiRep(PhiRep {
        c: 2.0,
        phi: PhiTable { breakpoints: breakpoints.clone(), values: values.clone(), interpolation: Interpolation::PiecewiseConstant },
    });
    for k in 0..values.len() {
        let mid = 0.5 * (breakpoints[k] + breakpoints[k + 1]);
        if mid == 0.0 {
            continue;
        }
        let got = estimate_phi(&spec, mid, &ladder(mid)).unwrap();
        assert!((got - values[k]).abs() < 5e-3, "s={mid}: {got} vs {}", values[k]);
    }
}

fn polar(n: usize) -> Vec<Complex> {
    let radii = log_uniform(31, n, 1e-3, 1e3);
    (0..n).map(|k| Complex::from_polar(radii[k], -0.49 * PI + 0.98 * PI * (k as f64 + 0.5) / n as f64)).collect()
}

#[test]
fn bounds_hold_on_figures() {
    for (tag, spec) in figure_specs() {
        let r = check_function_bounds(&spec, &polar(100));
        assert_eq!(r.n_checks, 300);
        assert!(r.passed(), "fig {tag}: {:?}", r.witnesses.first());
    }
}

#[test]
fn drift_is_tight_for_the_wedge() {
    let spec = RogersSpec::brownian(0.0, 1.0);
    let r = check_function_bounds(&spec, &polar(50));
    assert!(r.passed());
    // Arg f = Arg ξ − π/2 exactly, so the wedge margin is at its slack
    assert!(r.worst_margin < 1e-10);
}

#[test]
fn corrupted_weights_are_caught() {
    let spec = levy(0.0, 0.0, 0.0, &[(1.0, -PI)]);
    assert!(validate_spec(&spec, 16).is_err());
    let r = check_function_bounds(&spec, &polar(100));
    assert!(r.n_failures >= 1);
}
