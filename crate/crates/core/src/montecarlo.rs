//! Exact-path simulation of the supremum of a Lévy-atomic process over an
//! independent exponential horizon.
//!
//! The process is Brownian motion with drift plus hyperexponential jumps,
//! killed at rate `c`.  Between jumps the supremum of the Gaussian part is
//! drawn from the exact law of the bridge maximum, so there is no time
//! discretization.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand_distr::{Distribution, Exp, InverseGaussian, Normal, Open01};

use crate::error::{Error, Result};
use crate::numerics::{seeded, Rng};
use crate::rogers::{checks, LevyAtomic, RogersSpec};

/// Samples per shard; shard `k` uses stream `k` of the seed.
pub const SHARD_SIZE: usize = 1 << 14;

/// Supremum of one path and the (first) time it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupSample {
    pub sup_value: f64,
    pub argmax_time: f64,
    /// Length of the observation window, the lifetime when killed.
    pub horizon: f64,
    pub killed: bool,
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

/// Functional of `(X̄, T̄)` to average.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(tag = "kind", rename_all = "snake_case"))]
pub enum McQuery {
    /// `E e^{−ξ X̄}`
    Laplace { xi: f64 },
    /// `P(X̄ > x)`
    Tail { x: f64 },
    /// `E e^{−ξ X̄ − τ T̄}`
    Joint { xi: f64, tau: f64 },
}

impl McQuery {
    fn value(&self, s: &SupSample) -> f64 {
        match *self {
            McQuery::Laplace { xi } => (-xi * s.sup_value).exp(),
            McQuery::Tail { x } => {
                if s.sup_value > x {
                    1.0
                } else {
                    0.0
                }
            }
            McQuery::Joint { xi, tau } => (-xi * s.sup_value - tau * s.argmax_time).exp(),
        }
    }
}

struct JumpPart {
    /// Rate and signed exponential parameter per atom.
    atoms: Vec<(f64, f64)>,
    rate: f64,
}

/// Path ingredients of a Lévy-atomic spec.
struct PathLaw {
    variance: f64,
    drift: f64,
    kill: f64,
    jumps: JumpPart,
}

impl PathLaw {
    fn new(l: &LevyAtomic) -> Self {
        let atoms: Vec<(f64, f64)> = l.atoms.iter().map(|at| (at.w / (PI * at.s.abs()), at.s)).collect();
        PathLaw {
            variance: 2.0 * l.a,
            drift: l.b - checks::compensator_drift(l),
            kill: l.c,
            jumps: JumpPart { rate: checks::jump_rate(l), atoms },
        }
    }

    fn jump(&self, rng: &mut Rng) -> f64 {
        let mut u: f64 = Open01.sample(rng);
        u *= self.jumps.rate;
        let mut pick = self.jumps.atoms.len() - 1;
        for (k, &(rate, _)) in self.jumps.atoms.iter().enumerate() {
            if u < rate {
                pick = k;
                break;
            }
            u -= rate;
        }
        let s = self.jumps.atoms[pick].1;
        let size: f64 = Exp::new(s.abs()).expect("positive rate").sample(rng);
        size * s.signum()
    }
}

/// Time of the maximum of a Brownian bridge of duration `dt` and variance
/// rate `v` from `0` to `y`, given its maximum `m`.
///
/// With `z = θ/(dt − θ)` the conditional density is proportional to
/// `(z^{−3/2} + z^{−1/2}) exp(−α/z − βz)`, a mixture of an inverse Gaussian
/// and the reciprocal of one.
fn bridge_argmax(rng: &mut Rng, dt: f64, v: f64, y: f64, m: f64) -> f64 {
    let up = m;
    let down = m - y;
    if down <= 0.0 {
        return dt;
    }
    if up <= 0.0 {
        return 0.0;
    }
    let alpha = up * up / (2.0 * v * dt);
    let beta = down * down / (2.0 * v * dt);
    let u: f64 = Open01.sample(rng);
    let z = if u < down / (up + down) {
        InverseGaussian::new((alpha / beta).sqrt(), 2.0 * alpha).expect("valid").sample(rng)
    } else {
        1.0 / InverseGaussian::new((beta / alpha).sqrt(), 2.0 * beta).expect("valid").sample(rng)
    };
    dt * z / (1.0 + z)
}

fn one_path(law: &PathLaw, sigma: f64, rng: &mut Rng) -> SupSample {
    let s: f64 = Exp::new(sigma).expect("positive rate").sample(rng);
    let (horizon, killed) = if law.kill > 0.0 {
        let k: f64 = Exp::new(law.kill).expect("positive rate").sample(rng);
        if k < s {
            (k, true)
        } else {
            (s, false)
        }
    } else {
        (s, false)
    };
    let gap = (law.jumps.rate > 0.0).then(|| Exp::new(law.jumps.rate).expect("positive rate"));
    let gauss = Normal::new(0.0, 1.0).expect("unit normal");
    let (mut t, mut x, mut sup, mut at) = (0.0, 0.0, 0.0f64, 0.0);
    loop {
        let dt = match &gap {
            Some(e) => e.sample(rng).min(horizon - t),
            None => horizon - t,
        };
        if law.variance > 0.0 {
            let sd = (law.variance * dt).sqrt();
            let y = law.drift * dt + sd * gauss.sample(rng);
            let u: f64 = Open01.sample(rng);
            let m = 0.5 * (y + (y * y - 2.0 * law.variance * dt * u.ln()).sqrt());
            if x + m > sup {
                sup = x + m;
                at = t + bridge_argmax(rng, dt, law.variance, y, m);
            }
            x += y;
        } else {
            let y = law.drift * dt;
            if x + y > sup {
                sup = x + y;
                at = t + dt;
            }
            x += y;
        }
        t += dt;
        if t >= horizon {
            break;
        }
        x += law.jump(rng);
        if x > sup {
            sup = x;
            at = t;
        }
    }
    SupSample { sup_value: sup, argmax_time: at, horizon, killed }
}

fn law_of(spec: &RogersSpec, sigma: f64) -> Result<PathLaw> {
    let RogersSpec::LevyAtomic(l) = spec else {
        return Err(Error::Unsupported("simulation needs a levy_atomic spec".into()));
    };
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::field("sigma", "must be positive"));
    }
    crate::rogers::validate_spec(spec, 0)?;
    Ok(PathLaw::new(l))
}

/// Number of shards for `n` samples.
pub fn shard_count(n: usize) -> usize {
    n.div_ceil(SHARD_SIZE)
}

/// Samples of shard `shard` out of `n` total.
pub fn simulate_shard(spec: &RogersSpec, sigma: f64, n: usize, seed: u64, shard: usize) -> Result<Vec<SupSample>> {
    let law = law_of(spec, sigma)?;
    let start = shard * SHARD_SIZE;
    let len = n.saturating_sub(start).min(SHARD_SIZE);
    let mut rng = seeded(seed, shard as u64);
    Ok((0..len).map(|_| one_path(&law, sigma, &mut rng)).collect())
}

/// `n` samples of `(X̄_S, T̄_S)` with `S ~ Exp(σ)` truncated by killing.
/// The output depends only on `(spec, sigma, n, seed)`.
pub fn simulate_sup_samples(spec: &RogersSpec, sigma: f64, n: usize, seed: u64) -> Result<Vec<SupSample>> {
    law_of(spec, sigma)?;
    let mut out = Vec::with_capacity(n);
    for k in 0..shard_count(n) {
        out.extend(simulate_shard(spec, sigma, n, seed, k)?);
    }
    Ok(out)
}

/// Sample means of the queried functionals.  Killed paths count like the
/// others: their window ends at the killing time.
pub fn mc_estimates(samples: &[SupSample], seed: u64, queries: &[McQuery]) -> Result<Vec<McEstimate>> {
    if samples.is_empty() {
        return Err(Error::arg("no samples"));
    }
    let n = samples.len();
    Ok(queries
        .iter()
        .map(|q| {
            let (mut mean, mut m2) = (0.0, 0.0);
            for (k, s) in samples.iter().enumerate() {
                let v = q.value(s);
                let d = v - mean;
                mean += d / (k + 1) as f64;
                m2 += d * (v - mean);
            }
            let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
            McEstimate { mean, std_error: (var / n as f64).sqrt(), n, seed }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rogers::Atom;
    use alloc::vec;

    #[test]
    fn pure_drift_supremum_is_linear() {
        let spec = RogersSpec::LevyAtomic(LevyAtomic { a: 0.0, b: 2.0, c: 0.0, atoms: vec![] });
        let s = simulate_sup_samples(&spec, 0.5, 1000, 3).unwrap();
        for p in &s {
            assert!((p.sup_value - 2.0 * p.horizon).abs() < 1e-12 * (1.0 + p.sup_value));
            assert_eq!(p.argmax_time, p.horizon);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let spec = RogersSpec::LevyAtomic(LevyAtomic {
            a: 0.3,
            b: 0.1,
            c: 0.2,
            atoms: vec![Atom { s: 1.0, w: 1.0 }, Atom { s: -2.0, w: 3.0 }],
        });
        let a = simulate_sup_samples(&spec, 1.0, 40_000, 11).unwrap();
        let b = simulate_sup_samples(&spec, 1.0, 40_000, 11).unwrap();
        assert_eq!(a, b);
        let c = simulate_sup_samples(&spec, 1.0, 40_000, 12).unwrap();
        assert_ne!(a, c);
        assert!(a.iter().all(|s| s.argmax_time <= s.horizon && s.sup_value >= 0.0));
        assert!(a.iter().any(|s| s.killed));
    }

    #[test]
    fn bridge_argmax_is_uniform_on_average() {
        // Averaged over the bridge law, the argmax of a driftless bridge to 0
        // is uniform on [0, dt].
        let mut rng = seeded(5, 0);
        let n = 40_000;
        let mut mean = 0.0;
        for _ in 0..n {
            let u: f64 = Open01.sample(&mut rng);
            let m = 0.5 * (-2.0 * u.ln()).sqrt();
            mean += bridge_argmax(&mut rng, 1.0, 1.0, 0.0, m);
        }
        mean /= n as f64;
        assert!((mean - 0.5).abs() < 4.0 * (1.0 / 12.0f64 / n as f64).sqrt());
    }

    #[test]
    fn estimates_of_trivial_queries() {
        let spec = RogersSpec::brownian(0.5, 0.0);
        let s = simulate_sup_samples(&spec, 0.5, 2000, 1).unwrap();
        let e = mc_estimates(&s, 1, &[McQuery::Tail { x: 0.0 }, McQuery::Laplace { xi: 0.0 }]).unwrap();
        assert_eq!(e[0].mean, 1.0);
        assert_eq!(e[1].mean, 1.0);
        assert!(mc_estimates(&[], 1, &[McQuery::Tail { x: 0.0 }]).is_err());
    }

    #[test]
    fn rejects_other_families() {
        let spec = RogersSpec::symmetric_power(1.0);
        assert!(matches!(simulate_sup_samples(&spec, 1.0, 10, 0), Err(Error::Unsupported(_))));
    }
}
