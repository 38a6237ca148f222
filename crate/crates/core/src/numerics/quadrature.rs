//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex-valued
//! integrands of a real variable.
//!
//! Infinite domains are compactified: `s = tan u` on the full line and
//! `s = a + t/(1-t)` on a half-line.  Declared singular points split the
//! domain into panels; on a panel touching a singular point the variable is
//! further substituted `u = p + (q-p) v^2`, which absorbs inverse square-root
//! endpoint behaviour.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    HalfLine(f64),
    FullLine,
}

/// Tolerances and splitting points for [`integrate_adaptive`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Strictly increasing abscissae where the integrand may be singular
    /// or discontinuous.
    pub singular_points: Vec<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            singular_points: Vec::new(),
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureConfig { rel_tol, abs_tol, ..Default::default() }
    }

    pub fn singular(mut self, points: &[f64]) -> Self {
        let mut pts: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        self.singular_points = pts;
        self
    }

    pub fn max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(Error::arg("quadrature tolerances out of range"));
        }
        if self.singular_points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::arg("singular points must be strictly increasing"));
        }
        Ok(())
    }
}

/// Value and error estimate of an integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
enum Outer {
    Identity,
    HalfLine(f64),
    Tan,
}

impl Outer {
    #[inline]
    fn map(self, u: f64) -> (f64, f64) {
        match self {
            Outer::Identity => (u, 1.0),
            Outer::HalfLine(a) => {
                let w = 1.0 - u;
                (a + u / w, 1.0 / (w * w))
            }
            Outer::Tan => {
                let x = u.tan();
                (x, 1.0 + x * x)
            }
        }
    }

    fn inverse(self, x: f64) -> f64 {
        match self {
            Outer::Identity => x,
            Outer::HalfLine(a) => (x - a) / (1.0 + x - a),
            Outer::Tan => x.atan(),
        }
    }
}

#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    // +1: singular at lo, -1: singular at hi, 0: regular
    sing: i8,
}

impl Panel {
    #[inline]
    fn map(&self, v: f64) -> (f64, f64) {
        let w = self.hi - self.lo;
        match self.sing {
            1 => (self.lo + w * v * v, 2.0 * w * v),
            -1 => (self.hi - w * v * v, 2.0 * w * v),
            _ => (self.lo + w * v, w),
        }
    }
}

struct Piece {
    panel: usize,
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    outer: Outer,
    panel: &Panel,
    a: f64,
    b: f64,
) -> Result<(Complex64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut eval = |v: f64| -> Result<Complex64> {
        let (u, du) = panel.map(v);
        let (x, dx) = outer.map(u);
        if !x.is_finite() {
            // a node rounded onto a compactified endpoint: measure zero
            return Ok(Complex64::new(0.0, 0.0));
        }
        let y = f(x);
        if !(y.re.is_finite() && y.im.is_finite()) {
            return Err(Error::NonFinite(x));
        }
        let j = du * dx;
        Ok(if j == 0.0 { Complex64::new(0.0, 0.0) } else { y * j })
    };
    let fc = eval(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs_k = fc.norm() * WGK[7];
    let mut vals = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = eval(c - dx)?;
        let f2 = eval(c + dx)?;
        vals[j] = (f1, f2);
        k += (f1 + f2) * WGK[j];
        abs_k += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = k * 0.5;
    let mut asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        asc += WGK[j] * ((vals[j].0 - mean).norm() + (vals[j].1 - mean).norm());
    }
    let value = k * h;
    let asc = asc * h.abs();
    let abs_k = abs_k * h.abs();
    let mut err = ((k - g) * h).norm();
    if asc != 0.0 && err != 0.0 {
        err = asc * (1.0f64).min((200.0 * err / asc).powf(1.5));
    }
    let floor = 50.0 * f64::EPSILON * abs_k;
    if abs_k > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && err < floor {
        err = floor;
    }
    Ok((value, err))
}

fn panels(domain: Domain, singular: &[f64]) -> Result<(Outer, Vec<Panel>)> {
    let (outer, lo, hi, lo_x, hi_x) = match domain {
        Domain::Finite(a, b) => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::arg("finite domain needs a < b"));
            }
            (Outer::Identity, a, b, a, b)
        }
        Domain::HalfLine(a) => {
            if !a.is_finite() {
                return Err(Error::arg("half-line start must be finite"));
            }
            (Outer::HalfLine(a), 0.0, 1.0, a, f64::INFINITY)
        }
        Domain::FullLine => (Outer::Tan, -FRAC_PI_2, FRAC_PI_2, f64::NEG_INFINITY, f64::INFINITY),
    };
    let sing_lo = singular.iter().any(|&p| p == lo_x);
    let sing_hi = singular.iter().any(|&p| p == hi_x);
    let mut cuts: Vec<f64> = singular
        .iter()
        .filter(|&&p| p > lo_x && p < hi_x)
        .map(|&p| outer.inverse(p))
        .filter(|&u| u > lo && u < hi)
        .collect();
    cuts.dedup();
    let mut pts = Vec::with_capacity(cuts.len() + 2);
    pts.push(lo);
    pts.extend(cuts);
    pts.push(hi);
    let n = pts.len() - 1;
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (pts[i], pts[i + 1]);
        if !(b > a) {
            continue;
        }
        let sa = if i == 0 { sing_lo } else { true };
        let sb = if i == n - 1 { sing_hi } else { true };
        match (sa, sb) {
            (true, true) => {
                let m = 0.5 * (a + b);
                out.push(Panel { lo: a, hi: m, sing: 1 });
                out.push(Panel { lo: m, hi: b, sing: -1 });
            }
            (true, false) => out.push(Panel { lo: a, hi: b, sing: 1 }),
            (false, true) => out.push(Panel { lo: a, hi: b, sing: -1 }),
            (false, false) => out.push(Panel { lo: a, hi: b, sing: 0 }),
        }
    }
    Ok((outer, out))
}

/// Integrates `f` over `domain`.
///
/// On non-convergence the error carries the partial value and its error
/// estimate.
pub fn integrate_adaptive<F>(mut f: F, domain: Domain, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Complex64,
{
    cfg.validate()?;
    let (outer, panels) = panels(domain, &cfg.singular_points)?;
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for (i, p) in panels.iter().enumerate() {
        let (v, e) = gk15(&mut f, outer, p, 0.0, 1.0)?;
        evaluations += 15;
        total += v;
        total_err += e;
        heap.push(Piece { panel: i, a: 0.0, b: 1.0, value: v, err: e });
    }
    let mut count = heap.len();
    let mut stalled: Vec<Piece> = Vec::new();
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if total_err <= target {
            break;
        }
        let Some(piece) = heap.pop() else { break };
        if count >= cfg.max_subdivisions {
            heap.push(piece);
            let err = heap.iter().chain(stalled.iter()).map(|p| p.err).sum::<f64>();
            return Err(Error::Quadrature { re: total.re, im: total.im, err_estimate: err });
        }
        let m = 0.5 * (piece.a + piece.b);
        if !(m > piece.a && m < piece.b) || (piece.b - piece.a) < 1e-15 {
            stalled.push(piece);
            continue;
        }
        let p = &panels[piece.panel];
        let (v1, e1) = gk15(&mut f, outer, p, piece.a, m)?;
        let (v2, e2) = gk15(&mut f, outer, p, m, piece.b)?;
        evaluations += 30;
        total += v1 + v2 - piece.value;
        total_err += e1 + e2 - piece.err;
        heap.push(Piece { panel: piece.panel, a: piece.a, b: m, value: v1, err: e1 });
        heap.push(Piece { panel: piece.panel, a: m, b: piece.b, value: v2, err: e2 });
        count += 1;
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for p in heap.iter().chain(stalled.iter()) {
        value += p.value;
        err += p.err;
    }
    let target = cfg.abs_tol.max(cfg.rel_tol * value.norm());
    if err > target && !stalled.is_empty() && err > 1e3 * target {
        return Err(Error::Quadrature { re: value.re, im: value.im, err_estimate: err });
    }
    Ok(Quadrature { value, err_estimate: err, evaluations })
}

/// Real-valued convenience wrapper around [`integrate_adaptive`].
pub fn integrate_real<F>(mut f: F, domain: Domain, cfg: &QuadratureConfig) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let q = integrate_adaptive(|x| Complex64::new(f(x), 0.0), domain, cfg)?;
    Ok((q.value.re, q.err_estimate))
}
