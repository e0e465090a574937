//! Dirichlet problem on the unit disk for trigonometric-polynomial data.
//!
//! Real boundary data `phi(t) = sum_k c_k e^{ikt}` with `c_{-k} = conj(c_k)`
//! has the Herglotz transform `G(z) = c_0 + 2 sum_{k>0} c_k z^k`, whose real
//! part is the Poisson extension of `phi`. Complex data `phi1 + i phi2` is
//! split as `h = (G1 + G2)/2`, `g = (G1 - G2)/2`.
//!
//! The audit functions compare traces of the resulting cofactor and product on
//! the unit circle against the closed forms `a phi2 + i a phi1` and
//! `i a (phi1^2 + phi2^2)`. Deviations are reported as data.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::HarmonicFn;
use crate::poly::{is_finite, trim_trailing, AnalyticPoly};
use crate::product::{cofactor_formula, product_formula, Alpha};
use crate::tol::IDENTITY_TOL;

/// Real-valued trigonometric polynomial stored by its nonnegative-frequency
/// Fourier coefficients; negative frequencies are their conjugates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RealTrigPoly {
    pos: Vec<Complex64>,
}

impl RealTrigPoly {
    /// `coeffs[k]` is the coefficient of `e^{ikt}` for `k >= 0`. The constant
    /// term must be real.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|&c| !is_finite(c)) {
            return Err(Error::InvalidInput("trig coefficient is not finite".into()));
        }
        let mut pos = coeffs;
        if let Some(c0) = pos.first_mut() {
            let scale = c0.norm().max(1.0);
            if c0.im.abs() > IDENTITY_TOL * scale {
                return Err(Error::InvalidInput("constant Fourier coefficient must be real".into()));
            }
            c0.im = 0.0;
        }
        trim_trailing(&mut pos);
        Ok(RealTrigPoly { pos })
    }

    /// `a_0 + sum_k (a_k cos kt + b_k sin kt)`, with `b[0]` ignored.
    pub fn from_cos_sin(a: &[f64], b: &[f64]) -> Self {
        let n = a.len().max(b.len());
        let pos = (0..n)
            .map(|k| {
                let ak = a.get(k).copied().unwrap_or(0.0);
                let bk = b.get(k).copied().unwrap_or(0.0);
                if k == 0 {
                    Complex64::new(ak, 0.0)
                } else {
                    Complex64::new(ak / 2.0, -bk / 2.0)
                }
            })
            .collect();
        RealTrigPoly::new(pos).expect("finite real input")
    }

    pub fn zero() -> Self {
        RealTrigPoly { pos: Vec::new() }
    }

    pub fn constant(v: f64) -> Self {
        Self::from_cos_sin(&[v], &[])
    }

    /// `cos(k t)`
    pub fn cos(k: usize) -> Self {
        let mut a = vec![0.0; k + 1];
        a[k] = 1.0;
        Self::from_cos_sin(&a, &[])
    }

    /// `sin(k t)`, `k >= 1`
    pub fn sin(k: usize) -> Self {
        let mut b = vec![0.0; k + 1];
        b[k] = 1.0;
        Self::from_cos_sin(&[], &b)
    }

    /// Coefficient of `e^{ikt}` for any integer `k`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let c = self.pos.get(k.unsigned_abs() as usize).copied().unwrap_or_default();
        if k < 0 {
            c.conj()
        } else {
            c
        }
    }

    pub fn nonnegative_coeffs(&self) -> &[Complex64] {
        &self.pos
    }

    pub fn degree(&self) -> Option<usize> {
        self.pos.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.coeff(0).re
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let w = Complex64::from_polar(1.0, theta);
        let tail = self
            .pos
            .iter()
            .skip(1)
            .rev()
            .fold(Complex64::default(), |acc, &c| (acc + c) * w);
        self.mean() + 2.0 * tail.re
    }

    pub fn scale(&self, s: f64) -> Self {
        RealTrigPoly { pos: self.pos.iter().map(|&c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.pos.len().max(other.pos.len());
        let mut pos: Vec<Complex64> = (0..n as i64).map(|k| self.coeff(k) + other.coeff(k)).collect();
        trim_trailing(&mut pos);
        RealTrigPoly { pos }
    }

    /// Pointwise product, by convolution of the two-sided coefficient sequences.
    pub fn mul(&self, other: &Self) -> Self {
        let (Some(n1), Some(n2)) = (self.degree(), other.degree()) else {
            return Self::zero();
        };
        let (n1, n2) = (n1 as i64, n2 as i64);
        let mut pos: Vec<Complex64> = (0..=n1 + n2)
            .map(|k| {
                (-n1..=n1)
                    .filter(|j| (k - j).abs() <= n2)
                    .map(|j| self.coeff(j) * other.coeff(k - j))
                    .sum()
            })
            .collect();
        pos[0].im = 0.0;
        trim_trailing(&mut pos);
        RealTrigPoly { pos }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.pos.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Serialize for RealTrigPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let n = self.pos.len() as i64;
        let mut map = s.serialize_map(Some(self.pos.len() * 2 - usize::from(n > 0)))?;
        for k in (1 - n)..n {
            // adding 0.0 turns -0.0 from conjugation into 0.0
            let v = self.coeff(k);
            map.serialize_entry(&k.to_string(), &Complex64::new(v.re + 0.0, v.im + 0.0))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for RealTrigPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, Complex64>::deserialize(d)?;
        let mut two_sided = BTreeMap::new();
        for (key, v) in raw {
            let k: i64 = key
                .trim()
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("non-integer frequency key {key:?}")))?;
            two_sided.insert(k, v);
        }
        RealTrigPoly::from_two_sided(&two_sided).map_err(serde::de::Error::custom)
    }
}

impl RealTrigPoly {
    /// Builds from a two-sided coefficient map. When both `k` and `-k` are
    /// given they must be conjugate; a missing side is filled by symmetry.
    pub fn from_two_sided(map: &BTreeMap<i64, Complex64>) -> Result<Self> {
        let n = map.keys().map(|k| k.unsigned_abs() as usize).max().map_or(0, |m| m + 1);
        let scale = map.values().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
        let mut pos = vec![Complex64::default(); n];
        for (k, slot) in pos.iter_mut().enumerate() {
            let k = k as i64;
            let (p, m) = (map.get(&k), map.get(&-k));
            *slot = match (p, m) {
                (Some(&a), Some(&b)) => {
                    if (a - b.conj()).norm() > IDENTITY_TOL * scale {
                        return Err(Error::InvalidInput(format!(
                            "coefficients at {k} and {} are not conjugate",
                            -k
                        )));
                    }
                    a
                }
                (Some(&a), None) => a,
                (None, Some(&b)) => b.conj(),
                (None, None) => Complex64::default(),
            };
        }
        RealTrigPoly::new(pos)
    }
}

/// Boundary values `phi1 + i phi2` on the unit circle.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryData {
    pub phi1: RealTrigPoly,
    pub phi2: RealTrigPoly,
}

impl BoundaryData {
    pub fn new(phi1: RealTrigPoly, phi2: RealTrigPoly) -> Self {
        BoundaryData { phi1, phi2 }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        Complex64::new(self.phi1.eval(theta), self.phi2.eval(theta))
    }
}

/// Maximum deviation found by a sampled comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub max_deviation: f64,
    pub argmax_theta: f64,
    pub samples: usize,
}

/// Analytic function whose real part extends `phi` harmonically, normalized
/// so that its imaginary part vanishes at the origin.
pub fn herglotz(phi: &RealTrigPoly) -> AnalyticPoly {
    AnalyticPoly::new(
        phi.pos
            .iter()
            .enumerate()
            .map(|(k, &c)| if k == 0 { c } else { c * 2.0 })
            .collect(),
    )
}

/// Boundary trace of `Im herglotz(phi)` (the periodic Hilbert transform).
pub fn conjugate_trace(phi: &RealTrigPoly) -> RealTrigPoly {
    let minus_i = Complex64::new(0.0, -1.0);
    let mut pos: Vec<Complex64> = phi
        .pos
        .iter()
        .enumerate()
        .map(|(k, &c)| if k == 0 { Complex64::default() } else { c * minus_i })
        .collect();
    trim_trailing(&mut pos);
    RealTrigPoly { pos }
}

/// Harmonic extension of boundary data together with the two Herglotz
/// transforms it was assembled from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletSolution {
    pub f: HarmonicFn,
    pub g1: AnalyticPoly,
    pub g2: AnalyticPoly,
}

/// `G1 = herglotz(phi1)`, `G2 = herglotz(phi2)`, `h = (G1+G2)/2`,
/// `g = (G1-G2)/2`.
pub fn solve_dirichlet(b: &BoundaryData) -> DirichletSolution {
    let g1 = herglotz(&b.phi1);
    let g2 = herglotz(&b.phi2);
    let half = Complex64::new(0.5, 0.0);
    let h = (&g1 + &g2).scale(half);
    let g = (&g1 - &g2).scale(half);
    DirichletSolution { f: HarmonicFn::new(h, g), g1, g2 }
}

/// Poisson kernel `(1 - r^2) / |e^{it} - z|^2`.
fn poisson_kernel(z: Complex64, t: f64) -> f64 {
    let w = Complex64::from_polar(1.0, t);
    (1.0 - z.norm_sqr()) / (w - z).norm_sqr()
}

/// Trapezoid-rule Poisson integral of `phi1 + i phi2` at an interior point.
pub fn poisson_eval(b: &BoundaryData, z: Complex64, nodes: usize) -> Result<Complex64> {
    if z.norm() >= 1.0 || !is_finite(z) {
        return Err(Error::OutsideDisk { re: z.re, im: z.im });
    }
    if nodes < 16 {
        return Err(Error::InvalidInput(format!("need at least 16 quadrature nodes, got {nodes}")));
    }
    let sum: Complex64 = (0..nodes)
        .map(|j| {
            let t = TAU * j as f64 / nodes as f64;
            b.eval(t) * poisson_kernel(z, t)
        })
        .sum();
    Ok(sum / nodes as f64)
}

/// Max over a polar lattice of `|F(z) - (a Re G2(z) + i a Im G1(z))|` where
/// `F` is the cofactor of the Dirichlet solution.
pub fn cofactor_interior_identity(b: &BoundaryData, a: Alpha, grid: usize) -> Result<TraceReport> {
    if grid < 8 {
        return Err(Error::InvalidInput(format!("grid must be at least 8, got {grid}")));
    }
    let sol = solve_dirichlet(b);
    let big_f = cofactor_formula(&sol.f, a.value());
    let a = a.value();
    let mut best = (0.0f64, 0.0f64);
    for i in 0..grid {
        let r = (i + 1) as f64 / (grid + 1) as f64;
        for j in 0..grid {
            let theta = TAU * j as f64 / grid as f64;
            let z = Complex64::from_polar(r, theta);
            let expected = Complex64::new(a * sol.g2.eval(z).re, a * sol.g1.eval(z).im);
            let dev = (big_f.eval(z) - expected).norm();
            if dev > best.0 {
                best = (dev, theta);
            }
        }
    }
    Ok(TraceReport { max_deviation: best.0, argmax_theta: best.1, samples: grid * grid })
}

/// The closed-form boundary value `(a phi2, a phi1)` asserted for the cofactor.
pub fn claimed_cofactor_trace(b: &BoundaryData, a: Alpha) -> BoundaryData {
    BoundaryData::new(b.phi2.scale(a.value()), b.phi1.scale(a.value()))
}

/// `a (phi1^2 + phi2^2)`; the asserted product trace is `i` times this.
pub fn claimed_product_trace(b: &BoundaryData, a: Alpha) -> RealTrigPoly {
    b.phi1.mul(&b.phi1).add(&b.phi2.mul(&b.phi2)).scale(a.value())
}

/// One boundary sample of an actual trace against its claimed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub theta: f64,
    pub actual: Complex64,
    pub claimed: Complex64,
}

struct Traces {
    cofactor: HarmonicFn,
    product: HarmonicFn,
    claimed_cofactor: BoundaryData,
    claimed_product: RealTrigPoly,
}

impl Traces {
    fn new(b: &BoundaryData, a: Alpha) -> Self {
        let sol = solve_dirichlet(b);
        Traces {
            cofactor: cofactor_formula(&sol.f, a.value()),
            product: product_formula(&sol.f, a.value()),
            claimed_cofactor: claimed_cofactor_trace(b, a),
            claimed_product: claimed_product_trace(b, a),
        }
    }

    fn cofactor_at(&self, theta: f64) -> (Complex64, Complex64) {
        let z = Complex64::from_polar(1.0, theta);
        (self.cofactor.eval(z), self.claimed_cofactor.eval(theta))
    }

    fn product_at(&self, theta: f64) -> (Complex64, Complex64) {
        let z = Complex64::from_polar(1.0, theta);
        (self.product.eval(z), Complex64::new(0.0, self.claimed_product.eval(theta)))
    }
}

fn uniform_angles(samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |j| TAU * j as f64 / samples as f64)
}

/// Samples the cofactor's boundary trace next to its claimed value.
pub fn cofactor_trace_samples(b: &BoundaryData, a: Alpha, samples: usize) -> Vec<TraceSample> {
    let t = Traces::new(b, a);
    uniform_angles(samples)
        .map(|theta| {
            let (actual, claimed) = t.cofactor_at(theta);
            TraceSample { theta, actual, claimed }
        })
        .collect()
}

/// Samples the product's boundary trace next to its claimed value.
pub fn product_trace_samples(b: &BoundaryData, a: Alpha, samples: usize) -> Vec<TraceSample> {
    let t = Traces::new(b, a);
    uniform_angles(samples)
        .map(|theta| {
            let (actual, claimed) = t.product_at(theta);
            TraceSample { theta, actual, claimed }
        })
        .collect()
}

/// Sampled maximum of a smooth periodic deviation, polished by golden-section
/// search around every discrete local maximum.
fn max_deviation(samples: usize, dev: impl Fn(f64) -> f64) -> TraceReport {
    let step = TAU / samples as f64;
    let values: Vec<f64> = uniform_angles(samples).map(&dev).collect();
    let mut best = (0.0f64, 0.0f64);
    for j in 0..samples {
        let v = values[j];
        let prev = values[(j + samples - 1) % samples];
        let next = values[(j + 1) % samples];
        if v > best.0 {
            best = (v, j as f64 * step);
        }
        if v > 0.0 && v >= prev && v >= next {
            let (t, refined) = golden_max(&dev, (j as f64 - 1.0) * step, (j as f64 + 1.0) * step);
            if refined > best.0 {
                best = (refined, t.rem_euclid(TAU));
            }
        }
    }
    TraceReport { max_deviation: best.0, argmax_theta: best.1, samples }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Deviation reports for the cofactor and product boundary traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAudit {
    pub cofactor: TraceReport,
    pub product: TraceReport,
}

/// Compares actual boundary traces of `F` and `fF` with their closed forms.
pub fn audit_boundary_claims(b: &BoundaryData, a: Alpha, samples: usize) -> Result<BoundaryAudit> {
    if samples < 64 {
        return Err(Error::InvalidInput(format!("need at least 64 samples, got {samples}")));
    }
    let t = Traces::new(b, a);
    let cofactor = max_deviation(samples, |theta| {
        let (x, y) = t.cofactor_at(theta);
        (x - y).norm()
    });
    let product = max_deviation(samples, |theta| {
        let (x, y) = t.product_at(theta);
        (x - y).norm()
    });
    Ok(BoundaryAudit { cofactor, product })
}

/// Values of `f` on a polar lattice: `radial` radii in (0, 1] by `angular`
/// angles. Rows are `(r, theta, f(r e^{i theta}))`.
pub fn polar_grid(f: &HarmonicFn, radial: usize, angular: usize) -> Vec<(f64, f64, Complex64)> {
    let mut out = Vec::with_capacity(radial * angular);
    for i in 1..=radial {
        let r = i as f64 / radial as f64;
        for theta in uniform_angles(angular) {
            out.push((r, theta, f.eval(Complex64::from_polar(r, theta))));
        }
    }
    out
}
