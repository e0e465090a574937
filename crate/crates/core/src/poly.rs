//! Univariate complex polynomials and unreduced rational functions.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::{IDENTITY_TOL, TRIM_TOL};

/// Polynomial in `z` with complex coefficients, stored in ascending order.
///
/// The zero polynomial has no coefficients; otherwise the top coefficient is
/// nonzero after relative trimming.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "AnalyticPolyRepr")]
pub struct AnalyticPoly {
    coeffs: Vec<Complex64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnalyticPolyRepr {
    Tagged { coeffs: Vec<Complex64> },
    Bare(Vec<Complex64>),
}

impl TryFrom<AnalyticPolyRepr> for AnalyticPoly {
    type Error = Error;

    fn try_from(repr: AnalyticPolyRepr) -> Result<Self> {
        let coeffs = match repr {
            AnalyticPolyRepr::Tagged { coeffs } | AnalyticPolyRepr::Bare(coeffs) => coeffs,
        };
        AnalyticPoly::try_new(coeffs)
    }
}

pub(crate) fn is_finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Drops trailing coefficients that are negligible relative to the largest one.
pub(crate) fn trim_trailing(coeffs: &mut Vec<Complex64>) {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let cut = TRIM_TOL * max;
    while let Some(last) = coeffs.last() {
        if last.norm() <= cut {
            coeffs.pop();
        } else {
            break;
        }
    }
}

impl AnalyticPoly {
    /// Builds a polynomial from ascending coefficients, trimming the top.
    ///
    /// Non-finite coefficients are a logic error here; use [`AnalyticPoly::try_new`]
    /// for untrusted input.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| is_finite(c)));
        trim_trailing(&mut coeffs);
        AnalyticPoly { coeffs }
    }

    pub fn try_new(coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|&c| !is_finite(c)) {
            return Err(Error::InvalidInput(format!(
                "coefficient {i} is not finite"
            )));
        }
        Ok(Self::new(coeffs))
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        AnalyticPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, a bound on the magnitude of every term at `z`.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Taylor coefficients about `center`: `p(center + w) = sum t_k w^k`.
    pub fn taylor_at(&self, center: Complex64) -> Vec<Complex64> {
        // repeated synthetic division by (z - center)
        let mut work = self.coeffs.clone();
        let n = work.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let hi = work[j + 1];
                work[j] += hi * center;
            }
        }
        work
    }

    /// Returns `true` when `self - other` is zero up to the identity tolerance
    /// relative to the larger operand.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let scale = self.max_abs().max(other.max_abs());
        if scale == 0.0 {
            return true;
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|k| (self.coeff(k) - other.coeff(k)).norm() <= IDENTITY_TOL * scale)
    }
}

impl Add for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn add(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        AnalyticPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn sub(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        AnalyticPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn neg(self) -> AnalyticPoly {
        AnalyticPoly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &AnalyticPoly {
    type Output = AnalyticPoly;

    fn mul(self, rhs: &AnalyticPoly) -> AnalyticPoly {
        if self.is_zero() || rhs.is_zero() {
            return AnalyticPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        AnalyticPoly::new(out)
    }
}

/// Quotient `num / den` kept unreduced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFn {
    pub num: AnalyticPoly,
    pub den: AnalyticPoly,
}

impl RationalFn {
    pub fn new(num: AnalyticPoly, den: AnalyticPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("denominator is the zero polynomial".into()));
        }
        Ok(RationalFn { num, den })
    }

    /// `None` at poles (zeros of the denominator).
    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        let d = self.den.eval(z);
        if d.norm() == 0.0 {
            None
        } else {
            Some(self.num.eval(z) / d)
        }
    }

    /// Cross-multiplied identity test `a/b == c/d  <=>  a*d == c*b`.
    pub fn identical_to(&self, other: &Self) -> bool {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        lhs.approx_eq(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trims_negligible_top_coefficients() {
        let p = AnalyticPoly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-16, 0.0)]);
        assert_eq!(p.degree(), Some(1));
        let z = AnalyticPoly::new(vec![c(0.0, 0.0); 3]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(AnalyticPoly::try_new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(AnalyticPoly::try_new(vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn taylor_shift_matches_derivatives() {
        // p = z^3 - 2z + i, p(1 + w) = (i - 1) + w + 3w^2 + w^3
        let p = AnalyticPoly::new(vec![c(0.0, 1.0), c(-2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let t = p.taylor_at(c(1.0, 0.0));
        let want = [c(-1.0, 1.0), c(1.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)];
        for (a, b) in t.iter().zip(want) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn rational_identity_by_cross_multiplication() {
        // 1/(2z) == 2z/(4z^2)
        let a = RationalFn::new(AnalyticPoly::from_real(&[1.0]), AnalyticPoly::from_real(&[0.0, 2.0])).unwrap();
        let b = RationalFn::new(
            AnalyticPoly::from_real(&[0.0, 2.0]),
            AnalyticPoly::from_real(&[0.0, 0.0, 4.0]),
        )
        .unwrap();
        assert!(a.identical_to(&b));
        assert!(RationalFn::new(AnalyticPoly::zero(), AnalyticPoly::zero()).is_err());
    }

    #[test]
    fn json_accepts_tagged_and_bare() {
        let a: AnalyticPoly = serde_json::from_str(r#"{"coeffs": [[0,0],[1,0]]}"#).unwrap();
        let b: AnalyticPoly = serde_json::from_str("[[0,0],[1,0]]").unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"coeffs":[[0.0,0.0],[1.0,0.0]]}"#);
    }
}
