//! Polynomials in `z` and `conj(z)` with Wirtinger calculus.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::HarmonicFn;
use crate::poly::is_finite;
use crate::tol::{IDENTITY_TOL, TRIM_TOL};

/// `sum c[j][k] z^j conj(z)^k`.
///
/// Rows index the power of `z`, columns the power of `conj(z)`. The matrix is
/// rectangular; trailing all-negligible rows and columns are trimmed, so the
/// zero polynomial is the empty matrix.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "MixedPolyRepr")]
pub struct MixedPoly {
    c: Vec<Vec<Complex64>>,
}

#[derive(Deserialize)]
struct MixedPolyRepr {
    c: Vec<Vec<Complex64>>,
}

impl TryFrom<MixedPolyRepr> for MixedPoly {
    type Error = Error;

    fn try_from(repr: MixedPolyRepr) -> Result<Self> {
        MixedPoly::try_new(repr.c)
    }
}

/// Outcome of the structural harmonicity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonicity {
    pub harmonic: bool,
    /// Largest mixed coefficient relative to the largest coefficient.
    pub residual: f64,
}

impl MixedPoly {
    /// Builds from a (possibly ragged) coefficient matrix; short rows are
    /// padded with zeros.
    pub fn new(rows: Vec<Vec<Complex64>>) -> Self {
        let width = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut c: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|mut r| {
                r.resize(width, Complex64::default());
                r
            })
            .collect();
        debug_assert!(c.iter().flatten().all(|&x| is_finite(x)));
        let max = c.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
        let cut = TRIM_TOL * max;
        while c.last().is_some_and(|r| r.iter().all(|x| x.norm() <= cut)) {
            c.pop();
        }
        let mut width = c.first().map_or(0, Vec::len);
        while width > 0 && c.iter().all(|r| r[width - 1].norm() <= cut) {
            width -= 1;
        }
        for r in &mut c {
            r.truncate(width);
        }
        if width == 0 {
            c.clear();
        }
        MixedPoly { c }
    }

    pub fn try_new(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if rows.iter().flatten().any(|&x| !is_finite(x)) {
            return Err(Error::InvalidInput("mixed polynomial has a non-finite coefficient".into()));
        }
        Ok(Self::new(rows))
    }

    pub fn zero() -> Self {
        MixedPoly { c: Vec::new() }
    }

    pub fn constant(v: Complex64) -> Self {
        Self::new(vec![vec![v]])
    }

    /// `v * z^j * conj(z)^k`
    pub fn monomial(v: Complex64, j: usize, k: usize) -> Self {
        let mut c = vec![vec![Complex64::default(); k + 1]; j + 1];
        c[j][k] = v;
        Self::new(c)
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.c
    }

    /// Coefficient of `z^j conj(z)^k`, zero outside the stored block.
    pub fn coeff(&self, j: usize, k: usize) -> Complex64 {
        self.c
            .get(j)
            .and_then(|r| r.get(k))
            .copied()
            .unwrap_or_default()
    }

    pub fn deg_z(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg_zbar(&self) -> Option<usize> {
        self.c.first().and_then(|r| r.len().checked_sub(1))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Embeds `h + conj(g)`: row 0 holds the conjugated coefficients of `g`,
    /// column 0 the coefficients of `h`.
    pub fn embed(f: &HarmonicFn) -> Self {
        let rows = f.h.coeffs().len().max(1);
        let cols = f.g.coeffs().len().max(1);
        let mut c = vec![vec![Complex64::default(); cols]; rows];
        for (j, &a) in f.h.coeffs().iter().enumerate() {
            c[j][0] += a;
        }
        for (k, &b) in f.g.coeffs().iter().enumerate() {
            c[0][k] += b.conj();
        }
        Self::new(c)
    }

    /// Product by two-index convolution.
    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (ra, ca) = (self.c.len(), self.c[0].len());
        let (rb, cb) = (other.c.len(), other.c[0].len());
        let mut out = vec![vec![Complex64::default(); ca + cb - 1]; ra + rb - 1];
        for (j1, row_a) in self.c.iter().enumerate() {
            for (k1, &a) in row_a.iter().enumerate() {
                if a == Complex64::default() {
                    continue;
                }
                for (j2, row_b) in other.c.iter().enumerate() {
                    let dst = &mut out[j1 + j2];
                    for (k2, &b) in row_b.iter().enumerate() {
                        dst[k1 + k2] += a * b;
                    }
                }
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let rows = self.c.len().max(other.c.len());
        let cols = self
            .deg_zbar()
            .map_or(0, |d| d + 1)
            .max(other.deg_zbar().map_or(0, |d| d + 1));
        Self::new(
            (0..rows)
                .map(|j| (0..cols).map(|k| self.coeff(j, k) + other.coeff(j, k)).collect())
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(
            self.c
                .iter()
                .map(|r| r.iter().map(|&x| x * s).collect())
                .collect(),
        )
    }

    /// `d^2 / dz dconj(z)`.
    pub fn mixed_derivative(&self) -> Self {
        if self.c.len() < 2 || self.c[0].len() < 2 {
            return Self::zero();
        }
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, row)| {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, &x)| x * (j * k) as f64)
                        .collect()
                })
                .collect(),
        )
    }

    /// Harmonic exactly when every coefficient with both powers positive
    /// vanishes; the residual is the largest such coefficient over the largest
    /// coefficient overall.
    pub fn is_harmonic(&self) -> Harmonicity {
        let scale = self.max_abs();
        if scale == 0.0 {
            return Harmonicity { harmonic: true, residual: 0.0 };
        }
        let mixed = self
            .c
            .iter()
            .skip(1)
            .flat_map(|r| r.iter().skip(1))
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        let residual = mixed / scale;
        Harmonicity { harmonic: residual <= IDENTITY_TOL, residual }
    }

    /// Nested Horner: outer in `z`, inner rows in `conj(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.c.iter().rev().fold(Complex64::default(), |acc, row| {
            let inner = row.iter().rev().fold(Complex64::default(), |a, &x| a * zb + x);
            acc * z + inner
        })
    }

    /// `sum |c[j][k]| |z|^(j+k)`.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.c.iter().rev().fold(0.0, |acc, row| {
            let inner = row.iter().rev().fold(0.0, |a, x| a * r + x.norm());
            acc * r + inner
        })
    }

    /// Coefficient-wise equality relative to the larger operand.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        self.max_rel_diff(other) <= rel_tol
    }

    /// Largest coefficient difference over the larger operand's scale.
    pub fn max_rel_diff(&self, other: &Self) -> f64 {
        let scale = self.max_abs().max(other.max_abs());
        if scale == 0.0 {
            return 0.0;
        }
        let rows = self.c.len().max(other.c.len());
        let cols = self
            .deg_zbar()
            .map_or(0, |d| d + 1)
            .max(other.deg_zbar().map_or(0, |d| d + 1));
        let mut worst = 0.0f64;
        for j in 0..rows {
            for k in 0..cols {
                worst = worst.max((self.coeff(j, k) - other.coeff(j, k)).norm());
            }
        }
        worst / scale
    }
}
