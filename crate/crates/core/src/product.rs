//! Harmonic products `fF` and the cofactor that makes them harmonic.
//!
//! For `f = h + conj(g)`, the product with `F = H + conj(G)` is harmonic
//! exactly when `k = h conj(G) + H conj(g)` is harmonic; with the cofactor
//! `F = a h - a conj(g)` (real `a != 0`) one gets `k = 0` and
//! `fF = a h^2 - a conj(g)^2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::HarmonicFn;
use crate::mixed::MixedPoly;
use crate::poly::AnalyticPoly;
use crate::tol::IDENTITY_TOL;

/// Nonzero, finite real scale factor of a cofactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value == 0.0 || !value.is_finite() {
            return Err(Error::InvalidAlpha);
        }
        Ok(Alpha(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Alpha::new(v)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductVerdict {
    pub harmonic: bool,
    pub mixed_residual: f64,
    pub k_constant: bool,
    #[serde(rename = "k")]
    pub k_poly: MixedPoly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareVerdict {
    /// Coefficient test on `f^2`.
    pub harmonic: bool,
    /// `deg h <= 0 || deg g <= 0`.
    pub degree_criterion: bool,
    pub residual: f64,
    /// Mixed derivative of `f^2`; equals `2 h' conj(g')`.
    pub witness: MixedPoly,
}

impl SquareVerdict {
    pub fn criteria_agree(&self) -> bool {
        self.harmonic == self.degree_criterion
    }
}

pub fn square_is_harmonic(f: &HarmonicFn) -> SquareVerdict {
    let e = f.embed();
    let sq = e.multiply(&e);
    let h = sq.is_harmonic();
    SquareVerdict {
        harmonic: h.harmonic,
        degree_criterion: f.h.is_constant() || f.g.is_constant(),
        residual: h.residual,
        witness: sq.mixed_derivative(),
    }
}

/// `F = a h - a conj(g)`, without the non-constant check.
pub(crate) fn cofactor_formula(f: &HarmonicFn, a: f64) -> HarmonicFn {
    let s = Complex64::new(a, 0.0);
    HarmonicFn::new(f.h.scale(s), f.g.scale(-s))
}

/// `fF = a h^2 - a conj(g)^2`, without the non-constant check.
pub(crate) fn product_formula(f: &HarmonicFn, a: f64) -> HarmonicFn {
    let s = Complex64::new(a, 0.0);
    HarmonicFn::new((&f.h * &f.h).scale(s), (&f.g * &f.g).scale(-s))
}

/// The cofactor `F = a h - a conj(g)` of `f`.
pub fn cofactor(f: &HarmonicFn, a: Alpha) -> Result<HarmonicFn> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    Ok(cofactor_formula(f, a.value()))
}

/// `F = a h - conj(a g)` for an arbitrary complex `a`. Its dilatation is still
/// `-w_f`, but `fF` is harmonic only for real `a`.
pub fn cofactor_complex(f: &HarmonicFn, a: Complex64) -> HarmonicFn {
    HarmonicFn::new(f.h.scale(a), f.g.scale(-a))
}

/// `fF = a h^2 - a conj(g)^2` for the cofactor `F` of `f`.
pub fn harmonic_product(f: &HarmonicFn, a: Alpha) -> Result<HarmonicFn> {
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    Ok(product_formula(f, a.value()))
}

/// `k = h conj(G) + H conj(g)` as a mixed polynomial.
pub fn k_poly(f: &HarmonicFn, big_f: &HarmonicFn) -> MixedPoly {
    let rows = f.h.coeffs().len().max(big_f.h.coeffs().len());
    let cols = f.g.coeffs().len().max(big_f.g.coeffs().len());
    MixedPoly::new(
        (0..rows)
            .map(|j| {
                (0..cols)
                    .map(|k| {
                        f.h.coeff(j) * big_f.g.coeff(k).conj() + big_f.h.coeff(j) * f.g.coeff(k).conj()
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Tests harmonicity of `fF` and, separately, constancy of `k`.
pub fn product_is_harmonic(f: &HarmonicFn, big_f: &HarmonicFn) -> ProductVerdict {
    let prod = f.embed().multiply(&big_f.embed());
    let h = prod.is_harmonic();
    let k = k_poly(f, big_f);
    let scale = f.h.max_abs() * big_f.g.max_abs() + big_f.h.max_abs() * f.g.max_abs();
    let nonconstant = k
        .rows()
        .iter()
        .enumerate()
        .flat_map(|(j, r)| r.iter().enumerate().map(move |(kk, x)| ((j, kk), x.norm())))
        .filter(|&(idx, _)| idx != (0, 0))
        .map(|(_, v)| v)
        .fold(0.0, f64::max);
    let k_constant = scale == 0.0 || nonconstant <= IDENTITY_TOL * scale;
    ProductVerdict {
        harmonic: h.harmonic,
        mixed_residual: h.residual,
        k_constant,
        k_poly: k,
    }
}

/// Relative size of `g' H' + G' h'`, the cross-multiplied form of `w_f + w_F`.
pub fn dilatation_negation_residual(f: &HarmonicFn, big_f: &HarmonicFn) -> Result<f64> {
    let (dh, dg) = (f.h.derivative(), f.g.derivative());
    let (d_bh, d_bg) = (big_f.h.derivative(), big_f.g.derivative());
    if dh.is_zero() || d_bh.is_zero() {
        return Err(Error::ConstantAnalyticPart);
    }
    let sum = &(&dg * &d_bh) + &(&d_bg * &dh);
    let scale = dg.max_abs() * d_bh.max_abs() + d_bg.max_abs() * dh.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(sum.max_abs() / scale)
}

/// `w_f == -w_F` as a polynomial identity.
pub fn dilatation_negation_check(f: &HarmonicFn, big_f: &HarmonicFn) -> Result<bool> {
    Ok(dilatation_negation_residual(f, big_f)? <= IDENTITY_TOL)
}

/// `h^2 - h conj(g) + conj(g)^2`, which multiplies `f` to `h^3 + conj(g)^3`
/// while itself not being harmonic in general.
pub fn sum_of_cubes_cofactor(f: &HarmonicFn) -> MixedPoly {
    let hh = HarmonicFn::analytic(&f.h * &f.h).embed();
    let gg = HarmonicFn::new(AnalyticPoly::zero(), &f.g * &f.g).embed();
    let hg = HarmonicFn::analytic(f.h.clone())
        .embed()
        .multiply(&HarmonicFn::new(AnalyticPoly::zero(), f.g.clone()).embed());
    hh.add(&gg).add(&hg.scale(Complex64::new(-1.0, 0.0)))
}
