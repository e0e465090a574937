//! Harmonic functions `f = h + conj(g)` with polynomial parts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed::MixedPoly;
use crate::poly::{AnalyticPoly, RationalFn};
use crate::tol::SINGULAR_TOL;

/// `f(z) = h(z) + conj(g(z))`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HarmonicFn {
    pub h: AnalyticPoly,
    pub g: AnalyticPoly,
}

/// Local orientation of a harmonic map, from the sign of its Jacobian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "preserving")]
    SensePreserving,
    #[serde(rename = "reversing")]
    SenseReversing,
    #[serde(rename = "singular")]
    Singular,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::SensePreserving => "preserving",
            Orientation::SenseReversing => "reversing",
            Orientation::Singular => "singular",
        }
    }
}

impl HarmonicFn {
    pub fn new(h: AnalyticPoly, g: AnalyticPoly) -> Self {
        HarmonicFn { h, g }
    }

    pub fn analytic(h: AnalyticPoly) -> Self {
        HarmonicFn { h, g: AnalyticPoly::zero() }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.h.eval(z) + self.g.eval(z).conj()
    }

    pub fn embed(&self) -> MixedPoly {
        MixedPoly::embed(self)
    }

    /// Both parts constant.
    pub fn is_constant(&self) -> bool {
        self.h.is_constant() && self.g.is_constant()
    }

    /// Sum of coefficient magnitudes of both parts.
    pub fn l1_norm(&self) -> f64 {
        self.h.l1_norm() + self.g.l1_norm()
    }

    /// `|h'(z)|^2 - |g'(z)|^2`
    pub fn jacobian(&self, z: Complex64) -> f64 {
        let (dh, dg) = (self.h.derivative().eval(z), self.g.derivative().eval(z));
        dh.norm_sqr() - dg.norm_sqr()
    }

    /// Sign of the Jacobian with a scale-aware dead zone
    /// `|J| <= 1e-12 (1 + |h'|^2 + |g'|^2)`.
    pub fn classify_orientation(&self, z: Complex64) -> Orientation {
        let dh = self.h.derivative().eval(z).norm_sqr();
        let dg = self.g.derivative().eval(z).norm_sqr();
        orientation_from_parts(dh, dg)
    }

    /// `g' / h'`, unreduced.
    pub fn dilatation(&self) -> Result<RationalFn> {
        let dh = self.h.derivative();
        if dh.is_zero() {
            return Err(Error::ConstantAnalyticPart);
        }
        RationalFn::new(self.g.derivative(), dh)
    }
}

pub(crate) fn orientation_from_parts(dh_sq: f64, dg_sq: f64) -> Orientation {
    let j = dh_sq - dg_sq;
    let tol = SINGULAR_TOL * (1.0 + dh_sq + dg_sq);
    if j > tol {
        Orientation::SensePreserving
    } else if j < -tol {
        Orientation::SenseReversing
    } else {
        Orientation::Singular
    }
}
