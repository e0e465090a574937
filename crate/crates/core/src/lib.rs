//! Computation with complex-valued harmonic polynomials `f = h + conj(g)`.
//!
//! - [`poly`], [`mixed`], [`harmonic`]: polynomial algebra in `z` and `conj(z)`
//!   with Wirtinger derivatives, Jacobian, orientation and dilatation.
//! - [`product`]: harmonic products `fF` and their cofactors.
//! - [`dirichlet`]: Herglotz and Poisson transforms of trigonometric boundary
//!   data on the unit disk, plus boundary-trace audits.
//! - [`zeros`]: winding-number zero isolation with Newton refinement and
//!   zero-count bound checks.
//! - [`experiment`]: seeded randomized bound experiments.

pub mod dirichlet;
pub mod error;
pub mod experiment;
pub mod harmonic;
pub mod mixed;
pub mod poly;
pub mod product;
pub mod tol;
pub mod zeros;

pub use num_complex::Complex64;

pub use dirichlet::{BoundaryData, RealTrigPoly, TraceReport};
pub use error::{Error, Result};
pub use experiment::{ExperimentConfig, ExperimentSummary};
pub use harmonic::{HarmonicFn, Orientation};
pub use mixed::{Harmonicity, MixedPoly};
pub use poly::{AnalyticPoly, RationalFn};
pub use product::{Alpha, ProductVerdict};
pub use zeros::{Contour, Zero, ZeroReport};
