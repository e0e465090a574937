//! Seeded randomized checks of the zero-count bounds.
//!
//! Trial `i` draws from its own ChaCha stream (`seed`, stream `i`), so the
//! summary does not depend on how trials are scheduled across threads.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::HarmonicFn;
use crate::poly::AnalyticPoly;
use crate::product::Alpha;
use crate::zeros::{product_zeros, ProductZeros};

const MIN_LEADING: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub deg_h: usize,
    pub deg_g: usize,
    pub coeff_box: f64,
    pub tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { seed: 0, trials: 100, deg_h: 3, deg_g: 1, coeff_box: 1.0, tol: 1e-10 }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidInput(m.to_string()));
        if self.trials == 0 {
            return fail("trials must be at least 1");
        }
        if self.deg_h == 0 {
            return fail("deg_h must be at least 1");
        }
        if self.deg_g >= self.deg_h {
            return fail("deg_g must be smaller than deg_h");
        }
        if !(self.coeff_box > 0.0 && self.coeff_box.is_finite()) {
            return fail("coeff_box must be positive and finite");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return fail("tol must be positive and finite");
        }
        if self.coeff_box < MIN_LEADING {
            return fail("coeff_box must be at least 0.1 so leading coefficients can be drawn");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedTrial {
    pub trial: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub trials_run: usize,
    /// Trials where `f`, its cofactor or the product exceeded its bound.
    pub bound_violations: usize,
    /// Largest zero count (with multiplicity) of `f`.
    pub max_zero_count: u64,
    pub mean_zero_count: f64,
    pub product_max_zero_count: u64,
    pub product_mean_zero_count: f64,
    /// Trials where the product's zeros were not the union of the factors'.
    pub union_failures: usize,
    pub degenerate_skips: usize,
    pub skipped: Vec<SkippedTrial>,
    /// Seconds; kept out of the serialized summary so it stays reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

fn coefficient(rng: &mut ChaCha8Rng, b: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-b..=b), rng.gen_range(-b..=b))
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize, b: f64) -> AnalyticPoly {
    let mut coeffs: Vec<Complex64> = (0..degree).map(|_| coefficient(rng, b)).collect();
    let lead = loop {
        let c = coefficient(rng, b);
        if c.norm() >= MIN_LEADING {
            break c;
        }
    };
    coeffs.push(lead);
    AnalyticPoly::new(coeffs)
}

/// Draws `f = h + conj(g)` with exact degrees and coefficients in the box
/// `[-b, b]^2`; both leading coefficients have modulus at least 0.1.
pub fn random_harmonic(rng: &mut ChaCha8Rng, deg_h: usize, deg_g: usize, b: f64) -> HarmonicFn {
    HarmonicFn::new(random_poly(rng, deg_h, b), random_poly(rng, deg_g, b))
}

/// The RNG for trial `trial` of an experiment seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Draws the inputs of one trial: the function and a real scale in
/// `[0.5, 2]` with random sign.
pub fn trial_input(cfg: &ExperimentConfig, trial: usize) -> (HarmonicFn, Alpha) {
    let mut rng = trial_rng(cfg.seed, trial);
    let f = random_harmonic(&mut rng, cfg.deg_h, cfg.deg_g, cfg.coeff_box);
    let magnitude: f64 = rng.gen_range(0.5..=2.0);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    (f, Alpha::new(sign * magnitude).expect("nonzero"))
}

fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<ProductZeros> {
    let (f, a) = trial_input(cfg, trial);
    product_zeros(&f, a, cfg.tol)
}

/// Runs the experiment on at most `threads` worker threads (all available
/// cores when `None`).
pub fn run_experiment(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<ProductZeros>> =
        pool.install(|| (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).collect());

    let mut summary = ExperimentSummary {
        trials_run: 0,
        bound_violations: 0,
        max_zero_count: 0,
        mean_zero_count: 0.0,
        product_max_zero_count: 0,
        product_mean_zero_count: 0.0,
        union_failures: 0,
        degenerate_skips: 0,
        skipped: Vec::new(),
        wall_time: 0.0,
    };
    let (mut sum_f, mut sum_p) = (0u64, 0u64);
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(pz) => {
                summary.trials_run += 1;
                if !(pz.f.within_bound && pz.cofactor.within_bound && pz.product.within_bound) {
                    summary.bound_violations += 1;
                    log::error!("trial {trial}: zero count exceeds its bound");
                }
                if !pz.union_holds {
                    summary.union_failures += 1;
                    log::warn!("trial {trial}: product zeros differ from the union of factor zeros");
                }
                summary.max_zero_count = summary.max_zero_count.max(pz.f.count_with_multiplicity);
                summary.product_max_zero_count =
                    summary.product_max_zero_count.max(pz.product.count_with_multiplicity);
                sum_f += pz.f.count_with_multiplicity;
                sum_p += pz.product.count_with_multiplicity;
            }
            Err(e) => {
                log::warn!("trial {trial} skipped: {e}");
                summary.degenerate_skips += 1;
                summary.skipped.push(SkippedTrial { trial, reason: e.to_string() });
            }
        }
    }
    if summary.trials_run > 0 {
        summary.mean_zero_count = sum_f as f64 / summary.trials_run as f64;
        summary.product_mean_zero_count = sum_p as f64 / summary.trials_run as f64;
    }
    summary.wall_time = start.elapsed().as_secs_f64();
    Ok(summary)
}
