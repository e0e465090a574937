use std::time::Instant;

use hpk_core::dirichlet::{self, BoundaryData, TraceSample};
use hpk_core::product;
use hpk_core::zeros;
use hpk_core::{Complex64, ExperimentConfig, HarmonicFn};
use serde_json::{json, Value};

use crate::input::{alpha_arg, json_arg, write_csv};
use crate::{Command, Failure};

const INTERIOR_GRID: usize = 32;

pub fn run(cmd: Command) -> Result<Value, Failure> {
    match cmd {
        Command::CheckProduct { f, big_f } => {
            let f: HarmonicFn = json_arg("f", &f)?;
            let big_f: HarmonicFn = json_arg("F", &big_f)?;
            Ok(to_value(&product::product_is_harmonic(&f, &big_f)))
        }
        Command::Cofactor { f, alpha } => {
            let f: HarmonicFn = json_arg("f", &f)?;
            let a = alpha_arg(&alpha)?;
            let big_f = product::cofactor(&f, a)?;
            let prod = product::harmonic_product(&f, a)?;
            Ok(json!({ "F": big_f, "fF": prod }))
        }
        Command::Dilatation { f } => {
            let f: HarmonicFn = json_arg("f", &f)?;
            Ok(to_value(&f.dilatation()?))
        }
        Command::SquareCheck { f } => {
            let f: HarmonicFn = json_arg("f", &f)?;
            Ok(to_value(&product::square_is_harmonic(&f)))
        }
        Command::Dirichlet { boundary, alpha, nodes, samples, grid_dump, trace_csv, product_trace_csv } => {
            let b: BoundaryData = json_arg("boundary", &boundary)?;
            let a = alpha_arg(&alpha)?;
            let (nodes, samples) = (nodes as usize, samples as usize);
            let sol = dirichlet::solve_dirichlet(&b);
            let audit = dirichlet::audit_boundary_claims(&b, a, samples)?;
            let interior = dirichlet::cofactor_interior_identity(&b, a, INTERIOR_GRID)?;
            let poisson = poisson_check(&b, &sol.f, nodes)?;
            if let Some(path) = grid_dump {
                let rows = dirichlet::polar_grid(&sol.f, INTERIOR_GRID, INTERIOR_GRID)
                    .into_iter()
                    .map(|(r, t, v)| vec![num(r), num(t), num(v.re), num(v.im)]);
                write_csv(path, &["r", "theta", "re", "im"], rows)?;
            }
            if let Some(path) = trace_csv {
                write_trace(path, dirichlet::cofactor_trace_samples(&b, a, samples))?;
            }
            if let Some(path) = product_trace_csv {
                write_trace(path, dirichlet::product_trace_samples(&b, a, samples))?;
            }
            Ok(json!({
                "h": sol.f.h,
                "g": sol.f.g,
                "G1": sol.g1,
                "G2": sol.g2,
                "audit": audit,
                "interior_identity": interior,
                "poisson_check": poisson,
            }))
        }
        Command::Zeros { f, tol, csv } => {
            let f: HarmonicFn = json_arg("f", &f)?;
            check_tol(tol)?;
            let report = zeros::find_zeros(&f, tol)?;
            if let Some(path) = csv {
                let rows = report.zeros.iter().map(|z| {
                    vec![
                        num(z.location.re),
                        num(z.location.im),
                        z.index.to_string(),
                        z.orientation.as_str().to_string(),
                        num(z.residual),
                    ]
                });
                write_csv(path, &["re", "im", "index", "orientation", "residual"], rows)?;
            }
            Ok(to_value(&report))
        }
        Command::ProductZeros { f, alpha, tol } => {
            let f: HarmonicFn = json_arg("f", &f)?;
            let a = alpha_arg(&alpha)?;
            check_tol(tol)?;
            Ok(to_value(&zeros::product_zeros(&f, a, tol)?))
        }
        Command::Experiment { seed, trials, deg_h, deg_g, coeff_box, tol } => {
            let cfg = ExperimentConfig {
                seed,
                trials: trials as usize,
                deg_h: deg_h as usize,
                deg_g: deg_g as usize,
                coeff_box,
                tol,
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let threads = match std::env::var("HPK_THREADS") {
                Ok(s) => match s.trim().parse::<usize>() {
                    Ok(n) if n > 0 => Some(n),
                    _ => return Err(Failure::Usage(format!("HPK_THREADS must be a positive integer, got {s:?}"))),
                },
                Err(_) => None,
            };
            let start = Instant::now();
            let summary = hpk_core::experiment::run_experiment(&cfg, threads)?;
            eprintln!("wall_time: {:.3}s", start.elapsed().as_secs_f64());
            Ok(to_value(&summary))
        }
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("tol must be positive and finite, got {tol}")))
    }
}

/// Largest gap between the Poisson integral and the closed-form extension on
/// a fixed set of interior points.
fn poisson_check(b: &BoundaryData, f: &HarmonicFn, nodes: usize) -> Result<Value, Failure> {
    let mut worst = (0.0_f64, Complex64::default());
    for i in 1..=8 {
        let r = 0.1 * i as f64;
        for j in 0..16 {
            let z = Complex64::from_polar(r, j as f64 * std::f64::consts::TAU / 16.0);
            let d = (dirichlet::poisson_eval(b, z, nodes)? - f.eval(z)).norm();
            if d > worst.0 {
                worst = (d, z);
            }
        }
    }
    Ok(json!({ "max_deviation": worst.0, "at": worst.1, "nodes": nodes, "points": 128 }))
}

fn write_trace(path: String, rows: Vec<TraceSample>) -> Result<(), Failure> {
    let rows = rows.into_iter().map(|s| {
        vec![num(s.theta), num(s.actual.re), num(s.actual.im), num(s.claimed.re), num(s.claimed.im)]
    });
    write_csv(path, &["theta", "actual_re", "actual_im", "claimed_re", "claimed_im"], rows)?;
    Ok(())
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable output")
}
