//! Zero isolation checked against an independent grid-seeded Newton oracle.

use std::f64::consts::PI;

use hpk_core::experiment::{random_harmonic, trial_rng};
use hpk_core::zeros::{find_zeros, product_zeros, residual_allowance, winding_harmonic, zero_search_radius};
use hpk_core::{Alpha, AnalyticPoly, Complex64, Contour, HarmonicFn, Orientation};

fn f(h: &[f64], g: &[f64]) -> HarmonicFn {
    HarmonicFn::new(AnalyticPoly::from_real(h), AnalyticPoly::from_real(g))
}

fn eval_direct(h: &[Complex64], g: &[Complex64], z: Complex64) -> (Complex64, Complex64, Complex64) {
    let mut v = Complex64::default();
    let mut dh = Complex64::default();
    let mut dg = Complex64::default();
    for (k, c) in h.iter().enumerate() {
        v += c * z.powu(k as u32);
        if k > 0 {
            dh += c * (k as f64) * z.powu(k as u32 - 1);
        }
    }
    let mut gv = Complex64::default();
    for (k, c) in g.iter().enumerate() {
        gv += c * z.powu(k as u32);
        if k > 0 {
            dg += c * (k as f64) * z.powu(k as u32 - 1);
        }
    }
    (v + gv.conj(), dh, dg)
}

/// Plain Newton from every node of a square grid, deduplicated. Finds simple
/// zeros only.
fn grid_newton_oracle(f: &HarmonicFn, radius: f64, n: usize) -> Vec<Complex64> {
    let (h, g) = (f.h.coeffs(), f.g.coeffs());
    let mut found: Vec<Complex64> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut z = Complex64::new(
                -radius + 2.0 * radius * (i as f64 + 0.5) / n as f64,
                -radius + 2.0 * radius * (j as f64 + 0.5) / n as f64,
            );
            for _ in 0..100 {
                let (v, a, b) = eval_direct(h, g, z);
                let jac = a.norm_sqr() - b.norm_sqr();
                if jac.abs() < 1e-300 {
                    break;
                }
                let step = (-v * a.conj() + b.conj() * v.conj()) / jac;
                z += step;
                if step.norm() < 1e-15 || z.norm() > 10.0 * radius {
                    break;
                }
            }
            if eval_direct(h, g, z).0.norm() < 1e-11 && !found.iter().any(|w| (w - z).norm() < 1e-7) {
                found.push(z);
            }
        }
    }
    found
}

fn has_zero_near(report: &hpk_core::ZeroReport, z: Complex64, tol: f64) -> Option<i64> {
    report.zeros.iter().find(|w| (w.location - z).norm() <= tol).map(|w| w.index)
}

#[test]
fn z_squared_plus_zbar() {
    let fz = f(&[0.0, 0.0, 1.0], &[0.0, 1.0]);
    let r = find_zeros(&fz, 1e-10).unwrap();
    assert_eq!(r.distinct_count, 4);
    let third = Complex64::from_polar(1.0, PI / 3.0);
    let expected = [
        (Complex64::new(0.0, 0.0), -1),
        (Complex64::new(-1.0, 0.0), 1),
        (third, 1),
        (third.conj(), 1),
    ];
    for (z, idx) in expected {
        assert_eq!(has_zero_near(&r, z, 1e-9), Some(idx), "zero {z}");
    }
    assert_eq!(r.count_with_multiplicity, 4);
    assert_eq!(r.index_sum, 2);
    assert_eq!(r.bound, 4);
    assert!(r.within_bound);
}

#[test]
fn oracle_agrees_on_random_inputs() {
    let mut rng = trial_rng(2024, 0);
    for trial in 0..40 {
        let n = 2 + trial % 4;
        let m = trial % n;
        let fz = random_harmonic(&mut rng, n, m, 1.0);
        let r = find_zeros(&fz, 1e-10).unwrap();
        let radius = zero_search_radius(&fz).unwrap();
        let oracle = grid_newton_oracle(&fz, radius, 60);
        for z in &oracle {
            assert!(has_zero_near(&r, *z, 1e-8).is_some(), "trial {trial}: oracle zero {z} missing");
        }
        // every nonsingular reported zero is a simple zero the oracle can reach
        for z in &r.zeros {
            if z.orientation != Orientation::Singular && z.index.abs() == 1 {
                assert!(oracle.iter().any(|w| (w - z.location).norm() < 1e-8), "trial {trial}: extra zero {:?}", z);
            }
        }
    }
}

#[test]
fn product_zeros_of_z4_minus_zbar2() {
    let fz = f(&[0.0, 0.0, 1.0], &[0.0, 1.0]);
    let pz = product_zeros(&fz, Alpha::new(1.0).unwrap(), 1e-10).unwrap();
    assert_eq!(pz.f.count_with_multiplicity, 4);
    assert_eq!(pz.cofactor.count_with_multiplicity, 4);
    for z in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, 2.0 * PI / 3.0)] {
        assert!(has_zero_near(&pz.cofactor, z, 1e-9).is_some());
    }
    let p = &pz.product;
    assert_eq!(p.distinct_count, 7);
    assert_eq!(has_zero_near(p, Complex64::new(0.0, 0.0), 1e-9), Some(-2));
    for k in 0..6 {
        let w = Complex64::from_polar(1.0, PI * k as f64 / 3.0);
        assert_eq!(has_zero_near(p, w, 1e-9), Some(1));
    }
    assert_eq!(p.count_with_multiplicity, 8);
    assert_eq!(p.bound, 8);
    assert_eq!(p.index_sum, 4);
    assert!(pz.union_holds);
    assert!(pz.union_max_distance <= 1e-9);
}

#[test]
fn product_zeros_analytic_case() {
    let pz = product_zeros(&f(&[0.0, 1.0], &[]), Alpha::new(1.0).unwrap(), 1e-10).unwrap();
    assert_eq!(pz.product.distinct_count, 1);
    assert_eq!(pz.product.zeros[0].index, 2);
    assert_eq!(pz.product.count_with_multiplicity, 2);
    assert!(pz.union_holds);
}

#[test]
fn scaling_alpha_moves_no_zeros() {
    let fz = f(&[0.0, 0.0, 1.0], &[0.0, 1.0]);
    let a = product_zeros(&fz, Alpha::new(1.0).unwrap(), 1e-10).unwrap();
    let b = product_zeros(&fz, Alpha::new(-2.0).unwrap(), 1e-10).unwrap();
    assert_eq!(a.product.distinct_count, b.product.distinct_count);
    for (x, y) in a.product.zeros.iter().zip(&b.product.zeros) {
        assert!((x.location - y.location).norm() < 1e-9);
        assert_eq!(x.index, y.index);
    }
}

#[test]
fn index_sum_equals_degree_and_outer_winding() {
    let mut rng = trial_rng(11, 1);
    for trial in 0..60 {
        let n = 2 + trial % 5;
        let fz = random_harmonic(&mut rng, n, trial % n, 1.0);
        let r = find_zeros(&fz, 1e-10).unwrap();
        let outer = winding_harmonic(&fz, &Contour::circle(Complex64::default(), r.search_radius), 64).unwrap();
        assert_eq!(r.index_sum, n as i64);
        assert_eq!(outer, n as i64);
        let scale = 1.0 + fz.h.l1_norm() + fz.g.l1_norm();
        for z in &r.zeros {
            assert!(z.residual <= residual_allowance(&fz, z.location, 1e-10));
            if z.location.norm() <= 1.0 {
                assert!(z.residual <= 1e-10 * scale, "residual {}", z.residual);
            }
            match z.orientation {
                Orientation::SensePreserving => assert!(z.index > 0),
                Orientation::SenseReversing => assert!(z.index < 0),
                Orientation::Singular => {}
            }
        }
    }
}
