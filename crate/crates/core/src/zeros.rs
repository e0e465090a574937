//! Zeros of harmonic polynomials `f = h + conj(g)` with `deg h > deg g`.
//!
//! The search square around `|z| < R` is subdivided as a quadtree. A box is
//! discarded when a Taylor bound at its center proves `f != 0` on the box. A
//! box is accepted as a single-zero candidate when the real derivative of `f`
//! varies little enough over it that `f` is injective there; a simplified
//! Newton iteration then converges to its zero if it has one. Boxes that reach
//! the minimum size without either certificate (neighbourhoods of singular
//! zeros) are grouped into clusters. Every zero's index is the winding number
//! of `f` on a small circle around it, and the index sum is checked against
//! the winding on the outer circle.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonic::{HarmonicFn, Orientation};
use crate::mixed::MixedPoly;
use crate::product::{cofactor_formula, product_formula, Alpha};

/// Closed curve used for argument-principle counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contour {
    Circle { center: Complex64, radius: f64 },
    /// Axis-aligned rectangle given by its lower-left and upper-right corners.
    Rect { min: Complex64, max: Complex64 },
}

impl Contour {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        Contour::Circle { center, radius }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Contour::Circle { radius, .. } => radius > 0.0 && radius.is_finite(),
            Contour::Rect { min, max } => max.re > min.re && max.im > min.im,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("contour has empty interior".into()))
        }
    }

    /// Counterclockwise parametrization over `t` in `[0, 1]`.
    fn point(&self, t: f64) -> Complex64 {
        match *self {
            Contour::Circle { center, radius } => center + Complex64::from_polar(radius, TAU * t),
            Contour::Rect { min, max } => {
                let s = 4.0 * t.clamp(0.0, 1.0);
                let (w, h) = (max.re - min.re, max.im - min.im);
                match s {
                    s if s < 1.0 => Complex64::new(min.re + w * s, min.im),
                    s if s < 2.0 => Complex64::new(max.re, min.im + h * (s - 1.0)),
                    s if s < 3.0 => Complex64::new(max.re - w * (s - 2.0), max.im),
                    s => Complex64::new(min.re, max.im - h * (s - 3.0)),
                }
            }
        }
    }
}

/// A located zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    #[serde(rename = "z")]
    pub location: Complex64,
    pub index: i64,
    pub orientation: Orientation,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub zeros: Vec<Zero>,
    #[serde(rename = "distinct")]
    pub distinct_count: usize,
    /// Sum of `|index|`.
    #[serde(rename = "with_multiplicity")]
    pub count_with_multiplicity: u64,
    pub index_sum: i64,
    pub bound: u64,
    pub within_bound: bool,
    #[serde(default)]
    pub search_radius: f64,
}

impl ZeroReport {
    fn from_zeros(zeros: Vec<Zero>, bound: u64, search_radius: f64) -> Self {
        let count: u64 = zeros.iter().map(|z| z.index.unsigned_abs()).sum();
        ZeroReport {
            distinct_count: zeros.len(),
            count_with_multiplicity: count,
            index_sum: zeros.iter().map(|z| z.index).sum(),
            bound,
            within_bound: count <= bound,
            search_radius,
            zeros,
        }
    }

    fn with_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self.within_bound = self.count_with_multiplicity <= bound;
        self
    }
}

/// `count_with_multiplicity <= bound`.
pub fn check_bound(report: &ZeroReport) -> bool {
    report.count_with_multiplicity <= report.bound
}

fn check_degrees(f: &HarmonicFn) -> Result<usize> {
    let (deg_h, deg_g) = (f.h.degree(), f.g.degree());
    match deg_h {
        Some(n) if deg_g.is_none_or(|m| m < n) => Ok(n),
        _ => Err(Error::DegenerateDegrees { deg_h, deg_g }),
    }
}

/// Radius outside of which the leading term of `h` dominates everything else:
/// `1 + (sum of the other coefficients of h and all of g) / |lead h|`.
pub fn zero_search_radius(f: &HarmonicFn) -> Result<f64> {
    check_degrees(f)?;
    let lead = f.h.leading().expect("checked nonzero").norm();
    let rest = f.h.l1_norm() - lead + f.g.l1_norm();
    Ok(1.0 + rest.max(0.0) / lead)
}

/// Relative magnitude below which a contour sample counts as hitting a zero.
const NEAR_ZERO: f64 = 1e-14;
const MAX_BISECTIONS: u32 = 40;

/// Winding number of an arbitrary function along a contour.
///
/// `scale` bounds the size of the terms summed to get `eval(z)`, so a sample
/// with `|eval| <= NEAR_ZERO * scale` is indistinguishable from a zero.
fn winding_with(
    eval: impl Fn(Complex64) -> Complex64,
    scale: impl Fn(Complex64) -> f64,
    contour: &Contour,
    min_samples: usize,
) -> Result<i64> {
    contour.validate()?;
    let sample = |t: f64| -> Result<Complex64> {
        let z = contour.point(t);
        let v = eval(z);
        if v.norm() <= NEAR_ZERO * scale(z) || !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NearZeroOnContour);
        }
        Ok(v)
    };
    let n = min_samples.max(8);
    let first = sample(0.0)?;
    let mut total = 0.0;
    let mut prev = (0.0, first);
    for i in 1..=n {
        let t = i as f64 / n as f64;
        let v = if i == n { first } else { sample(t)? };
        // explicit stack of pending segments, processed left to right
        let mut stack = vec![(prev.0, prev.1, t, v, 0u32)];
        while let Some((t0, v0, t1, v1, depth)) = stack.pop() {
            let step = (v1 / v0).arg();
            if step.abs() < FRAC_PI_2 {
                total += step;
                continue;
            }
            if depth >= MAX_BISECTIONS {
                return Err(Error::NearZeroOnContour);
            }
            let tm = 0.5 * (t0 + t1);
            let vm = sample(tm)?;
            stack.push((tm, vm, t1, v1, depth + 1));
            stack.push((t0, v0, tm, vm, depth + 1));
        }
        prev = (t, v);
    }
    let turns = total / TAU;
    Ok(turns.round() as i64)
}

/// Winding number of a mixed polynomial along a contour, refining the sampling
/// until every phase step is below a quarter turn.
pub fn winding(a: &MixedPoly, contour: &Contour, min_samples: usize) -> Result<i64> {
    winding_with(|z| a.eval(z), |z| a.abs_eval(z), contour, min_samples)
}

/// Winding number of a harmonic function along a contour.
pub fn winding_harmonic(f: &HarmonicFn, contour: &Contour, min_samples: usize) -> Result<i64> {
    winding_with(
        |z| f.eval(z),
        |z| f.h.abs_eval(z) + f.g.abs_eval(z),
        contour,
        min_samples,
    )
}

const NEWTON_MAX_ITER: usize = 200;
const NEWTON_HALVINGS: usize = 20;
const POLISH_ITER: usize = 60;
const SIMPLIFIED_NEWTON_ITER: usize = 100;
const MIN_BOX_REL: f64 = 1e-8;
const BOX_BUDGET: usize = 4_000_000;
const INFLATE: f64 = 1.0 + 1.0 / 64.0;
const INFLATE_TRIES: usize = 8;

#[derive(Debug, Clone, Copy)]
struct Square {
    center: Complex64,
    half: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    location: Complex64,
    /// Radius of uncertainty around `location` (zero for certified zeros).
    radius: f64,
    residual: f64,
}

struct Finder<'a> {
    f: &'a HarmonicFn,
    dh: crate::poly::AnalyticPoly,
    dg: crate::poly::AnalyticPoly,
    tol: f64,
    radius: f64,
}

/// Residual allowed at `z`: `tol * (1 + sum |c_k| |z|^k)`, which is
/// `tol * (1 + sum |c_k|)` on the closed unit disk and grows with the size of
/// the terms (and of their rounding error) outside it.
pub fn residual_allowance(f: &HarmonicFn, z: Complex64, tol: f64) -> f64 {
    let r = z.norm().max(1.0);
    let at = Complex64::new(r, 0.0);
    tol * (1.0 + f.h.abs_eval(at) + f.g.abs_eval(at))
}

enum BoxClass {
    Excluded,
    Injective,
    Undecided,
}

impl<'a> Finder<'a> {
    fn new(f: &'a HarmonicFn, tol: f64, radius: f64) -> Self {
        Finder {
            f,
            dh: f.h.derivative(),
            dg: f.g.derivative(),
            tol,
            radius,
        }
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.f.eval(z)
    }

    fn allowance(&self, z: Complex64) -> f64 {
        residual_allowance(self.f, z, self.tol)
    }

    fn magnitude_scale(&self, z: Complex64) -> f64 {
        self.f.h.abs_eval(z) + self.f.g.abs_eval(z)
    }

    fn classify(&self, sq: &Square) -> BoxClass {
        let c = sq.center;
        let rho = sq.half * std::f64::consts::SQRT_2;
        let ta = self.f.h.taylor_at(c);
        let tb = self.f.g.taylor_at(c);
        let at = |v: &[Complex64], k: usize| v.get(k).map_or(0.0, |x| x.norm());
        let terms = ta.len().max(tb.len());
        let fc = ta.first().copied().unwrap_or_default() + tb.first().copied().unwrap_or_default().conj();

        // |f(c + w) - f(c)| <= sum_{k>=1} (|a_k| + |b_k|) rho^k on the disk |w| <= rho
        let mut variation = 0.0;
        let mut p = 1.0;
        for k in 1..terms {
            p *= rho;
            variation += (at(&ta, k) + at(&tb, k)) * p;
        }
        let rounding = 64.0 * f64::EPSILON * terms as f64 * self.magnitude_scale(c);
        if fc.norm() > variation + rounding {
            return BoxClass::Excluded;
        }

        // injectivity on the disk |w| <= 2 rho: the derivative moves by less
        // than half its smallest singular value ||h'(c)| - |g'(c)||
        let sigma = (at(&ta, 1) - at(&tb, 1)).abs();
        let r = 2.0 * rho;
        let mut drift = 0.0;
        let mut p = 1.0;
        for k in 2..terms {
            drift += k as f64 * (at(&ta, k) + at(&tb, k)) * p * r;
            p *= r;
        }
        if sigma > 0.0 && drift <= 0.5 * sigma {
            BoxClass::Injective
        } else {
            BoxClass::Undecided
        }
    }

    /// Newton step for the real 2x2 system, solved in complex form:
    /// `h' d + conj(g') conj(d) = -f`.
    fn newton_step(fz: Complex64, a: Complex64, b: Complex64) -> Option<Complex64> {
        let jac = a.norm_sqr() - b.norm_sqr();
        if jac == 0.0 || !jac.is_finite() {
            return None;
        }
        Some((-fz * a.conj() + b.conj() * fz.conj()) / jac)
    }

    /// Damped Newton: halve the step while the residual grows.
    fn newton(&self, z0: Complex64) -> (Complex64, f64) {
        let mut z = z0;
        let mut fz = self.eval(z);
        let mut res = fz.norm();
        let mut converged = false;
        let mut polish = 0;
        for _ in 0..NEWTON_MAX_ITER {
            if res == 0.0 {
                break;
            }
            let Some(mut step) = Self::newton_step(fz, self.dh.eval(z), self.dg.eval(z)) else {
                break;
            };
            let mut accepted = None;
            for _ in 0..=NEWTON_HALVINGS {
                let zn = z + step;
                let fzn = self.eval(zn);
                if fzn.norm() < res || (converged && fzn.norm() <= res) {
                    accepted = Some((zn, fzn));
                    break;
                }
                step *= 0.5;
            }
            let Some((zn, fzn)) = accepted else {
                break;
            };
            let improved = fzn.norm() < res;
            z = zn;
            fz = fzn;
            res = fz.norm();
            if !converged && step.norm() < self.tol * zn.norm().max(1.0) && res < self.allowance(zn) {
                converged = true;
            }
            if converged {
                polish += 1;
                if polish > POLISH_ITER || !improved {
                    break;
                }
            }
        }
        (z, res)
    }

    /// Fixed-derivative Newton from the box center; converges to the unique
    /// zero in an injective box if there is one.
    fn simplified_newton(&self, sq: &Square) -> Option<Complex64> {
        let c = sq.center;
        let limit = 2.0 * sq.half * std::f64::consts::SQRT_2;
        let a = self.dh.eval(c);
        let b = self.dg.eval(c);
        let mut z = c;
        for _ in 0..SIMPLIFIED_NEWTON_ITER {
            let step = Self::newton_step(self.eval(z), a, b)?;
            z += step;
            if (z - c).norm() > limit {
                return None;
            }
            if step.norm() <= 1e-3 * self.tol {
                break;
            }
        }
        Some(z)
    }

    fn search(&self) -> Result<(Vec<Candidate>, Vec<Square>)> {
        // slightly off-center so that symmetric zeros avoid box edges
        let offset = Complex64::new(0.0123 * self.radius, -0.0071 * self.radius);
        let root = Square { center: offset, half: 1.05 * self.radius };
        let min_half = 0.5 * MIN_BOX_REL * self.radius;
        let mut stack = vec![root];
        let mut certified = Vec::new();
        let mut small = Vec::new();
        let mut visited = 0usize;
        while let Some(sq) = stack.pop() {
            visited += 1;
            if visited > BOX_BUDGET {
                return Err(Error::NonIsolatedZeros("subdivision budget exhausted".into()));
            }
            match self.classify(&sq) {
                BoxClass::Excluded => {}
                BoxClass::Injective => {
                    if let Some(z0) = self.simplified_newton(&sq) {
                        let (z, residual) = self.newton(z0);
                        let inside = (z - sq.center).norm() <= 2.0 * sq.half * std::f64::consts::SQRT_2;
                        if inside && residual <= self.allowance(z) {
                            certified.push(Candidate { location: z, radius: 0.0, residual });
                        }
                    }
                }
                BoxClass::Undecided if sq.half <= min_half => small.push(sq),
                BoxClass::Undecided => {
                    let q = 0.5 * sq.half;
                    for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                        stack.push(Square { center: sq.center + Complex64::new(dx * q, dy * q), half: q });
                    }
                }
            }
        }
        Ok((certified, small))
    }

    /// Groups touching minimum-size boxes and refines one location per group.
    fn clusters(&self, small: &[Square]) -> Vec<Candidate> {
        let mut uf = UnionFind::new(small.len());
        for i in 0..small.len() {
            for j in i + 1..small.len() {
                let d = small[i].center - small[j].center;
                let reach = 1.01 * (small[i].half + small[j].half);
                if d.re.abs() <= reach && d.im.abs() <= reach {
                    uf.union(i, j);
                }
            }
        }
        uf.groups()
            .into_iter()
            .map(|members| {
                let best = members
                    .iter()
                    .map(|&i| small[i].center)
                    .min_by(|a, b| self.eval(*a).norm().total_cmp(&self.eval(*b).norm()))
                    .expect("nonempty group");
                let radius = members
                    .iter()
                    .map(|&i| (small[i].center - best).norm() + small[i].half * std::f64::consts::SQRT_2)
                    .fold(0.0, f64::max);
                let (z, residual) = self.newton(best);
                let (location, residual) = if (z - best).norm() <= radius && residual <= self.eval(best).norm() {
                    (z, residual)
                } else {
                    (best, self.eval(best).norm())
                };
                Candidate { location, radius, residual }
            })
            .collect()
    }

    /// Merges candidates that overlap within `10 tol` and assigns indices.
    fn finalize(&self, candidates: Vec<Candidate>) -> Result<Vec<Zero>> {
        let merge = 10.0 * self.tol;
        let mut uf = UnionFind::new(candidates.len());
        for i in 0..candidates.len() {
            for j in i + 1..candidates.len() {
                let (a, b) = (&candidates[i], &candidates[j]);
                if (a.location - b.location).norm() <= merge + a.radius + b.radius {
                    uf.union(i, j);
                }
            }
        }
        let groups: Vec<Candidate> = uf
            .groups()
            .into_iter()
            .map(|members| {
                let lead = members
                    .iter()
                    .map(|&i| candidates[i])
                    .min_by(|a, b| a.residual.total_cmp(&b.residual))
                    .expect("nonempty group");
                let radius = members
                    .iter()
                    .map(|&i| (candidates[i].location - lead.location).norm() + candidates[i].radius)
                    .fold(0.0, f64::max);
                Candidate { radius, ..lead }
            })
            .collect();

        let mut zeros = Vec::with_capacity(groups.len());
        for (i, g) in groups.iter().enumerate() {
            let clearance = groups
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, o)| (o.location - g.location).norm() - o.radius)
                .fold(f64::INFINITY, f64::min);
            let target = (2.0 * g.radius).max(1e-6 * self.radius.max(1.0));
            let mut r = target.min(0.45 * clearance);
            let mut index = None;
            for _ in 0..=INFLATE_TRIES {
                match winding_harmonic(self.f, &Contour::circle(g.location, r), 64) {
                    Ok(w) => {
                        index = Some(w);
                        break;
                    }
                    Err(Error::NearZeroOnContour) => r *= INFLATE,
                    Err(e) => return Err(e),
                }
            }
            let index = index.ok_or_else(|| {
                Error::NonIsolatedZeros(format!(
                    "index circle around {} keeps touching zeros",
                    g.location
                ))
            })?;
            if index == 0 {
                continue;
            }
            zeros.push(Zero {
                location: g.location,
                index,
                orientation: self.f.classify_orientation(g.location),
                residual: g.residual,
            });
        }
        zeros.sort_by(|a, b| {
            a.location
                .re
                .total_cmp(&b.location.re)
                .then(a.location.im.total_cmp(&b.location.im))
        });
        Ok(zeros)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Groups in order of their smallest member.
    fn groups(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|g| !g.is_empty()).collect()
    }
}

fn find_zeros_with_bound(f: &HarmonicFn, tol: f64, bound: Option<u64>) -> Result<ZeroReport> {
    let n = check_degrees(f)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let radius = zero_search_radius(f)?;
    let finder = Finder::new(f, tol, radius);
    let (mut candidates, small) = finder.search()?;
    candidates.extend(finder.clusters(&small));
    let zeros = finder.finalize(candidates)?;

    let outer = winding_harmonic(f, &Contour::circle(Complex64::default(), radius), 64 * (n + 1))?;
    let report = ZeroReport::from_zeros(zeros, (n * n) as u64, radius);
    if report.index_sum != outer {
        return Err(Error::NonIsolatedZeros(format!(
            "local indices sum to {} but the outer winding is {outer}",
            report.index_sum
        )));
    }
    Ok(match bound {
        Some(b) => report.with_bound(b),
        None => report,
    })
}

/// Isolates all zeros of `f`; the bound on the report is `(deg h)^2`.
pub fn find_zeros(f: &HarmonicFn, tol: f64) -> Result<ZeroReport> {
    find_zeros_with_bound(f, tol, None)
}

/// Zero reports of `f`, its cofactor `F` and the product `fF`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductZeros {
    pub f: ZeroReport,
    #[serde(rename = "F")]
    pub cofactor: ZeroReport,
    #[serde(rename = "fF")]
    pub product: ZeroReport,
    /// Zeros of `fF` coincide with the union of the factors' zeros, with
    /// indices adding at shared points.
    pub union_holds: bool,
    /// Largest distance between a product zero and its matched factor zero.
    pub union_max_distance: f64,
}

/// Runs [`find_zeros`] on `f`, on its cofactor and on the product; the
/// product report carries the bound `2 (deg h)^2`.
pub fn product_zeros(f: &HarmonicFn, a: Alpha, tol: f64) -> Result<ProductZeros> {
    let n = check_degrees(f)?;
    let f_report = find_zeros(f, tol)?;
    let big_f = cofactor_formula(f, a.value());
    let cofactor_report = find_zeros(&big_f, tol)?;
    let product = product_formula(f, a.value());
    let product_report = find_zeros_with_bound(&product, tol, Some(2 * (n * n) as u64))?;
    let (union_holds, union_max_distance) =
        union_matches(&f_report, &cofactor_report, &product_report, 10.0 * tol);
    Ok(ProductZeros {
        f: f_report,
        cofactor: cofactor_report,
        product: product_report,
        union_holds,
        union_max_distance,
    })
}

fn union_matches(f: &ZeroReport, big_f: &ZeroReport, product: &ZeroReport, dist: f64) -> (bool, f64) {
    // combine factor zeros, adding indices at shared points
    let mut expected: Vec<(Complex64, i64)> = Vec::new();
    for z in f.zeros.iter().chain(&big_f.zeros) {
        match expected.iter_mut().find(|(loc, _)| (*loc - z.location).norm() <= dist) {
            Some(entry) => entry.1 += z.index,
            None => expected.push((z.location, z.index)),
        }
    }
    expected.retain(|&(_, idx)| idx != 0);

    let mut used = vec![false; product.zeros.len()];
    let mut worst = 0.0f64;
    let mut ok = expected.len() == product.zeros.len();
    for (loc, idx) in &expected {
        let nearest = product
            .zeros
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|a, b| (a.1.location - loc).norm().total_cmp(&(b.1.location - loc).norm()));
        match nearest {
            Some((i, z)) => {
                let d = (z.location - loc).norm();
                worst = worst.max(d);
                used[i] = true;
                if d > dist || z.index != *idx {
                    ok = false;
                }
            }
            None => ok = false,
        }
    }
    (ok && used.iter().all(|&u| u), worst)
}
