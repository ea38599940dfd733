//! Radon planes: mutual pairs, the quadrant-gluing construction, symmetry
//! checks, the absolute and complex Radon planes, and `ℓ₂` direct sums.

use std::f64::consts::{E, FRAC_PI_2, PI, TAU};
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use num::complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bj::{
    complex_grid_margin, complex_radon_criterion, derivative_bounds, directional_derivative, incoming_probe,
    is_bj_orthogonal, is_smooth, orthogonal_f64, perp_probe, random_member, Side, CLEAR_MARGIN,
};
use crate::cone::{perp_cones, Cone};
use crate::error::{Error, Result};
use crate::field::{euclid_norm, projective_normalize, Q};
use crate::norm::absolute_radon::{self, XI0};
use crate::norm::{self, DayPlane, NormSpec, PolygonNorm};
use crate::tolerance::Tolerances;
use crate::vector::Vector;

fn require_real_2d(spec: &NormSpec) -> Result<()> {
    if spec.dim() != 2 || spec.is_complex() {
        return Err(Error::InvalidSpec(format!("{} is not a real two-dimensional space", spec.name())));
    }
    Ok(())
}

fn unit_at(spec: &NormSpec, theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    let n = spec.norm_f64(&[c, s]);
    [c / n, s / n]
}

fn normalize(spec: &NormSpec, v: &[f64]) -> Vec<f64> {
    let n = spec.norm_f64(v);
    v.iter().map(|c| c / n).collect()
}

/// `J(a, b) = (−b, a)`.
fn rot90(v: &[f64]) -> [f64; 2] {
    [-v[1], v[0]]
}

/// Unit vectors with `x ⊥ y` and `y ⊥ x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MutualPair {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub margin_xy: f64,
    pub margin_yx: f64,
}

/// Scan resolution of [`find_mutual_pair_2d`].
pub const MUTUAL_SCAN: usize = 720;

fn partner(spec: &NormSpec, theta: f64) -> Result<([f64; 2], [f64; 2])> {
    let x = unit_at(spec, theta);
    let sub = spec.subdiff_f64(&x)?;
    let verts = sub.vertices_f64();
    let mut f = vec![0.0; 2];
    for v in &verts {
        f[0] += v[0] / verts.len() as f64;
        f[1] += v[1] / verts.len() as f64;
    }
    let y = normalize(spec, &rot90(&f));
    Ok((x, [y[0], y[1]]))
}

fn certify(spec: &NormSpec, x: [f64; 2], y: [f64; 2], tol: &Tolerances) -> Result<Option<MutualPair>> {
    let a = orthogonal_f64(spec, &x, &y, tol)?;
    let b = orthogonal_f64(spec, &y, &x, tol)?;
    Ok((a.orthogonal && b.orthogonal).then(|| MutualPair {
        x,
        y,
        margin_xy: a.margin.unwrap_or(0.0),
        margin_yx: b.margin.unwrap_or(0.0),
    }))
}

/// First mutual pair along `θ ∈ [0, π)`: each `x(θ)` is paired with the unit
/// vector spanning the kernel of a supporting functional, and the reverse
/// relation is located by bisection on the sign of `D₊(y; x) + D₋(y; x)`.
pub fn find_mutual_pair_2d(spec: &NormSpec, tol: &Tolerances) -> Result<MutualPair> {
    require_real_2d(spec)?;
    let mid = |theta: f64| -> Result<f64> {
        let (x, y) = partner(spec, theta)?;
        let (lo, hi) = derivative_bounds(spec, &y, &x)?;
        Ok(lo + hi)
    };
    let h = PI / MUTUAL_SCAN as f64;
    let mut prev = mid(0.0)?;
    for k in 0..MUTUAL_SCAN {
        let t0 = k as f64 * h;
        let (x, y) = partner(spec, t0)?;
        if let Some(p) = certify(spec, x, y, tol)? {
            return Ok(p);
        }
        let t1 = t0 + h;
        let next = mid(t1)?;
        if (prev > 0.0) != (next > 0.0) {
            let (mut a, mut b, mut fa) = (t0, t1, prev);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                let fm = mid(m)?;
                if (fm > 0.0) == (fa > 0.0) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            for t in [a, b] {
                let (x, y) = partner(spec, t)?;
                if let Some(p) = certify(spec, x, y, tol)? {
                    return Ok(p);
                }
            }
        }
        prev = next;
    }
    Err(Error::BudgetExhausted(format!("no mutual pair found for {} within {MUTUAL_SCAN} scan steps", spec.name())))
}

/// Kind of a boundary arc.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcKind {
    Segment,
    Curve,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Arc2D {
    pub kind: ArcKind,
    /// Quadrant 1..=4 of the arc's midpoint.
    pub quadrant: u8,
    pub points: Vec<[f64; 2]>,
}

/// Closed, symmetric unit sphere of a plane norm as ordered arcs.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCurve2D {
    pub arcs: Vec<Arc2D>,
    #[serde(skip)]
    pub plane: Option<Arc<DayPlane>>,
}

fn quadrant(p: [f64; 2]) -> u8 {
    match (p[0] >= 0.0, p[1] >= 0.0) {
        (true, true) => 1,
        (false, true) => 2,
        (false, false) => 3,
        (true, false) => 4,
    }
}

impl BoundaryCurve2D {
    /// Polygon boundary as one segment arc per edge.
    pub fn from_polygon(poly: &PolygonNorm) -> Self {
        let m = poly.vertices.len();
        let arcs = (0..m)
            .map(|k| {
                let (a, b) = (poly.vertices[k], poly.vertices[(k + 1) % m]);
                Arc2D { kind: ArcKind::Segment, quadrant: quadrant([(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]), points: vec![a, b] }
            })
            .collect();
        BoundaryCurve2D { arcs, plane: None }
    }

    /// Samples `count` points of a float norm's sphere as one curve arc per quadrant.
    pub fn sample(spec: &NormSpec, count: usize) -> Result<Self> {
        require_real_2d(spec)?;
        let per = count.div_ceil(4).max(2);
        let arcs = (0..4u8)
            .map(|q| Arc2D {
                kind: ArcKind::Curve,
                quadrant: q + 1,
                points: (0..=per).map(|k| unit_at(spec, (q as f64 + k as f64 / per as f64) * FRAC_PI_2)).collect(),
            })
            .collect();
        Ok(BoundaryCurve2D { arcs, plane: None })
    }

    /// Norm space of a constructed curve; sampled curves carry no norm.
    pub fn into_spec(self) -> Result<NormSpec> {
        self.plane
            .map(NormSpec::DayRadon)
            .ok_or_else(|| Error::Unsupported("only constructed curves define a norm".into()))
    }

    /// CSV with header `theta,x,y`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,x,y\n");
        for a in &self.arcs {
            for p in &a.points {
                out.push_str(&format!("{},{},{}\n", p[1].atan2(p[0]).rem_euclid(TAU), p[0], p[1]));
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// Number of points used for the sphere of a curved seed.
pub const DAY_SEED_POINTS: usize = 2000;

/// Seed sphere as a ccw polygon.
fn seed_polygon(seed: &NormSpec) -> Result<Vec<[f64; 2]>> {
    if let Some(p) = seed.poly() {
        let mut v: Vec<[f64; 2]> = p.vertices.iter().map(|w| [crate::field::Field::to_f64(&w[0]), crate::field::Field::to_f64(&w[1])]).collect();
        v.sort_by(|a, b| a[1].atan2(a[0]).total_cmp(&b[1].atan2(b[0])));
        return Ok(v);
    }
    if let NormSpec::DayRadon(d) = seed {
        return Ok(d.polygon.vertices.clone());
    }
    Ok((0..DAY_SEED_POINTS).map(|k| unit_at(seed, TAU * k as f64 / DAY_SEED_POINTS as f64)).collect())
}

/// Quadrant gluing: pick a mutual pair `x ⊥⊥ y` with supporting functionals
/// `f_x, f_y`, change coordinates so that `x, y ↦ (1,0), (0,1)`, keep the
/// seed sphere in quadrants I and III and the dual sphere rotated by `J` in
/// quadrants II and IV. The result is a polygon norm.
pub fn day_construction(seed: &NormSpec) -> Result<BoundaryCurve2D> {
    require_real_2d(seed)?;
    let tol = Tolerances::default();
    let pair = find_mutual_pair_2d(seed, &tol)?;
    let (x, y) = (pair.x, pair.y);
    // T = [x y]⁻¹.
    let det = x[0] * y[1] - x[1] * y[0];
    if det.abs() < 1e-12 {
        return Err(Error::InvalidSpec("degenerate mutual pair".into()));
    }
    let sgn = det.signum();
    let t = |p: [f64; 2]| [(y[1] * p[0] - y[0] * p[1]) / det, (-x[1] * p[0] + x[0] * p[1]) / det];
    let mut seed_pts: Vec<[f64; 2]> = seed_polygon(seed)?.into_iter().map(t).collect();
    if sgn < 0.0 {
        seed_pts.reverse();
    }
    seed_pts.sort_by(|a, b| a[1].atan2(a[0]).rem_euclid(TAU).total_cmp(&b[1].atan2(b[0]).rem_euclid(TAU)));
    let seed_poly = PolygonNorm::from_boundary(&seed_pts)
        .ok_or_else(|| Error::InvalidSpec("seed sphere is not a convex polygon".into()))?;
    // Dual sphere vertices are the edge normals of the seed polygon.
    let dual: Vec<[f64; 2]> = seed_poly.normals.iter().map(|f| rot90(f)).collect();
    let in_open_quadrant = |p: &[f64; 2], q: u8| {
        let e = 1e-12;
        match q {
            1 => p[0] > e && p[1] > e,
            2 => p[0] < -e && p[1] > e,
            3 => p[0] < -e && p[1] < -e,
            _ => p[0] > e && p[1] < -e,
        }
    };
    let mut pts: Vec<[f64; 2]> = vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
    pts.extend(seed_poly.vertices.iter().filter(|p| in_open_quadrant(p, 1) || in_open_quadrant(p, 3)));
    pts.extend(dual.iter().filter(|p| in_open_quadrant(p, 2) || in_open_quadrant(p, 4)));
    pts.sort_by(|a, b| a[1].atan2(a[0]).rem_euclid(TAU).total_cmp(&b[1].atan2(b[0]).rem_euclid(TAU)));
    check_convex(&pts)?;
    let polygon = PolygonNorm::from_boundary(&pts)
        .ok_or_else(|| Error::InvalidSpec("glued curve is not a convex polygon".into()))?;
    let mut curve = BoundaryCurve2D::from_polygon(&polygon);
    curve.plane = Some(Arc::new(DayPlane { seed: seed.clone(), pair: (x, y), polygon }));
    Ok(curve)
}

fn check_convex(pts: &[[f64; 2]]) -> Result<()> {
    let m = pts.len();
    for k in 0..m {
        let (a, b, c) = (pts[k], pts[(k + 1) % m], pts[(k + 2) % m]);
        let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        let scale = (b[0] - a[0]).hypot(b[1] - a[1]) * (c[0] - b[0]).hypot(c[1] - b[1]);
        if cross < -1e-9 * scale {
            return Err(Error::InvalidSpec(format!("glued curve is not convex near ({:.6}, {:.6})", b[0], b[1])));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub model: String,
    pub pairs: usize,
    /// Largest `max(0, −margin)` of the reverse relation.
    pub max_asymmetry: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<(Vector, Vector)>,
    pub exact: bool,
    pub symmetric: bool,
}

/// Exact test set of a polyhedral plane: face representatives and every
/// extreme direction of every outgoing neighbourhood.
fn exact_test_points(p: &crate::norm::Polyhedral) -> Result<Vec<Vec<Q>>> {
    let lat = p.lattice()?;
    let mut pts: Vec<Vec<Q>> = lat.faces.iter().map(|f| f.representative.clone()).collect();
    for f in &lat.faces {
        let act: Vec<Vec<Q>> = f.active.iter().map(|&i| p.duals[i].clone()).collect();
        for c in perp_cones(&act) {
            let c: Cone<Q> = c;
            for g in c.shape(p.dim).generators {
                pts.push(g);
            }
        }
    }
    let mut out: Vec<Vec<Q>> = Vec::new();
    for v in pts {
        let v = projective_normalize(&v);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Checks `x ⊥ y ⇒ y ⊥ x` on sampled pairs, exhaustively for polyhedral planes.
pub fn verify_radon_symmetry(spec: &NormSpec, pair_count: usize, seed: u64, margin_tol: f64) -> Result<SymmetryReport> {
    require_real_2d(spec)?;
    let tol = Tolerances::default();
    if let Some(p) = spec.poly() {
        let pts = exact_test_points(p)?;
        let mut pairs = 0;
        for a in &pts {
            for b in &pts {
                let (va, vb) = (Vector::Exact(a.clone()), Vector::Exact(b.clone()));
                let ab = is_bj_orthogonal(spec, &va, &vb, &tol)?.orthogonal;
                let ba = is_bj_orthogonal(spec, &vb, &va, &tol)?.orthogonal;
                pairs += 1;
                if ab != ba {
                    return Ok(SymmetryReport {
                        model: spec.name(),
                        pairs,
                        max_asymmetry: f64::NAN,
                        counterexample: Some(if ab { (va, vb) } else { (vb, va) }),
                        exact: true,
                        symmetric: false,
                    });
                }
            }
        }
        return Ok(SymmetryReport { model: spec.name(), pairs, max_asymmetry: 0.0, counterexample: None, exact: true, symmetric: true });
    }
    let results: Vec<(f64, [f64; 2], [f64; 2])> = (0..pair_count)
        .into_par_iter()
        .map(|k| -> Result<(f64, [f64; 2], [f64; 2])> {
            let mut rng = norm::rng(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let theta = rng.random::<f64>() * TAU;
            let x = unit_at(spec, theta);
            let sub = spec.subdiff_f64(&x)?;
            let f = random_member(&sub, &mut rng);
            let y = normalize(spec, &rot90(&f));
            let y = [y[0], y[1]];
            let m = orthogonal_f64(spec, &y, &x, &tol)?.margin.unwrap_or(0.0);
            Ok(((-m).max(0.0), x, y))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    let mut counter = None;
    for (a, x, y) in &results {
        worst = worst.max(*a);
        if *a > margin_tol && counter.is_none() {
            counter = Some((Vector::numeric(x), Vector::numeric(y)));
        }
    }
    Ok(SymmetryReport {
        model: spec.name(),
        pairs: pair_count,
        max_asymmetry: worst,
        symmetric: counter.is_none(),
        counterexample: counter,
        exact: false,
    })
}

/// A flat boundary segment and the smoothness of its endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatSegment {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub start_smooth: bool,
    pub end_smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertConditionsReport {
    pub model: String,
    pub segments: Vec<FlatSegment>,
    /// Every endpoint of every one-dimensional face is smooth.
    pub holds: bool,
}

/// Boundary samples for flat detection.
pub const FLAT_SAMPLES: usize = 4096;
/// Normalized cross product below which three samples count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-9;

/// Float smoothness at a boundary point: singleton subdifferential whose
/// gradient agrees with the gradients at nearby points on both sides.
fn smooth_numeric(spec: &NormSpec, theta: f64) -> Result<bool> {
    let x = unit_at(spec, theta);
    if !spec.subdiff_f64(&x)?.is_singleton() {
        return Ok(false);
    }
    let grad = |t: f64| -> Result<Vec<f64>> { Ok(spec.subdiff_f64(&unit_at(spec, t))?.support_max(&unit_at(spec, t)).1) };
    let (a, b) = (grad(theta - 1e-7)?, grad(theta + 1e-7)?);
    Ok(a.iter().zip(&b).all(|(u, v)| (u - v).abs() <= 1e-5))
}

/// Refines the end of a flat run between angles `inside` and `outside`.
fn refine_endpoint(spec: &NormSpec, f: &[f64], mut inside: f64, mut outside: f64) -> f64 {
    for _ in 0..60 {
        let m = 0.5 * (inside + outside);
        let p = unit_at(spec, m);
        if (f[0] * p[0] + f[1] * p[1] - 1.0).abs() <= 1e-12 {
            inside = m;
        } else {
            outside = m;
        }
    }
    inside
}

/// For a real Radon plane: detects one-dimensional faces and tests whether
/// both endpoints of each are smooth points.
pub fn check_gamma0_hilbert_conditions_real(spec: &NormSpec) -> Result<HilbertConditionsReport> {
    require_real_2d(spec)?;
    let sym = verify_radon_symmetry(spec, 200, 0x5eed, 1e-6)?;
    if !sym.symmetric {
        return Err(Error::InvalidSpec(format!("{} failed the symmetry pre-check", spec.name())));
    }
    if let Some(p) = spec.poly() {
        let lat = p.lattice()?;
        let mut segments = Vec::new();
        for f in lat.faces.iter().filter(|f| f.dim == 1) {
            let ends: Vec<Vec<Q>> = f.vertex_ids.iter().map(|&v| p.vertices[v].clone()).collect();
            let sm = |v: &Vec<Q>| is_smooth(spec, &Vector::Exact(v.clone()));
            let to2 = |v: &Vec<Q>| [crate::field::Field::to_f64(&v[0]), crate::field::Field::to_f64(&v[1])];
            segments.push(FlatSegment { start: to2(&ends[0]), end: to2(&ends[1]), start_smooth: sm(&ends[0])?, end_smooth: sm(&ends[1])? });
        }
        let holds = segments.iter().all(|s| s.start_smooth && s.end_smooth);
        return Ok(HilbertConditionsReport { model: spec.name(), segments, holds });
    }
    let h = TAU / FLAT_SAMPLES as f64;
    let pts: Vec<[f64; 2]> = (0..FLAT_SAMPLES).map(|k| unit_at(spec, k as f64 * h)).collect();
    let collinear = |k: usize| {
        let (a, b, c) = (pts[(k + FLAT_SAMPLES - 1) % FLAT_SAMPLES], pts[k], pts[(k + 1) % FLAT_SAMPLES]);
        let (d1, d2) = ([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
        let cross = d1[0] * d2[1] - d1[1] * d2[0];
        cross.abs() <= COLLINEAR_TOL * d1[0].hypot(d1[1]) * d2[0].hypot(d2[1])
    };
    let flags: Vec<bool> = (0..FLAT_SAMPLES).map(collinear).collect();
    let Some(start) = (0..FLAT_SAMPLES).find(|&k| !flags[k]) else {
        return Err(Error::Unsupported("boundary is flat everywhere".into()));
    };
    let mut segments = Vec::new();
    let mut k = 0;
    while k < FLAT_SAMPLES {
        let i = (start + k) % FLAT_SAMPLES;
        if !flags[i] {
            k += 1;
            continue;
        }
        let mut len = 0;
        while len < FLAT_SAMPLES && flags[(i + len) % FLAT_SAMPLES] {
            len += 1;
        }
        k += len;
        // Run i..i+len-1 are interior points; neighbours i-1 and i+len are on the line too.
        let first = i as f64 - 1.0;
        let last = (i + len) as f64;
        let mid_t = 0.5 * (first + last) * h;
        let (a, b) = (unit_at(spec, first * h), unit_at(spec, last * h));
        let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        if (spec.norm_f64(&m) - 1.0).abs() > 1e-9 {
            continue;
        }
        let f = spec.subdiff_f64(&unit_at(spec, mid_t))?.support_max(&m).1;
        let t0 = refine_endpoint(spec, &f, first * h, (first - 1.0) * h);
        let t1 = refine_endpoint(spec, &f, last * h, (last + 1.0) * h);
        segments.push(FlatSegment {
            start: unit_at(spec, t0),
            end: unit_at(spec, t1),
            start_smooth: smooth_numeric(spec, t0)?,
            end_smooth: smooth_numeric(spec, t1)?,
        });
    }
    let holds = segments.iter().all(|s| s.start_smooth && s.end_smooth);
    Ok(HilbertConditionsReport { model: spec.name(), segments, holds })
}

/// `(a, b) ⊥ (c, d)` in `ℂ²` with the absolute Radon norm, by the explicit criterion.
pub fn complex_radon_orthogonal(a: Complex64, b: Complex64, c: Complex64, d: Complex64, tol: &Tolerances) -> Result<bool> {
    Ok(complex_radon_criterion([a.re, a.im], [b.re, b.im], [c.re, c.im], [d.re, d.im], tol)?.0)
}

/// `(a, b) ⊥ (c, d)` by the unimodular grid test; returns the verdict and its margin.
pub fn complex_grid_orthogonal(a: Complex64, b: Complex64, c: Complex64, d: Complex64, tol: &Tolerances) -> Result<(bool, f64)> {
    let m = complex_grid_margin(&NormSpec::ComplexRadon, &[a.re, a.im, b.re, b.im], &[c.re, c.im, d.re, d.im])?;
    Ok((m >= -tol.ortho_margin, m))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexAgreementReport {
    pub quadruples: usize,
    pub orthogonal_cases: usize,
    pub disagreements: usize,
    pub symmetric_failures: usize,
}

fn random_c(rng: &mut rand_chacha::ChaCha8Rng) -> Complex64 {
    let v = norm::gaussian_direction(rng, 2);
    Complex64::new(v[0], v[1])
}

/// A quadruple with `(a, b) ⊥ (c, d)` by construction: `(|c|, |d|)` spans the
/// kernel of a supporting functional at `(|a|, −|b|)` and the arguments are aligned.
fn orthogonal_quadruple(rng: &mut rand_chacha::ChaCha8Rng) -> [Complex64; 4] {
    let (a, b) = (random_c(rng), random_c(rng));
    let u = [a.norm(), -b.norm()];
    let sub = absolute_radon::subdifferential(&u);
    let f = random_member(&sub, rng);
    let (rc, rd) = (f[1].abs(), f[0].abs());
    let phc = rng.random::<f64>() * TAU;
    let phd = phc + b.arg() - a.arg() + PI;
    [a, b, Complex64::from_polar(rc, phc), Complex64::from_polar(rd, phd)]
}

/// Compares the explicit criterion with the generic grid test. A disagreement
/// needs the grid margin to exceed `margin_tol` in magnitude.
pub fn complex_criterion_agreement(count: usize, seed: u64, margin_tol: f64) -> Result<ComplexAgreementReport> {
    let tol = Tolerances::default();
    let rows: Vec<(bool, bool, bool)> = (0..count)
        .into_par_iter()
        .map(|k| -> Result<(bool, bool, bool)> {
            let mut rng = norm::rng(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut qd = match k % 4 {
                0 => [random_c(&mut rng), random_c(&mut rng), random_c(&mut rng), random_c(&mut rng)],
                1 | 2 => orthogonal_quadruple(&mut rng),
                _ => {
                    // Nonsmooth point (a, 0) against (ξ, 1)·s with |ξ| ≤ 1/e.
                    let s = random_c(&mut rng);
                    let xi = Complex64::from_polar(XI0 * rng.random::<f64>(), rng.random::<f64>() * TAU);
                    [random_c(&mut rng), Complex64::new(0.0, 0.0), xi * s, s]
                }
            };
            if k % 8 == 2 {
                // Arguments pushed off the criterion.
                qd[3] *= Complex64::from_polar(1.0, 1e-2);
            }
            let [a, b, c, d] = qd;
            let ex = complex_radon_orthogonal(a, b, c, d, &tol)?;
            let (gr, m) = complex_grid_orthogonal(a, b, c, d, &tol)?;
            let disagree = ex != gr && m.abs() > margin_tol;
            let sym = if c.norm() + d.norm() > 0.0 { complex_radon_orthogonal(c, d, a, b, &tol)? == ex } else { true };
            Ok((ex, disagree, !sym))
        })
        .collect::<Result<_>>()?;
    Ok(ComplexAgreementReport {
        quadruples: count,
        orthogonal_cases: rows.iter().filter(|r| r.0).count(),
        disagreements: rows.iter().filter(|r| r.1).count(),
        symmetric_failures: rows.iter().filter(|r| r.2).count(),
    })
}

/// `ℓ₂` direct sum `‖(x, y)‖ = √(‖x‖² + ‖y‖²)`.
pub fn direct_sum_l2(left: NormSpec, right: NormSpec) -> Result<NormSpec> {
    NormSpec::direct_sum(left, right)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectSumReport {
    pub model: String,
    pub checks: usize,
    pub failures: usize,
    /// Largest `|D±((x,0); (z,y)) − D±(x; z)|` by finite differences.
    pub max_derivative_gap: f64,
    pub passed: bool,
}

/// Samples `x ≠ 0`, `y`, `z` and checks `(x,0) ⊥ (z,y) ⇔ x ⊥ z` and
/// `(z,y) ⊥ (x,0) ⇔ z ⊥ x`. Verdicts may differ only inside `±margin_tol`.
pub fn verify_direct_sum_lemma(left: &NormSpec, right: &NormSpec, samples: usize, seed: u64, margin_tol: f64) -> Result<DirectSumReport> {
    if left.is_complex() || right.is_complex() {
        return Err(Error::Unsupported("direct-sum verifier covers real summands".into()));
    }
    let sum = direct_sum_l2(left.clone(), right.clone())?;
    let tol = Tolerances::default();
    let (nx, ny) = (left.dim(), right.dim());
    let rows: Vec<(usize, usize, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| -> Result<(usize, usize, f64)> {
            let mut rng = norm::rng(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let x = match k % 3 {
                0 => vec![1.0, 0.0].into_iter().chain(std::iter::repeat(0.0)).take(nx).collect(),
                _ => norm::gaussian_direction(&mut rng, nx),
            };
            let y = norm::gaussian_direction(&mut rng, ny);
            let z = match k % 4 {
                0 => norm::gaussian_direction(&mut rng, nx),
                1 | 2 => perp_probe(&left.subdiff_f64(&x)?, &mut rng, nx),
                _ => {
                    let z1 = norm::gaussian_direction(&mut rng, nx);
                    let w = norm::gaussian_direction(&mut rng, nx);
                    incoming_probe(left, &x, &z1, &w)?
                }
            };
            if euclid_norm(&z) < 1e-9 {
                return Ok((0, 0, 0.0));
            }
            let x0: Vec<f64> = x.iter().copied().chain(std::iter::repeat_n(0.0, ny)).collect();
            let zy: Vec<f64> = z.iter().chain(&y).copied().collect();
            let mut fails = 0;
            let pairs = [
                (orthogonal_f64(&sum, &x0, &zy, &tol)?, orthogonal_f64(left, &x, &z, &tol)?),
                (orthogonal_f64(&sum, &zy, &x0, &tol)?, orthogonal_f64(left, &z, &x, &tol)?),
            ];
            for (a, b) in &pairs {
                let clear = |v: &crate::bj::OrthoVerdict| v.margin.is_none_or(|m| m.abs() > margin_tol);
                if a.orthogonal != b.orthogonal && (clear(a) || clear(b)) {
                    fails += 1;
                }
            }
            let mut gap = 0.0f64;
            for side in [Side::Plus, Side::Minus] {
                let ds = directional_derivative(&sum, &Vector::Numeric(x0.clone()), &Vector::Numeric(zy.clone()), side, &tol)?;
                let dx = directional_derivative(left, &Vector::Numeric(x.clone()), &Vector::Numeric(z.clone()), side, &tol)?;
                gap = gap.max((ds.value.to_f64() - dx.value.to_f64()).abs() / euclid_norm(&zy).max(1.0));
            }
            Ok((2, fails, gap))
        })
        .collect::<Result<_>>()?;
    let checks = rows.iter().map(|r| r.0).sum();
    let failures = rows.iter().map(|r| r.1).sum();
    let gap = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(DirectSumReport { model: sum.name(), checks, failures, max_derivative_gap: gap, passed: failures == 0 && gap <= 1e-6 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonsmoothExampleReport {
    /// `x̃ = ((1,0), 0)` is a nonsmooth point of the sum.
    pub x_tilde_nonsmooth: bool,
    /// Members `(ξ, 1, 0)` of `𝔽I ⊕ {0}` lie in `x̃⊥ ∩ x₁⊥` and are pairwise equivalent.
    pub face_set_equivalent: bool,
    /// `x̃⊥ ∩ x₁⊥ ∩ z̃⊥ = {0}` on the sampled members.
    pub final_intersection_trivial: bool,
    pub members_checked: usize,
}

/// Reproduces the nonsmooth-point construction in `AbsoluteRadon ⊕₂ ℓ₂¹`.
pub fn nonsmooth_counterexample_check(seed: u64) -> Result<NonsmoothExampleReport> {
    let z_sum = direct_sum_l2(NormSpec::AbsoluteRadon, NormSpec::lp(2.0, 1)?)?;
    let tol = Tolerances::default();
    let x_tilde = Vector::numeric(&[1.0, 0.0, 0.0]);
    let x1 = Vector::numeric(&[0.0, 0.0, 1.0]);
    let nonsmooth = !is_smooth(&z_sum, &x_tilde)?;
    let xis = [-XI0, -0.25, -0.1, 0.0, 0.1, 0.25, XI0];
    let members: Vec<Vector> = xis.iter().map(|&xi| Vector::numeric(&[xi, 1.0, 0.0])).collect();
    let mut in_set = true;
    for m in &members {
        in_set &= is_bj_orthogonal(&z_sum, &x_tilde, m, &tol)?.orthogonal;
        in_set &= is_bj_orthogonal(&z_sum, &x1, m, &tol)?.orthogonal;
    }
    let mut equivalent = true;
    for (i, a) in members.iter().enumerate() {
        for b in members.iter().skip(i + 1) {
            equivalent &= crate::bj::bj_equivalent(&z_sum, a, b, 400, seed.wrapping_add(i as u64), &tol)?.equivalent;
        }
    }
    // Points α(ξ,1,0) of 𝔽I ⊕ {0} are never in z̃⊥ for z̃ = (0,1,0) ∈ I ⊕ {0}.
    let z_tilde = Vector::numeric(&[0.0, 1.0, 0.0]);
    let mut rng = norm::rng(seed);
    let mut trivial = true;
    let mut checked = 0;
    for _ in 0..200 {
        let xi = (2.0 * rng.random::<f64>() - 1.0) * XI0;
        let alpha = 0.1 + rng.random::<f64>() * 10.0;
        let sgn = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let v = Vector::numeric(&[sgn * alpha * xi, sgn * alpha, 0.0]);
        let v_in = is_bj_orthogonal(&z_sum, &x_tilde, &v, &tol)?.orthogonal && is_bj_orthogonal(&z_sum, &x1, &v, &tol)?.orthogonal;
        let r = is_bj_orthogonal(&z_sum, &z_tilde, &v, &tol)?;
        trivial &= v_in && !r.orthogonal && r.margin.is_some_and(|m| m < -CLEAR_MARGIN);
        checked += 1;
    }
    // 𝔽x₁ is the whole of x̃⊥ ∩ z̃⊥: it contains x₁ and misses the x-plane part.
    trivial &= is_bj_orthogonal(&z_sum, &x_tilde, &x1, &tol)?.orthogonal && is_bj_orthogonal(&z_sum, &z_tilde, &x1, &tol)?.orthogonal;
    Ok(NonsmoothExampleReport {
        x_tilde_nonsmooth: nonsmooth,
        face_set_equivalent: in_set && equivalent,
        final_intersection_trivial: trivial,
        members_checked: checked + members.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaReport {
    pub eta_at_xi0_error: f64,
    pub eta_at_one_error: f64,
    pub eta_prime_at_xi0_error: f64,
    pub ode_max_residual: f64,
    /// Largest `|η(α(ξ)) + α(ξ)η′(ξ)|`.
    pub partner_identity_max_error: f64,
    /// Most negative orthogonality margin over both directions of the pairs.
    pub mutual_min_margin: f64,
    pub points: usize,
}

/// Checks the boundary function `η(ξ) = −eξ ln ξ` of the absolute Radon plane.
pub fn eta_checks(points: usize, tol: &Tolerances) -> Result<EtaReport> {
    use absolute_radon::{alpha, eta, eta_prime, eta_second};
    let xs: Vec<f64> = (1..=points).map(|k| XI0 + (1.0 - XI0) * k as f64 / (points + 1) as f64).collect();
    let mut ode = 0.0f64;
    let mut ident = 0.0f64;
    let mut min_margin = f64::INFINITY;
    for &xi in &xs {
        ode = ode.max((xi * xi * eta_second(xi) - xi * eta_prime(xi) + eta(xi)).abs());
        let a = alpha(xi);
        ident = ident.max((eta(a) + a * eta_prime(xi)).abs());
        let (m1, m2) = crate::bj::absolute_radon_pair_margins(xi, tol)?;
        min_margin = min_margin.min(m1).min(m2);
    }
    Ok(EtaReport {
        eta_at_xi0_error: (eta(1.0 / E) - 1.0).abs(),
        eta_at_one_error: eta(1.0).abs(),
        eta_prime_at_xi0_error: eta_prime(1.0 / E).abs(),
        ode_max_residual: ode,
        partner_identity_max_error: ident,
        mutual_min_margin: min_margin,
        points,
    })
}

/// Checks `x ⊥ y` and `y ⊥̸ x` for a claimed asymmetric pair.
pub fn is_asymmetric_pair(spec: &NormSpec, x: &[f64], y: &[f64], tol: &Tolerances) -> Result<bool> {
    Ok(orthogonal_f64(spec, x, y, tol)?.orthogonal && !orthogonal_f64(spec, y, x, tol)?.orthogonal)
}

/// Sphere of a polygon plane through its faces: used for reports.
pub fn polygon_of(spec: &NormSpec) -> Option<PolygonNorm> {
    match spec {
        NormSpec::DayRadon(d) => Some(d.polygon.clone()),
        _ => None,
    }
}
