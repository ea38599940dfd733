//! Birkhoff–James orthogonality: verdicts, one-sided derivatives, smoothness,
//! neighbourhood descriptors and BJ-equivalence.
//!
//! Polyhedral models are decided exactly from active functionals. Float models
//! use the support function of the analytic subdifferential, so that
//! `D₊(x; y) = max f(y)` and `D₋(x; y) = min f(y)` over `f ∈ ∂‖x‖`.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{dot, euclid_norm, q, q_from_f64, Field, Q};
use crate::linalg::{max_principal_angle, orthonormal_kernel};
use crate::norm::{self, absolute_radon, NormSpec, SubdiffKind};
use crate::oracle::GoldenSection;
use crate::tolerance::Tolerances;
use crate::vector::{Scalar, Vector};

/// Side of a one-sided directional derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionalDerivative {
    pub value: Scalar,
    /// Difference quotient at the coarse step (float models only).
    pub coarse: Option<f64>,
    /// Coarse and fine quotients differ by more than the configured bound.
    pub flagged: bool,
}

fn check_pair(spec: &NormSpec, x: &Vector, y: &Vector) -> Result<()> {
    for v in [x, y] {
        if v.dim() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), got: v.dim() });
        }
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// `D₊(u; v)` or `D₋(u; v)`. Exact for polyhedral models, finite differences otherwise.
pub fn directional_derivative(
    spec: &NormSpec,
    u: &Vector,
    v: &Vector,
    side: Side,
    tol: &Tolerances,
) -> Result<DirectionalDerivative> {
    check_pair(spec, u, v)?;
    if let Some(p) = spec.poly() {
        let (uq, vq) = (u.to_exact()?, v.to_exact()?);
        let vals = p.active(&uq).into_iter().map(|i| dot(&p.duals[i], &vq));
        let pick = match side {
            Side::Plus => vals.max(),
            Side::Minus => vals.min(),
        };
        return Ok(DirectionalDerivative { value: Scalar::Exact(pick.expect("nonempty")), coarse: None, flagged: false });
    }
    let (uf, vf) = (u.to_f64(), v.to_f64());
    let base = spec.norm_f64(&uf);
    let quotient = |t: f64| {
        let s = if side == Side::Plus { t } else { -t };
        let p: Vec<f64> = uf.iter().zip(&vf).map(|(a, b)| a + s * b).collect();
        (spec.norm_f64(&p) - base) / s
    };
    let coarse = quotient(tol.fd_coarse_step);
    let fine = quotient(tol.fd_fine_step);
    Ok(DirectionalDerivative {
        value: Scalar::Numeric(fine),
        coarse: Some(coarse),
        flagged: (coarse - fine).abs() > tol.fd_disagreement,
    })
}

/// `(D₋(x; y), D₊(x; y))` from the subdifferential support function (floats).
pub fn derivative_bounds(spec: &NormSpec, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let sub = spec.subdiff_f64(x)?;
    Ok((sub.support_min(y).0, sub.support_max(y).0))
}

/// Outcome of an orthogonality test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthoVerdict {
    pub orthogonal: bool,
    /// Some `f ∈ ∂‖x‖` with `f(y) = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vector>,
    /// `min(D₊, −D₋)/‖y‖`: nonnegative iff `0 ∈ [D₋, D₊]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    /// `"sampled"` when the verdict rests on a finite grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qualifier: Option<String>,
}

/// `x ⊥ y`.
pub fn is_bj_orthogonal(spec: &NormSpec, x: &Vector, y: &Vector, tol: &Tolerances) -> Result<OrthoVerdict> {
    check_pair(spec, x, y)?;
    if let Some(p) = spec.poly() {
        let (xq, yq) = (x.to_exact()?, y.to_exact()?);
        let act: Vec<&Vec<Q>> = p.active(&xq).into_iter().map(|i| &p.duals[i]).collect();
        let vals: Vec<Q> = act.iter().map(|f| dot(f, &yq)).collect();
        let (imin, imax) = argminmax(&vals);
        let (lo, hi) = (vals[imin].clone(), vals[imax].clone());
        let orthogonal = lo.sign() <= 0 && hi.sign() >= 0;
        let witness = if orthogonal {
            Some(Vector::Exact(match vals.iter().position(|v| v.sign() == 0) {
                Some(k) => act[k].clone(),
                None => {
                    // hi·fmin − lo·fmax, normalized: a convex combination vanishing at y.
                    let w = hi.clone() - lo.clone();
                    act[imin]
                        .iter()
                        .zip(act[imax])
                        .map(|(a, b)| (hi.clone() * a.clone() - lo.clone() * b.clone()) / w.clone())
                        .collect()
                }
            }))
        } else {
            None
        };
        let ny = p.norm(&yq).to_f64();
        let margin = (ny > 0.0).then(|| hi.to_f64().min(-lo.to_f64()) / ny);
        return Ok(OrthoVerdict { orthogonal, witness, margin, qualifier: None });
    }
    let (xf, yf) = (x.to_f64(), y.to_f64());
    match spec {
        NormSpec::ComplexRadon => Ok(complex_radon_verdict(&xf, &yf, tol)),
        s if s.is_complex() => complex_grid_verdict(spec, &xf, &yf, tol),
        _ => real_verdict(spec, &xf, &yf, tol),
    }
}

/// Convenience wrapper for float inputs.
pub fn orthogonal_f64(spec: &NormSpec, x: &[f64], y: &[f64], tol: &Tolerances) -> Result<OrthoVerdict> {
    is_bj_orthogonal(spec, &Vector::numeric(x), &Vector::numeric(y), tol)
}

fn argminmax<T: PartialOrd>(v: &[T]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for i in 1..v.len() {
        if v[i] < v[lo] {
            lo = i;
        }
        if v[i] > v[hi] {
            hi = i;
        }
    }
    (lo, hi)
}

/// Real criterion `D₋ ≤ 0 ≤ D₊` on the analytic subdifferential.
fn real_verdict(spec: &NormSpec, x: &[f64], y: &[f64], tol: &Tolerances) -> Result<OrthoVerdict> {
    let sub = spec.subdiff_f64(x)?;
    let ny = spec.norm_f64(y);
    if ny == 0.0 {
        let f = sub.support_max(x).1;
        return Ok(OrthoVerdict { orthogonal: true, witness: Some(Vector::Numeric(f)), margin: None, qualifier: None });
    }
    let (lo, fmin) = sub.support_min(y);
    let (hi, fmax) = sub.support_max(y);
    let margin = hi.min(-lo) / ny;
    let orthogonal = margin >= -tol.ortho_margin;
    let witness = orthogonal.then(|| {
        let (a, b) = (hi.max(0.0), (-lo).max(0.0));
        if a + b == 0.0 {
            fmax
        } else {
            // a·fmin + b·fmax over a+b vanishes at y when lo ≤ 0 ≤ hi.
            fmin.iter().zip(&fmax).map(|(u, v)| (a * u + b * v) / (a + b)).collect()
        }
    });
    Ok(OrthoVerdict { orthogonal, witness: witness.map(Vector::Numeric), margin: Some(margin), qualifier: None })
}

/// Principal argument comparison modulo `2π`.
fn arg_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Explicit criterion on `ℂ²` with the absolute Radon norm:
/// `(|a|, −|b|) ⊥ (|c|, |d|)` and `Arg(−da) = Arg(cb)`, where a zero product
/// matches any argument. Inputs are `(re, im)` pairs.
pub fn complex_radon_criterion(
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
    tol: &Tolerances,
) -> Result<(bool, f64)> {
    let abs = |z: [f64; 2]| z[0].hypot(z[1]);
    if abs(a) == 0.0 && abs(b) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let u = [abs(a), -abs(b)];
    let v = [abs(c), abs(d)];
    let real = real_verdict(&NormSpec::AbsoluteRadon, &u, &v, tol)?;
    let mul = |z: [f64; 2], w: [f64; 2]| [z[0] * w[0] - z[1] * w[1], z[0] * w[1] + z[1] * w[0]];
    let lhs = mul([-d[0], -d[1]], a);
    let rhs = mul(c, b);
    let scale = (abs(a) + abs(b)) * (abs(c) + abs(d));
    let zero = |z: [f64; 2]| abs(z) <= 1e-12 * scale.max(f64::MIN_POSITIVE);
    let arg_gap = if zero(lhs) || zero(rhs) { 0.0 } else { arg_distance(lhs[1].atan2(lhs[0]), rhs[1].atan2(rhs[0])) };
    let margin = real.margin.unwrap_or(0.0);
    let ok = real.orthogonal && arg_gap <= tol.complex_arg;
    let signed = if arg_gap > tol.complex_arg { -arg_gap } else { margin };
    Ok((ok, signed))
}

fn complex_radon_verdict(x: &[f64], y: &[f64], tol: &Tolerances) -> OrthoVerdict {
    let (ok, margin) = complex_radon_criterion([x[0], x[1]], [x[2], x[3]], [y[0], y[1]], [y[2], y[3]], tol)
        .expect("x is nonzero");
    OrthoVerdict { orthogonal: ok, witness: None, margin: Some(margin), qualifier: None }
}

/// Multiplies every complex coordinate `(re, im)` of `y` by `e^{iθ}`.
pub fn rotate_complex(y: &[f64], theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    y.chunks(2).flat_map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]]).collect()
}

/// Grid size of the unimodular scan in the generic complex test.
pub const COMPLEX_GRID: usize = 720;

/// `min_θ D₊(x; e^{iθ}y)/‖y‖` over a grid with golden-section refinement.
pub fn complex_grid_margin(spec: &NormSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let sub = spec.subdiff_f64(x)?;
    let ny = spec.norm_f64(y);
    if ny == 0.0 {
        return Ok(0.0);
    }
    let g = |t: f64| sub.support_max(&rotate_complex(y, t)).0 / ny;
    let h = TAU / COMPLEX_GRID as f64;
    let vals: Vec<f64> = (0..COMPLEX_GRID).map(|k| g(k as f64 * h)).collect();
    let mut order: Vec<usize> = (0..COMPLEX_GRID).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let gs = GoldenSection { xtol: 1e-10, max_iter: 100 };
    let mut best = vals[order[0]];
    for &k in order.iter().take(3) {
        let t = k as f64 * h;
        best = best.min(gs.minimize(g, t - h, t + h).1);
    }
    Ok(best)
}

fn complex_grid_verdict(spec: &NormSpec, x: &[f64], y: &[f64], tol: &Tolerances) -> Result<OrthoVerdict> {
    let margin = complex_grid_margin(spec, x, y)?;
    Ok(OrthoVerdict {
        orthogonal: margin >= -tol.ortho_margin,
        witness: None,
        margin: Some(margin),
        qualifier: Some("sampled".into()),
    })
}

/// Whether `x` has a unique supporting functional.
pub fn is_smooth(spec: &NormSpec, x: &Vector) -> Result<bool> {
    Ok(norm::subdifferential(spec, x)?.kind.is_singleton())
}

/// Which neighbourhood a descriptor encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Neighborhood {
    /// `x⊥`
    Outgoing,
    /// `⊥x`
    Incoming,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DescriptorMode {
    /// Active functionals up to a global sign, sorted.
    ExactActiveSet {
        #[serde(serialize_with = "ser_q_rows")]
        functionals: Vec<Vec<Q>>,
    },
    /// Sorted face-class ids `z` with `x ∈ z⊥`.
    ExactIncoming { classes: Vec<usize> },
    /// Orthonormal basis of the gradient kernel.
    NumericKernel { basis: Vec<Vec<f64>> },
    /// Extreme supporting functionals of a nonsmooth float point, up to sign.
    NumericCone { functionals: Vec<Vec<f64>> },
}

fn ser_q_rows<S: serde::Serializer>(v: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vector> = v.iter().map(|r| Vector::Exact(r.clone())).collect();
    Serialize::serialize(&rows, s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeighborhoodDescriptor {
    pub side: Neighborhood,
    #[serde(flatten)]
    pub mode: DescriptorMode,
}

impl NeighborhoodDescriptor {
    /// Equality of the encoded sets.
    pub fn same_set(&self, other: &Self, tol: &Tolerances) -> bool {
        if self.side != other.side {
            return false;
        }
        match (&self.mode, &other.mode) {
            (DescriptorMode::NumericKernel { basis: a }, DescriptorMode::NumericKernel { basis: b }) => {
                max_principal_angle(a, b) <= tol.kernel_angle
            }
            (DescriptorMode::NumericCone { functionals: a }, DescriptorMode::NumericCone { functionals: b }) => {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(u, v)| u.iter().zip(v).all(|(p, q)| (p - q).abs() <= tol.kernel_angle))
            }
            (a, b) => a == b,
        }
    }

    /// Stable 64-bit FNV-1a hash of the serialized form.
    pub fn digest(&self) -> u64 {
        let text = serde_json::to_string(self).expect("serializable");
        text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
    }
}

/// Canonical form of an exact active set: sorted, with the sign giving the
/// lexicographically smaller list.
pub fn canonical_active(functionals: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut pos: Vec<Vec<Q>> = functionals.to_vec();
    pos.sort();
    let mut neg: Vec<Vec<Q>> = functionals.iter().map(|f| f.iter().map(|c| -c.clone()).collect()).collect();
    neg.sort();
    pos.min(neg)
}

fn canonical_float_rows(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let sort = |mut v: Vec<Vec<f64>>| {
        v.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
        v
    };
    let pos = sort(rows.to_vec());
    let neg = sort(rows.iter().map(|r| r.iter().map(|c| -c).collect()).collect());
    let key = |v: &Vec<Vec<f64>>| v.first().cloned().unwrap_or_default();
    let (kp, kn) = (key(&pos), key(&neg));
    let less = kn.iter().zip(&kp).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()) == Some(std::cmp::Ordering::Less);
    if less {
        neg
    } else {
        pos
    }
}

/// Descriptor of `x⊥` or `⊥x`. Incoming descriptors need an exact model.
pub fn neighborhood_descriptor(
    spec: &NormSpec,
    x: &Vector,
    side: Neighborhood,
) -> Result<NeighborhoodDescriptor> {
    if x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: x.dim() });
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mode = match (spec.poly(), side) {
        (Some(p), Neighborhood::Outgoing) => {
            let xq = x.to_exact()?;
            let act: Vec<Vec<Q>> = p.active(&xq).into_iter().map(|i| p.duals[i].clone()).collect();
            DescriptorMode::ExactActiveSet { functionals: canonical_active(&act) }
        }
        (Some(p), Neighborhood::Incoming) => {
            let xq = x.to_exact()?;
            let lat = p.lattice()?;
            let classes = (0..lat.classes.len())
                .filter(|&c| {
                    let vals: Vec<Q> = lat.class_active(c).iter().map(|&i| dot(&p.duals[i], &xq)).collect();
                    vals.iter().any(|v| v.sign() <= 0) && vals.iter().any(|v| v.sign() >= 0)
                })
                .collect();
            DescriptorMode::ExactIncoming { classes }
        }
        (None, Neighborhood::Incoming) => {
            return Err(Error::Unsupported("incoming descriptors are only available for polyhedral norms".into()))
        }
        (None, Neighborhood::Outgoing) => {
            let xf = x.to_f64();
            match spec.subdiff_f64(&xf)? {
                SubdiffKind::NumericSingleton { gradient } => {
                    DescriptorMode::NumericKernel { basis: orthonormal_kernel(&[gradient], xf.len(), 1e-12) }
                }
                other => DescriptorMode::NumericCone { functionals: canonical_float_rows(&other.vertices_f64()) },
            }
        }
    };
    Ok(NeighborhoodDescriptor { side, mode })
}

/// A point of `x⊥`: random member of `∂‖x‖`, then Euclidean projection of a
/// Gaussian vector onto its kernel.
pub fn perp_probe(sub: &SubdiffKind, rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let f = random_member(sub, rng);
    let g = norm::gaussian_direction(rng, n);
    let ff: f64 = f.iter().map(|c| c * c).sum();
    let c = if ff > 0.0 { f.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() / ff } else { 0.0 };
    g.iter().zip(&f).map(|(a, b)| a - c * b).collect()
}

/// Random convex combination of extreme functionals (disk: random interior point).
pub fn random_member(sub: &SubdiffKind, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match sub {
        SubdiffKind::NumericDisk { center, radius, axes } => {
            let t = rng.random::<f64>() * TAU;
            let r = radius * rng.random::<f64>().sqrt();
            center.iter().enumerate().map(|(i, c)| c + r * (t.cos() * axes[0][i] + t.sin() * axes[1][i])).collect()
        }
        _ => {
            let verts = sub.vertices_f64();
            let w: Vec<f64> = verts.iter().map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
            let s: f64 = w.iter().sum();
            (0..verts[0].len()).map(|j| verts.iter().zip(&w).map(|(v, wi)| v[j] * wi / s).sum()).collect()
        }
    }
}

/// Bisection budget for [`incoming_probe`].
pub const INCOMING_BISECTIONS: usize = 80;

/// A point `z` with `z ⊥ x` on the great circle through `z1` and `w`, found by
/// bisection on the sign of `D₊(z; x) + D₋(z; x)`, which is odd in `z`.
pub fn incoming_probe(spec: &NormSpec, x: &[f64], z1: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    let point = |t: f64| -> Vec<f64> { z1.iter().zip(w).map(|(a, b)| t.cos() * a + t.sin() * b).collect() };
    let mid = |t: f64| -> Result<f64> {
        let (lo, hi) = derivative_bounds(spec, &point(t), x)?;
        Ok(lo + hi)
    };
    let (mut a, mut b) = (0.0, std::f64::consts::PI);
    let mut fa = mid(a)?;
    if fa == 0.0 {
        return Ok(point(a));
    }
    for _ in 0..INCOMING_BISECTIONS {
        let m = 0.5 * (a + b);
        let fm = mid(m)?;
        if fm == 0.0 {
            return Ok(point(m));
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    // The sign change may sit at a kink: keep the endpoint that is orthogonal.
    let (pa, pb) = (point(a), point(b));
    let (la, ha) = derivative_bounds(spec, &pa, x)?;
    Ok(if la <= 0.0 && ha >= 0.0 { pa } else { pb })
}

/// Gram–Schmidt: `w` orthogonal to `z` with the same Euclidean length.
fn orthogonal_partner(z: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let g = norm::gaussian_direction(rng, z.len());
    let zz: f64 = z.iter().map(|c| c * c).sum();
    let c = g.iter().zip(z).map(|(a, b)| a * b).sum::<f64>() / zz;
    let w: Vec<f64> = g.iter().zip(z).map(|(a, b)| a - c * b).collect();
    let s = (zz / w.iter().map(|c| c * c).sum::<f64>()).sqrt();
    w.iter().map(|c| c * s).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// True when decided by probes rather than exact descriptors.
    pub sampled: bool,
    pub probes: usize,
    /// A probe on which `x` and `y` behave differently.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disagreement: Option<Vector>,
}

/// Margin below which a negative verdict counts as a clear "not orthogonal".
pub const CLEAR_MARGIN: f64 = 1e-6;

/// `x⊥ = y⊥` and `⊥x = ⊥y`: exact descriptors, or `probes` seeded probes.
pub fn bj_equivalent(
    spec: &NormSpec,
    x: &Vector,
    y: &Vector,
    probes: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<EquivalenceVerdict> {
    check_pair(spec, x, y)?;
    if y.is_zero() {
        return Err(Error::ZeroVector);
    }
    if spec.is_exact() {
        let same = |side| -> Result<bool> {
            Ok(neighborhood_descriptor(spec, x, side)?.same_set(&neighborhood_descriptor(spec, y, side)?, tol))
        };
        let eq = same(Neighborhood::Outgoing)? && same(Neighborhood::Incoming)?;
        return Ok(EquivalenceVerdict { equivalent: eq, sampled: false, probes: 0, disagreement: None });
    }
    let (xf, yf) = (x.to_f64(), y.to_f64());
    let n = xf.len();
    let mut rng = norm::rng(seed);
    let (sx, sy) = (spec.subdiff_f64(&xf)?, spec.subdiff_f64(&yf)?);
    let real = !spec.is_complex();
    let clash = |a: &OrthoVerdict, b: &OrthoVerdict| {
        let clear = |v: &OrthoVerdict| !v.orthogonal && v.margin.is_some_and(|m| m < -CLEAR_MARGIN);
        (a.orthogonal && clear(b)) || (b.orthogonal && clear(a))
    };
    for k in 0..probes {
        let z = match k % 4 {
            0 => norm::gaussian_direction(&mut rng, n),
            1 => perp_probe(&sx, &mut rng, n),
            2 => perp_probe(&sy, &mut rng, n),
            _ if real => {
                let target = if k % 8 == 3 { &xf } else { &yf };
                let z1 = norm::gaussian_direction(&mut rng, n);
                let w = orthogonal_partner(&z1, &mut rng);
                incoming_probe(spec, target, &z1, &w)?
            }
            _ => norm::gaussian_direction(&mut rng, n),
        };
        if euclid_norm(&z) < 1e-12 {
            continue;
        }
        let out_x = orthogonal_f64(spec, &xf, &z, tol)?;
        let out_y = orthogonal_f64(spec, &yf, &z, tol)?;
        let in_x = orthogonal_f64(spec, &z, &xf, tol)?;
        let in_y = orthogonal_f64(spec, &z, &yf, tol)?;
        if clash(&out_x, &out_y) || clash(&in_x, &in_y) {
            return Ok(EquivalenceVerdict {
                equivalent: false,
                sampled: true,
                probes: k + 1,
                disagreement: Some(Vector::Numeric(z)),
            });
        }
    }
    Ok(EquivalenceVerdict { equivalent: true, sampled: true, probes, disagreement: None })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BjNormReport {
    pub samples: usize,
    /// Pairs of independent points whose outgoing descriptors coincide.
    pub candidate_pairs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<(Vector, Vector)>,
    pub sampled: bool,
}

/// Probe count used for each candidate pair of [`is_bj_norm_sampled`].
pub const EQUIVALENCE_PROBES: usize = 400;

/// Members of one descriptor group paired by [`is_bj_norm_sampled`].
const GROUP_PAIR_SPAN: usize = 32;
/// Anchors per descriptor group.
const GROUP_ANCHORS: usize = 4;

fn independent(a: &[f64], b: &[f64]) -> bool {
    let (na, nb) = (euclid_norm(a), euclid_norm(b));
    let c = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
    (1.0 - c.abs()) > 1e-10
}

/// Searches for linearly independent BJ-equivalent points.
///
/// Exact models group samples by descriptor and also test two interior points
/// of every face of positive dimension. Float models pair each sample with a
/// nearby point along its tangent kernel when the outgoing descriptor is
/// unchanged there, and decide those pairs by probes.
pub fn is_bj_norm_sampled(spec: &NormSpec, sample_count: usize, seed: u64, tol: &Tolerances) -> Result<BjNormReport> {
    if sample_count < 2 {
        return Err(Error::InvalidSpec("at least two samples are needed".into()));
    }
    if spec.is_complex() {
        return Err(Error::Unsupported("BJ-norm search is implemented for real models".into()));
    }
    let samples = norm::unit_sphere_samples(spec, sample_count, seed)?;
    if let Some(p) = spec.poly() {
        let mut candidates: Vec<(Vector, Vector)> = Vec::new();
        let lat = p.lattice()?;
        for f in lat.faces.iter().filter(|f| f.dim >= 1) {
            let v = &p.vertices[f.vertex_ids[0]];
            let a = f.representative.clone();
            let b: Vec<Q> = a.iter().zip(v).map(|(r, w)| (r.clone() * q(2) + w.clone()) / q(3)).collect();
            candidates.push((Vector::Exact(a), Vector::Exact(b)));
        }
        let mut groups: std::collections::BTreeMap<Vec<Vec<Q>>, Vec<Vec<Q>>> = Default::default();
        for s in &samples {
            let sq: Vec<Q> = s.to_f64().iter().map(|c| q_from_f64(*c)).collect::<Result<_>>()?;
            let act: Vec<Vec<Q>> = p.active(&sq).into_iter().map(|i| p.duals[i].clone()).collect();
            groups.entry(canonical_active(&act)).or_default().push(sq);
        }
        // Same outgoing set is necessary; incoming sets are decided per pair.
        for members in groups.values() {
            let m = members.len().min(GROUP_PAIR_SPAN);
            let fl: Vec<Vec<f64>> = members[..m].iter().map(|v| v.iter().map(Field::to_f64).collect()).collect();
            for i in 0..m.min(GROUP_ANCHORS) {
                for j in i + 1..m {
                    if independent(&fl[i], &fl[j]) {
                        candidates.push((Vector::Exact(members[i].clone()), Vector::Exact(members[j].clone())));
                    }
                }
            }
        }
        let n_cand = candidates.len();
        for (a, b) in candidates {
            if bj_equivalent(spec, &a, &b, 0, seed, tol)?.equivalent {
                return Ok(BjNormReport { samples: sample_count, candidate_pairs: n_cand, violation: Some((a, b)), sampled: false });
            }
        }
        return Ok(BjNormReport { samples: sample_count, candidate_pairs: n_cand, violation: None, sampled: false });
    }
    let n = spec.dim();
    let mut candidates = Vec::new();
    for s in &samples {
        let x = s.to_f64();
        let dx = neighborhood_descriptor(spec, s, Neighborhood::Outgoing)?;
        let basis = match &dx.mode {
            DescriptorMode::NumericKernel { basis } => basis.clone(),
            _ => continue,
        };
        for t in basis.iter().take(n) {
            for step in [1e-2, -1e-2] {
                let raw: Vec<f64> = x.iter().zip(t).map(|(a, b)| a + step * b).collect();
                let nr = spec.norm_f64(&raw);
                let y: Vec<f64> = raw.iter().map(|c| c / nr).collect();
                let dy = neighborhood_descriptor(spec, &Vector::Numeric(y.clone()), Neighborhood::Outgoing)?;
                if dx.same_set(&dy, tol) && independent(&x, &y) {
                    candidates.push((x.clone(), y));
                }
            }
        }
    }
    let n_cand = candidates.len();
    for (k, (a, b)) in candidates.into_iter().enumerate() {
        let (va, vb) = (Vector::Numeric(a), Vector::Numeric(b));
        if bj_equivalent(spec, &va, &vb, EQUIVALENCE_PROBES, seed.wrapping_add(k as u64), tol)?.equivalent {
            return Ok(BjNormReport { samples: sample_count, candidate_pairs: n_cand, violation: Some((va, vb)), sampled: true });
        }
    }
    Ok(BjNormReport { samples: sample_count, candidate_pairs: n_cand, violation: None, sampled: true })
}

/// Mutual-pair partner check on the absolute Radon curve: both directions at `ξ`.
pub fn absolute_radon_pair_margins(xi: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    let x = absolute_radon::curve_point(xi);
    let y = absolute_radon::mutual_partner(xi);
    let s = &NormSpec::AbsoluteRadon;
    let a = orthogonal_f64(s, &x, &y, tol)?.margin.unwrap_or(0.0);
    let b = orthogonal_f64(s, &y, &x, tol)?.margin.unwrap_or(0.0);
    Ok((a, b))
}
