//! Float-valued models: `ℓp` (1 < p < ∞), the nonsmooth nonrotund norm on ℝ³,
//! the complex Radon plane, and convex polygon norms.

use std::f64::consts::{E, SQRT_2};

use super::absolute_radon;
use super::subdiff::SubdiffKind;
use crate::field::euclid_norm;

/// Relative distance to a seam below which a point is treated as on it.
pub const SEAM_TOL: f64 = 1e-9;

pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `gradᵢ = sign(xᵢ)|xᵢ|^{p−1}/‖x‖^{p−1}`.
pub fn lp_gradient(x: &[f64], p: f64) -> Vec<f64> {
    let n = lp_norm(x, p);
    x.iter().map(|v| v.signum() * (v.abs() / n).powf(p - 1.0)).collect()
}

/// Point of the `ℓp` unit sphere where the functional `f` attains its dual norm.
pub fn lp_duality_point(f: &[f64], p: f64) -> Vec<f64> {
    let q = p / (p - 1.0);
    let y: Vec<f64> = f.iter().map(|c| c.signum() * c.abs().powf(q - 1.0)).collect();
    let n = lp_norm(&y, p);
    y.iter().map(|c| c / n).collect()
}

/// `√2·‖(x,y,z)‖₂` inside the cone `|z| ≤ √(x²+y²)`, `√(x²+y²) + |z|` outside.
pub fn bj_r3_norm(v: &[f64]) -> f64 {
    let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
    if v[2].abs() <= r {
        SQRT_2 * euclid_norm(v)
    } else {
        r + v[2].abs()
    }
}

pub fn bj_r3_subdifferential(v: &[f64]) -> SubdiffKind {
    let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
    let e = euclid_norm(v);
    if r <= SEAM_TOL * e {
        return SubdiffKind::NumericDisk {
            center: vec![0.0, 0.0, v[2].signum()],
            radius: 1.0,
            axes: [vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        };
    }
    if v[2].abs() <= r {
        SubdiffKind::NumericSingleton { gradient: v.iter().map(|c| SQRT_2 * c / e).collect() }
    } else {
        SubdiffKind::NumericSingleton { gradient: vec![v[0] / r, v[1] / r, v[2].signum()] }
    }
}

fn cabs(re: f64, im: f64) -> f64 {
    re.hypot(im)
}

/// `‖(a, b)‖ = ‖(|a|, |b|)‖` of the absolute Radon plane; input `(Re a, Im a, Re b, Im b)`.
pub fn complex_radon_norm(v: &[f64]) -> f64 {
    absolute_radon::norm(&[cabs(v[0], v[1]), cabs(v[2], v[3])])
}

/// Subdifferential of the realified complex norm.
pub fn complex_radon_subdifferential(v: &[f64]) -> SubdiffKind {
    let ra = cabs(v[0], v[1]);
    let rb = cabs(v[2], v[3]);
    let n = absolute_radon::norm(&[ra, rb]);
    if rb <= absolute_radon::SEAM_TOL * n {
        return SubdiffKind::NumericDisk {
            center: vec![v[0] / ra, v[1] / ra, 0.0, 0.0],
            radius: 1.0 / E,
            axes: [vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]],
        };
    }
    let g = match absolute_radon::subdifferential(&[ra, rb]) {
        SubdiffKind::NumericSingleton { gradient } => gradient,
        _ => unreachable!("seam handled above"),
    };
    let ua = if ra > 0.0 { [v[0] / ra, v[1] / ra] } else { [0.0, 0.0] };
    SubdiffKind::NumericSingleton {
        gradient: vec![g[0] * ua[0], g[0] * ua[1], g[1] * v[2] / rb, g[1] * v[3] / rb],
    }
}

/// Convex, centrally symmetric polygon norm given by its boundary vertices in
/// counter-clockwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonNorm {
    pub vertices: Vec<[f64; 2]>,
    /// `normals[k]` equals 1 on the edge from `vertices[k]` to `vertices[k+1]`.
    pub normals: Vec<[f64; 2]>,
}

impl PolygonNorm {
    /// Builds from boundary points in angular order, dropping collinear interior points.
    pub fn from_boundary(points: &[[f64; 2]]) -> Option<Self> {
        let mut pts: Vec<[f64; 2]> = Vec::new();
        for p in points {
            if pts.last().is_none_or(|q: &[f64; 2]| (q[0] - p[0]).hypot(q[1] - p[1]) > 1e-14) {
                pts.push(*p);
            }
        }
        while pts.len() > 1 && (pts[0][0] - pts[pts.len() - 1][0]).hypot(pts[0][1] - pts[pts.len() - 1][1]) <= 1e-14 {
            pts.pop();
        }
        // Remove points collinear with their neighbours.
        loop {
            let m = pts.len();
            if m < 3 {
                return None;
            }
            let mut removed = false;
            for k in 0..m {
                let a = pts[(k + m - 1) % m];
                let b = pts[k];
                let c = pts[(k + 1) % m];
                let (d1, d2) = ([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
                let cross = d1[0] * d2[1] - d1[1] * d2[0];
                let scale = d1[0].hypot(d1[1]) * d2[0].hypot(d2[1]);
                if cross.abs() <= 1e-12 * scale {
                    pts.remove(k);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
        let m = pts.len();
        let mut normals = Vec::with_capacity(m);
        for k in 0..m {
            let a = pts[k];
            let b = pts[(k + 1) % m];
            let det = a[0] * b[1] - a[1] * b[0];
            if det <= 0.0 {
                return None;
            }
            normals.push([(b[1] - a[1]) / det, (a[0] - b[0]) / det]);
        }
        Some(PolygonNorm { vertices: pts, normals })
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.normals.iter().map(|f| f[0] * x[0] + f[1] * x[1]).fold(0.0, f64::max)
    }

    pub fn subdifferential(&self, x: &[f64]) -> SubdiffKind {
        let vals: Vec<f64> = self.normals.iter().map(|f| f[0] * x[0] + f[1] * x[1]).collect();
        let m = vals.iter().copied().fold(0.0, f64::max);
        let act: Vec<Vec<f64>> = vals
            .iter()
            .zip(&self.normals)
            .filter(|(v, _)| **v >= m - SEAM_TOL * m)
            .map(|(_, f)| f.to_vec())
            .collect();
        SubdiffKind::from_vertices(act, 0.0)
    }
}
