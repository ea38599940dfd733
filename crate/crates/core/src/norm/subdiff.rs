use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Q;
use crate::vector::Vector;

/// Shape of `∂‖x‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubdiffKind {
    /// Exact polytope given by its (deduplicated) vertex functionals.
    ExactPolytope {
        #[serde(serialize_with = "ser_exact_list")]
        vertices: Vec<Vec<Q>>,
    },
    NumericSingleton { gradient: Vec<f64> },
    NumericSegment { endpoints: [Vec<f64>; 2] },
    /// Polytope with more than two vertices (products in direct sums).
    NumericPolytope { vertices: Vec<Vec<f64>> },
    /// `center + radius·(cos t·axes[0] + sin t·axes[1])`, filled.
    NumericDisk { center: Vec<f64>, radius: f64, axes: [Vec<f64>; 2] },
}

fn ser_exact_list<S: serde::Serializer>(v: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let as_vectors: Vec<Vector> = v.iter().map(|c| Vector::Exact(c.clone())).collect();
    serde::Serialize::serialize(&as_vectors, s)
}

/// `∂‖x‖` together with its basepoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subdifferential {
    pub basepoint: Vector,
    #[serde(flatten)]
    pub kind: SubdiffKind,
}

fn pair(f: &[f64], v: &[f64]) -> f64 {
    f.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Number of boundary points used when a disk must be listed as a polygon.
pub const DISK_POLYGON_POINTS: usize = 16;

impl SubdiffKind {
    pub fn is_singleton(&self) -> bool {
        match self {
            SubdiffKind::ExactPolytope { vertices } => vertices.len() == 1,
            SubdiffKind::NumericSingleton { .. } => true,
            _ => false,
        }
    }

    /// `max f(v)` over the set, with a maximizing functional (floats).
    pub fn support_max(&self, v: &[f64]) -> (f64, Vec<f64>) {
        match self {
            SubdiffKind::NumericDisk { center, radius, axes } => {
                let c0 = pair(&axes[0], v);
                let c1 = pair(&axes[1], v);
                let r = (c0 * c0 + c1 * c1).sqrt();
                let mut f = center.clone();
                if r > 0.0 {
                    for (k, fk) in f.iter_mut().enumerate() {
                        *fk += radius * (c0 * axes[0][k] + c1 * axes[1][k]) / r;
                    }
                }
                (pair(center, v) + radius * r, f)
            }
            _ => {
                let verts = self.vertices_f64();
                let mut best = (f64::NEG_INFINITY, Vec::new());
                for f in verts {
                    let val = pair(&f, v);
                    if val > best.0 {
                        best = (val, f);
                    }
                }
                best
            }
        }
    }

    /// `min f(v)` over the set, with a minimizing functional (floats).
    pub fn support_min(&self, v: &[f64]) -> (f64, Vec<f64>) {
        let neg: Vec<f64> = v.iter().map(|c| -c).collect();
        let (m, f) = self.support_max(&neg);
        (-m, f)
    }

    /// Extreme functionals as floats; a disk is replaced by an inscribed polygon.
    pub fn vertices_f64(&self) -> Vec<Vec<f64>> {
        match self {
            SubdiffKind::ExactPolytope { vertices } => {
                vertices.iter().map(|f| f.iter().map(crate::field::Field::to_f64).collect()).collect()
            }
            SubdiffKind::NumericSingleton { gradient } => vec![gradient.clone()],
            SubdiffKind::NumericSegment { endpoints } => endpoints.to_vec(),
            SubdiffKind::NumericPolytope { vertices } => vertices.clone(),
            SubdiffKind::NumericDisk { center, radius, axes } => (0..DISK_POLYGON_POINTS)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / DISK_POLYGON_POINTS as f64;
                    center
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c + radius * (t.cos() * axes[0][i] + t.sin() * axes[1][i]))
                        .collect()
                })
                .collect(),
        }
    }

    /// Builds the tightest variant for a finite float vertex list.
    pub fn from_vertices(mut vertices: Vec<Vec<f64>>, dedup_tol: f64) -> Self {
        let mut kept: Vec<Vec<f64>> = Vec::new();
        for v in vertices.drain(..) {
            if !kept.iter().any(|k| k.iter().zip(&v).all(|(a, b)| (a - b).abs() <= dedup_tol)) {
                kept.push(v);
            }
        }
        match kept.len() {
            1 => SubdiffKind::NumericSingleton { gradient: kept.remove(0) },
            2 => {
                let b = kept.remove(1);
                let a = kept.remove(0);
                SubdiffKind::NumericSegment { endpoints: [a, b] }
            }
            _ => SubdiffKind::NumericPolytope { vertices: kept },
        }
    }

    /// Subdifferential of `√(‖u‖² + ‖w‖²)` from those of the summands.
    /// `left`/`right` are `None` when that component is zero.
    pub fn direct_sum(
        left: Option<(&SubdiffKind, f64)>,
        right: Option<(&SubdiffKind, f64)>,
        left_dim: usize,
        right_dim: usize,
    ) -> Result<Self> {
        let total = left.map_or(0.0, |(_, a)| a * a) + right.map_or(0.0, |(_, b)| b * b);
        let n = total.sqrt();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        let pad_left = |f: &[f64], w: f64| -> Vec<f64> {
            let mut out: Vec<f64> = f.iter().map(|c| c * w).collect();
            out.extend(std::iter::repeat_n(0.0, right_dim));
            out
        };
        let pad_right = |f: &[f64], w: f64| -> Vec<f64> {
            let mut out = vec![0.0; left_dim];
            out.extend(f.iter().map(|c| c * w));
            out
        };
        let lw = left.map_or(0.0, |(_, a)| a / n);
        let rw = right.map_or(0.0, |(_, b)| b / n);
        let lv = left.map(|(k, _)| k);
        let rv = right.map(|(k, _)| k);
        // Disks only combine with singletons (or with a zero component).
        let as_disk = |k: &SubdiffKind, w: f64, other: Vec<f64>, left_side: bool| -> Option<SubdiffKind> {
            if let SubdiffKind::NumericDisk { center, radius, axes } = k {
                let emb = |v: &[f64], s: f64| if left_side { pad_left(v, s) } else { pad_right(v, s) };
                let mut c = emb(center, w);
                for (ci, oi) in c.iter_mut().zip(&other) {
                    *ci += oi;
                }
                return Some(SubdiffKind::NumericDisk {
                    center: c,
                    radius: radius * w,
                    axes: [emb(&axes[0], 1.0), emb(&axes[1], 1.0)],
                });
            }
            None
        };
        let lverts = match lv {
            Some(k) if lw > 0.0 => match k {
                SubdiffKind::NumericDisk { .. } => None,
                _ => Some(k.vertices_f64()),
            },
            _ => Some(vec![vec![0.0; left_dim]]),
        };
        let rverts = match rv {
            Some(k) if rw > 0.0 => match k {
                SubdiffKind::NumericDisk { .. } => None,
                _ => Some(k.vertices_f64()),
            },
            _ => Some(vec![vec![0.0; right_dim]]),
        };
        match (lverts, rverts) {
            (Some(lvs), Some(rvs)) => {
                let mut out = Vec::new();
                for a in &lvs {
                    for b in &rvs {
                        let mut f = pad_left(a, lw);
                        for (fi, bi) in f.iter_mut().zip(pad_right(b, rw)) {
                            *fi += bi;
                        }
                        out.push(f);
                    }
                }
                Ok(SubdiffKind::from_vertices(out, 0.0))
            }
            (None, Some(rvs)) if rvs.len() == 1 => {
                Ok(as_disk(lv.expect("left present"), lw, pad_right(&rvs[0], rw), true).expect("disk"))
            }
            (Some(lvs), None) if lvs.len() == 1 => {
                Ok(as_disk(rv.expect("right present"), rw, pad_left(&lvs[0], lw), false).expect("disk"))
            }
            _ => Err(Error::Unsupported("direct sum of a disk-shaped subdifferential with a nonsmooth one".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_support() {
        let s = SubdiffKind::NumericSegment { endpoints: [vec![1.0, -0.5], vec![1.0, 0.5]] };
        assert_eq!(s.support_max(&[0.0, 2.0]).0, 1.0);
        assert_eq!(s.support_min(&[0.0, 2.0]).0, -1.0);
    }

    #[test]
    fn disk_support() {
        let d = SubdiffKind::NumericDisk {
            center: vec![0.0, 0.0, 1.0],
            radius: 1.0,
            axes: [vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        };
        let (m, f) = d.support_max(&[3.0, 4.0, 1.0]);
        assert!((m - 6.0).abs() < 1e-12);
        assert!((f[0] - 0.6).abs() < 1e-12);
        assert!((d.support_min(&[3.0, 4.0, 1.0]).0 + 4.0).abs() < 1e-12);
    }

    #[test]
    fn direct_sum_with_zero_right_component() {
        let l = SubdiffKind::NumericSegment { endpoints: [vec![1.0, -1.0], vec![1.0, 1.0]] };
        let s = SubdiffKind::direct_sum(Some((&l, 1.0)), None, 2, 1).unwrap();
        assert_eq!(s, SubdiffKind::NumericSegment { endpoints: [vec![1.0, -1.0, 0.0], vec![1.0, 1.0, 0.0]] });
    }
}
