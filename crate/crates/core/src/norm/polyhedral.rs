//! Norms whose unit ball is a polytope, `‖x‖ = maxᵢ fᵢ(x)` over a symmetric
//! irredundant list of dual vertices. All arithmetic is exact.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::face::{face_lattice, FaceLattice};
use crate::field::{dot, neg_vec, q, to_f64_vec, Field, Q};
use crate::linalg::{rank, solve};

#[derive(Clone, Debug)]
pub struct Polyhedral {
    pub dim: usize,
    /// Dual vertices; closed under negation.
    pub duals: Vec<Vec<Q>>,
    pub duals_f64: Vec<Vec<f64>>,
    /// `neg[i]` is the index of `-duals[i]`.
    pub neg: Vec<usize>,
    /// Vertices of the unit ball.
    pub vertices: Vec<Vec<Q>>,
    /// Dual indices equal to 1 at each ball vertex.
    pub vertex_active: Vec<Vec<usize>>,
    lattice: OnceLock<Arc<FaceLattice>>,
}

impl Polyhedral {
    /// Validates and builds: negation-symmetric, no duplicates, full span, irredundant.
    pub fn new(duals: Vec<Vec<Q>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        let Some(first) = duals.first() else {
            return bad("polyhedral norm needs at least one dual vertex".into());
        };
        let dim = first.len();
        if dim == 0 {
            return bad("dual vertices must have positive length".into());
        }
        if let Some(d) = duals.iter().find(|d| d.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: d.len() });
        }
        if duals.iter().any(|d| d.iter().all(|c| c.sign() == 0)) {
            return bad("zero functional among dual vertices".into());
        }
        for i in 0..duals.len() {
            for j in 0..i {
                if duals[i] == duals[j] {
                    return bad(format!("duplicate dual vertex at positions {j} and {i}"));
                }
            }
        }
        let mut neg = Vec::with_capacity(duals.len());
        for d in &duals {
            let nd = neg_vec(d);
            match duals.iter().position(|e| *e == nd) {
                Some(k) => neg.push(k),
                None => return bad("dual vertices are not symmetric under negation".into()),
            }
        }
        if rank(&duals, dim) != dim {
            return bad("dual vertices do not span the dual space (unbounded ball)".into());
        }
        let (vertices, vertex_active) = enumerate_vertices(&duals, &neg, dim);
        for (k, _) in duals.iter().enumerate() {
            let on_facet: Vec<Vec<Q>> = vertices
                .iter()
                .zip(&vertex_active)
                .filter(|(_, act)| act.contains(&k))
                .map(|(v, _)| v.clone())
                .collect();
            if rank(&on_facet, dim) != dim {
                return bad(format!("dual vertex {k} is redundant (inside the hull of the others)"));
            }
        }
        let duals_f64 = duals.iter().map(|d| to_f64_vec(d)).collect();
        Ok(Polyhedral { dim, duals, duals_f64, neg, vertices, vertex_active, lattice: OnceLock::new() })
    }

    /// `ℓ∞ⁿ`: dual vertices `±eᵢ`.
    pub fn linf(dim: usize) -> Result<Self> {
        let mut duals = Vec::new();
        for i in 0..dim {
            for s in [1, -1] {
                duals.push((0..dim).map(|j| if i == j { q(s) } else { q(0) }).collect());
            }
        }
        Self::new(duals)
    }

    /// `ℓ1ⁿ`: dual vertices are all sign vectors.
    pub fn l1(dim: usize) -> Result<Self> {
        let duals = (0..1usize << dim)
            .map(|mask| (0..dim).map(|j| if mask >> j & 1 == 1 { q(-1) } else { q(1) }).collect())
            .collect();
        Self::new(duals)
    }

    /// Hexagonal norm: dual vertices `±(1,0), ±(0,1), ±(1,-1)`.
    pub fn hexagonal() -> Self {
        let d = |a: i64, b: i64| vec![q(a), q(b)];
        Self::new(vec![d(1, 0), d(-1, 0), d(0, 1), d(0, -1), d(1, -1), d(-1, 1)]).expect("hexagon is valid")
    }

    /// Ball mapped by the invertible matrix `m` (rows): dual vertices become `f ∘ m⁻¹`.
    pub fn linear_image(&self, m: &[Vec<Q>]) -> Result<Self> {
        let n = self.dim;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: m.len() });
        }
        // f∘m⁻¹ = g with gᵀ m = fᵀ, i.e. mᵀ g = f.
        let mt: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect();
        let duals = self
            .duals
            .iter()
            .map(|f| solve(&mt, f).ok_or_else(|| Error::InvalidSpec("singular linear map".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(duals)
    }

    /// Face lattice, computed once.
    pub fn lattice(&self) -> Result<Arc<FaceLattice>> {
        if let Some(l) = self.lattice.get() {
            return Ok(l.clone());
        }
        let l = Arc::new(face_lattice(self)?);
        Ok(self.lattice.get_or_init(|| l).clone())
    }

    pub fn norm(&self, x: &[Q]) -> Q {
        self.duals.iter().map(|f| dot(f, x)).fold(q(0), |a, b| if b > a { b } else { a })
    }

    pub fn norm_f64(&self, x: &[f64]) -> f64 {
        self.duals_f64
            .iter()
            .map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Indices of dual vertices attaining the norm at `x ≠ 0`.
    pub fn active(&self, x: &[Q]) -> Vec<usize> {
        let vals: Vec<Q> = self.duals.iter().map(|f| dot(f, x)).collect();
        let m = vals.iter().fold(q(0), |a, b| if *b > a { b.clone() } else { a });
        vals.iter().enumerate().filter(|(_, v)| **v == m).map(|(i, _)| i).collect()
    }

    /// Indices whose value at `x` is within `rel_tol·‖x‖` of the maximum.
    pub fn active_f64(&self, x: &[f64], rel_tol: f64) -> Vec<usize> {
        let vals: Vec<f64> =
            self.duals_f64.iter().map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
        let m = vals.iter().copied().fold(0.0, f64::max);
        vals.iter().enumerate().filter(|(_, v)| **v >= m - rel_tol * m.abs()).map(|(i, _)| i).collect()
    }
}

fn enumerate_vertices(duals: &[Vec<Q>], neg: &[usize], dim: usize) -> (Vec<Vec<Q>>, Vec<Vec<usize>>) {
    let mut found: BTreeMap<Vec<Q>, ()> = BTreeMap::new();
    let mut idx = Vec::with_capacity(dim);
    let ones = vec![q(1); dim];
    choose(duals.len(), dim, &mut idx, &mut |s| {
        if s.iter().any(|&i| s.contains(&neg[i]) && neg[i] != i) {
            return;
        }
        let a: Vec<Vec<Q>> = s.iter().map(|&i| duals[i].clone()).collect();
        if let Some(x) = solve(&a, &ones) {
            if duals.iter().all(|f| dot(f, &x) <= q(1)) {
                found.insert(x, ());
            }
        }
    });
    let vertices: Vec<Vec<Q>> = found.into_keys().collect();
    let active = vertices
        .iter()
        .map(|v| (0..duals.len()).filter(|&i| dot(&duals[i], v) == q(1)).collect())
        .collect();
    (vertices, active)
}

fn choose(m: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    let start = cur.last().map_or(0, |&l| l + 1);
    for i in start..m {
        if m - i < k - cur.len() {
            break;
        }
        cur.push(i);
        choose(m, k, cur, f);
        cur.pop();
    }
}
