//! Row reduction over a [`Field`], plus float subspace utilities.

use nalgebra::DMatrix;

use crate::field::Field;

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped)
/// and the pivot column of each.
pub fn rref<F: Field>(rows: &[Vec<F>], ncols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let best = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&a, &b| m[a][c].magnitude().total_cmp(&m[b][c].magnitude()));
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = F::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{y : row·y = 0 for every row}`.
pub fn kernel<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![F::zero(); ncols];
            v[fc] = F::one();
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = -row[fc].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of the square system `a·x = b`, if nonsingular.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = b.len();
    let aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.iter().map(|row| row[n].clone()).collect())
}

/// Orthonormal basis (columns as vectors) of the null space of `rows`, via SVD.
pub fn orthonormal_kernel(rows: &[Vec<f64>], ncols: usize, tol: f64) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return (0..ncols).map(|i| unit(ncols, i)).collect();
    }
    // Pad to a square-or-taller matrix so the full right singular basis is available.
    let m = rows.len().max(ncols);
    let mut mat = DMatrix::<f64>::zeros(m, ncols);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            mat[(i, j)] = *v;
        }
    }
    let scale = mat.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let svd = mat.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s <= tol * scale {
            out.push(vt.row(k).iter().copied().collect());
        }
    }
    out
}

/// Orthonormal basis for the span of `vectors`.
pub fn orthonormal_span(vectors: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = w.iter().zip(b).map(|(a, b)| a * b).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        let vn = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > tol * vn.max(1e-300) && basis.len() < dim {
            basis.push(w.iter().map(|c| c / n).collect());
        }
    }
    basis
}

/// Largest principal angle between two subspaces given by orthonormal bases.
/// Subspaces of different dimension yield `π/2`.
pub fn max_principal_angle(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    if a.len() != b.len() {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.is_empty() {
        return 0.0;
    }
    // sin of the largest angle is the spectral norm of the residual of `a` off `b`.
    let n = a[0].len();
    let res = DMatrix::<f64>::from_fn(a.len(), n, |i, j| {
        let proj: f64 = b
            .iter()
            .map(|bv| a[i].iter().zip(bv).map(|(x, y)| x * y).sum::<f64>() * bv[j])
            .sum();
        a[i][j] - proj
    });
    let smax = res.singular_values().iter().fold(0.0f64, |acc, s| acc.max(*s));
    smax.min(1.0).asin()
}

pub fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}
