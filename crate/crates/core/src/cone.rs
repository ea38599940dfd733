//! Finite unions of polyhedral cones `{y : E·y = 0, A·y ≤ 0}`.
//!
//! An outgoing neighbourhood `x⊥ = ⋃_{f ∈ conv F} Ker f` of a point whose
//! supporting functionals have extreme set `F` equals the union over ordered
//! pairs `(f, g)` of `{f(y) ≤ 0 ≤ g(y)}`, so intersections of neighbourhoods are
//! again finite unions of such cones.

use crate::error::{Error, Result};
use crate::field::{dot, euclid_norm, projective_normalize, to_f64_vec, Field};
use crate::linalg::{kernel, rank};

#[derive(Clone, Debug, PartialEq)]
pub struct Cone<F> {
    pub eq: Vec<Vec<F>>,
    /// Rows `a` meaning `a·y ≤ 0`.
    pub ineq: Vec<Vec<F>>,
}

/// Shape summary of one cone.
#[derive(Clone, Debug)]
pub struct ConeShape<F> {
    /// Dimension of the linear span of the cone.
    pub span_dim: usize,
    /// Generators of the span (lineality basis plus extreme rays), in ambient coordinates.
    pub generators: Vec<Vec<F>>,
}

/// Number of projective lines in a union of cones.
#[derive(Clone, Debug, PartialEq)]
pub enum Lines<F> {
    Zero,
    One(Vec<F>),
    Many,
}

impl<F: Field> Lines<F> {
    pub fn is_one(&self) -> bool {
        matches!(self, Lines::One(_))
    }
}

/// Hard cap on cones carried through an intersection.
pub const CONE_BUDGET: usize = 400_000;

fn normalized<F: Field>(row: &[F]) -> Vec<F> {
    if F::EXACT {
        return row.to_vec();
    }
    let m = row.iter().fold(0.0f64, |a, v| a.max(v.magnitude()));
    if m == 0.0 {
        return row.to_vec();
    }
    let inv = F::one() / F::from_f64_lossy(m);
    row.iter().map(|v| v.clone() * inv.clone()).collect()
}

impl<F: Field> Cone<F> {
    pub fn subspace(eq: Vec<Vec<F>>) -> Self {
        Cone { eq, ineq: Vec::new() }
    }

    pub fn meet(&self, other: &Cone<F>) -> Cone<F> {
        let mut eq = self.eq.clone();
        eq.extend(other.eq.iter().cloned());
        let mut ineq = self.ineq.clone();
        ineq.extend(other.ineq.iter().cloned());
        Cone { eq, ineq }
    }

    /// Span dimension and generators; `span_dim == 0` means the cone is `{0}`.
    pub fn shape(&self, n: usize) -> ConeShape<F> {
        let eq: Vec<Vec<F>> = self.eq.iter().map(|r| normalized(r)).collect();
        let basis = kernel(&eq, n);
        let s = basis.len();
        if s == 0 {
            return ConeShape { span_dim: 0, generators: Vec::new() };
        }
        // Inequalities in coordinates of the subspace `Ker eq`.
        let reduced: Vec<Vec<F>> = self
            .ineq
            .iter()
            .map(|a| normalized(&basis.iter().map(|b| dot(a, b)).collect::<Vec<F>>()))
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect();
        let lineality = kernel(&reduced, s);
        let l = lineality.len();
        let mut gens: Vec<Vec<F>> = lineality.clone();
        if l < s {
            let k0 = s - 1 - l;
            let mut chosen = Vec::with_capacity(k0);
            subsets(reduced.len(), k0, &mut chosen, &mut |idx| {
                let mut rows: Vec<Vec<F>> = lineality.clone();
                rows.extend(idx.iter().map(|&i| reduced[i].clone()));
                if rank(&rows, s) != s - 1 {
                    return;
                }
                let dir = kernel(&rows, s);
                if dir.len() != 1 {
                    return;
                }
                let r = &dir[0];
                let signs: Vec<i8> = reduced.iter().map(|a| dot(a, r).sign()).collect();
                if signs.iter().all(|&g| g <= 0) {
                    gens.push(r.clone());
                } else if signs.iter().all(|&g| g >= 0) {
                    gens.push(r.iter().map(|v| -v.clone()).collect());
                }
            });
        }
        let span_dim = rank(&gens, s);
        let generators = gens
            .iter()
            .map(|g| {
                (0..n)
                    .map(|j| g.iter().zip(&basis).fold(F::zero(), |acc, (c, b)| acc + c.clone() * b[j].clone()))
                    .collect()
            })
            .collect();
        ConeShape { span_dim, generators }
    }

    pub fn is_nontrivial(&self, n: usize) -> bool {
        self.shape(n).span_dim > 0
    }
}

fn subsets(m: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
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
        subsets(m, k, cur, f);
        cur.pop();
    }
}

/// `x⊥` for a point whose supporting functionals are `conv(functionals)`.
pub fn perp_cones<F: Field>(functionals: &[Vec<F>]) -> Vec<Cone<F>> {
    match functionals.len() {
        0 => Vec::new(),
        1 => vec![Cone::subspace(vec![functionals[0].clone()])],
        m => {
            let mut out = Vec::with_capacity(m * (m - 1));
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        let neg_j: Vec<F> = functionals[j].iter().map(|v| -v.clone()).collect();
                        out.push(Cone { eq: Vec::new(), ineq: vec![functionals[i].clone(), neg_j] });
                    }
                }
            }
            out
        }
    }
}

/// Intersection of two unions, with `{0}` cones pruned.
pub fn intersect<F: Field>(a: &[Cone<F>], b: &[Cone<F>], n: usize) -> Result<Vec<Cone<F>>> {
    if a.len().saturating_mul(b.len()) > CONE_BUDGET {
        return Err(Error::BudgetExhausted(format!("cone intersection of {}x{} pieces", a.len(), b.len())));
    }
    let mut out = Vec::new();
    for ca in a {
        for cb in b {
            let c = ca.meet(cb);
            if c.is_nontrivial(n) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Intersection of many unions.
pub fn intersect_all<F: Field>(sets: &[Vec<Cone<F>>], n: usize) -> Result<Vec<Cone<F>>> {
    let mut acc = vec![Cone { eq: Vec::new(), ineq: Vec::new() }];
    // Smooth (subspace) pieces first keeps the running union small.
    let mut order: Vec<&Vec<Cone<F>>> = sets.iter().collect();
    order.sort_by_key(|s| s.len());
    for s in order {
        acc = intersect(&acc, s, n)?;
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// Whether a union contains a nonzero vector.
pub fn union_nontrivial<F: Field>(cones: &[Cone<F>], n: usize) -> bool {
    cones.iter().any(|c| c.is_nontrivial(n))
}

/// Counts projective lines in a union of cones.
pub fn count_lines<F: Field>(cones: &[Cone<F>], n: usize) -> Lines<F> {
    let mut found: Option<Vec<F>> = None;
    for c in cones {
        let sh = c.shape(n);
        match sh.span_dim {
            0 => {}
            1 => {
                let d = canonical_direction(&sh.generators[0]);
                match &found {
                    None => found = Some(d),
                    Some(prev) => {
                        if !same_direction(prev, &d) {
                            return Lines::Many;
                        }
                    }
                }
            }
            _ => return Lines::Many,
        }
    }
    match found {
        Some(d) => Lines::One(d),
        None => Lines::Zero,
    }
}

pub(crate) fn canonical_direction<F: Field>(v: &[F]) -> Vec<F> {
    if F::EXACT {
        projective_normalize(v)
    } else {
        let f = to_f64_vec(v);
        let n = euclid_norm(&f);
        let lead = f.iter().copied().find(|c| c.abs() > 1e-9).unwrap_or(1.0);
        let s = if lead < 0.0 { -1.0 } else { 1.0 };
        v.iter().map(|c| c.clone() * F::from_f64_lossy(s / n)).collect()
    }
}

pub(crate) fn same_direction<F: Field>(a: &[F], b: &[F]) -> bool {
    if F::EXACT {
        a == b
    } else {
        a.iter().zip(b).all(|(x, y)| (x.to_f64() - y.to_f64()).abs() <= 1e-7)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, Q};

    fn e(i: usize, n: usize, s: i64) -> Vec<Q> {
        (0..n).map(|j| if j == i { q(s) } else { q(0) }).collect()
    }

    #[test]
    fn smooth_perp_is_hyperplane() {
        let c = perp_cones(&[e(0, 3, 1)]);
        assert_eq!(c[0].shape(3).span_dim, 2);
        assert_eq!(count_lines(&c, 3), Lines::Many);
    }

    #[test]
    fn two_hyperplanes_meet_in_one_line() {
        let a = perp_cones(&[e(0, 3, 1)]);
        let b = perp_cones(&[e(1, 3, 1)]);
        let i = intersect(&a, &b, 3).unwrap();
        assert_eq!(count_lines(&i, 3), Lines::One(vec![q(0), q(0), q(1)]));
        let c = perp_cones(&[e(2, 3, 1)]);
        assert!(!union_nontrivial(&intersect(&i, &c, 3).unwrap(), 3));
    }

    #[test]
    fn corner_perp_in_plane_has_many_lines() {
        // Corner (1,1) of the square: supporting functionals conv{e1, e2}.
        let c = perp_cones(&[e(0, 2, 1), e(1, 2, 1)]);
        assert_eq!(count_lines(&c, 2), Lines::Many);
        let edge = perp_cones(&[e(0, 2, 1)]);
        assert_eq!(count_lines(&edge, 2), Lines::One(vec![q(0), q(1)]));
    }

    #[test]
    fn pointed_cone_rays() {
        // {y : -y1 ≤ 0, -y2 ≤ 0, y3 = 0}: the closed quadrant in the plane y3 = 0.
        let c = Cone { eq: vec![e(2, 3, 1)], ineq: vec![e(0, 3, -1), e(1, 3, -1)] };
        let sh = c.shape(3);
        assert_eq!(sh.span_dim, 2);
        // Add y1 + y2 ≤ 0: only the origin survives.
        let mut d = c.clone();
        d.ineq.push(vec![q(1), q(1), q(0)]);
        assert!(!d.is_nontrivial(3));
    }

    #[test]
    fn float_cones_match_exact() {
        let f = |v: &[i64]| v.iter().map(|&c| c as f64).collect::<Vec<f64>>();
        let a = perp_cones(&[f(&[1, 0, 0]), f(&[0, 1, 0])]);
        let b = perp_cones(&[f(&[0, 0, 1])]);
        let i = intersect(&a, &b, 3).unwrap();
        assert_eq!(count_lines(&i, 3), Lines::Many);
    }
}
