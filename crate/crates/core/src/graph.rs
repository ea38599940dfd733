//! Orthodigraphs and the graph-only recovery procedures: dimension, smooth
//! vertices, maximal faces, spans, sup-norm recognition and polyhedrality.
//!
//! Exact graphs have one vertex per antipodal face class of a polyhedral ball;
//! an outgoing neighbourhood is kept as the cone union `x⊥` of its class.
//! Sampled graphs have one vertex per merged projective sample point.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bj::{is_bj_orthogonal, neighborhood_descriptor, Neighborhood, NeighborhoodDescriptor};
use crate::cone::{
    canonical_direction, count_lines, intersect, intersect_all, perp_cones, same_direction, union_nontrivial, Cone, Lines,
};
use crate::error::{Error, Result};
use crate::field::{euclid_norm, Field, Q};
use crate::linalg::{kernel, max_principal_angle, orthonormal_kernel, orthonormal_span, rank};
use crate::norm::models::lp_duality_point;
use crate::norm::{self, LpExponent, NormSpec};
use crate::tolerance::Tolerances;
use crate::vector::Vector;

/// Requested vertex set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphMode {
    ExactQuotient,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    ExactQuotient,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphVertex {
    pub id: usize,
    /// `F<face id>` or `s<sample index>`.
    pub label: String,
    pub representative: Vector,
    /// Ground truth from the subdifferential, used for labels and cross-checks.
    pub smooth: bool,
    pub descriptor: NeighborhoodDescriptor,
}

/// Immutable orthodigraph `Γ`, optionally with the loop vertex `0` of `Γ₀`.
#[derive(Clone, Debug)]
pub struct OrthoDigraph {
    pub spec: NormSpec,
    pub kind: GraphKind,
    pub vertices: Vec<GraphVertex>,
    /// Sorted out-neighbours; never contains the vertex itself.
    pub out: Vec<Vec<usize>>,
    /// Whether the loop vertex `0` is materialized.
    pub gamma0: bool,
    pub seed: Option<u64>,
    /// Requested sample count before merging.
    pub requested: usize,
    exact: Perps<Q>,
    float: Perps<f64>,
}

/// Outgoing neighbourhoods per vertex: extreme supporting functionals and the cone union they span.
#[derive(Clone, Debug, Default)]
struct Perps<F> {
    funcs: Vec<Vec<Vec<F>>>,
    cones: Vec<Vec<Cone<F>>>,
}

impl<F: Field> Perps<F> {
    fn new(funcs: Vec<Vec<Vec<F>>>) -> Self {
        let cones = funcs.iter().map(|f| perp_cones(f)).collect();
        Perps { funcs, cones }
    }
}

/// Largest graph accepted by [`export_dot`].
pub const DOT_MAX_VERTICES: usize = 10_000;

fn projective_canonical(v: &[f64]) -> Vec<f64> {
    let n = euclid_norm(v);
    let lead = v.iter().copied().find(|c| c.abs() > 1e-12 * n).unwrap_or(1.0);
    let s = if lead < 0.0 { -1.0 } else { 1.0 };
    v.iter().map(|c| s * c / n).collect()
}

/// Sine of the angle between unit vectors.
fn sin_angle(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(p, q)| p * q).sum();
    a.iter().zip(b).map(|(p, q)| (p - d * q).powi(2)).sum::<f64>().sqrt()
}

/// Merges antipodal and near-parallel directions; keeps first occurrences.
pub fn merge_projective(points: &[Vec<f64>], angle: f64) -> Vec<usize> {
    let canon: Vec<Vec<f64>> = points.iter().map(|p| projective_canonical(p)).collect();
    let mut kept: Vec<usize> = Vec::new();
    for (i, c) in canon.iter().enumerate() {
        if !kept.par_iter().any(|&k| sin_angle(c, &canon[k]) < angle) {
            kept.push(i);
        }
    }
    kept
}

/// Builds `Γ` (or `Γ₀` with `gamma0`). Edges come from the orthogonality
/// verdict on representatives.
pub fn build_orthodigraph(spec: &NormSpec, mode: GraphMode, gamma0: bool, tol: &Tolerances) -> Result<OrthoDigraph> {
    if spec.is_complex() {
        return Err(Error::Unsupported("orthodigraphs of complex spaces".into()));
    }
    let (kind, reps, labels, exact, float, seed, requested) = match mode {
        GraphMode::ExactQuotient => {
            let p = spec
                .poly()
                .ok_or_else(|| Error::InvalidSpec(format!("exact quotient needs a polyhedral norm, got {}", spec.name())))?;
            let lat = p.lattice()?;
            let reps: Vec<Vector> =
                (0..lat.classes.len()).map(|c| Vector::Exact(lat.class_representative(c).to_vec())).collect();
            let labels: Vec<String> = lat.classes.iter().map(|c| format!("F{}", c.face)).collect();
            let funcs = (0..lat.classes.len())
                .map(|c| lat.class_active(c).iter().map(|&i| p.duals[i].clone()).collect())
                .collect();
            let count = reps.len();
            (GraphKind::ExactQuotient, reps, labels, Perps::new(funcs), Perps::default(), None, count)
        }
        GraphMode::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::InvalidSpec("sampled graph needs at least one sample".into()));
            }
            let pts: Vec<Vec<f64>> = norm::unit_sphere_samples(spec, count, seed)?.iter().map(Vector::to_f64).collect();
            let kept = merge_projective(&pts, tol.merge_angle);
            let reps: Vec<Vector> = kept.iter().map(|&i| Vector::Numeric(pts[i].clone())).collect();
            let labels: Vec<String> = kept.iter().map(|i| format!("s{i}")).collect();
            let funcs =
                reps.iter().map(|r| Ok(spec.subdiff_f64(&r.to_f64())?.vertices_f64())).collect::<Result<Vec<_>>>()?;
            (GraphKind::Sampled, reps, labels, Perps::default(), Perps::new(funcs), Some(seed), count)
        }
    };
    let vertices = reps
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(id, (r, label))| {
            Ok(GraphVertex {
                id,
                label,
                representative: r.clone(),
                smooth: crate::bj::is_smooth(spec, r)?,
                descriptor: neighborhood_descriptor(spec, r, Neighborhood::Outgoing)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let m = vertices.len();
    let out = (0..m)
        .into_par_iter()
        .map(|u| {
            (0..m)
                .filter(|&v| v != u)
                .map(|v| Ok((v, is_bj_orthogonal(spec, &reps[u], &reps[v], tol)?.orthogonal)))
                .filter_map(|r: Result<(usize, bool)>| match r {
                    Ok((v, true)) => Some(Ok(v)),
                    Ok(_) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrthoDigraph { spec: spec.clone(), kind, vertices, out, gamma0, seed, requested, exact, float })
}

impl OrthoDigraph {
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum::<usize>() + usize::from(self.gamma0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn is_exact(&self) -> bool {
        self.kind == GraphKind::ExactQuotient
    }
}

/// Result of the dimension search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionReport {
    pub dim: usize,
    /// Minimum under the `Γ₀` convention (`⋂ x⊥ = {0}`).
    pub gamma0: usize,
    /// Minimum under the `Γ` convention (no projective point survives).
    pub gamma: usize,
    /// Vertices of one minimizing set.
    pub witness: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qualifier: Option<String>,
}

fn for_each_subset(m: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
    fn rec(m: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
        if cur.len() == k {
            return f(cur);
        }
        let start = cur.last().map_or(0, |&l| l + 1);
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(m, k, cur, f)? {
                return Ok(true);
            }
            cur.pop();
        }
        Ok(false)
    }
    rec(m, k, &mut Vec::with_capacity(k), f)
}

/// Cap on subsets examined by the general cone search.
pub const SUBSET_BUDGET: usize = 200_000;

fn min_trivial_subset<F: Field>(perps: &[Vec<Cone<F>>], n: usize, gamma: bool) -> Result<Option<Vec<usize>>> {
    let m = perps.len();
    // Each x⊥ contains a hyperplane, so fewer than n vertices never suffice.
    let smooth: Vec<usize> = (0..m).filter(|&i| perps[i].len() == 1).collect();
    let trivial = |idx: &[usize]| -> Result<bool> {
        let sets: Vec<Vec<Cone<F>>> = idx.iter().map(|&i| perps[i].clone()).collect();
        let meet = intersect_all(&sets, n)?;
        Ok(if gamma { count_lines(&meet, n) == Lines::Zero } else { !union_nontrivial(&meet, n) })
    };
    for k in n..=m {
        let mut found = None;
        // Smooth vertices: x⊥ = Ker f, decided by a rank test.
        if k <= smooth.len() {
            for_each_subset(smooth.len(), k, &mut |idx| {
                let rows: Vec<Vec<F>> = idx.iter().map(|&i| perps[smooth[i]][0].eq[0].clone()).collect();
                if rank(&rows, n) == n {
                    found = Some(idx.iter().map(|&i| smooth[i]).collect());
                    return Ok(true);
                }
                Ok(false)
            })?;
        }
        if found.is_some() {
            return Ok(found);
        }
        let mut seen = 0usize;
        for_each_subset(m, k, &mut |idx| {
            seen += 1;
            if seen > SUBSET_BUDGET {
                return Err(Error::BudgetExhausted(format!("dimension search beyond {SUBSET_BUDGET} subsets")));
            }
            if trivial(idx)? {
                found = Some(idx.to_vec());
                return Ok(true);
            }
            Ok(false)
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Smallest number of vertices whose outgoing neighbourhoods meet trivially.
/// Exact graphs are searched under both conventions, which must agree.
/// Sampled graphs return the kernel-rank bound with a `"sampled"` qualifier.
pub fn digraph_dimension(graph: &OrthoDigraph) -> Result<DimensionReport> {
    let n = graph.dim();
    if graph.is_exact() {
        let g0 = min_trivial_subset(&graph.exact.cones, n, false)?
            .ok_or_else(|| Error::BudgetExhausted("no trivially meeting vertex set".into()))?;
        let g = min_trivial_subset(&graph.exact.cones, n, true)?
            .ok_or_else(|| Error::BudgetExhausted("no trivially meeting vertex set".into()))?;
        assert_eq!(g0.len(), g.len(), "Γ and Γ₀ dimension conventions disagree");
        return Ok(DimensionReport { dim: g0.len(), gamma0: g0.len(), gamma: g.len(), witness: g0, qualifier: None });
    }
    // Greedy choice of smooth vertices with independent gradient kernels.
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, p) in graph.float.cones.iter().enumerate() {
        if p.len() != 1 {
            continue;
        }
        let mut cand = rows.clone();
        cand.push(p[0].eq[0].clone());
        if orthonormal_span(&cand, n, 1e-6).len() > rows.len() {
            rows = cand;
            chosen.push(i);
            if rows.len() == n {
                break;
            }
        }
    }
    if rows.len() < n {
        return Err(Error::BudgetExhausted(format!("only {} independent smooth kernels among the samples", rows.len())));
    }
    let sets: Vec<Vec<Cone<f64>>> = chosen.iter().map(|&i| graph.float.cones[i].clone()).collect();
    let meet = intersect_all(&sets, n)?;
    let trivial = count_lines(&meet, n) == Lines::Zero;
    if !trivial {
        return Err(Error::BudgetExhausted("sampled kernels did not meet trivially".into()));
    }
    Ok(DimensionReport { dim: n, gamma0: n, gamma: n, witness: chosen, qualifier: Some("sampled".into()) })
}

/// Vertices with exactly one projective line in `x⊥` (plane norms only).
pub fn classify_smooth_vertices_2d(graph: &OrthoDigraph) -> Result<Vec<usize>> {
    if graph.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: graph.dim() });
    }
    Ok(if graph.is_exact() {
        (0..graph.len()).filter(|&i| count_lines(&graph.exact.cones[i], 2).is_one()).collect()
    } else {
        (0..graph.len()).filter(|&i| count_lines(&graph.float.cones[i], 2).is_one()).collect()
    })
}

/// Cap on candidate tuples per vertex in the `n ≥ 3` smoothness test.
pub const TUPLE_BUDGET: usize = 20_000;

/// Cap on functional choices examined by [`kernel_prefilter`].
const PREFILTER_CHOICES: usize = 4_096;

/// `⋂ x⊥ ⊇ ⋂ Ker f` for every choice of one extreme functional per member.
/// Returns `Some(false)` when some choice leaves a plane or two choices give
/// different lines, so the intersection has more than one line.
fn kernel_prefilter<F: Field>(funcs: &[&Vec<Vec<F>>], n: usize) -> Option<bool> {
    let total = funcs.iter().try_fold(1usize, |a, f| a.checked_mul(f.len()))?;
    if total > PREFILTER_CHOICES {
        return None;
    }
    let mut line: Option<Vec<F>> = None;
    let mut idx = vec![0usize; funcs.len()];
    for _ in 0..total {
        let rows: Vec<Vec<F>> = funcs.iter().zip(&idx).map(|(f, &i)| f[i].clone()).collect();
        let k = kernel(&rows, n);
        match k.len() {
            0 => {}
            1 => {
                let d = canonical_direction(&k[0]);
                match &line {
                    None => line = Some(d),
                    Some(l) if !same_direction(l, &d) => return Some(false),
                    _ => {}
                }
            }
            _ => return Some(false),
        }
        for (slot, f) in idx.iter_mut().zip(funcs) {
            *slot += 1;
            if *slot < f.len() {
                break;
            }
            *slot = 0;
        }
    }
    None
}

/// `|⋂ x⊥| = 1` in projective lines.
fn one_line<F: Field>(perps: &Perps<F>, members: &[usize], n: usize) -> Result<bool> {
    let funcs: Vec<&Vec<Vec<F>>> = members.iter().map(|&i| &perps.funcs[i]).collect();
    if kernel_prefilter(&funcs, n) == Some(false) {
        return Ok(false);
    }
    let sets: Vec<Vec<Cone<F>>> = members.iter().map(|&i| perps.cones[i].clone()).collect();
    Ok(count_lines(&intersect_all(&sets, n)?, n).is_one())
}

/// With `x` and the kept tuple members fixed: collects
/// `Ω = {y : |x⊥ ∩ y⊥ ∩ kept⊥| = 1}` and tests `x⊥ ∩ kept⊥ ∩ ⋂_{y∈Ω} y⊥ = {0}`.
fn omega_cuts_to_zero<F: Field>(perps: &Perps<F>, x: usize, kept: &[usize], n: usize) -> Result<bool> {
    let m = perps.cones.len();
    let mut base = vec![x];
    base.extend_from_slice(kept);
    let mut omega = Vec::new();
    for y in 0..m {
        let mut members = base.clone();
        members.push(y);
        if one_line(perps, &members, n)? {
            omega.push(y);
        }
    }
    // Subspace pieces first keeps the running union small.
    omega.sort_by_key(|&y| (perps.cones[y].len(), y));
    let sets: Vec<Vec<Cone<F>>> = base.iter().map(|&i| perps.cones[i].clone()).collect();
    let mut acc = intersect_all(&sets, n)?;
    for y in omega {
        if acc.is_empty() {
            break;
        }
        acc = intersect(&acc, &perps.cones[y], n)?;
    }
    Ok(!union_nontrivial(&acc, n))
}

/// Graph-only smoothness test for vertex `x`: some `(n−2)`-tuple meets `x⊥` in one line,
/// and for each choice of the dropped tuple member the partners `Ω` cut the
/// remaining intersection down to `{0}`.
fn smooth_by_tuples<F: Field>(perps: &Perps<F>, x: usize, n: usize, max_partners: usize) -> Result<bool> {
    let m = perps.cones.len();
    let k = n - 2;
    // Candidates ordered by cone count: cheap intersections first.
    let mut order: Vec<usize> = (0..m).filter(|&i| i != x).collect();
    order.sort_by_key(|&i| (perps.cones[i].len(), i));
    order.truncate(max_partners);
    let mut memo: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut tried = 0usize;
    let mut result = false;
    for_each_subset(order.len(), k, &mut |idx| {
        tried += 1;
        if tried > TUPLE_BUDGET {
            return Err(Error::BudgetExhausted(format!("smoothness tuple search beyond {TUPLE_BUDGET} tuples")));
        }
        let tuple: Vec<usize> = idx.iter().map(|&i| order[i]).collect();
        let mut members = vec![x];
        members.extend_from_slice(&tuple);
        if !one_line(perps, &members, n)? {
            return Ok(false);
        }
        for drop in 0..k {
            let mut kept: Vec<usize> = tuple.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &t)| t).collect();
            kept.sort_unstable();
            let ok = match memo.get(&kept) {
                Some(&v) => v,
                None => {
                    let v = omega_cuts_to_zero(perps, x, &kept, n)?;
                    memo.insert(kept, v);
                    v
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        result = true;
        Ok(true)
    })?;
    Ok(result)
}

/// Partner pool per vertex for sampled graphs.
pub const SAMPLED_PARTNERS: usize = 64;

/// Smooth vertices in dimension `n ≥ 3` via the tuple condition.
pub fn classify_smooth_vertices_nd(graph: &OrthoDigraph) -> Result<Vec<usize>> {
    let n = graph.dim();
    if n < 3 {
        return Err(Error::InvalidSpec("the tuple criterion needs dimension at least 3".into()));
    }
    let flags: Vec<bool> = if graph.is_exact() {
        let m = graph.len();
        (0..m).into_par_iter().map(|x| smooth_by_tuples(&graph.exact, x, n, m)).collect::<Result<_>>()?
    } else {
        (0..graph.len())
            .into_par_iter()
            .map(|x| smooth_by_tuples(&graph.float, x, n, SAMPLED_PARTNERS))
            .collect::<Result<_>>()?
    };
    Ok(flags.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect())
}

/// Dispatches on dimension.
pub fn classify_smooth_vertices(graph: &OrthoDigraph) -> Result<Vec<usize>> {
    if graph.dim() == 2 {
        classify_smooth_vertices_2d(graph)
    } else {
        classify_smooth_vertices_nd(graph)
    }
}

/// `z⊥ ⊆ x⊥` for face classes: some sign of `x` carries every supporting
/// functional of `z`.
fn perp_contained(active_z: &[usize], active_x: &[usize], neg: &[usize]) -> bool {
    active_z.iter().all(|i| active_x.contains(i)) || active_z.iter().all(|i| active_x.contains(&neg[*i]))
}

/// Maximal vertex sets `𝓕` with `z⊥ ⊆ ⋂_{x∈𝓕} x⊥` for some vertex `z`.
pub fn find_maximal_faces(graph: &OrthoDigraph) -> Result<Vec<Vec<usize>>> {
    let p = graph
        .spec
        .poly()
        .filter(|_| graph.is_exact())
        .ok_or_else(|| Error::Unsupported("maximal faces need an exact quotient graph".into()))?;
    let lat = p.lattice()?;
    let m = graph.len();
    let act = |c: usize| lat.class_active(c);
    let families: Vec<Vec<usize>> =
        (0..m).map(|z| (0..m).filter(|&x| perp_contained(act(z), act(x), &p.neg)).collect()).collect();
    let satisfies_i = |set: &[usize]| families.iter().any(|f| set.iter().all(|v| f.contains(v)));
    let mut maximal: Vec<Vec<usize>> = Vec::new();
    for f in &families {
        let properly_inside = families.iter().any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v)));
        if !properly_inside && !maximal.contains(f) {
            maximal.push(f.clone());
        }
    }
    for f in &maximal {
        for y in (0..m).filter(|y| !f.contains(y)) {
            let mut g = f.clone();
            g.push(y);
            debug_assert!(!satisfies_i(&g), "maximal face extends");
        }
    }
    maximal.sort();
    Ok(maximal)
}

/// Subspace recovered from orthogonality witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub basis: Vec<Vec<f64>>,
    pub dim: usize,
    /// `n − dim`: fewest witnesses whose neighbourhoods cut out the span.
    pub omega_min: usize,
    pub witnesses: usize,
    /// Largest principal angle against the direct linear span.
    pub angle_to_span: f64,
}

/// Recovers `span(S)` as `⋂ Ker ∇‖x‖` over witnesses `x` with `x ⊥ s` for
/// every `s ∈ S`. Witnesses are duality points of random functionals that
/// annihilate `S`, each re-checked with the orthogonality verdict.
pub fn span_from_graph(spec: &NormSpec, s: &[Vector], witness_budget: usize, seed: u64, tol: &Tolerances) -> Result<SpanReport> {
    let p = match spec {
        NormSpec::Lp { p: LpExponent::Finite(p), .. } if *p > 1.0 => *p,
        _ => return Err(Error::Unsupported("span recovery needs a smooth Lp norm".into())),
    };
    if s.is_empty() {
        return Err(Error::InvalidSpec("empty vector set".into()));
    }
    let n = spec.dim();
    let rows: Vec<Vec<f64>> = s.iter().map(Vector::to_f64).collect();
    let ann = orthonormal_kernel(&rows, n, 1e-12);
    let mut rng = norm::rng(seed);
    let mut grads: Vec<Vec<f64>> = Vec::new();
    let mut witnesses = 0;
    if !ann.is_empty() {
        for _ in 0..witness_budget.max(1) {
            let c: Vec<f64> = (0..ann.len()).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
            let f: Vec<f64> = (0..n).map(|j| c.iter().zip(&ann).map(|(a, b)| a * b[j]).sum()).collect();
            let x = lp_duality_point(&f, p);
            let xv = Vector::Numeric(x.clone());
            let ok = s.iter().try_fold(true, |acc, v| Ok::<_, Error>(acc && is_bj_orthogonal(spec, &xv, v, tol)?.orthogonal))?;
            if ok {
                witnesses += 1;
                grads.push(spec.subdiff_f64(&x)?.support_max(&x).1);
            }
        }
        if orthonormal_span(&grads, n, 1e-9).len() < ann.len() {
            return Err(Error::BudgetExhausted(format!("{witnesses} witnesses do not determine the span")));
        }
    }
    let basis = orthonormal_kernel(&grads, n, 1e-9);
    let direct = orthonormal_span(&rows, n, 1e-12);
    let angle = if basis.len() == direct.len() { max_principal_angle(&basis, &direct) } else { f64::INFINITY };
    Ok(SpanReport { dim: basis.len(), omega_min: n - basis.len(), basis, witnesses, angle_to_span: angle })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupNormReport {
    pub is_sup_norm: bool,
    pub smooth_neighborhood_count: usize,
    pub dim: usize,
}

/// Number of pairwise different descriptors.
fn distinct_descriptors(ds: &[&NeighborhoodDescriptor], tol: &Tolerances) -> usize {
    let mut kept: Vec<&NeighborhoodDescriptor> = Vec::new();
    for d in ds {
        if !kept.iter().any(|k| k.same_set(d, tol)) {
            kept.push(d);
        }
    }
    kept.len()
}

/// Sup-norm test: as many distinct smooth outgoing neighbourhoods as dimensions.
pub fn recognize_sup_norm(graph: &OrthoDigraph, tol: &Tolerances) -> Result<SupNormReport> {
    let smooth = classify_smooth_vertices(graph)?;
    let ds: Vec<&NeighborhoodDescriptor> = smooth.iter().map(|&i| &graph.vertices[i].descriptor).collect();
    let count = distinct_descriptors(&ds, tol);
    let dim = digraph_dimension(graph)?.dim;
    Ok(SupNormReport { is_sup_norm: count == dim, smooth_neighborhood_count: count, dim })
}

/// Polyhedrality evidence.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PolyhedralityVerdict {
    /// Exact count of distinct outgoing neighbourhoods.
    Exact { count: usize },
    /// Distinct-neighbourhood counts for growing sample sizes.
    Sampled { counts: Vec<(usize, usize)>, polyhedral_like: bool },
}

/// Sample sizes reported by [`polyhedrality_verdict`].
pub const POLYHEDRALITY_SIZES: [usize; 3] = [100, 1_000, 10_000];
/// Angle under which sampled neighbourhoods are merged.
pub const POLYHEDRALITY_MERGE: f64 = 1e-8;

fn descriptor_key(d: &NeighborhoodDescriptor) -> Vec<f64> {
    use crate::bj::DescriptorMode as M;
    match &d.mode {
        // One-dimensional kernel complement: encode the normal.
        M::NumericKernel { basis } => {
            let n = basis.first().map_or(0, Vec::len);
            let normal = orthonormal_kernel(basis, n, 1e-12);
            normal.first().map(|v| projective_canonical(v)).unwrap_or_default()
        }
        M::NumericCone { functionals } => {
            let mut k = vec![f64::NAN];
            k.extend(functionals.iter().flatten().copied());
            k
        }
        _ => Vec::new(),
    }
}

/// Exact: number of distinct outgoing neighbourhoods over face classes.
/// Sampled: counts for each size in [`POLYHEDRALITY_SIZES`]; polyhedral-like
/// iff the count does not grow between the last two sizes.
pub fn polyhedrality_verdict(spec: &NormSpec, seed: u64, tol: &Tolerances) -> Result<PolyhedralityVerdict> {
    if spec.poly().is_some() {
        let g = build_orthodigraph(spec, GraphMode::ExactQuotient, false, tol)?;
        let ds: Vec<&NeighborhoodDescriptor> = g.vertices.iter().map(|v| &v.descriptor).collect();
        return Ok(PolyhedralityVerdict::Exact { count: distinct_descriptors(&ds, tol) });
    }
    let mut counts = Vec::new();
    for &size in &POLYHEDRALITY_SIZES {
        let keys: Vec<Vec<f64>> = norm::unit_sphere_samples(spec, size, seed)?
            .par_iter()
            .map(|x| neighborhood_descriptor(spec, x, Neighborhood::Outgoing).map(|d| descriptor_key(&d)))
            .collect::<Result<_>>()?;
        let mut kept: Vec<&Vec<f64>> = Vec::new();
        for k in &keys {
            let dup = kept.par_iter().any(|c| {
                c.len() == k.len()
                    && if k.first().is_some_and(|v| v.is_nan()) {
                        c.iter().zip(k).skip(1).all(|(a, b)| (a - b).abs() <= POLYHEDRALITY_MERGE)
                    } else {
                        sin_angle(c, k) <= POLYHEDRALITY_MERGE
                    }
            });
            if !dup {
                kept.push(k);
            }
        }
        counts.push((size, kept.len()));
    }
    let l = counts.len();
    let polyhedral_like = counts[l - 1].1 == counts[l - 2].1;
    Ok(PolyhedralityVerdict::Sampled { counts, polyhedral_like })
}

/// Isomorphism-invariant summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphFingerprint {
    pub dim: usize,
    pub smooth: usize,
    pub nonsmooth: usize,
    /// Sorted out-degrees.
    pub out_degrees: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_faces: Option<usize>,
}

pub fn graph_fingerprint(graph: &OrthoDigraph) -> Result<GraphFingerprint> {
    let smooth = classify_smooth_vertices(graph)?.len();
    let mut out_degrees: Vec<usize> = graph.out.iter().map(Vec::len).collect();
    out_degrees.sort_unstable();
    let maximal_faces = if graph.is_exact() { Some(find_maximal_faces(graph)?.len()) } else { None };
    Ok(GraphFingerprint {
        dim: digraph_dimension(graph)?.dim,
        smooth,
        nonsmooth: graph.len() - smooth,
        out_degrees,
        maximal_faces,
    })
}

/// Deterministic DOT rendering.
pub fn to_dot(graph: &OrthoDigraph) -> Result<String> {
    if graph.len() > DOT_MAX_VERTICES {
        return Err(Error::Unsupported(format!("DOT export is limited to {DOT_MAX_VERTICES} vertices")));
    }
    let mut s = String::new();
    writeln!(s, "digraph orthodigraph {{").ok();
    writeln!(s, "  // model={} mode={:?} vertices={}", graph.spec.name(), graph.kind, graph.len()).ok();
    if graph.gamma0 {
        writeln!(s, "  \"0\" [label=\"0\"];").ok();
        writeln!(s, "  \"0\" -> \"0\";").ok();
    }
    for v in &graph.vertices {
        writeln!(
            s,
            "  \"v{}\" [label=\"{} smooth={} h={:016x}\"];",
            v.id,
            v.label,
            u8::from(v.smooth),
            v.descriptor.digest()
        )
        .ok();
    }
    for (u, outs) in graph.out.iter().enumerate() {
        for v in outs {
            writeln!(s, "  \"v{u}\" -> \"v{v}\";").ok();
        }
    }
    s.push_str("}\n");
    Ok(s)
}

pub fn export_dot(graph: &OrthoDigraph, path: &Path) -> Result<()> {
    std::fs::write(path, to_dot(graph)?)?;
    Ok(())
}

/// Face-class counts by dimension, for reports.
pub fn class_dims(graph: &OrthoDigraph) -> Result<BTreeMap<usize, usize>> {
    let p = graph.spec.poly().ok_or_else(|| Error::Unsupported("class dimensions need a polyhedral norm".into()))?;
    let lat = p.lattice()?;
    let mut m = BTreeMap::new();
    for c in &lat.classes {
        *m.entry(c.dim).or_insert(0) += 1;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(spec: &NormSpec) -> OrthoDigraph {
        build_orthodigraph(spec, GraphMode::ExactQuotient, false, &Tolerances::default()).unwrap()
    }

    #[test]
    fn square_quotient() {
        let g = exact(&NormSpec::linf(2));
        assert_eq!(g.len(), 4);
        // Edge classes: x⊥ is the other axis, which lies inside the other edge class.
        let smooth = classify_smooth_vertices_2d(&g).unwrap();
        assert_eq!(smooth.len(), 2);
        for &s in &smooth {
            assert_eq!(g.out[s].len(), 1);
            assert!(smooth.contains(&g.out[s][0]));
        }
        assert_eq!(digraph_dimension(&g).unwrap().dim, 2);
    }

    #[test]
    fn dimension_of_cubes_and_cross_polytopes() {
        for n in 2..=3 {
            assert_eq!(digraph_dimension(&exact(&NormSpec::linf(n))).unwrap().dim, n);
            assert_eq!(digraph_dimension(&exact(&NormSpec::l1(n))).unwrap().dim, n);
        }
    }

    #[test]
    fn maximal_faces_counts() {
        assert_eq!(find_maximal_faces(&exact(&NormSpec::linf(3))).unwrap().len(), 3);
        assert_eq!(find_maximal_faces(&exact(&NormSpec::l1(3))).unwrap().len(), 4);
        assert_eq!(find_maximal_faces(&exact(&NormSpec::hexagonal())).unwrap().len(), 3);
    }

    #[test]
    fn smooth_nd_matches_ground_truth() {
        for spec in [NormSpec::linf(3), NormSpec::l1(3)] {
            let g = exact(&spec);
            let got = classify_smooth_vertices_nd(&g).unwrap();
            let truth: Vec<usize> = g.vertices.iter().filter(|v| v.smooth).map(|v| v.id).collect();
            assert_eq!(got, truth, "{}", spec.name());
        }
    }

    #[test]
    fn sup_norm_recognition() {
        let tol = Tolerances::default();
        assert!(recognize_sup_norm(&exact(&NormSpec::linf(3)), &tol).unwrap().is_sup_norm);
        let r = recognize_sup_norm(&exact(&NormSpec::l1(3)), &tol).unwrap();
        assert_eq!((r.is_sup_norm, r.smooth_neighborhood_count), (false, 4));
        let r = recognize_sup_norm(&exact(&NormSpec::hexagonal()), &tol).unwrap();
        assert_eq!((r.is_sup_norm, r.smooth_neighborhood_count, r.dim), (false, 3, 2));
    }

    #[test]
    fn sampled_euclidean_dimension() {
        let g = build_orthodigraph(&NormSpec::lp(2.0, 3).unwrap(), GraphMode::Sampled { count: 60, seed: 3 }, false, &Tolerances::default())
            .unwrap();
        let d = digraph_dimension(&g).unwrap();
        assert_eq!((d.dim, d.qualifier.as_deref()), (3, Some("sampled")));
        assert_eq!(classify_smooth_vertices_nd(&g).unwrap().len(), g.len());
    }

    #[test]
    fn empty_sample_is_error() {
        let r = build_orthodigraph(&NormSpec::lp(2.0, 2).unwrap(), GraphMode::Sampled { count: 0, seed: 1 }, false, &Tolerances::default());
        assert!(r.is_err());
    }

    #[test]
    fn span_recovery() {
        let tol = Tolerances::default();
        let r = span_from_graph(&NormSpec::lp(4.0, 3).unwrap(), &[Vector::numeric(&[1.0, 1.0, 0.0])], 12, 5, &tol).unwrap();
        assert_eq!((r.dim, r.omega_min), (1, 2));
        assert!(r.angle_to_span < 1e-6);
    }

    #[test]
    fn dot_is_deterministic_and_marks_loop() {
        let g = build_orthodigraph(&NormSpec::linf(2), GraphMode::ExactQuotient, true, &Tolerances::default()).unwrap();
        let a = to_dot(&g).unwrap();
        assert_eq!(a, to_dot(&g).unwrap());
        assert!(a.contains("\"0\" -> \"0\";"));
    }
}
