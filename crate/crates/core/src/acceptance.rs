//! The eleven acceptance criteria as library calls, shared by the integration
//! test and the `suite` command.

use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bj::{bj_equivalent, is_bj_norm_sampled, is_bj_orthogonal, neighborhood_descriptor, perp_probe, Neighborhood};
use crate::error::Result;
use crate::field::{dot, q, q_from_f64, qr, Q};
use crate::graph::{
    build_orthodigraph, classify_smooth_vertices, digraph_dimension, find_maximal_faces, polyhedrality_verdict,
    recognize_sup_norm, GraphMode, OrthoDigraph, PolyhedralityVerdict,
};
use crate::norm::{self, absolute_radon::XI0, NormSpec};
use crate::oracle::oracle_orthogonal;
use crate::radon;
use crate::tolerance::Tolerances;
use crate::vector::Vector;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub detail: Value,
}

impl CriterionResult {
    /// One human-readable line.
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {} ({:.2}s) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.seconds,
            self.detail
        )
    }
}

/// Master seed of the suite; items derive their own streams from it.
pub const SUITE_SEED: u64 = 20_240_601;

/// Seed for a named item, from the master seed and the item name (FNV-1a).
pub fn item_seed(master: u64, name: &str) -> u64 {
    name.bytes().fold(master ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> Result<(bool, Value)>) -> CriterionResult {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    CriterionResult { id, name, passed, seconds: t.elapsed().as_secs_f64(), detail }
}

/// Number of acceptance criteria.
pub const CRITERIA: u8 = 11;

/// Runs all criteria on the rayon pool; results come back in id order and
/// do not depend on scheduling because every item seeds its own stream.
pub fn run_all(master: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA).into_par_iter().filter_map(|id| run_one(id, master)).collect()
}

/// Runs one criterion by number.
pub fn run_one(id: u8, master: u64) -> Option<CriterionResult> {
    Some(match id {
        1 => criterion_1(master),
        2 => criterion_2(master),
        3 => criterion_3(master),
        4 => criterion_4(master),
        5 => criterion_5(),
        6 => criterion_6(master),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(master),
        10 => criterion_10(master),
        11 => criterion_11(master),
        _ => return None,
    })
}

// ---- 1: verdict against the line-minimization oracle ----

/// Pairs per model.
pub const ORACLE_PAIRS: usize = 1_000;
/// A disagreement only counts beyond this margin.
pub const ORACLE_MARGIN: f64 = 1e-7;
/// Normalized gap under which the oracle calls a pair orthogonal.
pub const ORACLE_NOISE: f64 = 1e-12;

fn oracle_models() -> Result<Vec<NormSpec>> {
    Ok(vec![
        NormSpec::linf(2),
        NormSpec::linf(3),
        NormSpec::l1(3),
        NormSpec::hexagonal(),
        NormSpec::lp(2.0, 2)?,
        NormSpec::lp(4.0, 2)?,
        NormSpec::BJExampleR3,
        NormSpec::AbsoluteRadon,
    ])
}

/// Nonsmooth or face points of the float models.
fn special_points(spec: &NormSpec) -> Vec<Vec<f64>> {
    match spec {
        NormSpec::AbsoluteRadon => vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.2, 1.0],
            vec![XI0, 1.0],
            vec![-XI0, -1.0],
            vec![0.5, 0.5],
        ],
        NormSpec::BJExampleR3 => vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, -2.0],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.3, -0.2, 0.9],
        ],
        _ => {
            let n = spec.dim();
            let mut v: Vec<Vec<f64>> = (0..n).map(|i| crate::linalg::unit(n, i)).collect();
            v.push(vec![1.0; n]);
            v
        }
    }
}

fn exact_vec(v: &[f64]) -> Result<Vec<Q>> {
    v.iter().map(|c| q_from_f64(*c)).collect()
}

/// Exact `y ∈ Ker f` for a random rational convex combination `f` of the active functionals.
fn exact_perp(spec: &NormSpec, x: &[Q], rng: &mut ChaCha8Rng) -> Result<Vec<Q>> {
    let p = spec.poly().expect("polyhedral");
    let act = p.active(x);
    let n = p.dim;
    let mut f = vec![q(0); n];
    for &i in &act {
        let w = q(rng.random_range(1..=100));
        for (a, b) in f.iter_mut().zip(&p.duals[i]) {
            *a = a.clone() + w.clone() * b.clone();
        }
    }
    let g = exact_vec(&norm::gaussian_direction(rng, n))?;
    let c = dot(&f, &g) / dot(&f, &f);
    Ok(g.iter().zip(&f).map(|(a, b)| a.clone() - c.clone() * b.clone()).collect())
}

fn oracle_pair(spec: &NormSpec, k: usize, rng: &mut ChaCha8Rng) -> Result<(Vector, Vector)> {
    let n = spec.dim();
    if let Some(p) = spec.poly() {
        let lat = p.lattice()?;
        let x: Vec<Q> = match k % 3 {
            2 => lat.faces[(k / 3) % lat.faces.len()].representative.clone(),
            _ => exact_vec(&norm::gaussian_direction(rng, n))?,
        };
        let y = if k % 3 == 1 || (k % 3 == 2 && k.is_multiple_of(2)) {
            exact_perp(spec, &x, rng)?
        } else {
            exact_vec(&norm::gaussian_direction(rng, n))?
        };
        return Ok((Vector::Exact(x), Vector::Exact(y)));
    }
    let x = match k % 3 {
        2 => {
            let pts = special_points(spec);
            let s = 0.5 + rng.random::<f64>();
            pts[(k / 3) % pts.len()].iter().map(|c| c * s).collect()
        }
        _ => norm::gaussian_direction(rng, n),
    };
    let y = if k % 3 == 1 || (k % 3 == 2 && k.is_multiple_of(2)) {
        perp_probe(&spec.subdiff_f64(&x)?, rng, n)
    } else {
        norm::gaussian_direction(rng, n)
    };
    Ok((Vector::Numeric(x), Vector::Numeric(y)))
}

#[derive(Clone, Debug, Serialize)]
struct OracleRow {
    model: String,
    pairs: usize,
    orthogonal: usize,
    disagreements: usize,
    /// Pairs whose verdicts differ inside the margin band.
    banded: usize,
}

/// Verdict against the oracle on `count` pairs of one model.
pub fn oracle_agreement(spec: &NormSpec, count: usize, seed: u64) -> Result<(usize, usize, usize)> {
    let tol = Tolerances::default();
    let rows: Vec<(bool, bool, bool)> = (0..count)
        .into_par_iter()
        .map(|k| -> Result<(bool, bool, bool)> {
            let mut rng = norm::rng(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let (x, y) = oracle_pair(spec, k, &mut rng)?;
            if y.is_zero() {
                return Ok((false, false, false));
            }
            let v = is_bj_orthogonal(spec, &x, &y, &tol)?;
            let (o, _) = oracle_orthogonal(spec, &x.to_f64(), &y.to_f64(), ORACLE_NOISE);
            let differ = v.orthogonal != o;
            let clear = v.margin.is_none_or(|m| m.abs() > ORACLE_MARGIN);
            Ok((v.orthogonal, differ && clear, differ && !clear))
        })
        .collect::<Result<_>>()?;
    Ok((
        rows.iter().filter(|r| r.0).count(),
        rows.iter().filter(|r| r.1).count(),
        rows.iter().filter(|r| r.2).count(),
    ))
}

fn criterion_1(master: u64) -> CriterionResult {
    timed(1, "bj-oracle-agreement", || {
        let t = Instant::now();
        let mut rows = Vec::new();
        for spec in oracle_models()? {
            let (orth, dis, band) = oracle_agreement(&spec, ORACLE_PAIRS, item_seed(master, &spec.name()))?;
            rows.push(OracleRow { model: spec.name(), pairs: ORACLE_PAIRS, orthogonal: orth, disagreements: dis, banded: band });
        }
        let secs = t.elapsed().as_secs_f64();
        let ok = rows.iter().all(|r| r.disagreements == 0) && secs < 60.0;
        Ok((ok, json!({ "models": rows, "seconds": secs })))
    })
}

// ---- 2: dimension ----

fn exact_graph(spec: &NormSpec) -> Result<OrthoDigraph> {
    build_orthodigraph(spec, GraphMode::ExactQuotient, false, &Tolerances::default())
}

fn sampled_graph(spec: &NormSpec, count: usize, seed: u64) -> Result<OrthoDigraph> {
    build_orthodigraph(spec, GraphMode::Sampled { count, seed }, false, &Tolerances::default())
}

/// Vertices of the sampled graphs in the graph criteria.
pub const GRAPH_SAMPLES: usize = 48;

fn criterion_2(master: u64) -> CriterionResult {
    timed(2, "digraph-dimension", || {
        let mut ok = true;
        let mut rows = Vec::new();
        for n in 2..=4 {
            for spec in [NormSpec::linf(n), NormSpec::l1(n)] {
                let d = digraph_dimension(&exact_graph(&spec)?)?;
                ok &= d.dim == n && d.gamma0 == d.gamma;
                rows.push(json!({ "model": spec.name(), "mode": "exact", "dim": d.dim }));
            }
            for p in [2.0, 4.0] {
                let spec = NormSpec::lp(p, n)?;
                let d = digraph_dimension(&sampled_graph(&spec, GRAPH_SAMPLES, item_seed(master, &spec.name()))?)?;
                ok &= d.dim == n;
                rows.push(json!({ "model": spec.name(), "mode": "sampled", "dim": d.dim }));
            }
        }
        Ok((ok, json!(rows)))
    })
}

// ---- 3: sup-norm recognition ----

/// Seeded invertible integer matrix.
pub fn random_invertible(n: usize, seed: u64) -> Vec<Vec<Q>> {
    let mut rng = norm::rng(seed);
    loop {
        let m: Vec<Vec<Q>> = (0..n).map(|_| (0..n).map(|_| q(rng.random_range(-3..=3))).collect()).collect();
        if crate::linalg::rank(&m, n) == n {
            return m;
        }
    }
}

fn criterion_3(master: u64) -> CriterionResult {
    timed(3, "sup-norm-recognition", || {
        let tol = Tolerances::default();
        let mut ok = true;
        let mut rows = Vec::new();
        let mut check = |spec: &NormSpec, g: &OrthoDigraph, expect: bool, count: Option<usize>| -> Result<()> {
            let r = recognize_sup_norm(g, &tol)?;
            ok &= r.is_sup_norm == expect && count.is_none_or(|c| c == r.smooth_neighborhood_count);
            rows.push(json!({ "model": spec.name(), "report": r }));
            Ok(())
        };
        for n in 2..=4 {
            let s = NormSpec::linf(n);
            check(&s, &exact_graph(&s)?, true, Some(n))?;
        }
        let cube = crate::norm::Polyhedral::linf(3)?;
        let image = NormSpec::Polyhedral(Arc::new(cube.linear_image(&random_invertible(3, item_seed(master, "image")))?));
        check(&image, &exact_graph(&image)?, true, Some(3))?;
        let s = NormSpec::l1(3);
        check(&s, &exact_graph(&s)?, false, Some(4))?;
        let s = NormSpec::hexagonal();
        check(&s, &exact_graph(&s)?, false, Some(3))?;
        let s = NormSpec::lp(2.0, 3)?;
        check(&s, &sampled_graph(&s, GRAPH_SAMPLES, item_seed(master, "recognize-l2"))?, false, None)?;
        Ok((ok, json!(rows)))
    })
}

// ---- 4: smooth vertices ----

fn criterion_4(master: u64) -> CriterionResult {
    timed(4, "smooth-classification", || {
        let mut ok = true;
        let mut rows = Vec::new();
        for spec in [NormSpec::linf(3), NormSpec::l1(3), NormSpec::hexagonal()] {
            let g = exact_graph(&spec)?;
            let got = classify_smooth_vertices(&g)?;
            let truth: Vec<usize> = g.vertices.iter().filter(|v| v.smooth).map(|v| v.id).collect();
            let wrong = g.len() - (0..g.len()).filter(|i| got.contains(i) == truth.contains(i)).count();
            ok &= wrong == 0;
            rows.push(json!({ "model": spec.name(), "classes": g.len(), "smooth": got.len(), "misclassified": wrong }));
        }
        let spec = NormSpec::lp(2.0, 3)?;
        let g = sampled_graph(&spec, GRAPH_SAMPLES, item_seed(master, "smooth-l2"))?;
        let got = classify_smooth_vertices(&g)?;
        ok &= got.len() == g.len();
        rows.push(json!({ "model": spec.name(), "vertices": g.len(), "smooth": got.len() }));
        Ok((ok, json!(rows)))
    })
}

// ---- 5: maximal faces ----

fn criterion_5() -> CriterionResult {
    timed(5, "maximal-faces", || {
        let mut ok = true;
        let mut rows = Vec::new();
        for (spec, want) in [(NormSpec::linf(3), 3), (NormSpec::l1(3), 4), (NormSpec::hexagonal(), 3)] {
            let g = exact_graph(&spec)?;
            let faces = find_maximal_faces(&g)?;
            let lat = spec.poly().expect("polyhedral").lattice()?;
            let facet_classes = lat.facets().len() / 2;
            // Each maximal set holds exactly one facet class.
            let one_facet_each = faces.iter().all(|f| f.iter().filter(|&&c| lat.classes[c].dim + 1 == spec.dim()).count() == 1);
            ok &= faces.len() == want && facet_classes == want && one_facet_each;
            rows.push(json!({ "model": spec.name(), "maximal_faces": faces.len(), "facet_classes": facet_classes }));
        }
        Ok((ok, json!(rows)))
    })
}

// ---- 6: Radon symmetry ----

fn criterion_6(master: u64) -> CriterionResult {
    timed(6, "radon-symmetry", || {
        let tol = Tolerances::default();
        let ar = radon::verify_radon_symmetry(&NormSpec::AbsoluteRadon, 1_000, item_seed(master, "ar-symmetry"), 1e-6)?;
        let hex = radon::verify_radon_symmetry(&NormSpec::hexagonal(), 0, 0, 0.0)?;
        let lp4 = NormSpec::lp(4.0, 2)?;
        let (x, y) = ([2.0, 1.0], [1.0, -8.0]);
        let asym = radon::is_asymmetric_pair(&lp4, &x, &y, &tol)?;
        // Oracle confirmation of the same pair.
        let (o_xy, _) = oracle_orthogonal(&lp4, &x, &y, ORACLE_NOISE);
        let (o_yx, m_yx) = oracle_orthogonal(&lp4, &y, &x, ORACLE_NOISE);
        let lp4_sym = radon::verify_radon_symmetry(&lp4, 1_000, item_seed(master, "lp4-symmetry"), 1e-6)?;
        let day = radon::day_construction(&NormSpec::linf(2))?.into_spec()?;
        let day_sym = radon::verify_radon_symmetry(&day, 1_000, item_seed(master, "day-symmetry"), 1e-6)?;
        let ok = ar.symmetric && hex.symmetric && hex.exact && asym && o_xy && !o_yx && !lp4_sym.symmetric && day_sym.symmetric;
        Ok((
            ok,
            json!({
                "absolute_radon": ar,
                "hexagonal": hex,
                "lp4_pair": { "x": x, "y": y, "asymmetric": asym, "oracle_gap_yx": m_yx.gap },
                "lp4_sampled": { "symmetric": lp4_sym.symmetric, "max_asymmetry": lp4_sym.max_asymmetry },
                "day_from_linf2": day_sym,
            }),
        ))
    })
}

// ---- 7: η ----

fn criterion_7() -> CriterionResult {
    timed(7, "eta-analytics", || {
        let r = radon::eta_checks(100, &Tolerances::default())?;
        let ok = r.eta_at_xi0_error <= 1e-12
            && r.eta_at_one_error <= 1e-12
            && r.eta_prime_at_xi0_error <= 1e-12
            && r.ode_max_residual <= 1e-12
            && r.partner_identity_max_error <= 1e-8
            && r.mutual_min_margin >= -1e-8;
        Ok((ok, serde_json::to_value(r).expect("serializable")))
    })
}

// ---- 8: Hilbert conditions ----

fn criterion_8() -> CriterionResult {
    timed(8, "hilbert-conditions", || {
        let ar = radon::check_gamma0_hilbert_conditions_real(&NormSpec::AbsoluteRadon)?;
        let hex = radon::check_gamma0_hilbert_conditions_real(&NormSpec::hexagonal())?;
        let ok = ar.holds && !ar.segments.is_empty() && !hex.holds;
        Ok((ok, json!({ "absolute_radon": ar, "hexagonal": { "holds": hex.holds, "segments": hex.segments.len() } })))
    })
}

// ---- 9: BJ-equivalence ----

/// Samples for the BJ-norm searches.
pub const BJ_NORM_SAMPLES: usize = 1_000;

fn criterion_9(master: u64) -> CriterionResult {
    timed(9, "bj-equivalence", || {
        let tol = Tolerances::default();
        let s = NormSpec::linf(3);
        let a = Vector::exact(&[q(1), qr(1, 2), q(0)]);
        let b = Vector::exact(&[q(1), qr(1, 3), q(0)]);
        let same_out = neighborhood_descriptor(&s, &a, Neighborhood::Outgoing)? == neighborhood_descriptor(&s, &b, Neighborhood::Outgoing)?;
        let same_in = neighborhood_descriptor(&s, &a, Neighborhood::Incoming)? == neighborhood_descriptor(&s, &b, Neighborhood::Incoming)?;
        let eq = bj_equivalent(&s, &a, &b, 0, 0, &tol)?.equivalent;
        let (af, bf) = (a.to_f64(), b.to_f64());
        let independent = (af[0] * bf[1] - af[1] * bf[0]).abs() > 0.0;
        let linf = is_bj_norm_sampled(&s, BJ_NORM_SAMPLES, item_seed(master, "bjnorm-linf3"), &tol)?;
        let r3 = is_bj_norm_sampled(&NormSpec::BJExampleR3, BJ_NORM_SAMPLES, item_seed(master, "bjnorm-r3"), &tol)?;
        let l2 = is_bj_norm_sampled(&NormSpec::lp(2.0, 3)?, BJ_NORM_SAMPLES, item_seed(master, "bjnorm-l2"), &tol)?;
        let ok = same_out && same_in && eq && independent && linf.violation.is_some() && r3.violation.is_none() && l2.violation.is_none();
        Ok((
            ok,
            json!({
                "linf3_pair": { "outgoing_equal": same_out, "incoming_equal": same_in, "equivalent": eq, "independent": independent },
                "linf3": linf, "bj_example_r3": r3, "l2_3": l2,
            }),
        ))
    })
}

// ---- 10: direct sums ----

fn criterion_10(master: u64) -> CriterionResult {
    timed(10, "direct-sum", || {
        let right = NormSpec::lp(2.0, 1)?;
        let r = radon::verify_direct_sum_lemma(&NormSpec::AbsoluteRadon, &right, 1_000, item_seed(master, "direct-sum"), 1e-7)?;
        let e = radon::nonsmooth_counterexample_check(item_seed(master, "nonsmooth-point"))?;
        let ok = r.passed && r.checks >= 1_000 && e.x_tilde_nonsmooth && e.face_set_equivalent && e.final_intersection_trivial;
        Ok((ok, json!({ "direct_sum": r, "nonsmooth_point": e })))
    })
}

// ---- 11: polyhedrality ----

fn criterion_11(master: u64) -> CriterionResult {
    timed(11, "polyhedrality", || {
        let tol = Tolerances::default();
        let mut ok = true;
        let mut rows = Vec::new();
        for (spec, want) in [
            (NormSpec::linf(2), Some(4)),
            (NormSpec::hexagonal(), Some(6)),
            (NormSpec::linf(3), None),
            (NormSpec::l1(3), None),
        ] {
            let v = polyhedrality_verdict(&spec, 0, &tol)?;
            if let PolyhedralityVerdict::Exact { count } = v {
                ok &= want.is_none_or(|w| w == count);
            } else {
                ok = false;
            }
            rows.push(json!({ "model": spec.name(), "verdict": v }));
        }
        let spec = NormSpec::lp(2.0, 2)?;
        let v = polyhedrality_verdict(&spec, item_seed(master, "poly-l2"), &tol)?;
        match &v {
            PolyhedralityVerdict::Sampled { counts, polyhedral_like } => {
                let last = counts.last().map_or(0, |c| c.1);
                ok &= !polyhedral_like && last * 10 > 9 * 10_000 && counts.windows(2).all(|w| w[1].1 > w[0].1);
            }
            _ => ok = false,
        }
        rows.push(json!({ "model": spec.name(), "verdict": v }));
        Ok((ok, json!(rows)))
    })
}
