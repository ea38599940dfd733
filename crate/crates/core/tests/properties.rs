//! Invariants checked on random inputs.

use bjortho::bj::{bj_equivalent, derivative_bounds, orthogonal_f64, Neighborhood};
use bjortho::field::{q, Q};
use bjortho::graph::{build_orthodigraph, GraphMode};
use bjortho::norm::{self, absolute_radon, norm_value};
use bjortho::oracle::oracle_orthogonal;
use bjortho::radon::{complex_criterion_agreement, direct_sum_l2};
use bjortho::{is_bj_orthogonal, neighborhood_descriptor, parse_norm_spec, NormSpec, Scalar, Tolerances, Vector};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn polyhedral_models() -> Vec<NormSpec> {
    vec![NormSpec::linf(3), NormSpec::l1(3), NormSpec::hexagonal(), NormSpec::linf(2)]
}

fn int_vec(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, n).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

fn exact(v: &[i64]) -> Vector {
    Vector::exact(&v.iter().map(|&c| q(c)).collect::<Vec<_>>())
}

fn float_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, n).prop_filter("away from zero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-2)
}

/// Point in the relative interior of a face: positive weights on its vertices.
fn face_point(spec: &NormSpec, face: usize, weights: &[u32]) -> Vec<Q> {
    let p = spec.poly().unwrap();
    let lat = p.lattice().unwrap();
    let ids = &lat.faces[face].vertex_ids;
    let mut out = vec![q(0); p.dim];
    let mut total = 0i64;
    for (k, &vid) in ids.iter().enumerate() {
        let w = weights[k % weights.len()] as i64 + 1;
        total += w;
        for (o, c) in out.iter_mut().zip(&p.vertices[vid]) {
            *o += c.clone() * q(w);
        }
    }
    out.into_iter().map(|c| c / q(total)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_verdict_matches_line_oracle(m in 0usize..4, seed in any::<u64>()) {
        let spec = &polyhedral_models()[m];
        let n = spec.dim();
        let mut rng = norm::rng(seed);
        let gen = |rng: &mut _| -> Vec<i64> {
            loop {
                let v: Vec<i64> = norm::gaussian_direction(rng, n).iter().map(|c| (c * 3.0).round() as i64).collect();
                if v.iter().any(|&c| c != 0) { return v; }
            }
        };
        let (x, y) = (gen(&mut rng), gen(&mut rng));
        let v = is_bj_orthogonal(spec, &exact(&x), &exact(&y), &tol()).unwrap();
        let xf: Vec<f64> = x.iter().map(|&c| c as f64).collect();
        let yf: Vec<f64> = y.iter().map(|&c| c as f64).collect();
        let (o, line) = oracle_orthogonal(spec, &xf, &yf, 1e-12);
        if v.margin.is_none_or(|m| m.abs() > 1e-7) {
            prop_assert_eq!(v.orthogonal, o, "x={:?} y={:?} gap={}", x, y, line.gap);
        }
    }

    #[test]
    fn orthogonality_is_homogeneous(m in 0usize..4, x in int_vec(3), y in int_vec(3), a in 1i64..5, b in -4i64..5, neg in any::<bool>()) {
        prop_assume!(b != 0);
        let spec = &polyhedral_models()[m];
        let n = spec.dim();
        let (x, y) = (&x[..n], &y[..n]);
        prop_assume!(x.iter().any(|&c| c != 0) && y.iter().any(|&c| c != 0));
        let a = if neg { -a } else { a };
        let base = is_bj_orthogonal(spec, &exact(x), &exact(y), &tol()).unwrap().orthogonal;
        let sx: Vec<i64> = x.iter().map(|c| c * a).collect();
        let sy: Vec<i64> = y.iter().map(|c| c * b).collect();
        prop_assert_eq!(base, is_bj_orthogonal(spec, &exact(&sx), &exact(&sy), &tol()).unwrap().orthogonal);
    }

    #[test]
    fn exact_witness_is_a_norming_annihilator(m in 0usize..4, x in int_vec(3), y in int_vec(3)) {
        let spec = &polyhedral_models()[m];
        let n = spec.dim();
        let (x, y) = (exact(&x[..n]), exact(&y[..n]));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let v = is_bj_orthogonal(spec, &x, &y, &tol()).unwrap();
        if let Some(w) = v.witness {
            let f = w.to_exact().unwrap();
            let dot = |u: &[Q]| u.iter().zip(&f).fold(q(0), |s, (a, b)| s + a.clone() * b.clone());
            let Scalar::Exact(nx) = norm_value(spec, &x).unwrap() else { unreachable!() };
            prop_assert_eq!(dot(&x.to_exact().unwrap()), nx);
            prop_assert_eq!(dot(&y.to_exact().unwrap()), q(0));
            // Dual norm at most one: f ≤ 1 on every vertex of the unit ball.
            for vert in &spec.poly().unwrap().vertices {
                prop_assert!(dot(vert) <= q(1));
            }
        } else {
            prop_assert!(!v.orthogonal);
        }
    }

    #[test]
    fn derivative_bounds_are_ordered_and_decide(m in 0usize..4, x in float_vec(3), y in float_vec(3)) {
        let specs = [NormSpec::AbsoluteRadon, NormSpec::BJExampleR3, NormSpec::lp(3.0, 3).unwrap(), NormSpec::lp(1.5, 2).unwrap()];
        let spec = &specs[m];
        let n = spec.dim();
        let (x, y) = (&x[..n], &y[..n]);
        prop_assume!(x.iter().map(|c| c * c).sum::<f64>() > 1e-2 && y.iter().map(|c| c * c).sum::<f64>() > 1e-2);
        let (lo, hi) = derivative_bounds(spec, x, y).unwrap();
        prop_assert!(lo <= hi + 1e-12);
        let v = orthogonal_f64(spec, x, y, &tol()).unwrap();
        let ny = spec.norm_f64(y);
        let margin = hi.min(-lo) / ny;
        prop_assert!((v.margin.unwrap() - margin).abs() < 1e-9);
        if margin.abs() > 1e-7 {
            prop_assert_eq!(v.orthogonal, margin >= 0.0);
        }
    }

    #[test]
    fn euclidean_orthogonality_is_inner_product(n in 2usize..5, x in float_vec(4), z in float_vec(4), eps in 1e-4f64..1e-1) {
        let spec = NormSpec::lp(2.0, n).unwrap();
        let (x, z) = (&x[..n], &z[..n]);
        let xx: f64 = x.iter().map(|c| c * c).sum();
        prop_assume!(xx > 1e-2);
        let ip = x.iter().zip(z).map(|(a, b)| a * b).sum::<f64>() / xx;
        let y: Vec<f64> = z.iter().zip(x).map(|(b, a)| b - ip * a).collect();
        prop_assume!(y.iter().map(|c| c * c).sum::<f64>() > 1e-2);
        prop_assert!(orthogonal_f64(&spec, x, &y, &tol()).unwrap().orthogonal);
        let off: Vec<f64> = y.iter().zip(x).map(|(b, a)| b + eps * a).collect();
        prop_assert!(!orthogonal_f64(&spec, x, &off, &tol()).unwrap().orthogonal);
    }

    #[test]
    fn face_points_share_outgoing_sets(m in 0usize..3, face_pick in any::<prop::sample::Index>(), w1 in prop::collection::vec(0u32..9, 4), w2 in prop::collection::vec(0u32..9, 4)) {
        let spec = &polyhedral_models()[m];
        let p = spec.poly().unwrap();
        let lat = p.lattice().unwrap();
        let f = face_pick.index(lat.faces.len());
        let (a, b) = (face_point(spec, f, &w1), face_point(spec, f, &w2));
        prop_assert_eq!(p.active(&a), lat.faces[f].active.clone());
        prop_assert_eq!(lat.class_of_point(p, &a), lat.class_of_point(p, &b));
        let da = neighborhood_descriptor(spec, &Vector::Exact(a), Neighborhood::Outgoing).unwrap();
        let db = neighborhood_descriptor(spec, &Vector::Exact(b), Neighborhood::Outgoing).unwrap();
        prop_assert!(da.same_set(&db, &tol()));
    }

    #[test]
    fn quotient_edges_follow_any_source_point_of_the_face(m in 0usize..3, u in any::<prop::sample::Index>(), v in any::<prop::sample::Index>(), w in prop::collection::vec(0u32..9, 4), s1 in -3i64..4, s2 in -3i64..4) {
        prop_assume!(s1 != 0 && s2 != 0);
        let spec = &polyhedral_models()[m];
        let g = build_orthodigraph(spec, GraphMode::ExactQuotient, false, &tol()).unwrap();
        let p = spec.poly().unwrap();
        let lat = p.lattice().unwrap();
        let (cu, cv) = (u.index(g.len()), v.index(g.len()));
        prop_assume!(cu != cv);
        // x⊥ is constant on a face; the target is only rescaled.
        let rep = g.vertices[cu].representative.to_exact().unwrap();
        let face = lat.face_of_point(p, &rep).unwrap();
        let x = Vector::Exact(face_point(spec, face, &w).into_iter().map(|c| c * q(s1)).collect());
        let y = Vector::Exact(g.vertices[cv].representative.to_exact().unwrap().into_iter().map(|c| c * q(s2)).collect());
        prop_assert_eq!(is_bj_orthogonal(spec, &x, &y, &tol()).unwrap().orthogonal, g.has_edge(cu, cv));
    }

    #[test]
    fn hexagonal_orthogonality_is_symmetric(x in int_vec(2), y in int_vec(2)) {
        let h = NormSpec::hexagonal();
        let (x, y) = (exact(&x), exact(&y));
        let xy = is_bj_orthogonal(&h, &x, &y, &tol()).unwrap().orthogonal;
        prop_assert_eq!(xy, is_bj_orthogonal(&h, &y, &x, &tol()).unwrap().orthogonal);
    }

    #[test]
    fn absolute_radon_orthogonality_is_symmetric(theta in 0.0f64..std::f64::consts::TAU, pick in 0.0f64..1.0) {
        let s = NormSpec::AbsoluteRadon;
        let x = [theta.cos(), theta.sin()];
        let sub = s.subdiff_f64(&x).unwrap();
        let verts = sub.vertices_f64();
        // Points of the subdifferential give the directions of x⊥.
        let f: Vec<f64> = if verts.len() == 1 { verts[0].clone() } else { (0..2).map(|k| verts[0][k] * (1.0 - pick) + verts[1][k] * pick).collect() };
        let y = [-f[1], f[0]];
        let xy = orthogonal_f64(&s, &x, &y, &tol()).unwrap();
        let yx = orthogonal_f64(&s, &y, &x, &tol()).unwrap();
        prop_assert!(xy.orthogonal);
        prop_assert!(yx.margin.unwrap() >= -1e-6, "margin {:?}", yx.margin);
    }

    #[test]
    fn sphere_samples_are_unit_and_seeded(m in 0usize..5, seed in any::<u64>()) {
        let specs = [NormSpec::AbsoluteRadon, NormSpec::BJExampleR3, NormSpec::lp(3.0, 3).unwrap(), NormSpec::hexagonal(), NormSpec::linf(3)];
        let s = &specs[m];
        let a = norm::unit_sphere_samples(s, 16, seed).unwrap();
        for v in &a {
            prop_assert!((s.norm_f64(&v.to_f64()) - 1.0).abs() <= 1e-10);
        }
        prop_assert_eq!(a, norm::unit_sphere_samples(s, 16, seed).unwrap());
    }

    #[test]
    fn direct_sum_norm_is_l2_of_parts(x in float_vec(3)) {
        let sum = direct_sum_l2(NormSpec::AbsoluteRadon, NormSpec::lp(2.0, 1).unwrap()).unwrap();
        let left = NormSpec::AbsoluteRadon.norm_f64(&x[..2]);
        let expect = (left * left + x[2] * x[2]).sqrt();
        prop_assert!((sum.norm_f64(&x) - expect).abs() <= 1e-12 * expect.max(1.0));
    }

    #[test]
    fn partner_identity_holds(xi in absolute_radon::XI0..1.0) {
        use absolute_radon::{alpha, eta, eta_prime};
        let a = alpha(xi);
        prop_assert!((eta(a) + a * eta_prime(xi)).abs() < 1e-12);
    }

    #[test]
    fn spec_json_round_trips(m in 0usize..6, x in float_vec(3)) {
        let specs = [NormSpec::linf(3), NormSpec::l1(3), NormSpec::lp(2.5, 3).unwrap(), NormSpec::BJExampleR3,
            direct_sum_l2(NormSpec::AbsoluteRadon, NormSpec::lp(2.0, 1).unwrap()).unwrap(),
            NormSpec::polyhedral(vec![vec![q(1), q(0), q(0)], vec![q(-1), q(0), q(0)], vec![q(0), q(1), q(1)], vec![q(0), q(-1), q(-1)], vec![q(0), q(0), q(1)], vec![q(0), q(0), q(-1)]]).unwrap()];
        let s = &specs[m];
        let back = parse_norm_spec(&s.to_json().to_string()).unwrap();
        prop_assert_eq!(back.name(), s.name());
        prop_assert!((back.norm_f64(&x) - s.norm_f64(&x)).abs() < 1e-12);
    }

    #[test]
    fn exact_vector_literals_round_trip(v in prop::collection::vec((-50i64..50, 1i64..20), 1..5)) {
        let x = Vector::exact(&v.iter().map(|&(a, b)| bjortho::field::qr(a, b)).collect::<Vec<_>>());
        prop_assert_eq!(Vector::parse_list(&x.to_strings().join(","), true).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn complex_criterion_is_symmetric_and_matches_grid(seed in any::<u64>()) {
        let r = complex_criterion_agreement(64, seed, 1e-6).unwrap();
        prop_assert_eq!((r.disagreements, r.symmetric_failures), (0, 0));
    }

    #[test]
    fn scaling_keeps_equivalence(x in float_vec(3), s in 0.1f64..10.0) {
        let v = Vector::numeric(&x);
        prop_assert!(bj_equivalent(&NormSpec::BJExampleR3, &v, &v.scaled(s), 64, 1, &tol()).unwrap().equivalent);
    }
}

#[test]
fn complex_criterion_agrees_with_grid_on_a_thousand_quadruples() {
    let r = complex_criterion_agreement(1000, 17, 1e-6).unwrap();
    assert_eq!(r.quadruples, 1000);
    assert_eq!((r.disagreements, r.symmetric_failures), (0, 0));
    assert!(r.orthogonal_cases > 100, "{r:?}");
}

#[test]
fn gamma0_loop_vertex_only_in_gamma0_mode() {
    let g = build_orthodigraph(&NormSpec::linf(3), GraphMode::ExactQuotient, false, &tol()).unwrap();
    assert!(!g.gamma0);
    for (i, out) in g.out.iter().enumerate() {
        assert!(!out.contains(&i));
        assert!(out.windows(2).all(|w| w[0] < w[1]));
    }
}
