//! Worked examples for every public operation, with frozen expected values.

use std::f64::consts::E;

use bjortho::bj::{
    absolute_radon_pair_margins, bj_equivalent, derivative_bounds, directional_derivative, is_bj_norm_sampled,
    DescriptorMode, Neighborhood, Side,
};
use bjortho::field::{q, qr};
use bjortho::graph::{
    build_orthodigraph, classify_smooth_vertices, digraph_dimension, find_maximal_faces, graph_fingerprint,
    polyhedrality_verdict, recognize_sup_norm, span_from_graph, to_dot, GraphMode, PolyhedralityVerdict,
};
use bjortho::norm::{self, absolute_radon, norm_value, subdifferential, SubdiffKind};
use bjortho::radon::{
    check_gamma0_hilbert_conditions_real, complex_radon_orthogonal, day_construction, direct_sum_l2,
    find_mutual_pair_2d, nonsmooth_counterexample_check, polygon_of, verify_radon_symmetry, BoundaryCurve2D,
};
use bjortho::{
    is_bj_orthogonal, is_smooth, neighborhood_descriptor, parse_norm_spec, Error, NormSpec, Scalar, Tolerances, Vector,
};
use num::complex::Complex64;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn ex(v: &[i64]) -> Vector {
    Vector::exact(&v.iter().map(|&c| q(c)).collect::<Vec<_>>())
}

fn exq(v: &[(i64, i64)]) -> Vector {
    Vector::exact(&v.iter().map(|&(a, b)| qr(a, b)).collect::<Vec<_>>())
}

fn num(v: &[f64]) -> Vector {
    Vector::numeric(v)
}

fn exact_vertices(s: &NormSpec, x: &Vector) -> Vec<Vector> {
    match subdifferential(s, x).unwrap().kind {
        SubdiffKind::ExactPolytope { vertices } => vertices.into_iter().map(Vector::Exact).collect(),
        other => panic!("expected an exact polytope, got {other:?}"),
    }
}

#[test]
fn norm_values() {
    let v = norm_value(&NormSpec::linf(3), &exq(&[(1, 1), (-2, 1), (1, 2)])).unwrap();
    assert_eq!(v, Scalar::Exact(q(2)));
    let v = norm_value(&NormSpec::BJExampleR3, &num(&[1.0, 0.0, 0.0])).unwrap().to_f64();
    assert!((v - 2f64.sqrt()).abs() < 1e-12);
    let v = norm_value(&NormSpec::AbsoluteRadon, &num(&[1.0 / E, 1.0])).unwrap().to_f64();
    assert!((v - 1.0).abs() < 1e-12);
    let v = norm_value(&NormSpec::AbsoluteRadon, &num(&[2.0 / E, 2.0])).unwrap().to_f64();
    assert!((v - 2.0).abs() < 1e-12);
}

#[test]
fn subdifferentials() {
    assert_eq!(exact_vertices(&NormSpec::linf(3), &exq(&[(1, 1), (1, 2), (0, 1)])), vec![ex(&[1, 0, 0])]);
    let mut corner = exact_vertices(&NormSpec::linf(2), &ex(&[1, 1]));
    corner.sort_by_key(|v| v.to_strings());
    assert_eq!(corner, vec![ex(&[0, 1]), ex(&[1, 0])]);
    let r = 2f64.sqrt();
    let x = [0.0, -1.0 / r, 1.0 / r];
    match subdifferential(&NormSpec::BJExampleR3, &num(&x)).unwrap().kind {
        SubdiffKind::NumericSingleton { gradient } => {
            let expect = [0.0, -1.0, 1.0];
            let nrm = gradient.iter().map(|c| c * c).sum::<f64>().sqrt();
            for (g, e) in gradient.iter().zip(expect) {
                assert!((g / nrm - e / r).abs() < 1e-9, "{gradient:?}");
            }
        }
        other => panic!("expected a singleton, got {other:?}"),
    }
}

#[test]
fn spec_parsing() {
    let s = parse_norm_spec(r#"{"type":"lp","p":2,"dim":3}"#).unwrap();
    assert_eq!((s.name(), s.dim()), ("l2_3".to_string(), 3));
    let sq = parse_norm_spec(r#"{"type":"polyhedral","dual_vertices":[["1","0"],["-1","0"],["0","1"],["0","-1"]]}"#)
        .unwrap();
    assert_eq!(sq.poly().unwrap().vertices.len(), 4);
    let fp = graph_fingerprint(&build_orthodigraph(&sq, GraphMode::ExactQuotient, false, &tol()).unwrap()).unwrap();
    let fl = graph_fingerprint(&build_orthodigraph(&NormSpec::linf(2), GraphMode::ExactQuotient, false, &tol()).unwrap())
        .unwrap();
    assert_eq!(fp, fl);
    assert!(matches!(
        parse_norm_spec(r#"{"type":"polyhedral","dual_vertices":[["1","0"],["0","1"]]}"#),
        Err(Error::InvalidSpec(_))
    ));
    assert_eq!(
        parse_norm_spec(r#"{"type":"lp","p":2,"dim":2}"#).unwrap().to_json(),
        NormSpec::lp(2.0, 2).unwrap().to_json()
    );
}

#[test]
fn sphere_samples() {
    let s = NormSpec::lp(2.0, 2).unwrap();
    let a = norm::unit_sphere_samples(&s, 4, 7).unwrap();
    assert_eq!(a.len(), 4);
    for v in &a {
        assert!((s.norm_f64(&v.to_f64()) - 1.0).abs() <= 1e-12);
    }
    assert_eq!(a, norm::unit_sphere_samples(&s, 4, 7).unwrap());
    let ar = norm::unit_sphere_samples(&NormSpec::AbsoluteRadon, 100, 1).unwrap();
    assert_eq!(ar.len(), 100);
    for v in &ar {
        assert!((NormSpec::AbsoluteRadon.norm_f64(&v.to_f64()) - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn directional_derivatives() {
    let l2 = NormSpec::lp(2.0, 2).unwrap();
    let d = directional_derivative(&l2, &num(&[1.0, 0.0]), &num(&[0.0, 1.0]), Side::Plus, &tol()).unwrap();
    assert!(d.value.to_f64().abs() < 1e-7);
    let s = NormSpec::linf(2);
    let lo = directional_derivative(&s, &ex(&[1, 1]), &ex(&[1, -1]), Side::Minus, &tol()).unwrap().value;
    let hi = directional_derivative(&s, &ex(&[1, 1]), &ex(&[1, -1]), Side::Plus, &tol()).unwrap().value;
    assert_eq!((lo, hi), (Scalar::Exact(q(-1)), Scalar::Exact(q(1))));
    let x = exq(&[(1, 1), (1, 2)]);
    for side in [Side::Minus, Side::Plus] {
        assert_eq!(directional_derivative(&s, &x, &ex(&[1, 1]), side, &tol()).unwrap().value, Scalar::Exact(q(1)));
    }
    // Finite differences on max(|1+t|, |1/2+t|) agree.
    let (lo, hi) = derivative_bounds(&s, &[1.0, 0.5], &[1.0, 1.0]).unwrap();
    assert_eq!((lo, hi), (1.0, 1.0));
}

#[test]
fn orthogonality_examples() {
    let l2 = NormSpec::lp(2.0, 3).unwrap();
    assert!(is_bj_orthogonal(&l2, &num(&[1.0, 2.0, 3.0]), &num(&[3.0, 0.0, -1.0]), &tol()).unwrap().orthogonal);
    let s = NormSpec::linf(2);
    let x = exq(&[(1, 1), (1, 2)]);
    let v = is_bj_orthogonal(&s, &x, &ex(&[0, 5]), &tol()).unwrap();
    assert!(v.orthogonal);
    assert_eq!(v.witness, Some(ex(&[1, 0])));
    assert!(!is_bj_orthogonal(&s, &x, &ex(&[1, 1]), &tol()).unwrap().orthogonal);
    // Mutual pair on the absolute Radon curve at ξ = e^{-1/2}.
    let xi = (-0.5f64).exp();
    let y = absolute_radon::mutual_partner(xi);
    assert!((y[0] - xi).abs() < 1e-12 && (y[1] + xi * E / 2.0).abs() < 1e-12, "{y:?}");
    let (a, b) = absolute_radon_pair_margins(xi, &tol()).unwrap();
    assert!(a >= -1e-8 && b >= -1e-8);
    assert!(matches!(is_bj_orthogonal(&l2, &num(&[0.0; 3]), &num(&[1.0, 0.0, 0.0]), &tol()), Err(Error::ZeroVector)));
}

#[test]
fn smoothness_examples() {
    assert!(is_smooth(&NormSpec::linf(3), &exq(&[(1, 1), (1, 2), (0, 1)])).unwrap());
    assert!(!is_smooth(&NormSpec::linf(2), &ex(&[1, 1])).unwrap());
    assert!(!is_smooth(&NormSpec::BJExampleR3, &num(&[0.0, 0.0, 1.0])).unwrap());
}

#[test]
fn descriptor_examples() {
    let s = NormSpec::linf(3);
    let (a, b) = (exq(&[(1, 1), (1, 2), (0, 1)]), exq(&[(1, 1), (1, 3), (0, 1)]));
    for side in [Neighborhood::Outgoing, Neighborhood::Incoming] {
        let (da, db) = (neighborhood_descriptor(&s, &a, side).unwrap(), neighborhood_descriptor(&s, &b, side).unwrap());
        assert!(da.same_set(&db, &tol()), "{side:?}");
    }
    let l2 = NormSpec::lp(2.0, 2).unwrap();
    match neighborhood_descriptor(&l2, &num(&[0.0, 1.0]), Neighborhood::Outgoing).unwrap().mode {
        DescriptorMode::NumericKernel { basis } => {
            assert_eq!(basis.len(), 1);
            assert!((basis[0][0].abs() - 1.0).abs() < 1e-12 && basis[0][1].abs() < 1e-12);
        }
        other => panic!("unexpected {other:?}"),
    }
    let h = NormSpec::hexagonal();
    let d1 = neighborhood_descriptor(&h, &exq(&[(1, 1), (1, 2)]), Neighborhood::Outgoing).unwrap();
    let d2 = neighborhood_descriptor(&h, &ex(&[1, 1]), Neighborhood::Outgoing).unwrap();
    assert!(!d1.same_set(&d2, &tol()));
}

#[test]
fn equivalence_examples() {
    let s = NormSpec::linf(3);
    let (a, b) = (exq(&[(1, 1), (1, 2), (0, 1)]), exq(&[(1, 1), (1, 3), (0, 1)]));
    assert!(bj_equivalent(&s, &a, &b, 0, 0, &tol()).unwrap().equivalent);
    let l2 = NormSpec::lp(2.0, 3).unwrap();
    assert!(!bj_equivalent(&l2, &num(&[1.0, 0.0, 0.0]), &num(&[0.0, 1.0, 0.0]), 200, 1, &tol()).unwrap().equivalent);
    for spec in [NormSpec::hexagonal(), NormSpec::linf(3)] {
        let x = if spec.dim() == 2 { exq(&[(1, 1), (1, 3)]) } else { a.clone() };
        assert!(bj_equivalent(&spec, &x, &x.scaled(2.0), 0, 0, &tol()).unwrap().equivalent);
    }
    let x = num(&[0.3, -0.2, 0.9]);
    assert!(bj_equivalent(&NormSpec::BJExampleR3, &x, &x.scaled(2.0), 200, 3, &tol()).unwrap().equivalent);
}

#[test]
fn bj_norm_search() {
    let r = is_bj_norm_sampled(&NormSpec::linf(3), 1000, 5, &tol()).unwrap();
    let (a, b) = r.violation.expect("sup norm is not a BJ-norm");
    assert!(bj_equivalent(&NormSpec::linf(3), &a, &b, 0, 0, &tol()).unwrap().equivalent);
    assert!(is_bj_norm_sampled(&NormSpec::lp(2.0, 3).unwrap(), 1000, 5, &tol()).unwrap().violation.is_none());
    assert!(is_bj_norm_sampled(&NormSpec::BJExampleR3, 1000, 5, &tol()).unwrap().violation.is_none());
}

#[test]
fn face_lattices() {
    let f = |s: &NormSpec| {
        let lat = s.poly().unwrap().lattice().unwrap();
        (lat.f_vector(), lat.classes.len())
    };
    assert_eq!(f(&NormSpec::linf(2)), (vec![4, 4], 4));
    assert_eq!(f(&NormSpec::hexagonal()), (vec![6, 6], 6));
    assert_eq!(f(&NormSpec::l1(3)).0, vec![6, 12, 8]);
    // Representatives carry exactly their face's active set.
    let s = NormSpec::l1(3);
    let p = s.poly().unwrap();
    let lat = p.lattice().unwrap();
    for face in &lat.faces {
        assert_eq!(p.active(&face.representative), face.active);
    }
}

#[test]
fn linf2_quotient_graph() {
    let g = build_orthodigraph(&NormSpec::linf(2), GraphMode::ExactQuotient, false, &tol()).unwrap();
    assert_eq!(g.len(), 4);
    let by_rep = |v: &[i64]| {
        let (target, neg) = (ex(v), ex(&[-v[0], -v[1]]));
        g.vertices.iter().position(|u| u.representative == target || u.representative == neg).unwrap()
    };
    let (e1, e2, vp, vm) = (by_rep(&[1, 0]), by_rep(&[0, 1]), by_rep(&[1, 1]), by_rep(&[1, -1]));
    let mut expect = vec![vec![]; 4];
    // Edge classes see only the other edge class; a corner sees both edge
    // classes and the other corner.
    expect[e1] = vec![e2];
    expect[e2] = vec![e1];
    expect[vp] = vec![e1, e2, vm];
    expect[vm] = vec![e1, e2, vp];
    for e in &mut expect {
        e.sort_unstable();
    }
    assert_eq!(g.out, expect);
    assert_eq!(classify_smooth_vertices(&g).unwrap(), {
        let mut s = vec![e1, e2];
        s.sort_unstable();
        s
    });
}

#[test]
fn sampled_euclidean_graph() {
    let s = NormSpec::lp(2.0, 2).unwrap();
    let g = build_orthodigraph(&s, GraphMode::Sampled { count: 100, seed: 3 }, false, &tol()).unwrap();
    assert!(g.len() <= 100 && g.len() > 90);
    for (i, v) in g.vertices.iter().enumerate() {
        let x = v.representative.to_f64();
        let on_line = g
            .vertices
            .iter()
            .enumerate()
            .filter(|&(j, u)| {
                let y = u.representative.to_f64();
                j != i && (x[0] * y[0] + x[1] * y[1]).abs() < 1e-9
            })
            .count();
        assert_eq!(g.out[i].len(), on_line);
    }
    assert_eq!(classify_smooth_vertices(&g).unwrap().len(), g.len());
    assert_eq!(digraph_dimension(&g).unwrap().dim, 2);
    assert!(build_orthodigraph(&s, GraphMode::Sampled { count: 0, seed: 3 }, false, &tol()).is_err());
}

#[test]
fn dimensions() {
    for (spec, d) in [(NormSpec::linf(3), 3), (NormSpec::l1(3), 3)] {
        let g = build_orthodigraph(&spec, GraphMode::ExactQuotient, false, &tol()).unwrap();
        let r = digraph_dimension(&g).unwrap();
        assert_eq!((r.dim, r.gamma, r.gamma0), (d, d, d));
    }
}

#[test]
fn nd_smooth_classes() {
    let s = NormSpec::linf(3);
    let g = build_orthodigraph(&s, GraphMode::ExactQuotient, false, &tol()).unwrap();
    let smooth = classify_smooth_vertices(&g).unwrap();
    let class_of = |v: &Vector| {
        let c = s.poly().unwrap().lattice().unwrap().class_of_point(s.poly().unwrap(), &v.to_exact().unwrap()).unwrap();
        smooth.contains(&c)
    };
    assert!(class_of(&exq(&[(1, 1), (1, 2), (1, 4)])));
    assert!(!class_of(&exq(&[(1, 1), (1, 1), (1, 2)])));
    let l1 = NormSpec::l1(3);
    let g = build_orthodigraph(&l1, GraphMode::ExactQuotient, false, &tol()).unwrap();
    let smooth = classify_smooth_vertices(&g).unwrap();
    for v in &g.vertices {
        assert_eq!(smooth.contains(&v.id), v.smooth, "{}", v.label);
    }
    assert_eq!(smooth.len(), 4);
    let l2 = NormSpec::lp(2.0, 3).unwrap();
    let g = build_orthodigraph(&l2, GraphMode::Sampled { count: 30, seed: 9 }, false, &tol()).unwrap();
    assert_eq!(classify_smooth_vertices(&g).unwrap().len(), g.len());
}

#[test]
fn maximal_faces_and_recognition() {
    for (spec, faces, count, sup) in [
        (NormSpec::linf(3), 3, 3, true),
        (NormSpec::hexagonal(), 3, 3, false),
        (NormSpec::l1(3), 4, 4, false),
    ] {
        let g = build_orthodigraph(&spec, GraphMode::ExactQuotient, false, &tol()).unwrap();
        assert_eq!(find_maximal_faces(&g).unwrap().len(), faces, "{}", spec.name());
        let r = recognize_sup_norm(&g, &tol()).unwrap();
        assert_eq!((r.smooth_neighborhood_count, r.is_sup_norm), (count, sup), "{}", spec.name());
    }
}

#[test]
fn spans() {
    let l2 = NormSpec::lp(2.0, 3).unwrap();
    let r = span_from_graph(&l2, &[num(&[1.0, 0.0, 0.0])], 64, 1, &tol()).unwrap();
    assert_eq!((r.dim, r.omega_min), (1, 2));
    let r = span_from_graph(&l2, &[num(&[1.0, 0.0, 0.0]), num(&[0.0, 1.0, 0.0])], 64, 1, &tol()).unwrap();
    assert_eq!((r.dim, r.omega_min), (2, 1));
    let l4 = NormSpec::lp(4.0, 3).unwrap();
    let r = span_from_graph(&l4, &[num(&[1.0, 1.0, 0.0])], 64, 1, &tol()).unwrap();
    assert_eq!(r.dim, 1);
    assert!(r.angle_to_span < 1e-6, "{}", r.angle_to_span);
}

#[test]
fn polyhedrality_counts() {
    let count = |s: &NormSpec| match polyhedrality_verdict(s, 1, &tol()).unwrap() {
        PolyhedralityVerdict::Exact { count } => count,
        other => panic!("{other:?}"),
    };
    assert_eq!(count(&NormSpec::linf(2)), 4);
    assert_eq!(count(&NormSpec::hexagonal()), 6);
}

#[test]
fn fingerprints() {
    let fp = |s: &NormSpec| {
        graph_fingerprint(&build_orthodigraph(s, GraphMode::ExactQuotient, false, &tol()).unwrap()).unwrap()
    };
    let para = NormSpec::polyhedral(vec![
        vec![q(1), q(0)],
        vec![q(-1), q(0)],
        vec![q(1), q(1)],
        vec![q(-1), q(-1)],
    ])
    .unwrap();
    assert_eq!(fp(&NormSpec::linf(2)), fp(&para));
    assert_ne!(fp(&NormSpec::linf(2)), fp(&NormSpec::hexagonal()));
    let l2 = NormSpec::lp(2.0, 2).unwrap();
    let sampled = |seed| {
        let g = build_orthodigraph(&l2, GraphMode::Sampled { count: 40, seed }, false, &tol()).unwrap();
        let f = graph_fingerprint(&g).unwrap();
        (f.dim, f.nonsmooth, f.maximal_faces)
    };
    assert_eq!(sampled(1), sampled(2));
}

#[test]
fn dot_output() {
    let g = build_orthodigraph(&NormSpec::linf(2), GraphMode::ExactQuotient, false, &tol()).unwrap();
    let a = to_dot(&g).unwrap();
    assert_eq!(a, to_dot(&build_orthodigraph(&NormSpec::linf(2), GraphMode::ExactQuotient, false, &tol()).unwrap()).unwrap());
    assert_eq!(a.matches("[label=").count(), 4);
    let g0 = build_orthodigraph(&NormSpec::linf(2), GraphMode::ExactQuotient, true, &tol()).unwrap();
    assert!(to_dot(&g0).unwrap().contains("\"0\" -> \"0\";"));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.dot");
    bjortho::graph::export_dot(&g, &p).unwrap();
    assert_eq!(std::fs::read_to_string(p).unwrap(), a);
}

#[test]
fn mutual_pairs() {
    let l2 = NormSpec::lp(2.0, 2).unwrap();
    let m = find_mutual_pair_2d(&l2, &tol()).unwrap();
    assert!((m.x[0] * m.y[0] + m.x[1] * m.y[1]).abs() < 1e-9);
    let m = find_mutual_pair_2d(&NormSpec::linf(2), &tol()).unwrap();
    assert!(m.margin_xy >= -1e-9 && m.margin_yx >= -1e-9);
    let m = find_mutual_pair_2d(&NormSpec::AbsoluteRadon, &tol()).unwrap();
    assert!(m.margin_xy >= -1e-8 && m.margin_yx >= -1e-8);
    // The sup-norm pair (1,1), (1,-1) is mutual.
    let s = NormSpec::linf(2);
    assert!(is_bj_orthogonal(&s, &ex(&[1, 1]), &ex(&[1, -1]), &tol()).unwrap().orthogonal);
    assert!(is_bj_orthogonal(&s, &ex(&[1, -1]), &ex(&[1, 1]), &tol()).unwrap().orthogonal);
}

#[test]
fn day_construction_examples() {
    let circle = day_construction(&NormSpec::lp(2.0, 2).unwrap()).unwrap().into_spec().unwrap();
    for k in 0..64 {
        let t = k as f64 * 0.1;
        let v = circle.norm_f64(&[t.cos(), t.sin()]);
        assert!((v - 1.0).abs() < 1e-5, "{v}");
    }
    let curve = day_construction(&NormSpec::linf(2)).unwrap();
    // Closed and symmetric: every point has its negative on the curve.
    let pts: Vec<[f64; 2]> = curve.arcs.iter().flat_map(|a| a.points.clone()).collect();
    let spec = curve.clone().into_spec().unwrap();
    for p in &pts {
        assert!((spec.norm_f64(p) - 1.0).abs() < 1e-9);
        assert!((spec.norm_f64(&[-p[0], -p[1]]) - 1.0).abs() < 1e-9);
    }
    assert_eq!(polygon_of(&spec).unwrap().vertices.len(), 6);
    assert!(verify_radon_symmetry(&spec, 1000, 4, 1e-6).unwrap().symmetric);
    let csv = curve.to_csv();
    assert_eq!(csv.lines().next(), Some("theta,x,y"));
    assert_eq!(csv.lines().count(), pts.len() + 1);
    assert!(BoundaryCurve2D::sample(&NormSpec::AbsoluteRadon, 40).unwrap().into_spec().is_err());
}

#[test]
fn symmetry_examples() {
    assert!(verify_radon_symmetry(&NormSpec::AbsoluteRadon, 1000, 2, 1e-6).unwrap().symmetric);
    let h = verify_radon_symmetry(&NormSpec::hexagonal(), 10, 2, 1e-6).unwrap();
    assert!(h.symmetric && h.exact);
    let l4 = verify_radon_symmetry(&NormSpec::lp(4.0, 2).unwrap(), 1000, 2, 1e-6).unwrap();
    assert!(!l4.symmetric && l4.counterexample.is_some());
    assert!(bjortho::radon::is_asymmetric_pair(&NormSpec::lp(4.0, 2).unwrap(), &[2.0, 1.0], &[1.0, -8.0], &tol()).unwrap());
}

#[test]
fn hilbert_conditions() {
    assert!(check_gamma0_hilbert_conditions_real(&NormSpec::AbsoluteRadon).unwrap().holds);
    assert!(!check_gamma0_hilbert_conditions_real(&NormSpec::hexagonal()).unwrap().holds);
    let l2 = check_gamma0_hilbert_conditions_real(&NormSpec::lp(2.0, 2).unwrap()).unwrap();
    assert!(l2.holds && l2.segments.is_empty());
}

#[test]
fn complex_examples() {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    assert!(complex_radon_orthogonal(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), &tol()).unwrap());
    for xi in [c(0.0, 0.0), c(1.0 / E, 0.0), c(0.1, -0.2), c(0.0, -1.0 / E)] {
        assert!(complex_radon_orthogonal(c(1.0, 0.0), c(0.0, 0.0), xi, c(1.0, 0.0), &tol()).unwrap(), "{xi}");
    }
    assert!(!complex_radon_orthogonal(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), &tol()).unwrap());
}

#[test]
fn direct_sums() {
    let e3 = direct_sum_l2(NormSpec::lp(2.0, 2).unwrap(), NormSpec::lp(2.0, 1).unwrap()).unwrap();
    let mut rng = norm::rng(4);
    for _ in 0..200 {
        let x = norm::gaussian_direction(&mut rng, 3);
        let z = norm::gaussian_direction(&mut rng, 3);
        let ip = x.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() / x.iter().map(|a| a * a).sum::<f64>();
        let y: Vec<f64> = z.iter().zip(&x).map(|(b, a)| b - ip * a).collect();
        assert!((e3.norm_f64(&z) - z.iter().map(|c| c * c).sum::<f64>().sqrt()).abs() < 1e-12);
        assert!(is_bj_orthogonal(&e3, &num(&x), &num(&y), &tol()).unwrap().orthogonal);
        let off: Vec<f64> = y.iter().zip(&x).map(|(b, a)| b + 1e-3 * a).collect();
        assert!(!is_bj_orthogonal(&e3, &num(&x), &num(&off), &tol()).unwrap().orthogonal);
    }
    let sum = direct_sum_l2(NormSpec::AbsoluteRadon, NormSpec::lp(2.0, 1).unwrap()).unwrap();
    let x = num(&[1.0, 0.0, 0.0]);
    assert!(!is_smooth(&sum, &x).unwrap());
    for xi in [-1.0 / E, -0.2, 0.0, 0.3, 1.0 / E] {
        for v in [-3.0, 0.0, 0.5, 7.0] {
            assert!(is_bj_orthogonal(&sum, &x, &num(&[xi, 1.0, v]), &tol()).unwrap().orthogonal, "{xi} {v}");
        }
    }
    let r = nonsmooth_counterexample_check(3).unwrap();
    assert!(r.x_tilde_nonsmooth && r.face_set_equivalent && r.final_intersection_trivial);
}

#[test]
fn sampled_polyhedrality() {
    match polyhedrality_verdict(&NormSpec::lp(2.0, 2).unwrap(), 5, &tol()).unwrap() {
        PolyhedralityVerdict::Sampled { counts, polyhedral_like } => {
            assert!(!polyhedral_like);
            assert!(counts.windows(2).all(|w| w[1].1 > w[0].1), "{counts:?}");
        }
        other => panic!("{other:?}"),
    }
}
