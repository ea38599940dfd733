//! Normed-space models: evaluation, subdifferentials, spec parsing, sampling.

pub mod absolute_radon;
pub mod models;
pub mod polyhedral;
pub mod spec;
pub mod subdiff;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use models::PolygonNorm;
pub use polyhedral::Polyhedral;
pub use spec::{model_by_name, parse_norm_spec, parse_norm_spec_file, DayPlane, LpExponent, NormSpec};
pub use subdiff::{SubdiffKind, Subdifferential};

use crate::error::{Error, Result};
use crate::field::Q;
use crate::vector::{Scalar, Vector};

fn check_dim(spec: &NormSpec, x: &Vector) -> Result<()> {
    if x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: x.dim() });
    }
    Ok(())
}

/// `‖x‖`; exact for polyhedral models given exact input.
pub fn norm_value(spec: &NormSpec, x: &Vector) -> Result<Scalar> {
    check_dim(spec, x)?;
    match (spec.poly(), x) {
        (Some(p), Vector::Exact(v)) => Ok(Scalar::Exact(p.norm(v))),
        _ => Ok(Scalar::Numeric(spec.norm_f64(&x.to_f64()))),
    }
}

/// `∂‖x‖` for `x ≠ 0`.
pub fn subdifferential(spec: &NormSpec, x: &Vector) -> Result<Subdifferential> {
    check_dim(spec, x)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let kind = match spec.poly() {
        Some(p) => {
            let xq: Vec<Q> = x.to_exact()?;
            SubdiffKind::ExactPolytope { vertices: p.active(&xq).into_iter().map(|i| p.duals[i].clone()).collect() }
        }
        None => spec.subdiff_f64(&x.to_f64())?,
    };
    Ok(Subdifferential { basepoint: x.clone(), kind })
}

/// Seeded RNG used by every sampling routine.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal direction in `ℝⁿ`, rejecting near-zero draws.
pub fn gaussian_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        if v.iter().map(|c| c * c).sum::<f64>() > 1e-20 {
            return v;
        }
    }
}

/// Direction uniform on the Euclidean sphere, rescaled onto the unit sphere of `spec`.
pub fn sphere_point(spec: &NormSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let v = gaussian_direction(rng, spec.dim());
    let n = spec.norm_f64(&v);
    v.iter().map(|c| c / n).collect()
}

/// Deterministic unit-sphere samples.
pub fn unit_sphere_samples(spec: &NormSpec, count: usize, seed: u64) -> Result<Vec<Vector>> {
    if count == 0 {
        return Err(Error::InvalidSpec("sample count must be at least 1".into()));
    }
    let mut r = rng(seed);
    Ok((0..count).map(|_| Vector::Numeric(sphere_point(spec, &mut r))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qr};

    #[test]
    fn norm_value_examples() {
        let linf3 = NormSpec::linf(3);
        let v = norm_value(&linf3, &Vector::numeric(&[1.0, -2.0, 0.5])).unwrap();
        assert_eq!(v.to_f64(), 2.0);
        let bj = NormSpec::BJExampleR3;
        assert!((norm_value(&bj, &Vector::numeric(&[1.0, 0.0, 0.0])).unwrap().to_f64() - std::f64::consts::SQRT_2).abs() < 1e-8);
        let e = std::f64::consts::E;
        let ar = NormSpec::AbsoluteRadon;
        assert!((norm_value(&ar, &Vector::numeric(&[1.0 / e, 1.0])).unwrap().to_f64() - 1.0).abs() < 1e-12);
        assert!((norm_value(&ar, &Vector::numeric(&[2.0 / e, 2.0])).unwrap().to_f64() - 2.0).abs() < 1e-12);
        assert!(norm_value(&ar, &Vector::numeric(&[1.0])).is_err());
    }

    #[test]
    fn subdifferential_examples() {
        let s = subdifferential(&NormSpec::linf(3), &Vector::exact(&[q(1), qr(1, 2), q(0)])).unwrap();
        assert_eq!(s.kind, SubdiffKind::ExactPolytope { vertices: vec![vec![q(1), q(0), q(0)]] });
        let s = subdifferential(&NormSpec::linf(2), &Vector::exact(&[q(1), q(1)])).unwrap();
        match s.kind {
            SubdiffKind::ExactPolytope { mut vertices } => {
                vertices.sort();
                assert_eq!(vertices, vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
            }
            _ => panic!("exact expected"),
        }
        assert!(matches!(subdifferential(&NormSpec::AbsoluteRadon, &Vector::numeric(&[0.0, 0.0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn samples_are_unit_and_deterministic() {
        let l2 = NormSpec::lp(2.0, 2).unwrap();
        let a = unit_sphere_samples(&l2, 4, 7).unwrap();
        let b = unit_sphere_samples(&l2, 4, 7).unwrap();
        assert_eq!(a, b);
        for v in &a {
            let n = crate::field::euclid_norm(&v.to_f64());
            assert!((n - 1.0).abs() <= 1e-12);
        }
        let ar = unit_sphere_samples(&NormSpec::AbsoluteRadon, 100, 1).unwrap();
        assert!(ar.iter().all(|v| (NormSpec::AbsoluteRadon.norm_f64(&v.to_f64()) - 1.0).abs() <= 1e-10));
        assert!(unit_sphere_samples(&l2, 0, 1).is_err());
    }
}
