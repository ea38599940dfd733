use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use super::absolute_radon;
use super::models::{self, PolygonNorm};
use super::polyhedral::Polyhedral;
use super::subdiff::SubdiffKind;
use crate::error::{Error, Result};
use crate::field::{format_q, parse_q, q_from_f64, to_f64_vec, Q};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

/// Output of the quadrant-gluing construction, kept with its inputs.
#[derive(Clone, Debug)]
pub struct DayPlane {
    pub seed: NormSpec,
    /// Mutual pair of the seed used for the coordinate change.
    pub pair: ([f64; 2], [f64; 2]),
    pub polygon: PolygonNorm,
}

/// A supported normed space.
///
/// `Lp` with `p ∈ {1, ∞}` and `Hexagonal` carry their exact polyhedral form.
#[derive(Clone, Debug)]
pub enum NormSpec {
    Lp { p: LpExponent, dim: usize, poly: Option<Arc<Polyhedral>> },
    Polyhedral(Arc<Polyhedral>),
    Hexagonal(Arc<Polyhedral>),
    AbsoluteRadon,
    DayRadon(Arc<DayPlane>),
    BJExampleR3,
    ComplexRadon,
    DirectSumL2 { left: Box<NormSpec>, right: Box<NormSpec> },
}

impl NormSpec {
    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidSpec(format!("p must satisfy 1 ≤ p ≤ ∞, got {p}")));
        }
        if p.is_infinite() {
            return Ok(NormSpec::Lp { p: LpExponent::Infinity, dim, poly: Some(Arc::new(Polyhedral::linf(dim)?)) });
        }
        let poly = if p == 1.0 { Some(Arc::new(Polyhedral::l1(dim)?)) } else { None };
        Ok(NormSpec::Lp { p: LpExponent::Finite(p), dim, poly })
    }

    pub fn linf(dim: usize) -> Self {
        Self::lp(f64::INFINITY, dim).expect("valid")
    }

    pub fn l1(dim: usize) -> Self {
        Self::lp(1.0, dim).expect("valid")
    }

    pub fn hexagonal() -> Self {
        NormSpec::Hexagonal(Arc::new(Polyhedral::hexagonal()))
    }

    pub fn polyhedral(duals: Vec<Vec<Q>>) -> Result<Self> {
        Ok(NormSpec::Polyhedral(Arc::new(Polyhedral::new(duals)?)))
    }

    pub fn direct_sum(left: NormSpec, right: NormSpec) -> Result<Self> {
        if left.is_complex() != right.is_complex() {
            return Err(Error::InvalidSpec("direct sum of real and complex spaces".into()));
        }
        Ok(NormSpec::DirectSumL2 { left: Box::new(left), right: Box::new(right) })
    }

    /// Real dimension (complex spaces are realified).
    pub fn dim(&self) -> usize {
        match self {
            NormSpec::Lp { dim, .. } => *dim,
            NormSpec::Polyhedral(p) | NormSpec::Hexagonal(p) => p.dim,
            NormSpec::AbsoluteRadon | NormSpec::DayRadon(_) => 2,
            NormSpec::BJExampleR3 => 3,
            NormSpec::ComplexRadon => 4,
            NormSpec::DirectSumL2 { left, right } => left.dim() + right.dim(),
        }
    }

    pub fn is_complex(&self) -> bool {
        match self {
            NormSpec::ComplexRadon => true,
            NormSpec::DirectSumL2 { left, .. } => left.is_complex(),
            _ => false,
        }
    }

    /// Exact polyhedral structure, when the model has one.
    pub fn poly(&self) -> Option<&Polyhedral> {
        match self {
            NormSpec::Lp { poly: Some(p), .. } => Some(p),
            NormSpec::Polyhedral(p) | NormSpec::Hexagonal(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.poly().is_some()
    }

    /// Whether every nonzero point has a unique supporting functional.
    pub fn is_smooth_model(&self) -> bool {
        matches!(self, NormSpec::Lp { p: LpExponent::Finite(p), .. } if *p > 1.0)
    }

    /// Short human-readable name.
    pub fn name(&self) -> String {
        match self {
            NormSpec::Lp { p: LpExponent::Infinity, dim, .. } => format!("linf{dim}"),
            NormSpec::Lp { p: LpExponent::Finite(p), dim, .. } => format!("l{p}_{dim}"),
            NormSpec::Polyhedral(p) => format!("polyhedral{}d_{}duals", p.dim, p.duals.len()),
            NormSpec::Hexagonal(_) => "hexagonal".into(),
            NormSpec::AbsoluteRadon => "absolute_radon".into(),
            NormSpec::DayRadon(d) => format!("day_radon({})", d.seed.name()),
            NormSpec::BJExampleR3 => "bj_example_r3".into(),
            NormSpec::ComplexRadon => "complex_radon".into(),
            NormSpec::DirectSumL2 { left, right } => format!("({})+2({})", left.name(), right.name()),
        }
    }

    /// Norm of a float vector.
    pub fn norm_f64(&self, x: &[f64]) -> f64 {
        match self {
            NormSpec::Lp { p: LpExponent::Finite(p), .. } if self.poly().is_none() => models::lp_norm(x, *p),
            NormSpec::Lp { .. } | NormSpec::Polyhedral(_) | NormSpec::Hexagonal(_) => {
                self.poly().expect("polyhedral").norm_f64(x)
            }
            NormSpec::AbsoluteRadon => absolute_radon::norm(x),
            NormSpec::DayRadon(d) => d.polygon.norm(x),
            NormSpec::BJExampleR3 => models::bj_r3_norm(x),
            NormSpec::ComplexRadon => models::complex_radon_norm(x),
            NormSpec::DirectSumL2 { left, right } => {
                let k = left.dim();
                left.norm_f64(&x[..k]).hypot(right.norm_f64(&x[k..]))
            }
        }
    }

    /// Subdifferential at a nonzero float vector. Polyhedral models convert
    /// the point exactly and return the exact active set.
    pub fn subdiff_f64(&self, x: &[f64]) -> Result<SubdiffKind> {
        if x.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroVector);
        }
        if let Some(p) = self.poly() {
            let xq = x.iter().map(|c| q_from_f64(*c)).collect::<Result<Vec<Q>>>()?;
            return Ok(SubdiffKind::ExactPolytope {
                vertices: p.active(&xq).into_iter().map(|i| p.duals[i].clone()).collect(),
            });
        }
        Ok(match self {
            NormSpec::Lp { p: LpExponent::Finite(p), .. } => {
                SubdiffKind::NumericSingleton { gradient: models::lp_gradient(x, *p) }
            }
            NormSpec::AbsoluteRadon => absolute_radon::subdifferential(x),
            NormSpec::DayRadon(d) => d.polygon.subdifferential(x),
            NormSpec::BJExampleR3 => models::bj_r3_subdifferential(x),
            NormSpec::ComplexRadon => models::complex_radon_subdifferential(x),
            NormSpec::DirectSumL2 { left, right } => {
                let k = left.dim();
                let (u, w) = (&x[..k], &x[k..]);
                let lsub = if u.iter().any(|c| *c != 0.0) { Some((left.subdiff_f64(u)?, left.norm_f64(u))) } else { None };
                let rsub =
                    if w.iter().any(|c| *c != 0.0) { Some((right.subdiff_f64(w)?, right.norm_f64(w))) } else { None };
                SubdiffKind::direct_sum(
                    lsub.as_ref().map(|(s, n)| (s, *n)),
                    rsub.as_ref().map(|(s, n)| (s, *n)),
                    k,
                    right.dim(),
                )?
            }
            NormSpec::Lp { .. } | NormSpec::Polyhedral(_) | NormSpec::Hexagonal(_) => unreachable!("handled above"),
        })
    }

    /// JSON document that parses back to an equivalent spec.
    pub fn to_json(&self) -> Value {
        match self {
            NormSpec::Lp { p: LpExponent::Infinity, dim, .. } => json!({"type": "lp", "p": "inf", "dim": dim}),
            NormSpec::Lp { p: LpExponent::Finite(p), dim, .. } => json!({"type": "lp", "p": p, "dim": dim}),
            NormSpec::Polyhedral(p) => json!({
                "type": "polyhedral",
                "dual_vertices": p.duals.iter().map(|f| f.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>()
            }),
            NormSpec::Hexagonal(_) => json!({"type": "hexagonal"}),
            NormSpec::AbsoluteRadon => json!({"type": "absolute_radon"}),
            NormSpec::DayRadon(d) => json!({"type": "day_radon", "seed": d.seed.to_json()}),
            NormSpec::BJExampleR3 => json!({"type": "bj_example_r3"}),
            NormSpec::ComplexRadon => json!({"type": "complex_radon"}),
            NormSpec::DirectSumL2 { left, right } => {
                json!({"type": "direct_sum_l2", "left": left.to_json(), "right": right.to_json()})
            }
        }
    }

    /// Dual vertices as floats (polyhedral models only).
    pub fn duals_f64(&self) -> Option<Vec<Vec<f64>>> {
        self.poly().map(|p| p.duals.iter().map(|d| to_f64_vec(d)).collect())
    }
}

/// Parses a norm-spec JSON document.
pub fn parse_norm_spec(text: &str) -> Result<NormSpec> {
    let v: Value = serde_json::from_str(text)?;
    from_value(&v)
}

/// Built-in model from its [`NormSpec::name`]: `linf<n>`, `l<p>_<n>`,
/// `hexagonal`, `absolute_radon`, `bj_example_r3`, `complex_radon`.
pub fn model_by_name(name: &str) -> Result<NormSpec> {
    let bad = || Error::Parse(format!("unknown model name {name:?}"));
    match name {
        "hexagonal" => return Ok(NormSpec::hexagonal()),
        "absolute_radon" => return Ok(NormSpec::AbsoluteRadon),
        "bj_example_r3" => return Ok(NormSpec::BJExampleR3),
        "complex_radon" => return Ok(NormSpec::ComplexRadon),
        _ => {}
    }
    if let Some(d) = name.strip_prefix("linf") {
        return Ok(NormSpec::linf(d.parse().map_err(|_| bad())?));
    }
    let (p, d) = name.strip_prefix('l').and_then(|r| r.split_once('_')).ok_or_else(bad)?;
    NormSpec::lp(p.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?)
}

pub fn parse_norm_spec_file(path: &Path) -> Result<NormSpec> {
    parse_norm_spec(&std::fs::read_to_string(path)?)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn parse_exponent(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse("invalid p".into())),
        Value::String(s) => match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
            other => other.parse::<f64>().map_err(|_| Error::Parse(format!("invalid p {s:?}"))),
        },
        _ => Err(Error::Parse("p must be a number or \"inf\"".into())),
    }
}

fn parse_rational(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(crate::field::q(i))
            } else {
                parse_q(&n.to_string())
            }
        }
        _ => Err(Error::Parse(format!("expected a rational literal, got {v}"))),
    }
}

pub fn from_value(v: &Value) -> Result<NormSpec> {
    let ty = field(v, "type")?.as_str().ok_or_else(|| Error::Parse("\"type\" must be a string".into()))?;
    match ty {
        "lp" => {
            let p = parse_exponent(field(v, "p")?)?;
            let dim = field(v, "dim")?.as_u64().ok_or_else(|| Error::Parse("\"dim\" must be a positive integer".into()))?;
            NormSpec::lp(p, dim as usize)
        }
        "polyhedral" => {
            let list = field(v, "dual_vertices")?
                .as_array()
                .ok_or_else(|| Error::Parse("\"dual_vertices\" must be an array".into()))?;
            let duals = list
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Parse("each dual vertex must be an array".into()))?
                        .iter()
                        .map(parse_rational)
                        .collect::<Result<Vec<Q>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            NormSpec::polyhedral(duals)
        }
        "hexagonal" => Ok(NormSpec::hexagonal()),
        "absolute_radon" => Ok(NormSpec::AbsoluteRadon),
        "bj_example_r3" => Ok(NormSpec::BJExampleR3),
        "complex_radon" => Ok(NormSpec::ComplexRadon),
        "day_radon" => {
            let seed = from_value(field(v, "seed")?)?;
            let curve = crate::radon::day_construction(&seed)?;
            curve.into_spec()
        }
        "direct_sum_l2" => NormSpec::direct_sum(from_value(field(v, "left")?)?, from_value(field(v, "right")?)?),
        other => Err(Error::Parse(format!("unknown norm type {other:?}"))),
    }
}
