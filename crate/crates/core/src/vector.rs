use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::field::{format_q, parse_q, q_from_f64, Field, Q};

/// A point of the space, with exact or float coordinates (never mixed).
#[derive(Clone, Debug, PartialEq)]
pub enum Vector {
    Exact(Vec<Q>),
    Numeric(Vec<f64>),
}

/// Linear functional acting by the standard pairing; same storage as [`Vector`].
pub type Functional = Vector;

/// Scalar result of a norm or pairing evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Q),
    Numeric(f64),
}

/// Exact scalars serialize as reduced fraction strings.
impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => s.serialize_str(&crate::field::format_q(q)),
            Scalar::Numeric(v) => s.serialize_f64(*v),
        }
    }
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Numeric(v) => *v,
        }
    }
}

impl Vector {
    pub fn numeric(v: &[f64]) -> Self {
        Vector::Numeric(v.to_vec())
    }

    pub fn exact(v: &[Q]) -> Self {
        Vector::Exact(v.to_vec())
    }

    pub fn dim(&self) -> usize {
        match self {
            Vector::Exact(v) => v.len(),
            Vector::Numeric(v) => v.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Vector::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Exact(v) => v.iter().all(|c| c.sign() == 0),
            Vector::Numeric(v) => v.iter().all(|c| *c == 0.0),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Vector::Exact(v) => v.iter().map(Field::to_f64).collect(),
            Vector::Numeric(v) => v.clone(),
        }
    }

    /// Exact coordinates; floats convert to their exact binary values.
    pub fn to_exact(&self) -> Result<Vec<Q>> {
        match self {
            Vector::Exact(v) => Ok(v.clone()),
            Vector::Numeric(v) => v.iter().map(|c| q_from_f64(*c)).collect(),
        }
    }

    /// Parses `"1,-3/7,0.5"`. Any `/` makes the whole vector exact; otherwise
    /// decimals are kept as exact rationals when `exact` is set.
    pub fn parse_list(text: &str, exact: bool) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if parts.is_empty() {
            return Err(Error::Parse(format!("empty vector literal {text:?}")));
        }
        if exact {
            Ok(Vector::Exact(parts.iter().map(|p| parse_q(p)).collect::<Result<_>>()?))
        } else {
            if parts.iter().any(|p| p.contains('/')) {
                return Err(Error::Parse(format!(
                    "rational literal in {text:?} is not accepted for a float-valued model"
                )));
            }
            let v = parts
                .iter()
                .map(|p| p.parse::<f64>().map_err(|_| Error::Parse(format!("invalid number {p:?}"))))
                .collect::<Result<Vec<f64>>>()?;
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::Parse(format!("non-finite coordinate in {text:?}")));
            }
            Ok(Vector::Numeric(v))
        }
    }

    pub fn scaled(&self, s: f64) -> Vector {
        match self {
            Vector::Exact(v) => {
                let sq = q_from_f64(s).unwrap_or_else(|_| Q::zero());
                Vector::Exact(v.iter().map(|c| c.clone() * sq.clone()).collect())
            }
            Vector::Numeric(v) => Vector::Numeric(v.iter().map(|c| c * s).collect()),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        match self {
            Vector::Exact(v) => v.iter().map(format_q).collect(),
            Vector::Numeric(v) => v.iter().map(|c| format!("{c}")).collect(),
        }
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        match self {
            Vector::Exact(v) => {
                for c in v {
                    seq.serialize_element(&format_q(c))?;
                }
            }
            Vector::Numeric(v) => {
                for c in v {
                    seq.serialize_element(c)?;
                }
            }
        }
        seq.end()
    }
}
