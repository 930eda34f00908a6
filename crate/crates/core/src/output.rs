//! Machine-readable output records.
//!
//! Exact rationals are written as `["numerator", "denominator"]` string
//! pairs so that arbitrarily large integers survive any JSON reader.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::eisenstein::MzvQTensor;
use crate::error::{Error, Result};
use crate::hopf::{TensorKey, TensorLinComb};
use crate::mzv::RegPolynomial;
use crate::qseries::QSeries;
use crate::words::{Composition, LinComb, Rational};

pub const SCHEMA_VERSION: u32 = 1;

/// A rational serialized as a pair of decimal integer strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRational(pub Rational);

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.0.numer().to_string(), self.0.denom().to_string()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (n, den): (String, String) = Deserialize::deserialize(d)?;
        let n = n.parse().map_err(serde::de::Error::custom)?;
        let den: num_bigint::BigInt = den.parse().map_err(serde::de::Error::custom)?;
        if num_traits::Zero::is_zero(&den) {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(ExactRational(Rational::new(n, den)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationTerm {
    pub index: Composition,
    pub coeff: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTerm {
    pub left: Composition,
    pub right: Composition,
    pub coeff: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MzvSeriesTerm {
    pub zeta: Composition,
    pub series: Vec<ExactRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationOut {
    pub source: (Composition, Composition),
    pub terms: Vec<CombinationTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub name: String,
    pub re: f64,
    pub im: f64,
    pub error_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOut {
    pub name: String,
    /// `exact-verified`, `numerically-verified` or `failed`.
    pub status: String,
    pub max_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Combination { terms: Vec<CombinationTerm> },
    Tensor { terms: Vec<TensorTerm> },
    /// Coefficients of `T^0, T^1, ...`.
    Polynomial { coeffs: Vec<Vec<CombinationTerm>> },
    Series { order: usize, coeffs: Vec<ExactRational> },
    MzvSeries { order: usize, terms: Vec<MzvSeriesTerm> },
    Complex { values: Vec<ComplexValue> },
    Relations { weight: u32, rank: usize, relations: Vec<RelationOut> },
    Table { columns: Vec<String>, rows: Vec<Vec<u64>> },
    Verification { passed: bool, checks: Vec<CheckOut> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub payload: Payload,
    pub timing_ms: f64,
}

impl OutputRecord {
    pub fn new(command: &str, params: BTreeMap<String, serde_json::Value>, payload: Payload, timing_ms: f64) -> Self {
        OutputRecord { schema_version: SCHEMA_VERSION, command: command.to_string(), params, payload, timing_ms }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: OutputRecord =
            serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("malformed record: {e}")))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!("unsupported schema version {}", r.schema_version)));
        }
        Ok(r)
    }
}

fn exact(x: &Rational) -> ExactRational {
    ExactRational(x.clone())
}

fn terms_of(x: &LinComb<Composition>) -> Vec<CombinationTerm> {
    x.iter().map(|(c, a)| CombinationTerm { index: c.clone(), coeff: exact(a) }).collect()
}

fn lincomb_of(terms: &[CombinationTerm]) -> LinComb<Composition> {
    terms.iter().map(|t| (t.index.clone(), t.coeff.0.clone())).collect()
}

fn series_of(coeffs: &[ExactRational]) -> Result<QSeries> {
    QSeries::from_coeffs(coeffs.iter().map(|c| c.0.clone()).collect())
}

fn wrong_kind(want: &str) -> Error {
    Error::InvalidArgument(format!("payload is not a {want}"))
}

impl Payload {
    pub fn combination(x: &LinComb<Composition>) -> Self {
        Payload::Combination { terms: terms_of(x) }
    }

    pub fn tensor(t: &TensorLinComb) -> Self {
        Payload::Tensor {
            terms: t
                .iter()
                .map(|(k, a)| TensorTerm { left: k.left.clone(), right: k.right.clone(), coeff: exact(a) })
                .collect(),
        }
    }

    pub fn polynomial(p: &RegPolynomial) -> Self {
        Payload::Polynomial { coeffs: p.coeffs().iter().map(terms_of).collect() }
    }

    pub fn series(s: &QSeries) -> Self {
        Payload::Series { order: s.order(), coeffs: s.coeffs().iter().map(exact).collect() }
    }

    pub fn mzv_series(t: &MzvQTensor) -> Self {
        Payload::MzvSeries {
            order: t.order(),
            terms: t
                .terms()
                .map(|(u, f)| MzvSeriesTerm { zeta: u.clone(), series: f.coeffs().iter().map(exact).collect() })
                .collect(),
        }
    }

    pub fn to_combination(&self) -> Result<LinComb<Composition>> {
        match self {
            Payload::Combination { terms } => Ok(lincomb_of(terms)),
            _ => Err(wrong_kind("combination")),
        }
    }

    pub fn to_tensor(&self) -> Result<TensorLinComb> {
        match self {
            Payload::Tensor { terms } => Ok(terms
                .iter()
                .map(|t| (TensorKey::new(t.left.clone(), t.right.clone()), t.coeff.0.clone()))
                .collect()),
            _ => Err(wrong_kind("tensor")),
        }
    }

    pub fn to_polynomial_coeffs(&self) -> Result<Vec<LinComb<Composition>>> {
        match self {
            Payload::Polynomial { coeffs } => Ok(coeffs.iter().map(|t| lincomb_of(t)).collect()),
            _ => Err(wrong_kind("polynomial")),
        }
    }

    pub fn to_series(&self) -> Result<QSeries> {
        match self {
            Payload::Series { coeffs, .. } => series_of(coeffs),
            _ => Err(wrong_kind("series")),
        }
    }

    pub fn to_mzv_series(&self) -> Result<MzvQTensor> {
        match self {
            Payload::MzvSeries { order, terms } => {
                let mut out = MzvQTensor::zero(*order);
                let one = Rational::from_integer(1.into());
                for t in terms {
                    out.add_term(t.zeta.clone(), &series_of(&t.series)?, &one);
                }
                Ok(out)
            }
            _ => Err(wrong_kind("mzv series")),
        }
    }
}
