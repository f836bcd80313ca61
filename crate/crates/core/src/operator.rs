use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::format::round_sig;
use crate::matrix::CMatrix;

/// How an [`OperatorMatrix`] was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    TurskiQuadrature,
    TurskiAnalytic,
    LogSeries,
    PeggBarnett,
    ExpPhasePlus,
    ExpPhaseMinus,
    Moment(u32),
    Elementary,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::TurskiQuadrature => f.write_str("turski-quadrature"),
            Method::TurskiAnalytic => f.write_str("turski-analytic"),
            Method::LogSeries => f.write_str("log-series"),
            Method::PeggBarnett => f.write_str("pegg-barnett"),
            Method::ExpPhasePlus => f.write_str("exp-phase-plus"),
            Method::ExpPhaseMinus => f.write_str("exp-phase-minus"),
            Method::Moment(k) => write!(f, "moment-{k}"),
            Method::Elementary => f.write_str("elementary"),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetaValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Serialize for MetaValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MetaValue::Int(v) => s.serialize_i64(*v),
            MetaValue::Real(v) => s.serialize_f64(round_sig(*v)),
            MetaValue::Text(v) => s.serialize_str(v),
        }
    }
}

impl From<usize> for MetaValue {
    fn from(v: usize) -> Self {
        MetaValue::Int(v as i64)
    }
}

impl From<i64> for MetaValue {
    fn from(v: i64) -> Self {
        MetaValue::Int(v)
    }
}

impl From<f64> for MetaValue {
    fn from(v: f64) -> Self {
        MetaValue::Real(v)
    }
}

impl From<&str> for MetaValue {
    fn from(v: &str) -> Self {
        MetaValue::Text(v.to_owned())
    }
}

impl From<String> for MetaValue {
    fn from(v: String) -> Self {
        MetaValue::Text(v)
    }
}

/// Construction parameters and measured defects, kept in key order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Meta(BTreeMap<String, MetaValue>);

impl Meta {
    pub fn new() -> Self {
        Meta::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<MetaValue>) {
        self.0.insert(key.to_owned(), value.into());
    }

    pub fn with(mut self, key: &str, value: impl Into<MetaValue>) -> Self {
        self.set(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&MetaValue> {
        self.0.get(key)
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.0.get(key)? {
            MetaValue::Real(v) => Some(*v),
            MetaValue::Int(v) => Some(*v as f64),
            MetaValue::Text(_) => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &MetaValue)> {
        self.0.iter()
    }
}

/// A dense operator on a truncated Fock space together with how it was made.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub entries: CMatrix,
    pub method: Method,
    pub meta: Meta,
}

impl OperatorMatrix {
    pub fn new(entries: CMatrix, method: Method, meta: Meta) -> Self {
        OperatorMatrix {
            entries,
            method,
            meta,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// `⟨m|Â|n⟩`.
    pub fn element(&self, m: usize, n: usize) -> num_complex::Complex64 {
        self.entries[(m, n)]
    }
}
