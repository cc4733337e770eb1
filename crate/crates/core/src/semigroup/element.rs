use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Flat coordinate vector of an element: one coordinate for a numerical
/// model, `d` for an affine model, and the concatenation of the component
/// coordinates for a direct sum.
pub type Point = Vec<u64>;

/// A canonical member of a semigroup model.
///
/// `Sum` holds the non-zero components of a direct-sum element, indexed by
/// component and strictly increasing in the index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Num(u64),
    Vec(Vec<u64>),
    Sum(Vec<(usize, Element)>),
}

impl Element {
    pub fn is_zero(&self) -> bool {
        match self {
            Element::Num(v) => *v == 0,
            Element::Vec(v) => v.iter().all(|c| *c == 0),
            Element::Sum(parts) => parts.iter().all(|(_, e)| e.is_zero()),
        }
    }

    /// Parses the JSON forms accepted on input: an integer (or base-10
    /// string), an array of integers, or `{"sum": [[index, element], ...]}`.
    pub fn from_json(value: &Value) -> Result<Element> {
        match value {
            Value::Number(_) | Value::String(_) => Ok(Element::Num(parse_u64(value)?)),
            Value::Array(items) => items
                .iter()
                .map(parse_u64)
                .collect::<Result<Vec<_>>>()
                .map(Element::Vec),
            Value::Object(map) => {
                let parts = map
                    .get("sum")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Shape("expected {\"sum\": [...]}".into()))?;
                let mut out = Vec::with_capacity(parts.len());
                for part in parts {
                    let pair = part
                        .as_array()
                        .filter(|p| p.len() == 2)
                        .ok_or_else(|| Error::Shape("sum entries are [index, element]".into()))?;
                    let index = parse_u64(&pair[0])? as usize;
                    out.push((index, Element::from_json(&pair[1])?));
                }
                Ok(Element::Sum(out))
            }
            other => Err(Error::Shape(format!("not an element: {other}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Element::Num(v) => json!(v),
            Element::Vec(v) => json!(v),
            Element::Sum(parts) => {
                let parts: Vec<Value> = parts
                    .iter()
                    .map(|(i, e)| Value::Array(vec![json!(i), e.to_json()]))
                    .collect();
                json!({ "sum": parts })
            }
        }
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Element::from_json(&value).map_err(serde::de::Error::custom)
    }
}

/// Reads a non-negative integer given either as a JSON number or as a
/// base-10 string.
pub fn parse_u64(value: &Value) -> Result<u64> {
    match value {
        Value::Number(n) => {
            if let Some(v) = n.as_u64() {
                Ok(v)
            } else if n.as_i64().is_some_and(|v| v < 0) || n.as_f64().is_some_and(|v| v < 0.0) {
                Err(Error::NegativeInput(n.to_string()))
            } else if n.as_f64().is_some_and(|v| v.fract() == 0.0) {
                Err(Error::ValueOutOfBound {
                    value: n.to_string(),
                    bound: u64::MAX,
                })
            } else {
                Err(Error::Shape(format!("not an integer: {n}")))
            }
        }
        Value::String(s) => parse_u64_str(s),
        other => Err(Error::Shape(format!("not an integer: {other}"))),
    }
}

pub fn parse_u64_str(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::NegativeInput(s.to_string()));
        }
    }
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Shape(format!("not a base-10 integer: {s:?}")));
    }
    s.parse::<u64>().map_err(|_| Error::ValueOutOfBound {
        value: s.to_string(),
        bound: u64::MAX,
    })
}

pub(crate) fn total(p: &[u64]) -> u128 {
    p.iter().map(|&c| c as u128).sum()
}

pub(crate) fn add_points(a: &[u64], b: &[u64]) -> Result<Point> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow))
        .collect()
}

pub(crate) fn scale_point(a: &[u64], k: u64) -> Result<Point> {
    a.iter()
        .map(|x| x.checked_mul(k).ok_or(Error::Overflow))
        .collect()
}

/// `a - b` when it stays non-negative in every coordinate.
pub(crate) fn sub_points(a: &[u64], b: &[u64]) -> Option<Point> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

pub(crate) fn coordinatewise_leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn is_zero_point(a: &[u64]) -> bool {
    a.iter().all(|c| *c == 0)
}
