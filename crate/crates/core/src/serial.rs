//! JSON encodings shared by the file formats.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise; either form is accepted on input. Rationals
//! are always strings, `"p/q"` in lowest terms or `"p"` when integral.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::matrix::{IntMatrix, RatMatrix};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Text(String),
}

fn int_to_repr(x: &BigInt) -> IntRepr {
    match x.to_i64() {
        Some(v) => IntRepr::Small(v),
        None => IntRepr::Text(x.to_string()),
    }
}

fn repr_to_int<E: de::Error>(r: IntRepr) -> Result<BigInt, E> {
    match r {
        IntRepr::Small(v) => Ok(BigInt::from(v)),
        IntRepr::Text(s) => BigInt::from_str(s.trim())
            .map_err(|_| E::custom(format!("invalid integer {s:?}"))),
    }
}

pub fn rat_to_string(x: &BigRational) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| format!("invalid fraction {s:?}"))?;
    let d = BigInt::from_str(d).map_err(|_| format!("invalid fraction {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

/// serde adapter for `IntMatrix` as an array of integer rows.
pub mod int_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<IntRepr>> = m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(int_to_repr).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let rows = Vec::<Vec<IntRepr>>::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(repr_to_int).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        IntMatrix::from_rows(&rows).map_err(de::Error::custom)
    }
}

/// serde adapter for `RatMatrix` as an array of rows of fraction strings.
pub mod rat_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &RatMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(rat_to_string).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatMatrix, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(de::Error::custom)?;
        RatMatrix::from_rows(&rows).map_err(de::Error::custom)
    }
}

/// serde adapter for `Vec<Vec<BigInt>>`, rows possibly of differing length.
pub mod int_rows {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<IntRepr>> = rows.iter().map(|r| r.iter().map(int_to_repr).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<IntRepr>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(repr_to_int).collect())
            .collect()
    }
}

/// serde adapter for a single `BigInt`.
pub mod big_int {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        int_to_repr(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        repr_to_int(IntRepr::deserialize(d)?)
    }
}

pub fn int_matrix_json(m: &IntMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        m.to_rows()
            .iter()
            .map(|r| serde_json::to_value(r.iter().map(int_to_repr).collect::<Vec<_>>()).unwrap())
            .collect(),
    )
}

pub fn rat_matrix_json(m: &RatMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        m.to_rows()
            .iter()
            .map(|r| serde_json::Value::Array(
                r.iter().map(|x| serde_json::Value::String(rat_to_string(x))).collect(),
            ))
            .collect(),
    )
}

pub fn int_json(x: &BigInt) -> serde_json::Value {
    serde_json::to_value(int_to_repr(x)).expect("integer serializes")
}
