//! JSON conventions shared by the CLI and the C interface: floats rounded to 12
//! significant digits, rationals as `"p/q"` strings, integers as numbers only
//! inside the 53-bit safe range.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{Number, Value};

const SAFE: i64 = 1 << 53;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{}", round_sig(x))
    }
}

/// Non-finite values become `null`.
pub fn float(x: f64) -> Value {
    Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| float(*x)).collect())
}

pub fn bigint(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() < SAFE => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn bigints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(bigint).collect())
}

pub fn rational(x: &BigRational) -> Value {
    Value::String(if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    })
}

pub fn rationals(xs: &[BigRational]) -> Value {
    Value::Array(xs.iter().map(rational).collect())
}

/// Integer from a JSON number without fractional part or an integer string.
pub fn parse_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Rational from an integer number or a `"p"` / `"p/q"` string.
pub fn parse_rat(v: &Value) -> Option<BigRational> {
    match v {
        Value::String(s) => crate::lattice::parse_rational(s).ok(),
        other => parse_int(other).map(BigRational::from_integer),
    }
}

/// Serializes with sorted keys and a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
