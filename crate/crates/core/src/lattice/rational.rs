use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {0:?} as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `"p"` or `"p/q"` with `q ≠ 0`. Decimal points are rejected.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational vector, always held in reduced form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![BigRational::zero(); n])
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(v: &[T]) -> Self {
        Self(
            v.iter()
                .map(|x| BigRational::from_integer(x.clone().into()))
                .collect(),
        )
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        Self(v.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self, ParseRationalError> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }

    pub fn dot(&self, other: &[BigRational]) -> BigRational {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn dot_int(&self, other: &[BigInt]) -> BigRational {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum()
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Entries as `"p/q"` strings (or `"p"` for integers).
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|q| q.to_string()).collect()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl From<Vec<BigRational>> for RationalVector {
    fn from(v: Vec<BigRational>) -> Self {
        Self(v)
    }
}

/// Solves the square system `a · x = b` over the rationals; `None` if singular.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "non-square system");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let v = &m[c][j] * &f;
                m[i][j] -= v;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}
