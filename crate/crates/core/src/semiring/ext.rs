use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A non-negative rational or `+∞`.
///
/// Finite values are kept normalised by `BigRational`. `∞ + x = ∞`, and
/// `∞ · x = ∞` for `x ≠ 0` while `∞ · 0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(BigRational),
    Infinity,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        ExtRational::Finite(BigRational::one())
    }

    pub fn integer(n: u64) -> Self {
        ExtRational::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`. Panics on a zero denominator or a negative value.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        let r = BigRational::new(BigInt::from(numer), BigInt::from(denom));
        assert!(!r.is_negative(), "extended rationals are non-negative");
        ExtRational::Finite(r)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRational::Finite(r) if r.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ExtRational::zero();
        }
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a * b),
            _ => ExtRational::Infinity,
        }
    }

    /// Lossy conversion, for reporting only.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(r) => num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::INFINITY),
            ExtRational::Infinity => f64::INFINITY,
        }
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Infinity, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinity => f.write_str("inf"),
        }
    }
}

impl From<BigRational> for ExtRational {
    fn from(r: BigRational) -> Self {
        ExtRational::Finite(r)
    }
}

/// Parses `p/q` or an integer, with an optional sign. Decimals are rejected.
pub(crate) fn parse_signed_rational(literal: &str) -> Result<BigRational, String> {
    let text = literal.trim();
    if text.is_empty() {
        return Err("empty literal".into());
    }
    if let Some((_, denom)) = text.split_once('/') {
        if denom
            .trim()
            .trim_start_matches(['+', '-'])
            .chars()
            .all(|c| c == '0')
        {
            return Err("zero denominator".into());
        }
    }
    BigRational::from_str(text).map_err(|_| "expected p/q, an integer, or inf".to_owned())
}

pub(crate) fn parse_ext_rational(literal: &str) -> Result<ExtRational, String> {
    let text = literal.trim();
    if matches!(text, "inf" | "+inf" | "infinity") {
        return Ok(ExtRational::Infinity);
    }
    let r = parse_signed_rational(text)?;
    if r.is_negative() {
        return Err("value must be non-negative".into());
    }
    Ok(ExtRational::Finite(r))
}
