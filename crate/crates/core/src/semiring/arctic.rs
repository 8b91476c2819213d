use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::ext::parse_signed_rational;
use super::{CarrierMode, Semiring, SemiringDescriptor, ValueError};

/// Element of `ℝ ∪ {−∞, +∞}`; variant order gives the usual total order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcticValue {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

impl ArcticValue {
    pub fn integer(n: i64) -> Self {
        ArcticValue::Finite(BigRational::from_integer(n.into()))
    }
}

impl fmt::Display for ArcticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcticValue::NegInfinity => f.write_str("-inf"),
            ArcticValue::Finite(r) => write!(f, "{r}"),
            ArcticValue::PosInfinity => f.write_str("inf"),
        }
    }
}

/// Max-plus over the extended rationals: `(ℝ̄, max, −∞, +, 0)`.
///
/// `−∞` annihilates, including against `+∞`. `star(a)` is `0` when `a ≤ 0`
/// and `+∞` otherwise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Arctic;

impl Arctic {
    pub const NAME: &'static str = "arctic";
}

impl Semiring for Arctic {
    type Elem = ArcticValue;

    fn descriptor(&self) -> SemiringDescriptor {
        SemiringDescriptor {
            name: Self::NAME,
            carrier_mode: CarrierMode::ExactRational,
            threshold: None,
            epsilon: None,
        }
    }

    fn zero(&self) -> ArcticValue {
        ArcticValue::NegInfinity
    }

    fn one(&self) -> ArcticValue {
        ArcticValue::Finite(BigRational::zero())
    }

    fn add(&self, a: &ArcticValue, b: &ArcticValue) -> ArcticValue {
        a.max(b).clone()
    }

    fn mul(&self, a: &ArcticValue, b: &ArcticValue) -> ArcticValue {
        use ArcticValue::*;
        match (a, b) {
            (NegInfinity, _) | (_, NegInfinity) => NegInfinity,
            (PosInfinity, _) | (_, PosInfinity) => PosInfinity,
            (Finite(x), Finite(y)) => Finite(x + y),
        }
    }

    fn star(&self, a: &ArcticValue) -> ArcticValue {
        match a {
            ArcticValue::NegInfinity => self.one(),
            ArcticValue::Finite(r) if !r.is_positive() => self.one(),
            _ => ArcticValue::PosInfinity,
        }
    }

    fn natural_leq(&self, a: &ArcticValue, b: &ArcticValue) -> bool {
        a <= b
    }

    fn total_cmp(&self, a: &ArcticValue, b: &ArcticValue) -> Ordering {
        a.cmp(b)
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn parse_value(&self, literal: &str) -> Result<ArcticValue, ValueError> {
        match literal.trim() {
            "-inf" | "-infinity" => Ok(ArcticValue::NegInfinity),
            "inf" | "+inf" | "infinity" => Ok(ArcticValue::PosInfinity),
            text => parse_signed_rational(text)
                .map(ArcticValue::Finite)
                .map_err(|reason| ValueError::new(literal, Self::NAME, reason)),
        }
    }

    fn format_value(&self, a: &ArcticValue) -> String {
        a.to_string()
    }

    fn standard_samples(&self) -> Vec<ArcticValue> {
        vec![
            ArcticValue::NegInfinity,
            ArcticValue::integer(-3),
            ArcticValue::Finite(BigRational::new((-1).into(), 2.into())),
            ArcticValue::integer(0),
            ArcticValue::integer(2),
            ArcticValue::Finite(BigRational::new(7.into(), 3.into())),
            ArcticValue::PosInfinity,
        ]
    }
}
