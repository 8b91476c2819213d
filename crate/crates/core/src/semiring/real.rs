use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::ext::parse_ext_rational;
use super::{CarrierMode, ExtRational, Semiring, SemiringDescriptor, ValueError};

pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Non-negative rationals extended with `+∞`, under the usual `+` and `·`.
///
/// This is the exact carrier for probabilistic and rate-weighted systems.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Real;

impl Real {
    pub const NAME: &'static str = "real";
}

impl Semiring for Real {
    type Elem = ExtRational;

    fn descriptor(&self) -> SemiringDescriptor {
        SemiringDescriptor {
            name: Self::NAME,
            carrier_mode: CarrierMode::ExactRational,
            threshold: None,
            epsilon: None,
        }
    }

    fn zero(&self) -> ExtRational {
        ExtRational::zero()
    }

    fn one(&self) -> ExtRational {
        ExtRational::one()
    }

    fn add(&self, a: &ExtRational, b: &ExtRational) -> ExtRational {
        a.add(b)
    }

    fn mul(&self, a: &ExtRational, b: &ExtRational) -> ExtRational {
        a.mul(b)
    }

    /// `1/(1-a)` below one, `∞` from one upwards.
    fn star(&self, a: &ExtRational) -> ExtRational {
        match a {
            ExtRational::Finite(r) if *r < BigRational::one() => {
                ExtRational::Finite((BigRational::one() - r).recip())
            }
            _ => ExtRational::Infinity,
        }
    }

    fn natural_leq(&self, a: &ExtRational, b: &ExtRational) -> bool {
        a <= b
    }

    fn total_cmp(&self, a: &ExtRational, b: &ExtRational) -> Ordering {
        a.cmp(b)
    }

    fn is_idempotent(&self) -> bool {
        false
    }

    fn is_zero(&self, a: &ExtRational) -> bool {
        a.is_zero()
    }

    fn parse_value(&self, literal: &str) -> Result<ExtRational, ValueError> {
        parse_ext_rational(literal).map_err(|reason| ValueError::new(literal, Self::NAME, reason))
    }

    fn format_value(&self, a: &ExtRational) -> String {
        a.to_string()
    }

    fn standard_samples(&self) -> Vec<ExtRational> {
        vec![
            ExtRational::zero(),
            ExtRational::one(),
            ExtRational::ratio(1, 2),
            ExtRational::ratio(1, 3),
            ExtRational::ratio(9, 10),
            ExtRational::integer(2),
            ExtRational::ratio(7, 5),
            ExtRational::Infinity,
        ]
    }
}

/// Non-negative `f64` with `+∞`; equality is up to an absolute tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealFloat {
    epsilon: f64,
}

impl RealFloat {
    pub const NAME: &'static str = "real-float";

    pub fn new(epsilon: f64) -> Self {
        RealFloat { epsilon }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for RealFloat {
    fn default() -> Self {
        RealFloat::new(DEFAULT_EPSILON)
    }
}

fn float_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol
}

impl Semiring for RealFloat {
    type Elem = f64;

    fn descriptor(&self) -> SemiringDescriptor {
        SemiringDescriptor {
            name: Self::NAME,
            carrier_mode: CarrierMode::Float,
            threshold: None,
            epsilon: Some(self.epsilon),
        }
    }

    fn zero(&self) -> f64 {
        0.0
    }

    fn one(&self) -> f64 {
        1.0
    }

    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    fn mul(&self, a: &f64, b: &f64) -> f64 {
        if *a == 0.0 || *b == 0.0 {
            0.0
        } else {
            a * b
        }
    }

    fn star(&self, a: &f64) -> f64 {
        if *a < 1.0 {
            1.0 / (1.0 - a)
        } else {
            f64::INFINITY
        }
    }

    fn natural_leq(&self, a: &f64, b: &f64) -> bool {
        a <= b || float_close(*a, *b, self.epsilon)
    }

    fn values_equal(&self, a: &f64, b: &f64) -> bool {
        float_close(*a, *b, self.epsilon)
    }

    fn approx_eq(&self, a: &f64, b: &f64, tol: f64) -> bool {
        float_close(*a, *b, tol)
    }

    fn total_cmp(&self, a: &f64, b: &f64) -> Ordering {
        a.total_cmp(b)
    }

    fn is_idempotent(&self) -> bool {
        false
    }

    fn is_zero(&self, a: &f64) -> bool {
        *a == 0.0
    }

    fn parse_value(&self, literal: &str) -> Result<f64, ValueError> {
        let text = literal.trim();
        let err = |reason: &str| ValueError::new(literal, Self::NAME, reason);
        let value = if text.contains('/') {
            match parse_ext_rational(text).map_err(|r| err(&r))? {
                ExtRational::Finite(r) => r.to_f64().ok_or_else(|| err("out of range"))?,
                ExtRational::Infinity => f64::INFINITY,
            }
        } else if matches!(text, "inf" | "+inf" | "infinity") {
            f64::INFINITY
        } else {
            text.parse::<f64>()
                .map_err(|_| err("expected a decimal, p/q, or inf"))?
        };
        if value.is_nan() || value < 0.0 {
            return Err(err("value must be non-negative"));
        }
        Ok(value)
    }

    fn format_value(&self, a: &f64) -> String {
        if a.is_infinite() {
            "inf".to_owned()
        } else {
            format!("{a}")
        }
    }

    fn standard_samples(&self) -> Vec<f64> {
        vec![0.0, 1.0, 0.5, 0.25, 0.9, 2.0, 3.5, f64::INFINITY]
    }
}
