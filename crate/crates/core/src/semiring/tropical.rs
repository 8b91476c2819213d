use std::cmp::Ordering;

use super::ext::parse_ext_rational;
use super::{CarrierMode, ExtRational, Semiring, SemiringDescriptor, ValueError};

/// Min-plus over non-negative rationals and `+∞`.
///
/// Restricting to non-negative values keeps every cycle non-improving, so
/// `star(a) = 0` for every element.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tropical;

impl Tropical {
    pub const NAME: &'static str = "tropical";
}

impl Semiring for Tropical {
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
        ExtRational::Infinity
    }

    fn one(&self) -> ExtRational {
        ExtRational::zero()
    }

    fn add(&self, a: &ExtRational, b: &ExtRational) -> ExtRational {
        a.min(b).clone()
    }

    fn mul(&self, a: &ExtRational, b: &ExtRational) -> ExtRational {
        a.add(b)
    }

    fn star(&self, _a: &ExtRational) -> ExtRational {
        ExtRational::zero()
    }

    // min(a, c) = b has a witness iff b ≤ a.
    fn natural_leq(&self, a: &ExtRational, b: &ExtRational) -> bool {
        b <= a
    }

    fn total_cmp(&self, a: &ExtRational, b: &ExtRational) -> Ordering {
        a.cmp(b)
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn is_zero(&self, a: &ExtRational) -> bool {
        a.is_infinite()
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
            ExtRational::ratio(1, 2),
            ExtRational::one(),
            ExtRational::integer(3),
            ExtRational::integer(5),
            ExtRational::ratio(22, 7),
            ExtRational::Infinity,
        ]
    }
}
