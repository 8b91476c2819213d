use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ext::parse_signed_rational;
use super::{CarrierMode, Semiring, SemiringDescriptor, ValueError};

/// `([0,1], max, 0, ·, 1)` over exact rationals: most-likely-path weights.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MaxTimes;

impl MaxTimes {
    pub const NAME: &'static str = "maxtimes";
}

impl Semiring for MaxTimes {
    type Elem = BigRational;

    fn descriptor(&self) -> SemiringDescriptor {
        SemiringDescriptor {
            name: Self::NAME,
            carrier_mode: CarrierMode::ExactRational,
            threshold: None,
            epsilon: None,
        }
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a.max(b).clone()
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    // The empty product dominates every aⁿ with a ≤ 1.
    fn star(&self, _a: &BigRational) -> BigRational {
        BigRational::one()
    }

    fn natural_leq(&self, a: &BigRational, b: &BigRational) -> bool {
        a <= b
    }

    fn total_cmp(&self, a: &BigRational, b: &BigRational) -> Ordering {
        a.cmp(b)
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn parse_value(&self, literal: &str) -> Result<BigRational, ValueError> {
        let r = parse_signed_rational(literal)
            .map_err(|reason| ValueError::new(literal, Self::NAME, reason))?;
        if r.is_negative() || r > BigRational::one() {
            return Err(ValueError::new(
                literal,
                Self::NAME,
                "value must lie in [0, 1]",
            ));
        }
        Ok(r)
    }

    fn format_value(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn standard_samples(&self) -> Vec<BigRational> {
        [(0, 1), (1, 10), (1, 3), (1, 2), (9, 10), (1, 1)]
            .iter()
            .map(|&(p, q)| BigRational::new(p.into(), q.into()))
            .collect()
    }
}
