use std::cmp::Ordering;

use super::{CarrierMode, Semiring, SemiringDescriptor, ValueError};

/// `({false, true}, ∨, false, ∧, true)`: plain non-deterministic systems.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Boolean;

impl Boolean {
    pub const NAME: &'static str = "boolean";
}

impl Semiring for Boolean {
    type Elem = bool;

    fn descriptor(&self) -> SemiringDescriptor {
        SemiringDescriptor {
            name: Self::NAME,
            carrier_mode: CarrierMode::Boolean,
            threshold: None,
            epsilon: None,
        }
    }

    fn zero(&self) -> bool {
        false
    }

    fn one(&self) -> bool {
        true
    }

    fn add(&self, a: &bool, b: &bool) -> bool {
        *a || *b
    }

    fn mul(&self, a: &bool, b: &bool) -> bool {
        *a && *b
    }

    fn star(&self, _a: &bool) -> bool {
        true
    }

    fn natural_leq(&self, a: &bool, b: &bool) -> bool {
        !*a || *b
    }

    fn total_cmp(&self, a: &bool, b: &bool) -> Ordering {
        a.cmp(b)
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn parse_value(&self, literal: &str) -> Result<bool, ValueError> {
        match literal.trim() {
            "true" | "1" => Ok(true),
            "false" | "0" => Ok(false),
            _ => Err(ValueError::new(
                literal,
                Self::NAME,
                "expected true, false, 1 or 0",
            )),
        }
    }

    fn format_value(&self, a: &bool) -> String {
        a.to_string()
    }

    fn standard_samples(&self) -> Vec<bool> {
        vec![false, true]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operations() {
        let s = Boolean;
        assert!(s.add(&false, &true));
        assert!(!s.mul(&false, &true));
        assert!(s.star(&false));
        assert!(s.star(&true));
        assert!(s.natural_leq(&false, &true));
        assert!(!s.natural_leq(&true, &false));
        assert!(s.sum(&[false, false, true]));
    }

    #[test]
    fn literals() {
        assert_eq!(Boolean.parse_value("1"), Ok(true));
        assert_eq!(Boolean.parse_value("false"), Ok(false));
        assert!(Boolean.parse_value("yes").is_err());
    }
}
