use std::cmp::Ordering;

use super::{CarrierMode, Semiring, SemiringDescriptor, ValueError};

/// Truncated tropical semiring `({0..k}, min, k, min{a+b, k}, 0)`.
///
/// Costs saturate at the threshold `k`, which doubles as the zero: anything
/// that reaches `k` is indistinguishable from "no transition".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    k: u64,
}

impl Truncation {
    pub const NAME: &'static str = "truncation";

    pub fn new(k: u64) -> Self {
        assert!(k > 0, "truncation threshold must be positive");
        Truncation { k }
    }

    pub fn threshold(&self) -> u64 {
        self.k
    }
}

impl Semiring for Truncation {
    type Elem = u64;

    fn descriptor(&self) -> SemiringDescriptor {
        SemiringDescriptor {
            name: Self::NAME,
            carrier_mode: CarrierMode::BoundedInteger,
            threshold: Some(self.k),
            epsilon: None,
        }
    }

    fn zero(&self) -> u64 {
        self.k
    }

    fn one(&self) -> u64 {
        0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        *a.min(b)
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a.saturating_add(*b).min(self.k)
    }

    fn star(&self, _a: &u64) -> u64 {
        0
    }

    fn natural_leq(&self, a: &u64, b: &u64) -> bool {
        b <= a
    }

    fn total_cmp(&self, a: &u64, b: &u64) -> Ordering {
        a.cmp(b)
    }

    fn is_idempotent(&self) -> bool {
        true
    }

    fn parse_value(&self, literal: &str) -> Result<u64, ValueError> {
        let text = literal.trim();
        let v: u64 = text
            .parse()
            .map_err(|_| ValueError::new(literal, Self::NAME, "expected a non-negative integer"))?;
        if v > self.k {
            return Err(ValueError::new(
                literal,
                Self::NAME,
                format!("exceeds the threshold k = {}", self.k),
            ));
        }
        Ok(v)
    }

    fn format_value(&self, a: &u64) -> String {
        a.to_string()
    }

    fn standard_samples(&self) -> Vec<u64> {
        let mut v = vec![0, 1, self.k / 2, self.k.saturating_sub(1), self.k];
        v.sort_unstable();
        v.dedup();
        v
    }
}
