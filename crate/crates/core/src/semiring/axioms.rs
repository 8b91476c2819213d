//! Exhaustive axiom checking over a finite sample set.

use serde::Serialize;

use super::{Semiring, SemiringDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    AddAssociative,
    AddCommutative,
    AddIdentity,
    MulAssociative,
    MulIdentity,
    LeftDistributive,
    RightDistributive,
    Annihilation,
    StarFixpoint,
    StarLeast,
    ZeroBottom,
    OrderReflexive,
    OrderTransitive,
    AddIdempotent,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomOutcome {
    pub axiom: Axiom,
    pub checked: usize,
    pub failures: usize,
    /// Rendering of the first failing instance, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub semiring: SemiringDescriptor,
    pub samples: usize,
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(AxiomOutcome::passed)
    }

    pub fn failed(&self) -> Vec<Axiom> {
        self.outcomes
            .iter()
            .filter(|o| !o.passed())
            .map(|o| o.axiom)
            .collect()
    }

    pub fn outcome(&self, axiom: Axiom) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| o.axiom == axiom)
    }
}

struct Tally<'s, S: Semiring> {
    s: &'s S,
    outcome: AxiomOutcome,
}

impl<'s, S: Semiring> Tally<'s, S> {
    fn new(s: &'s S, axiom: Axiom) -> Self {
        Tally {
            s,
            outcome: AxiomOutcome {
                axiom,
                checked: 0,
                failures: 0,
                counterexample: None,
            },
        }
    }

    fn eq(&mut self, lhs: &S::Elem, rhs: &S::Elem, witness: impl FnOnce() -> String) {
        self.holds(self.s.values_equal(lhs, rhs), || {
            format!("{}: {:?} vs {:?}", witness(), lhs, rhs)
        });
    }

    fn holds(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.outcome.checked += 1;
        if !ok {
            self.outcome.failures += 1;
            if self.outcome.counterexample.is_none() {
                self.outcome.counterexample = Some(witness());
            }
        }
    }
}

/// Checks every semiring law over all pairs and triples drawn from `samples`.
///
/// `AddIdempotent` is only checked for instances that declare themselves
/// idempotent. Star leastness is checked against every sample that is itself
/// a solution of `s = one + a·s`.
///
/// Panics if `samples` is empty.
pub fn check_axioms<S: Semiring>(s: &S, samples: &[S::Elem]) -> AxiomReport {
    assert!(!samples.is_empty(), "axiom check needs at least one sample");
    let f = |v: &S::Elem| s.format_value(v);
    let zero = s.zero();
    let one = s.one();
    let mut outcomes = Vec::new();

    let mut add_assoc = Tally::new(s, Axiom::AddAssociative);
    let mut mul_assoc = Tally::new(s, Axiom::MulAssociative);
    let mut left_dist = Tally::new(s, Axiom::LeftDistributive);
    let mut right_dist = Tally::new(s, Axiom::RightDistributive);
    let mut transitive = Tally::new(s, Axiom::OrderTransitive);
    for a in samples {
        for b in samples {
            for c in samples {
                let w = || format!("a={}, b={}, c={}", f(a), f(b), f(c));
                add_assoc.eq(&s.add(&s.add(a, b), c), &s.add(a, &s.add(b, c)), w);
                mul_assoc.eq(&s.mul(&s.mul(a, b), c), &s.mul(a, &s.mul(b, c)), w);
                left_dist.eq(
                    &s.mul(a, &s.add(b, c)),
                    &s.add(&s.mul(a, b), &s.mul(a, c)),
                    w,
                );
                right_dist.eq(
                    &s.mul(&s.add(a, b), c),
                    &s.add(&s.mul(a, c), &s.mul(b, c)),
                    w,
                );
                if s.natural_leq(a, b) && s.natural_leq(b, c) {
                    transitive.holds(s.natural_leq(a, c), w);
                }
            }
        }
    }

    let mut add_comm = Tally::new(s, Axiom::AddCommutative);
    for a in samples {
        for b in samples {
            let w = || format!("a={}, b={}", f(a), f(b));
            add_comm.eq(&s.add(a, b), &s.add(b, a), w);
        }
    }

    let mut add_id = Tally::new(s, Axiom::AddIdentity);
    let mut mul_id = Tally::new(s, Axiom::MulIdentity);
    let mut annihilation = Tally::new(s, Axiom::Annihilation);
    let mut star_fix = Tally::new(s, Axiom::StarFixpoint);
    let mut star_least = Tally::new(s, Axiom::StarLeast);
    let mut bottom = Tally::new(s, Axiom::ZeroBottom);
    let mut reflexive = Tally::new(s, Axiom::OrderReflexive);
    let mut idempotent = Tally::new(s, Axiom::AddIdempotent);
    for a in samples {
        let w = || format!("a={}", f(a));
        add_id.eq(&s.add(a, &zero), a, w);
        add_id.eq(&s.add(&zero, a), a, w);
        mul_id.eq(&s.mul(a, &one), a, w);
        mul_id.eq(&s.mul(&one, a), a, w);
        annihilation.eq(&s.mul(a, &zero), &zero, w);
        annihilation.eq(&s.mul(&zero, a), &zero, w);
        let star = s.star(a);
        star_fix.eq(&star, &s.add(&one, &s.mul(a, &star)), w);
        for candidate in samples {
            if s.values_equal(candidate, &s.add(&one, &s.mul(a, candidate))) {
                star_least.holds(s.natural_leq(&star, candidate), || {
                    format!("a={}, other solution {}", f(a), f(candidate))
                });
            }
        }
        bottom.holds(s.natural_leq(&zero, a), w);
        reflexive.holds(s.natural_leq(a, a), w);
        if s.is_idempotent() {
            idempotent.eq(&s.add(a, a), a, w);
        }
    }

    outcomes.extend([
        add_assoc.outcome,
        add_comm.outcome,
        add_id.outcome,
        mul_assoc.outcome,
        mul_id.outcome,
        left_dist.outcome,
        right_dist.outcome,
        annihilation.outcome,
        star_fix.outcome,
        star_least.outcome,
        bottom.outcome,
        reflexive.outcome,
        transitive.outcome,
    ]);
    if s.is_idempotent() {
        outcomes.push(idempotent.outcome);
    }

    AxiomReport {
        semiring: s.descriptor(),
        samples: samples.len(),
        outcomes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{Boolean, ExtRational, Real};

    #[test]
    fn boolean_passes_on_its_whole_carrier() {
        let report = check_axioms(&Boolean, &[false, true]);
        assert!(report.all_pass(), "{report:#?}");
        assert!(report.outcome(Axiom::AddIdempotent).is_some());
    }

    #[test]
    fn extended_rationals_pass_on_units_and_infinity() {
        let samples = [
            ExtRational::zero(),
            ExtRational::ratio(1, 2),
            ExtRational::one(),
            ExtRational::Infinity,
        ];
        let report = check_axioms(&Real, &samples);
        assert!(report.all_pass(), "{report:#?}");
        assert!(report.outcome(Axiom::AddIdempotent).is_none());
    }
}
