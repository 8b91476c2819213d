//! The algebra every computation in this crate is generic over.
//!
//! A [`Semiring`] instance carries its parameters (a truncation threshold, a
//! float tolerance) and hands out elements of its carrier. All instances
//! shipped here are commutative, positively ordered and closed under a
//! Kleene [`Semiring::star`], which is what the linear-system solver needs to
//! produce least solutions in closed form.
//!
//! Instances are selected at run time through [`SemiringKind`] and the
//! [`dispatch_semiring!`](crate::dispatch_semiring) macro, which
//! monomorphises the calling code for the chosen carrier.

mod arctic;
mod axioms;
mod boolean;
mod ext;
mod maxtimes;
mod real;
mod tropical;
mod truncation;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use arctic::{Arctic, ArcticValue};
pub use axioms::{check_axioms, Axiom, AxiomOutcome, AxiomReport};
pub use boolean::Boolean;
pub use ext::ExtRational;
pub use maxtimes::MaxTimes;
pub use real::{Real, RealFloat, DEFAULT_EPSILON};
pub use tropical::Tropical;
pub use truncation::Truncation;

/// How elements of a carrier are represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarrierMode {
    ExactRational,
    Float,
    Boolean,
    BoundedInteger,
}

/// Name, representation and parameters of a semiring instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiringDescriptor {
    pub name: &'static str,
    pub carrier_mode: CarrierMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl SemiringDescriptor {
    pub fn is_real(&self) -> bool {
        self.name == Real::NAME || self.name == RealFloat::NAME
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid weight literal {literal:?} for the {semiring} semiring: {reason}")]
pub struct ValueError {
    pub literal: String,
    pub semiring: &'static str,
    pub reason: String,
}

impl ValueError {
    pub(crate) fn new(literal: &str, semiring: &'static str, reason: impl Into<String>) -> Self {
        ValueError {
            literal: literal.to_owned(),
            semiring,
            reason: reason.into(),
        }
    }
}

/// A commutative, positively ordered semiring with a closure operation.
///
/// Laws every implementation upholds (checked by [`check_axioms`]):
/// `(add, zero)` is a commutative monoid, `(mul, one)` is a monoid, `mul`
/// distributes over `add` and `zero` annihilates; `star(a) = one + a·star(a)`
/// and `star(a)` is the least such value; `zero` is the bottom of
/// [`natural_leq`](Semiring::natural_leq).
pub trait Semiring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn descriptor(&self) -> SemiringDescriptor;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// `Σₙ aⁿ`, the least solution of `s = one + a·s`.
    fn star(&self, a: &Self::Elem) -> Self::Elem;

    /// The natural preorder: `a ⊴ b` iff `a + c = b` for some `c`.
    fn natural_leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// Weight comparison used when splitting blocks. Exact unless the carrier
    /// is a float, in which case the descriptor's tolerance applies.
    fn values_equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    /// Equality up to an explicit tolerance. Exact carriers ignore `tol`.
    fn approx_eq(&self, a: &Self::Elem, b: &Self::Elem, tol: f64) -> bool {
        let _ = tol;
        self.values_equal(a, b)
    }

    /// A total order on the carrier, used for sort-based block splitting.
    /// It need not agree with the natural preorder.
    fn total_cmp(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    fn is_idempotent(&self) -> bool;

    /// Stored weights equal to zero mean "no transition".
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn parse_value(&self, literal: &str) -> Result<Self::Elem, ValueError>;
    fn format_value(&self, a: &Self::Elem) -> String;

    /// Structured sample set: units, bounds, and a few interior points.
    fn standard_samples(&self) -> Vec<Self::Elem>;

    /// Fold of `add`; the empty sum is `zero`.
    fn sum<'a, I>(&self, values: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        values
            .into_iter()
            .fold(self.zero(), |acc, v| self.add(&acc, v))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectError {
    #[error("unknown semiring {0:?} (expected boolean, real, real-float, tropical, arctic, truncation or maxtimes)")]
    UnknownName(String),
    #[error("the truncation semiring needs a positive threshold k")]
    MissingThreshold,
    #[error("invalid epsilon {0}: must be finite and non-negative")]
    BadEpsilon(f64),
    #[error("parameter {param} does not apply to the {semiring} semiring")]
    UnusedParameter {
        param: &'static str,
        semiring: &'static str,
    },
}

/// Run-time selection of a shipped instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SemiringKind {
    Boolean,
    Real,
    RealFloat { epsilon: f64 },
    Tropical,
    Arctic,
    Truncation { k: u64 },
    MaxTimes,
}

impl SemiringKind {
    pub fn from_name(
        name: &str,
        k: Option<u64>,
        epsilon: Option<f64>,
    ) -> Result<Self, SelectError> {
        let kind = match name.trim() {
            "boolean" | "bool" => SemiringKind::Boolean,
            "real" => SemiringKind::Real,
            "real-float" => {
                let epsilon = epsilon.unwrap_or(DEFAULT_EPSILON);
                if !epsilon.is_finite() || epsilon < 0.0 {
                    return Err(SelectError::BadEpsilon(epsilon));
                }
                SemiringKind::RealFloat { epsilon }
            }
            "tropical" => SemiringKind::Tropical,
            "arctic" => SemiringKind::Arctic,
            "truncation" => match k {
                Some(k) if k > 0 => SemiringKind::Truncation { k },
                _ => return Err(SelectError::MissingThreshold),
            },
            "maxtimes" | "max-times" => SemiringKind::MaxTimes,
            other => return Err(SelectError::UnknownName(other.to_owned())),
        };
        if k.is_some() && !matches!(kind, SemiringKind::Truncation { .. }) {
            return Err(SelectError::UnusedParameter {
                param: "k",
                semiring: kind.name(),
            });
        }
        if epsilon.is_some() && !matches!(kind, SemiringKind::RealFloat { .. }) {
            return Err(SelectError::UnusedParameter {
                param: "epsilon",
                semiring: kind.name(),
            });
        }
        Ok(kind)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SemiringKind::Boolean => Boolean::NAME,
            SemiringKind::Real => Real::NAME,
            SemiringKind::RealFloat { .. } => RealFloat::NAME,
            SemiringKind::Tropical => Tropical::NAME,
            SemiringKind::Arctic => Arctic::NAME,
            SemiringKind::Truncation { .. } => Truncation::NAME,
            SemiringKind::MaxTimes => MaxTimes::NAME,
        }
    }
}

/// Binds `$s` to the concrete instance selected by a [`SemiringKind`] and
/// evaluates `$body` once per arm, so `$body` is compiled for every carrier.
#[macro_export]
macro_rules! dispatch_semiring {
    ($kind:expr, $s:ident => $body:expr) => {{
        use $crate::semiring as __sr;
        match $kind {
            __sr::SemiringKind::Boolean => {
                let $s = __sr::Boolean;
                $body
            }
            __sr::SemiringKind::Real => {
                let $s = __sr::Real;
                $body
            }
            __sr::SemiringKind::RealFloat { epsilon } => {
                let $s = __sr::RealFloat::new(epsilon);
                $body
            }
            __sr::SemiringKind::Tropical => {
                let $s = __sr::Tropical;
                $body
            }
            __sr::SemiringKind::Arctic => {
                let $s = __sr::Arctic;
                $body
            }
            __sr::SemiringKind::Truncation { k } => {
                let $s = __sr::Truncation::new(k);
                $body
            }
            __sr::SemiringKind::MaxTimes => {
                let $s = __sr::MaxTimes;
                $body
            }
        }
    }};
}
