//! Semiring-parametric equivalence checking for weighted labelled transition
//! systems.
//!
//! The crate computes strong, weak and delay weighted bisimulation by
//! partition refinement. Multi-step ("saturated") weights are the least
//! solutions of linear systems over the active semiring, solved exactly by
//! star elimination. The [`oracle`] module holds brute-force reference
//! semantics used to cross-check the engine.
//!
//! ```
//! use wbisim_core::semiring::Boolean;
//! use wbisim_core::wlts::Wlts;
//! use wbisim_core::bisim::{bisimilar, Equivalence};
//!
//! // a.τ.b versus a.b
//! let lts = Wlts::from_triples(
//!     Boolean,
//!     7,
//!     &[(0, "a", 1, true), (1, "tau", 2, true), (2, "b", 3, true),
//!       (4, "a", 5, true), (5, "b", 6, true)],
//! )
//! .unwrap();
//! let (p, q) = (lts.state(0), lts.state(4));
//! assert!(bisimilar(&lts, p, q, Equivalence::Weak).unwrap());
//! assert!(!bisimilar(&lts, p, q, Equivalence::Strong).unwrap());
//! ```

pub mod bisim;
pub mod oracle;
pub mod quotient;
pub mod semiring;
pub mod solver;
pub mod wlts;

pub use semiring::{Semiring, SemiringKind};
pub use wlts::{Label, Partition, StateId, Wlts};
