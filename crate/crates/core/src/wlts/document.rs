//! JSON system documents.
//!
//! ```json
//! {
//!   "semiring": { "name": "truncation", "k": 10 },
//!   "tau": "tau",
//!   "states": ["x", "y"],
//!   "transitions": [ { "from": "x", "label": "a", "to": "y", "weight": "3" } ]
//! }
//! ```
//!
//! `semiring` may also be a bare name. Weights are strings (`p/q`, integer,
//! `inf`, decimals in float mode); JSON numbers and booleans are accepted
//! and read through the same grammar. A missing weight means `one`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{StateId, Wlts, WltsBuilder, WltsError, DEFAULT_TAU};
use crate::semiring::{SelectError, Semiring, SemiringKind, ValueError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semiring: Option<SemiringField>,
    #[serde(default = "default_tau")]
    pub tau: String,
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub actions: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<TransitionEntry>,
}

fn default_tau() -> String {
    DEFAULT_TAU.to_owned()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SemiringField {
    Name(String),
    Spec {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<f64>,
    },
}

impl SemiringField {
    pub fn from_kind(kind: SemiringKind) -> Self {
        match kind {
            SemiringKind::Truncation { k } => SemiringField::Spec {
                name: kind.name().to_owned(),
                k: Some(k),
                epsilon: None,
            },
            SemiringKind::RealFloat { epsilon } => SemiringField::Spec {
                name: kind.name().to_owned(),
                k: None,
                epsilon: Some(epsilon),
            },
            _ => SemiringField::Name(kind.name().to_owned()),
        }
    }

    pub fn kind(&self) -> Result<SemiringKind, SelectError> {
        match self {
            SemiringField::Name(name) => SemiringKind::from_name(name, None, None),
            SemiringField::Spec { name, k, epsilon } => SemiringKind::from_name(name, *k, *epsilon),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub from: String,
    pub label: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightLiteral>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightLiteral {
    Text(String),
    Number(serde_json::Number),
    Bool(bool),
}

impl WeightLiteral {
    pub fn as_text(&self) -> String {
        match self {
            WeightLiteral::Text(s) => s.clone(),
            WeightLiteral::Number(n) => n.to_string(),
            WeightLiteral::Bool(b) => b.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoadError {
    #[error("malformed system document: {0}")]
    Parse(String),
    #[error("no semiring given in the document or on the command line")]
    MissingSemiring,
    #[error(transparent)]
    Semiring(#[from] SelectError),
    #[error("transition {index}: unknown state {name:?}")]
    UnknownState { index: usize, name: String },
    #[error("transition {index}: label {name:?} is not in the declared action list")]
    UnknownLabel { index: usize, name: String },
    #[error("transition {index}: {source}")]
    InvalidWeight {
        index: usize,
        #[source]
        source: ValueError,
    },
    #[error(transparent)]
    Model(#[from] WltsError),
}

impl LoadError {
    /// Syntax-level failures, as opposed to semantic ones.
    pub fn is_parse(&self) -> bool {
        matches!(self, LoadError::Parse(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadWarnings {
    pub dropped_zero_weights: usize,
    pub merged_duplicates: usize,
}

#[derive(Debug, Clone)]
pub struct Loaded<S: Semiring> {
    pub wlts: Wlts<S>,
    pub warnings: LoadWarnings,
}

impl SystemDocument {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }

    /// The semiring to use: `override_kind` wins over the document's field.
    pub fn semiring_kind(
        &self,
        override_kind: Option<SemiringKind>,
    ) -> Result<SemiringKind, LoadError> {
        if let Some(kind) = override_kind {
            return Ok(kind);
        }
        match &self.semiring {
            Some(field) => Ok(field.kind()?),
            None => Err(LoadError::MissingSemiring),
        }
    }
}

/// Builds a system from a document. State ids follow the `states` list;
/// action ids follow `actions` when given, otherwise first use.
pub fn load<S: Semiring>(doc: &SystemDocument, semiring: S) -> Result<Loaded<S>, LoadError> {
    let mut b = WltsBuilder::with_tau(semiring, doc.tau.clone());
    for name in &doc.states {
        b.add_state(name.clone())?;
    }
    let closed_alphabet = !doc.actions.is_empty();
    for name in &doc.actions {
        b.add_action(name.clone())?;
    }
    for (index, t) in doc.transitions.iter().enumerate() {
        let state = |name: &str| {
            b.state_by_name(name)
                .ok_or_else(|| LoadError::UnknownState {
                    index,
                    name: name.to_owned(),
                })
        };
        let from = state(&t.from)?;
        let to = state(&t.to)?;
        let label = if closed_alphabet {
            b.lookup_label(&t.label)
                .ok_or_else(|| LoadError::UnknownLabel {
                    index,
                    name: t.label.clone(),
                })?
        } else {
            b.label(&t.label)?
        };
        let weight = match &t.weight {
            Some(lit) => b
                .semiring()
                .parse_value(&lit.as_text())
                .map_err(|source| LoadError::InvalidWeight { index, source })?,
            None => b.semiring().one(),
        };
        b.add_transition(from, label, to, weight)?;
    }
    let warnings = LoadWarnings {
        dropped_zero_weights: b.dropped_zero_weights(),
        merged_duplicates: b.merged_duplicates(),
    };
    Ok(Loaded {
        wlts: b.build(),
        warnings,
    })
}

/// The inverse of [`load`]: every stored transition with its weight string.
pub fn to_document<S: Semiring>(w: &Wlts<S>, semiring: Option<SemiringKind>) -> SystemDocument {
    let s = w.semiring();
    SystemDocument {
        semiring: semiring.map(SemiringField::from_kind),
        tau: w.tau_name().to_owned(),
        states: w.states().map(|x| w.state_name(x).to_owned()).collect(),
        actions: w.action_names().to_vec(),
        transitions: w
            .transitions()
            .map(|(x, e)| TransitionEntry {
                from: w.state_name(x).to_owned(),
                label: w.label_name(e.label).to_owned(),
                to: w.state_name(e.target).to_owned(),
                weight: Some(WeightLiteral::Text(s.format_value(&e.weight))),
            })
            .collect(),
    }
}

impl<S: Semiring> Wlts<S> {
    pub fn resolve_states<'a, I>(&self, names: I) -> Result<Vec<StateId>, String>
    where
        I: IntoIterator<Item = &'a str>,
    {
        names
            .into_iter()
            .map(|n| {
                self.state_by_name(n)
                    .ok_or_else(|| format!("unknown state {n:?}"))
            })
            .collect()
    }
}
