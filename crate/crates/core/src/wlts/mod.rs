//! Weighted labelled transition systems.
//!
//! States are dense indices; labels are either the silent `τ` or an index
//! into a finite action alphabet. The weight function is stored sparsely:
//! an absent triple has weight zero, and zero is never stored.

mod document;
mod partition;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::semiring::{Semiring, ValueError};

pub use document::{
    load, to_document, LoadError, LoadWarnings, Loaded, SemiringField, SystemDocument,
    TransitionEntry, WeightLiteral,
};
pub use partition::{Partition, PartitionError};

pub const DEFAULT_TAU: &str = "tau";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct StateId(usize);

impl StateId {
    pub fn new(index: usize) -> Self {
        StateId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// `Tau` sorts before every action; actions sort by alphabet position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Tau,
    Action(usize),
}

impl Label {
    pub fn is_tau(self) -> bool {
        matches!(self, Label::Tau)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<W> {
    pub label: Label,
    pub target: StateId,
    pub weight: W,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WltsError {
    #[error("state index {index} out of range (system has {count} states)")]
    StateOutOfRange { index: usize, count: usize },
    #[error("action index {index} out of range (alphabet has {count} actions)")]
    ActionOutOfRange { index: usize, count: usize },
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
    #[error("duplicate action name {0:?}")]
    DuplicateAction(String),
    #[error("action {0:?} clashes with the silent label")]
    ActionIsTau(String),
    #[error("mass checks need the real semiring, not {0}")]
    NotReal(&'static str),
    #[error(transparent)]
    Weight(#[from] ValueError),
}

/// A finite weighted LTS over the semiring `S`.
#[derive(Clone, Debug)]
pub struct Wlts<S: Semiring> {
    semiring: S,
    tau_name: String,
    state_names: Vec<String>,
    actions: Vec<String>,
    // Per source state, sorted by (label, target); targets distinct per label.
    out: Vec<Vec<Edge<S::Elem>>>,
}

impl<S: Semiring> Wlts<S> {
    /// Quick constructor: states are named `s0..s{n-1}`, labels equal to
    /// `"tau"` are silent, and actions are numbered by first appearance.
    pub fn from_triples(
        semiring: S,
        states: usize,
        triples: &[(usize, &str, usize, S::Elem)],
    ) -> Result<Self, WltsError> {
        let mut b = WltsBuilder::new(semiring);
        for i in 0..states {
            b.add_state(format!("s{i}"))?;
        }
        for (from, label, to, w) in triples {
            let label = b.label(label)?;
            b.add_transition(StateId(*from), label, StateId(*to), w.clone())?;
        }
        Ok(b.build())
    }

    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> {
        (0..self.out.len()).map(StateId)
    }

    /// Panics if `index` is out of range.
    pub fn state(&self, index: usize) -> StateId {
        assert!(index < self.out.len(), "state {index} out of range");
        StateId(index)
    }

    pub fn check_state(&self, x: StateId) -> Result<(), WltsError> {
        if x.0 < self.out.len() {
            Ok(())
        } else {
            Err(WltsError::StateOutOfRange {
                index: x.0,
                count: self.out.len(),
            })
        }
    }

    pub fn state_name(&self, x: StateId) -> &str {
        &self.state_names[x.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(StateId)
    }

    pub fn tau_name(&self) -> &str {
        &self.tau_name
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn action_by_name(&self, name: &str) -> Option<Label> {
        if name == self.tau_name {
            return Some(Label::Tau);
        }
        self.actions
            .iter()
            .position(|a| a == name)
            .map(Label::Action)
    }

    pub fn label_name(&self, label: Label) -> &str {
        match label {
            Label::Tau => &self.tau_name,
            Label::Action(i) => &self.actions[i],
        }
    }

    /// `τ` followed by every action in alphabet order.
    pub fn labels(&self) -> impl Iterator<Item = Label> {
        std::iter::once(Label::Tau).chain((0..self.actions.len()).map(Label::Action))
    }

    pub fn edges(&self, x: StateId) -> &[Edge<S::Elem>] {
        &self.out[x.0]
    }

    /// Outgoing edges of `x` carrying `label`, ordered by target.
    pub fn edges_labelled(&self, x: StateId, label: Label) -> &[Edge<S::Elem>] {
        let edges = &self.out[x.0];
        let start = edges.partition_point(|e| e.label < label);
        let end = start + edges[start..].partition_point(|e| e.label == label);
        &edges[start..end]
    }

    /// All stored transitions as `(source, edge)` pairs in source order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Edge<S::Elem>)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(x, es)| es.iter().map(move |e| (StateId(x), e)))
    }

    pub fn has_tau_transitions(&self) -> bool {
        self.out.iter().flatten().any(|e| e.label.is_tau())
    }

    /// `ρ(x, l, y)`; zero when no transition is stored.
    pub fn weight(&self, x: StateId, l: Label, y: StateId) -> Result<S::Elem, WltsError> {
        self.check_state(x)?;
        self.check_state(y)?;
        if let Label::Action(i) = l {
            if i >= self.actions.len() {
                return Err(WltsError::ActionOutOfRange {
                    index: i,
                    count: self.actions.len(),
                });
            }
        }
        let edges = self.edges_labelled(x, l);
        Ok(match edges.binary_search_by(|e| e.target.cmp(&y)) {
            Ok(i) => edges[i].weight.clone(),
            Err(_) => self.semiring.zero(),
        })
    }

    /// `Σ_{y ∈ class} ρ(x, l, y)`.
    pub fn class_weight(&self, x: StateId, l: Label, class: &[StateId]) -> S::Elem {
        let mut mask = vec![false; self.num_states()];
        for y in class {
            mask[y.0] = true;
        }
        self.class_weight_masked(x, l, &mask)
    }

    /// As [`class_weight`](Self::class_weight), with the class given as a
    /// membership mask indexed by state.
    pub fn class_weight_masked(&self, x: StateId, l: Label, member: &[bool]) -> S::Elem {
        let s = &self.semiring;
        self.edges_labelled(x, l)
            .iter()
            .filter(|e| member[e.target.0])
            .fold(s.zero(), |acc, e| s.add(&acc, &e.weight))
    }

    pub fn is_terminal(&self, x: StateId) -> bool {
        self.out[x.0].is_empty()
    }

    /// Per-state total outgoing mass, which must be zero or one.
    pub fn check_fully_probabilistic(&self) -> Result<MassReport, WltsError> {
        self.require_real()?;
        let s = &self.semiring;
        let entries = self
            .states()
            .map(|x| {
                let mass = s.sum(self.edges(x).iter().map(|e| &e.weight));
                self.mass_entry(x, None, mass)
            })
            .collect();
        Ok(MassReport::new(entries))
    }

    /// Per-(state, label) outgoing mass, which must be zero or one.
    pub fn check_reactive(&self) -> Result<MassReport, WltsError> {
        self.require_real()?;
        let s = &self.semiring;
        let mut entries = Vec::new();
        for x in self.states() {
            for l in self.labels() {
                let edges = self.edges_labelled(x, l);
                if edges.is_empty() {
                    continue;
                }
                let mass = s.sum(edges.iter().map(|e| &e.weight));
                entries.push(self.mass_entry(x, Some(l), mass));
            }
        }
        Ok(MassReport::new(entries))
    }

    fn require_real(&self) -> Result<(), WltsError> {
        let d = self.semiring.descriptor();
        if d.is_real() {
            Ok(())
        } else {
            Err(WltsError::NotReal(d.name))
        }
    }

    fn mass_entry(&self, x: StateId, l: Option<Label>, mass: S::Elem) -> MassEntry {
        let s = &self.semiring;
        let pass = s.values_equal(&mass, &s.zero()) || s.values_equal(&mass, &s.one());
        MassEntry {
            state: self.state_name(x).to_owned(),
            label: l.map(|l| self.label_name(l).to_owned()),
            mass: s.format_value(&mass),
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MassEntry {
    pub state: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub mass: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MassReport {
    pub pass: bool,
    pub entries: Vec<MassEntry>,
}

impl MassReport {
    fn new(entries: Vec<MassEntry>) -> Self {
        MassReport {
            pass: entries.iter().all(|e| e.pass),
            entries,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &MassEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Incremental construction. Duplicate triples are combined with `add`;
/// zero weights are dropped and counted.
#[derive(Debug, Clone)]
pub struct WltsBuilder<S: Semiring> {
    semiring: S,
    tau_name: String,
    state_names: Vec<String>,
    state_index: HashMap<String, usize>,
    actions: Vec<String>,
    action_index: HashMap<String, usize>,
    pending: BTreeMap<(usize, Label, usize), S::Elem>,
    dropped_zero: usize,
    merged: usize,
}

impl<S: Semiring> WltsBuilder<S> {
    pub fn new(semiring: S) -> Self {
        Self::with_tau(semiring, DEFAULT_TAU)
    }

    pub fn with_tau(semiring: S, tau_name: impl Into<String>) -> Self {
        WltsBuilder {
            semiring,
            tau_name: tau_name.into(),
            state_names: Vec::new(),
            state_index: HashMap::new(),
            actions: Vec::new(),
            action_index: HashMap::new(),
            pending: BTreeMap::new(),
            dropped_zero: 0,
            merged: 0,
        }
    }

    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId, WltsError> {
        let name = name.into();
        if self.state_index.contains_key(&name) {
            return Err(WltsError::DuplicateState(name));
        }
        let id = self.state_names.len();
        self.state_index.insert(name.clone(), id);
        self.state_names.push(name);
        Ok(StateId(id))
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied().map(StateId)
    }

    /// Declares a new action; fails on duplicates and on the silent name.
    pub fn add_action(&mut self, name: impl Into<String>) -> Result<Label, WltsError> {
        let name = name.into();
        if name == self.tau_name {
            return Err(WltsError::ActionIsTau(name));
        }
        if self.action_index.contains_key(&name) {
            return Err(WltsError::DuplicateAction(name));
        }
        let id = self.actions.len();
        self.action_index.insert(name.clone(), id);
        self.actions.push(name);
        Ok(Label::Action(id))
    }

    /// Resolves a label name, declaring the action if it is new.
    pub fn label(&mut self, name: &str) -> Result<Label, WltsError> {
        if name == self.tau_name {
            return Ok(Label::Tau);
        }
        match self.action_index.get(name) {
            Some(&i) => Ok(Label::Action(i)),
            None => self.add_action(name),
        }
    }

    pub fn lookup_label(&self, name: &str) -> Option<Label> {
        if name == self.tau_name {
            return Some(Label::Tau);
        }
        self.action_index.get(name).copied().map(Label::Action)
    }

    pub fn add_transition(
        &mut self,
        from: StateId,
        label: Label,
        to: StateId,
        weight: S::Elem,
    ) -> Result<(), WltsError> {
        let count = self.state_names.len();
        for x in [from, to] {
            if x.0 >= count {
                return Err(WltsError::StateOutOfRange { index: x.0, count });
            }
        }
        if let Label::Action(i) = label {
            if i >= self.actions.len() {
                return Err(WltsError::ActionOutOfRange {
                    index: i,
                    count: self.actions.len(),
                });
            }
        }
        if self.semiring.is_zero(&weight) {
            self.dropped_zero += 1;
            return Ok(());
        }
        let s = &self.semiring;
        match self.pending.entry((from.0, label, to.0)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(weight);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let combined = s.add(o.get(), &weight);
                o.insert(combined);
                self.merged += 1;
            }
        }
        Ok(())
    }

    pub fn dropped_zero_weights(&self) -> usize {
        self.dropped_zero
    }

    pub fn merged_duplicates(&self) -> usize {
        self.merged
    }

    pub fn build(self) -> Wlts<S> {
        let mut out: Vec<Vec<Edge<S::Elem>>> = vec![Vec::new(); self.state_names.len()];
        // BTreeMap order is (source, label, target), which is the storage order.
        for ((x, label, y), weight) in self.pending {
            if self.semiring.is_zero(&weight) {
                continue;
            }
            out[x].push(Edge {
                label,
                target: StateId(y),
                weight,
            });
        }
        Wlts {
            semiring: self.semiring,
            tau_name: self.tau_name,
            state_names: self.state_names,
            actions: self.actions,
            out,
        }
    }
}
