//! Reference semantics by explicit path enumeration.
//!
//! Everything here is deliberately naive and independent of the solver and
//! the refinement engine, so the two can be checked against each other on
//! small systems.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::bisim::Equivalence;
use crate::semiring::{Boolean, Semiring};
use crate::wlts::{Label, Partition, StateId, Wlts};

/// Largest system [`brute_coarsest_partition`] accepts.
pub const MAX_ORACLE_STATES: usize = 8;

/// `state₀ label₁ state₁ … labelₙ stateₙ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePath {
    states: Vec<StateId>,
    labels: Vec<Label>,
}

impl FinitePath {
    pub fn empty(start: StateId) -> Self {
        FinitePath {
            states: vec![start],
            labels: Vec::new(),
        }
    }

    /// Builds a path, checking that every step is a transition of `w`.
    pub fn from_steps<S: Semiring>(
        w: &Wlts<S>,
        start: StateId,
        steps: &[(Label, StateId)],
    ) -> Option<Self> {
        let mut path = FinitePath::empty(start);
        for &(l, y) in steps {
            if !w
                .edges_labelled(path.last(), l)
                .iter()
                .any(|e| e.target == y)
            {
                return None;
            }
            path.push(l, y);
        }
        Some(path)
    }

    fn push(&mut self, label: Label, target: StateId) {
        self.labels.push(label);
        self.states.push(target);
    }

    fn pop(&mut self) {
        self.labels.pop();
        self.states.pop();
    }

    pub fn start(&self) -> StateId {
        self.states[0]
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("paths are nonempty")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn trace(&self) -> &[Label] {
        &self.labels
    }

    /// Ordered product of the step weights.
    pub fn weight<S: Semiring>(&self, w: &Wlts<S>) -> S::Elem {
        let s = w.semiring();
        self.labels
            .iter()
            .enumerate()
            .fold(s.one(), |acc, (i, &l)| {
                let step = w
                    .weight(self.states[i], l, self.states[i + 1])
                    .expect("path states are in range");
                s.mul(&acc, &step)
            })
    }

    pub fn is_prefix_of(&self, other: &FinitePath) -> bool {
        self.len() <= other.len()
            && self.states[..] == other.states[..self.states.len()]
            && self.labels[..] == other.labels[..self.labels.len()]
    }

    pub fn is_proper_prefix_of(&self, other: &FinitePath) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    pub fn describe<S: Semiring>(&self, w: &Wlts<S>) -> String {
        let mut out = w.state_name(self.states[0]).to_owned();
        for (l, y) in self.labels.iter().zip(&self.states[1..]) {
            out.push_str(&format!(" -{}-> {}", w.label_name(*l), w.state_name(*y)));
        }
        out
    }
}

/// The regular trace sets `τ*`, `τ*aτ*` and `τ*a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceSelector {
    TauStar,
    TauStarActTauStar(Label),
    TauStarAct(Label),
}

impl TraceSelector {
    /// The selector comparing weights for `label` under `mode`; `None` for
    /// strong bisimulation, which uses single steps.
    pub fn for_label(mode: Equivalence, label: Label) -> Option<Self> {
        match (mode, label) {
            (Equivalence::Strong, _) => None,
            (_, Label::Tau) => Some(TraceSelector::TauStar),
            (Equivalence::Weak, a) => Some(TraceSelector::TauStarActTauStar(a)),
            (Equivalence::Delay, a) => Some(TraceSelector::TauStarAct(a)),
        }
    }

    // Phase 0: no action seen yet. Phase 1: the action has been taken.
    fn step(self, phase: u8, label: Label) -> Option<u8> {
        match (self, phase, label) {
            (_, 0, Label::Tau) => Some(0),
            (TraceSelector::TauStar, _, _) => None,
            (TraceSelector::TauStarActTauStar(a), 0, l) if l == a => Some(1),
            (TraceSelector::TauStarActTauStar(_), 1, Label::Tau) => Some(1),
            (TraceSelector::TauStarAct(a), 0, l) if l == a => Some(1),
            _ => None,
        }
    }

    fn accepting(self, phase: u8) -> bool {
        match self {
            TraceSelector::TauStar => phase == 0,
            _ => phase == 1,
        }
    }

    pub fn accepts(self, trace: &[Label]) -> bool {
        let mut phase = 0;
        for &l in trace {
            match self.step(phase, l) {
                Some(p) => phase = p,
                None => return false,
            }
        }
        self.accepting(phase)
    }
}

struct Enumeration {
    paths: Vec<FinitePath>,
    truncated: bool,
}

fn enumerate<S: Semiring>(
    w: &Wlts<S>,
    x: StateId,
    t: TraceSelector,
    member: &[bool],
    max_len: usize,
) -> Enumeration {
    fn go<S: Semiring>(
        w: &Wlts<S>,
        t: TraceSelector,
        member: &[bool],
        max_len: usize,
        phase: u8,
        path: &mut FinitePath,
        out: &mut Enumeration,
    ) {
        let here = path.last();
        if t.accepting(phase) && member[here.index()] {
            out.paths.push(path.clone());
            return;
        }
        for e in w.edges(here) {
            let Some(next) = t.step(phase, e.label) else {
                continue;
            };
            if path.len() == max_len {
                out.truncated = true;
                return;
            }
            path.push(e.label, e.target);
            go(w, t, member, max_len, next, path, out);
            path.pop();
        }
    }
    let mut out = Enumeration {
        paths: Vec::new(),
        truncated: false,
    };
    go(
        w,
        t,
        member,
        max_len,
        0,
        &mut FinitePath::empty(x),
        &mut out,
    );
    out
}

fn mask(n: usize, class: &[StateId]) -> Vec<bool> {
    let mut m = vec![false; n];
    for x in class {
        m[x.index()] = true;
    }
    m
}

/// The paths from `x` of length at most `max_len` whose trace is in `t`,
/// that end in `class`, and no proper prefix of which already does both.
pub fn enumerate_admissible<S: Semiring>(
    w: &Wlts<S>,
    x: StateId,
    t: TraceSelector,
    class: &[StateId],
    max_len: usize,
) -> Vec<FinitePath> {
    enumerate(w, x, t, &mask(w.num_states(), class), max_len).paths
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteWeight<E> {
    pub value: E,
    /// Some prefix could still be extended when the length bound was hit,
    /// so `value` may be a strict under-approximation.
    pub truncated: bool,
}

fn is_boolean<S: Semiring>(s: &S) -> bool {
    s.descriptor().name == Boolean.descriptor().name
}

/// Sum of the weights of the admissible paths. Over the boolean semiring
/// the answer is reachability in the (state, phase) product and is exact
/// for any `max_len`.
pub fn brute_weight<S: Semiring>(
    w: &Wlts<S>,
    x: StateId,
    t: TraceSelector,
    class: &[StateId],
    max_len: usize,
) -> BruteWeight<S::Elem> {
    let s = w.semiring();
    let member = mask(w.num_states(), class);
    if is_boolean(s) {
        let found = product_reachable(w, x, t, &member);
        return BruteWeight {
            value: if found { s.one() } else { s.zero() },
            truncated: false,
        };
    }
    let e = enumerate(w, x, t, &member, max_len);
    BruteWeight {
        value: s.sum(
            e.paths
                .iter()
                .map(|p| p.weight(w))
                .collect::<Vec<_>>()
                .iter(),
        ),
        truncated: e.truncated,
    }
}

fn product_reachable<S: Semiring>(
    w: &Wlts<S>,
    x: StateId,
    t: TraceSelector,
    member: &[bool],
) -> bool {
    let mut seen: BTreeSet<(StateId, u8)> = BTreeSet::new();
    let mut queue = VecDeque::from([(x, 0u8)]);
    seen.insert((x, 0));
    while let Some((y, phase)) = queue.pop_front() {
        if t.accepting(phase) && member[y.index()] {
            return true;
        }
        for e in w.edges(y) {
            if let Some(next) = t.step(phase, e.label) {
                if seen.insert((e.target, next)) {
                    queue.push_back((e.target, next));
                }
            }
        }
    }
    false
}

/// The prefix-minimal paths of `paths`: those with no proper prefix in the
/// set. Sorted and deduplicated.
pub fn minimal_support(paths: &[FinitePath]) -> Vec<FinitePath> {
    let set: BTreeSet<&FinitePath> = paths.iter().collect();
    set.iter()
        .filter(|p| !set.iter().any(|q| q.is_proper_prefix_of(p)))
        .map(|p| (*p).clone())
        .collect()
}

/// Cones of two paths either nest or are disjoint; the relation is decided
/// by prefix comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeRelation {
    Nested,
    Disjoint,
}

pub fn cone_relation(a: &FinitePath, b: &FinitePath) -> ConeRelation {
    if a.is_prefix_of(b) || b.is_prefix_of(a) {
        ConeRelation::Nested
    } else {
        ConeRelation::Disjoint
    }
}

/// Materialises the maximal extensions of both paths up to a common length
/// (the longer path's length plus `probe_len`) and checks that the two sets
/// are nested or disjoint.
pub fn cones_nested_or_disjoint<S: Semiring>(
    w: &Wlts<S>,
    a: &FinitePath,
    b: &FinitePath,
    probe_len: usize,
) -> bool {
    let horizon = a.len().max(b.len()) + probe_len;
    let ea = extensions(w, a, horizon);
    let eb = extensions(w, b, horizon);
    ea.is_subset(&eb) || eb.is_subset(&ea) || ea.is_disjoint(&eb)
}

fn extensions<S: Semiring>(w: &Wlts<S>, p: &FinitePath, horizon: usize) -> BTreeSet<FinitePath> {
    let mut out = BTreeSet::new();
    let mut stack = vec![p.clone()];
    while let Some(path) = stack.pop() {
        let edges = w.edges(path.last());
        if path.len() >= horizon || edges.is_empty() {
            out.insert(path);
            continue;
        }
        for e in edges {
            let mut next = path.clone();
            next.push(e.label, e.target);
            stack.push(next);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the oracle handles at most {max} states, got {found}")]
    TooManyStates { found: usize, max: usize },
    #[error("path enumeration from {state} towards {class} hit the length bound")]
    Truncated { state: String, class: String },
    #[error("this oracle needs the boolean semiring, got {0}")]
    NotBoolean(String),
    #[error("two distinct coarsest partitions with {0} blocks")]
    NotUnique(usize),
}

/// All set partitions of `0..n` as restricted growth strings, coarsest
/// first (by block count, then lexicographically).
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, current: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        let limit = if current.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            current.push(b);
            go(n, current, max.max(b), out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::with_capacity(n), 0, &mut out);
    out.sort_by_key(|rgs| rgs.iter().copied().max().map_or(0, |m| m + 1));
    out
}

struct WeightCache<'w, S: Semiring> {
    w: &'w Wlts<S>,
    mode: Equivalence,
    max_len: usize,
    cache: HashMap<(u32, Label), Vec<S::Elem>>,
}

impl<S: Semiring> WeightCache<'_, S> {
    fn weights(&mut self, class_bits: u32, label: Label) -> Result<&[S::Elem], OracleError> {
        if !self.cache.contains_key(&(class_bits, label)) {
            let w = self.w;
            let class: Vec<StateId> = w
                .states()
                .filter(|x| class_bits & (1 << x.index()) != 0)
                .collect();
            let mut row = Vec::with_capacity(w.num_states());
            for x in w.states() {
                match TraceSelector::for_label(self.mode, label) {
                    None => row.push(w.class_weight(x, label, &class)),
                    Some(t) => {
                        let bw = brute_weight(w, x, t, &class, self.max_len);
                        if bw.truncated {
                            return Err(OracleError::Truncated {
                                state: w.state_name(x).to_owned(),
                                class: crate::quotient::block_name(w, &class),
                            });
                        }
                        row.push(bw.value);
                    }
                }
            }
            self.cache.insert((class_bits, label), row);
        }
        Ok(&self.cache[&(class_bits, label)])
    }
}

/// The coarsest partition satisfying the definition of `mode`, found by
/// trying every set partition from the coarsest down. Weights come from
/// [`brute_weight`] with length bound `max_len`.
pub fn brute_coarsest_partition<S: Semiring>(
    w: &Wlts<S>,
    mode: Equivalence,
    max_len: usize,
) -> Result<Partition, OracleError> {
    let n = w.num_states();
    if n > MAX_ORACLE_STATES {
        return Err(OracleError::TooManyStates {
            found: n,
            max: MAX_ORACLE_STATES,
        });
    }
    if n == 0 {
        return Ok(Partition::single(0));
    }
    let s = w.semiring();
    let labels: Vec<Label> = w.labels().collect();
    let mut cache = WeightCache {
        w,
        mode,
        max_len,
        cache: HashMap::new(),
    };
    let mut found: Option<(usize, Vec<usize>)> = None;
    for rgs in set_partitions(n) {
        let blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
        if let Some((k, _)) = &found {
            if blocks > *k {
                break;
            }
        }
        let mut bits = vec![0u32; blocks];
        for (x, &b) in rgs.iter().enumerate() {
            bits[b] |= 1 << x;
        }
        let mut ok = true;
        'check: for &class in &bits {
            for &l in &labels {
                let row = cache.weights(class, l)?;
                for x in 0..n {
                    let rep = rgs.iter().position(|&b| b == rgs[x]).expect("own block");
                    if !s.values_equal(&row[rep], &row[x]) {
                        ok = false;
                        break 'check;
                    }
                }
            }
        }
        if ok {
            if found.is_some() {
                return Err(OracleError::NotUnique(blocks));
            }
            found = Some((blocks, rgs));
        }
    }
    let (_, rgs) = found.expect("the discrete partition always qualifies");
    Ok(Partition::from_block_ids(&rgs))
}

/// Weak bisimulation as strong bisimulation of the double-arrow system:
/// `x =τ=> y` when `y` is reachable by zero or more τ-steps, and
/// `x =a=> y` for `τ* a τ*`. The strong partition of that relation is
/// computed by signature refinement.
pub fn milner_weak_oracle<S: Semiring>(w: &Wlts<S>) -> Result<Partition, OracleError> {
    let s = w.semiring();
    if !is_boolean(s) {
        return Err(OracleError::NotBoolean(s.descriptor().name.to_owned()));
    }
    let n = w.num_states();
    let tau_closure: Vec<BTreeSet<usize>> = w
        .states()
        .map(|x| {
            let mut seen = BTreeSet::from([x.index()]);
            let mut stack = vec![x];
            while let Some(y) = stack.pop() {
                for e in w.edges_labelled(y, Label::Tau) {
                    if seen.insert(e.target.index()) {
                        stack.push(e.target);
                    }
                }
            }
            seen
        })
        .collect();

    // arrows[x]: (label, y) pairs of the double-arrow system
    let mut arrows: Vec<BTreeSet<(Label, usize)>> = vec![BTreeSet::new(); n];
    for x in 0..n {
        for &y in &tau_closure[x] {
            arrows[x].insert((Label::Tau, y));
            for e in w.edges(StateId::new(y)) {
                if let Label::Action(_) = e.label {
                    for &z in &tau_closure[e.target.index()] {
                        arrows[x].insert((e.label, z));
                    }
                }
            }
        }
    }

    let mut block = vec![0usize; n];
    let mut count = 1;
    loop {
        let signatures: Vec<(usize, BTreeSet<(Label, usize)>)> = (0..n)
            .map(|x| {
                let sig = arrows[x].iter().map(|&(l, y)| (l, block[y])).collect();
                (block[x], sig)
            })
            .collect();
        let next = Partition::from_assignment(&signatures);
        block = next.block_ids().to_vec();
        if next.num_blocks() == count {
            return Ok(next);
        }
        count = next.num_blocks();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{Boolean, ExtRational, Real};

    fn q(p: i64, d: i64) -> ExtRational {
        ExtRational::ratio(p, d)
    }

    fn ids(v: &[usize]) -> Vec<StateId> {
        v.iter().map(|&i| StateId::new(i)).collect()
    }

    #[test]
    fn member_of_class_has_only_the_empty_path() {
        let w =
            Wlts::from_triples(Real, 2, &[(0, "tau", 1, q(1, 2)), (0, "tau", 0, q(1, 2))]).unwrap();
        let paths = enumerate_admissible(&w, w.state(0), TraceSelector::TauStar, &ids(&[0]), 5);
        assert_eq!(paths, vec![FinitePath::empty(w.state(0))]);
    }

    #[test]
    fn zero_length_bound_outside_the_class() {
        let w = Wlts::from_triples(Real, 2, &[(0, "tau", 1, q(1, 2))]).unwrap();
        let paths = enumerate_admissible(&w, w.state(0), TraceSelector::TauStar, &ids(&[1]), 0);
        assert!(paths.is_empty());
        let bw = brute_weight(&w, w.state(0), TraceSelector::TauStar, &ids(&[1]), 0);
        assert!(bw.truncated);
    }

    #[test]
    fn empty_admissible_set_weighs_zero() {
        let w = Wlts::from_triples(Real, 2, &[]).unwrap();
        let bw = brute_weight(&w, w.state(0), TraceSelector::TauStar, &ids(&[1]), 4);
        assert_eq!(
            bw,
            BruteWeight {
                value: ExtRational::zero(),
                truncated: false
            }
        );
    }

    #[test]
    fn selectors_match_their_languages() {
        let (t, a, b) = (Label::Tau, Label::Action(0), Label::Action(1));
        assert!(TraceSelector::TauStar.accepts(&[]));
        assert!(TraceSelector::TauStar.accepts(&[t, t]));
        assert!(!TraceSelector::TauStar.accepts(&[t, a]));
        let weak = TraceSelector::TauStarActTauStar(a);
        assert!(weak.accepts(&[a]) && weak.accepts(&[t, a, t, t]));
        assert!(!weak.accepts(&[t]) && !weak.accepts(&[a, a]) && !weak.accepts(&[b]));
        let delay = TraceSelector::TauStarAct(a);
        assert!(delay.accepts(&[t, t, a]));
        assert!(!delay.accepts(&[a, t]));
    }

    #[test]
    fn boolean_cycles_are_exact() {
        let w = Wlts::from_triples(
            Boolean,
            3,
            &[(0, "tau", 1, true), (1, "tau", 0, true), (1, "a", 2, true)],
        )
        .unwrap();
        let a = w.action_by_name("a").unwrap();
        let bw = brute_weight(
            &w,
            w.state(0),
            TraceSelector::TauStarActTauStar(a),
            &ids(&[2]),
            12,
        );
        assert_eq!(
            bw,
            BruteWeight {
                value: true,
                truncated: false
            }
        );
        let none = brute_weight(&w, w.state(2), TraceSelector::TauStar, &ids(&[0]), 12);
        assert_eq!(
            none,
            BruteWeight {
                value: false,
                truncated: false
            }
        );
    }

    #[test]
    fn minimal_support_examples() {
        let w = Wlts::from_triples(
            Boolean,
            3,
            &[(0, "a", 1, true), (1, "a", 2, true), (0, "b", 2, true)],
        )
        .unwrap();
        let (a, b) = (
            w.action_by_name("a").unwrap(),
            w.action_by_name("b").unwrap(),
        );
        let short = FinitePath::from_steps(&w, w.state(0), &[(a, w.state(1))]).unwrap();
        let long =
            FinitePath::from_steps(&w, w.state(0), &[(a, w.state(1)), (a, w.state(2))]).unwrap();
        let other = FinitePath::from_steps(&w, w.state(0), &[(b, w.state(2))]).unwrap();
        assert_eq!(
            minimal_support(&[long.clone(), short.clone()]),
            vec![short.clone()]
        );
        let free = minimal_support(&[short.clone(), other.clone()]);
        assert_eq!(free.len(), 2);
        assert_eq!(minimal_support(&free), free);
        assert!(minimal_support(&[]).is_empty());
        assert!(FinitePath::from_steps(&w, w.state(0), &[(b, w.state(1))]).is_none());
    }

    #[test]
    fn cones() {
        let w = Wlts::from_triples(
            Boolean,
            3,
            &[(0, "a", 1, true), (1, "a", 2, true), (0, "b", 2, true)],
        )
        .unwrap();
        let (a, b) = (
            w.action_by_name("a").unwrap(),
            w.action_by_name("b").unwrap(),
        );
        let short = FinitePath::from_steps(&w, w.state(0), &[(a, w.state(1))]).unwrap();
        let long =
            FinitePath::from_steps(&w, w.state(0), &[(a, w.state(1)), (a, w.state(2))]).unwrap();
        let other = FinitePath::from_steps(&w, w.state(0), &[(b, w.state(2))]).unwrap();
        assert_eq!(cone_relation(&short, &long), ConeRelation::Nested);
        assert_eq!(cone_relation(&short, &other), ConeRelation::Disjoint);
        for (x, y) in [(&short, &long), (&short, &other), (&long, &long)] {
            assert!(cones_nested_or_disjoint(&w, x, y, 3));
        }
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
        assert_eq!(set_partitions(3)[0], vec![0, 0, 0]);
    }

    #[test]
    fn brute_partition_small_cases() {
        let one = Wlts::from_triples(Real, 1, &[]).unwrap();
        assert_eq!(
            brute_coarsest_partition(&one, Equivalence::Weak, 4)
                .unwrap()
                .num_blocks(),
            1
        );
        let loops =
            Wlts::from_triples(Real, 2, &[(0, "a", 0, q(1, 2)), (1, "a", 1, q(1, 2))]).unwrap();
        assert_eq!(
            brute_coarsest_partition(&loops, Equivalence::Strong, 0)
                .unwrap()
                .num_blocks(),
            1
        );
        let big = Wlts::from_triples(Real, 9, &[]).unwrap();
        assert!(matches!(
            brute_coarsest_partition(&big, Equivalence::Strong, 0),
            Err(OracleError::TooManyStates { found: 9, .. })
        ));
    }

    #[test]
    fn brute_partition_reports_truncation() {
        let w = Wlts::from_triples(
            Real,
            2,
            &[
                (0, "tau", 0, q(1, 2)),
                (0, "tau", 1, q(1, 2)),
                (1, "a", 1, q(1, 1)),
            ],
        )
        .unwrap();
        assert!(matches!(
            brute_coarsest_partition(&w, Equivalence::Weak, 6),
            Err(OracleError::Truncated { .. })
        ));
    }

    #[test]
    fn milner_oracle_examples() {
        let w = Wlts::from_triples(
            Boolean,
            7,
            &[
                (0, "a", 1, true),
                (1, "tau", 2, true),
                (2, "b", 3, true),
                (4, "a", 5, true),
                (5, "b", 6, true),
            ],
        )
        .unwrap();
        let p = milner_weak_oracle(&w).unwrap();
        assert!(p.same_block(w.state(0), w.state(4)));

        let cycle = Wlts::from_triples(
            Boolean,
            4,
            &[
                (0, "tau", 1, true),
                (1, "tau", 2, true),
                (2, "tau", 0, true),
            ],
        )
        .unwrap();
        assert_eq!(milner_weak_oracle(&cycle).unwrap().num_blocks(), 1);

        let real = Wlts::from_triples(Real, 1, &[]).unwrap();
        assert!(matches!(
            milner_weak_oracle(&real),
            Err(OracleError::NotBoolean(_))
        ));
    }
}
