//! Partition refinement for strong, weak and delay weighted bisimulation.
//!
//! All three equivalences run through one loop. Starting from a partition
//! (by default the single block), each sweep takes the blocks created in
//! the previous sweep as candidate classes `C`, computes the weights of
//! every state into `C` for every label, and splits every current block
//! whose members disagree. The loop stops after a sweep that creates no
//! new block.
//!
//! Weights are single-step class weights for strong bisimulation, with τ
//! treated as an ordinary label, and saturated weights from
//! [`solver`](crate::solver) for the weak and delay variants.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::semiring::Semiring;
use crate::solver::{SaturationMode, Saturator, SolverError, SolverKind};
use crate::wlts::{Label, Partition, StateId, Wlts, WltsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equivalence {
    Strong,
    Weak,
    Delay,
}

impl Equivalence {
    pub const ALL: [Equivalence; 3] = [Equivalence::Strong, Equivalence::Weak, Equivalence::Delay];

    pub fn name(self) -> &'static str {
        match self {
            Equivalence::Strong => "strong",
            Equivalence::Weak => "weak",
            Equivalence::Delay => "delay",
        }
    }

    pub fn saturation_mode(self) -> Option<SaturationMode> {
        match self {
            Equivalence::Strong => None,
            Equivalence::Weak => Some(SaturationMode::Weak),
            Equivalence::Delay => Some(SaturationMode::Delay),
        }
    }
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Equivalence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Equivalence::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown equivalence {s:?}, expected strong, weak or delay"))
    }
}

/// A label together with the class it measures weights into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitter {
    pub label: Label,
    pub class: Vec<StateId>,
}

impl Splitter {
    pub fn describe<S: Semiring>(&self, w: &Wlts<S>) -> String {
        let names: Vec<&str> = self.class.iter().map(|&x| w.state_name(x)).collect();
        format!("<{}, {{{}}}>", w.label_name(self.label), names.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// Zero-based sweep in which the split happened.
    pub sweep: usize,
    pub splitter: Splitter,
    /// How many blocks this splitter broke up.
    pub blocks_split: usize,
    pub blocks_before: usize,
    pub blocks_after: usize,
}

/// Log of the splits made during refinement, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RefinementTrace {
    pub entries: Vec<TraceEntry>,
    pub sweeps: usize,
}

impl RefinementTrace {
    /// Blocks added over the whole run.
    pub fn total_splits(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.blocks_after - e.blocks_before)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grouping {
    /// Sort by the instance's total order, then cut between unequal
    /// neighbours.
    #[default]
    Sorted,
    /// Compare each member against the representative of each group.
    Pairwise,
}

#[derive(Debug, Clone, Default)]
pub struct RefineOptions {
    pub initial: Option<Partition>,
    pub grouping: Grouping,
    pub solver: SolverKind,
}

#[derive(Debug, Clone)]
pub struct Refinement {
    pub partition: Partition,
    pub trace: RefinementTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisimError {
    #[error("no solution for splitter {splitter}: {source}")]
    NonConvergence {
        splitter: String,
        #[source]
        source: SolverError,
    },
    #[error("initial partition covers {found} states but the system has {expected}")]
    InitialPartitionSize { expected: usize, found: usize },
    #[error(transparent)]
    State(#[from] WltsError),
}

/// Groups `block` (whose `i`-th member has weight `weights[i]`) into maximal
/// classes of equal weight by comparing against group representatives.
pub fn split_block<S: Semiring>(
    s: &S,
    block: &[StateId],
    weights: &[S::Elem],
) -> Vec<Vec<StateId>> {
    assert_eq!(block.len(), weights.len());
    let mut groups: Vec<(usize, Vec<StateId>)> = Vec::new();
    for (i, &x) in block.iter().enumerate() {
        match groups
            .iter_mut()
            .find(|(rep, _)| s.values_equal(&weights[*rep], &weights[i]))
        {
            Some((_, members)) => members.push(x),
            None => groups.push((i, vec![x])),
        }
    }
    canonical_groups(groups.into_iter().map(|(_, g)| g).collect())
}

/// Same grouping as [`split_block`], by sorting on the total order and
/// cutting wherever adjacent weights differ.
pub fn split_block_sorted<S: Semiring>(
    s: &S,
    block: &[StateId],
    weights: &[S::Elem],
) -> Vec<Vec<StateId>> {
    assert_eq!(block.len(), weights.len());
    let mut order: Vec<usize> = (0..block.len()).collect();
    order.sort_by(|&i, &j| {
        s.total_cmp(&weights[i], &weights[j])
            .then(block[i].cmp(&block[j]))
    });
    let mut groups: Vec<Vec<StateId>> = Vec::new();
    let mut prev: Option<usize> = None;
    for i in order {
        match prev {
            Some(p) if s.values_equal(&weights[p], &weights[i]) => {
                groups.last_mut().expect("a group is open").push(block[i]);
            }
            _ => groups.push(vec![block[i]]),
        }
        prev = Some(i);
    }
    canonical_groups(groups)
}

fn canonical_groups(mut groups: Vec<Vec<StateId>>) -> Vec<Vec<StateId>> {
    for g in &mut groups {
        g.sort();
    }
    groups.sort_by_key(|g| g[0]);
    groups
}

/// Per-label weight rows into one class, labels in [`Wlts::labels`] order.
enum Weigher<'w, S: Semiring> {
    Strong(&'w Wlts<S>),
    Saturated(Saturator<'w, S>),
}

impl<S: Semiring> Weigher<'_, S> {
    fn table(&self, w: &Wlts<S>, class: &[StateId]) -> Result<Vec<Vec<S::Elem>>, SolverError> {
        match self {
            Weigher::Strong(w) => {
                let mut member = vec![false; w.num_states()];
                for x in class {
                    member[x.index()] = true;
                }
                Ok(w.labels()
                    .map(|l| {
                        w.states()
                            .map(|x| w.class_weight_masked(x, l, &member))
                            .collect()
                    })
                    .collect())
            }
            Weigher::Saturated(sat) => {
                let table = sat.saturate(class)?;
                Ok(w.labels().map(|l| table.weights(l).to_vec()).collect())
            }
        }
    }
}

/// Runs refinement for `mode` and returns the coarsest partition together
/// with the split log.
pub fn refine<S: Semiring>(
    w: &Wlts<S>,
    mode: Equivalence,
    options: &RefineOptions,
) -> Result<Refinement, BisimError> {
    let n = w.num_states();
    let s = w.semiring();
    let initial = match &options.initial {
        Some(p) if p.num_states() != n => {
            return Err(BisimError::InitialPartitionSize {
                expected: n,
                found: p.num_states(),
            })
        }
        Some(p) => p.clone(),
        None => Partition::single(n),
    };
    let weigher = match mode.saturation_mode() {
        None => Weigher::Strong(w),
        Some(m) => Weigher::Saturated(Saturator::new(w, m, options.solver)),
    };
    let labels: Vec<Label> = w.labels().collect();

    let mut blocks: Vec<Vec<StateId>> = initial.blocks().to_vec();
    let mut born: Vec<usize> = vec![0; blocks.len()];
    let mut trace = RefinementTrace::default();
    let mut sweep = 0;

    loop {
        let mut candidates: Vec<Vec<StateId>> = blocks
            .iter()
            .zip(&born)
            .filter(|(_, &b)| b == sweep)
            .map(|(block, _)| block.clone())
            .collect();
        if candidates.is_empty() {
            break;
        }
        candidates.sort_by_key(|c| c[0]);

        for class in candidates {
            let table = weigher.table(w, &class).map_err(|source| {
                let splitter = Splitter {
                    label: match &source {
                        SolverError::NotConverged { system, .. } => {
                            w.action_by_name(system).unwrap_or(Label::Tau)
                        }
                    },
                    class: class.clone(),
                };
                BisimError::NonConvergence {
                    splitter: splitter.describe(w),
                    source,
                }
            })?;
            for (li, &label) in labels.iter().enumerate() {
                let weights = &table[li];
                let blocks_before = blocks.len();
                let mut blocks_split = 0;
                for b in 0..blocks_before {
                    if blocks[b].len() < 2 {
                        continue;
                    }
                    let local: Vec<S::Elem> = blocks[b]
                        .iter()
                        .map(|x| weights[x.index()].clone())
                        .collect();
                    let first = &local[0];
                    if local.iter().all(|v| s.values_equal(v, first)) {
                        continue;
                    }
                    let mut groups = match options.grouping {
                        Grouping::Sorted => split_block_sorted(s, &blocks[b], &local),
                        Grouping::Pairwise => split_block(s, &blocks[b], &local),
                    };
                    if groups.len() < 2 {
                        continue;
                    }
                    blocks_split += 1;
                    let rest = groups.split_off(1);
                    blocks[b] = groups.pop().expect("first group");
                    born[b] = sweep + 1;
                    for g in rest {
                        blocks.push(g);
                        born.push(sweep + 1);
                    }
                }
                if blocks_split > 0 {
                    trace.entries.push(TraceEntry {
                        sweep,
                        splitter: Splitter {
                            label,
                            class: class.clone(),
                        },
                        blocks_split,
                        blocks_before,
                        blocks_after: blocks.len(),
                    });
                }
            }
        }
        sweep += 1;
    }
    trace.sweeps = sweep;

    let partition = Partition::from_blocks(n, blocks).expect("refinement keeps a partition");
    Ok(Refinement { partition, trace })
}

pub fn partition<S: Semiring>(w: &Wlts<S>, mode: Equivalence) -> Partition {
    refine(w, mode, &RefineOptions::default())
        .expect("elimination always produces a solution")
        .partition
}

pub fn strong_partition<S: Semiring>(w: &Wlts<S>) -> Partition {
    partition(w, Equivalence::Strong)
}

pub fn weak_partition<S: Semiring>(w: &Wlts<S>) -> Partition {
    partition(w, Equivalence::Weak)
}

pub fn delay_partition<S: Semiring>(w: &Wlts<S>) -> Partition {
    partition(w, Equivalence::Delay)
}

/// Whether `x` and `y` share a block of the `mode` partition.
pub fn bisimilar<S: Semiring>(
    w: &Wlts<S>,
    x: StateId,
    y: StateId,
    mode: Equivalence,
) -> Result<bool, BisimError> {
    w.check_state(x)?;
    w.check_state(y)?;
    if x == y {
        return Ok(true);
    }
    Ok(partition(w, mode).same_block(x, y))
}

/// Two members of one block whose weights into some class differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub block: usize,
    pub left: StateId,
    pub right: StateId,
    pub label: Label,
    pub class: usize,
    pub left_weight: String,
    pub right_weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimulationReport {
    pub mode: Equivalence,
    pub violations: Vec<Violation>,
}

impl BisimulationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the conditions of `mode` on `p` directly: for every block, every
/// member is compared against the block's first member for every label and
/// every class of `p`.
pub fn check_is_bisimulation<S: Semiring>(
    w: &Wlts<S>,
    p: &Partition,
    mode: Equivalence,
) -> Result<BisimulationReport, BisimError> {
    if p.num_states() != w.num_states() {
        return Err(BisimError::InitialPartitionSize {
            expected: w.num_states(),
            found: p.num_states(),
        });
    }
    let s = w.semiring();
    let weigher = match mode.saturation_mode() {
        None => Weigher::Strong(w),
        Some(m) => Weigher::Saturated(Saturator::new(w, m, SolverKind::Elimination)),
    };
    let labels: Vec<Label> = w.labels().collect();
    let mut violations = Vec::new();
    for (ci, class) in p.blocks().iter().enumerate() {
        let table = weigher
            .table(w, class)
            .expect("elimination always produces a solution");
        for (li, &label) in labels.iter().enumerate() {
            let weights = &table[li];
            for (bi, block) in p.blocks().iter().enumerate() {
                let rep = block[0];
                for &x in &block[1..] {
                    let (a, b) = (&weights[rep.index()], &weights[x.index()]);
                    if !s.values_equal(a, b) {
                        violations.push(Violation {
                            block: bi,
                            left: rep,
                            right: x,
                            label,
                            class: ci,
                            left_weight: s.format_value(a),
                            right_weight: s.format_value(b),
                        });
                    }
                }
            }
        }
    }
    Ok(BisimulationReport { mode, violations })
}

pub fn check_is_weak_bisimulation<S: Semiring>(
    w: &Wlts<S>,
    p: &Partition,
) -> Result<BisimulationReport, BisimError> {
    check_is_bisimulation(w, p, Equivalence::Weak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{Boolean, ExtRational, Real, RealFloat};

    fn q(p: i64, d: i64) -> ExtRational {
        ExtRational::ratio(p, d)
    }

    fn ids(v: &[usize]) -> Vec<StateId> {
        v.iter().map(|&i| StateId::new(i)).collect()
    }

    fn blocks(p: &Partition) -> Vec<Vec<usize>> {
        p.blocks()
            .iter()
            .map(|b| b.iter().map(|x| x.index()).collect())
            .collect()
    }

    #[test]
    fn terminal_states_form_one_block() {
        let w = Wlts::from_triples(Real, 4, &[]).unwrap();
        for mode in Equivalence::ALL {
            assert_eq!(partition(&w, mode).num_blocks(), 1);
        }
    }

    #[test]
    fn loops_with_different_weights_split() {
        let w = Wlts::from_triples(Real, 2, &[(0, "a", 0, q(1, 2)), (1, "a", 1, q(1, 3))]).unwrap();
        assert_eq!(blocks(&strong_partition(&w)), vec![vec![0], vec![1]]);
    }

    #[test]
    fn strong_treats_tau_as_a_label() {
        let w = Wlts::from_triples(Boolean, 3, &[(0, "tau", 2, true), (1, "a", 2, true)]).unwrap();
        assert_eq!(strong_partition(&w).num_blocks(), 3);
    }

    #[test]
    fn split_block_examples() {
        let s = Real;
        let b = ids(&[1, 2, 3]);
        let same = vec![q(1, 2); 3];
        assert_eq!(split_block(&s, &b, &same), vec![b.clone()]);
        let two = vec![q(1, 2), q(1, 3), q(1, 2)];
        let expect = vec![ids(&[1, 3]), ids(&[2])];
        assert_eq!(split_block(&s, &b, &two), expect);
        assert_eq!(split_block_sorted(&s, &b, &two), expect);
        let three = vec![q(1, 2), q(1, 3), q(1, 4)];
        assert_eq!(split_block(&s, &b, &three).len(), 3);
        assert_eq!(
            split_block_sorted(&s, &b, &three),
            split_block(&s, &b, &three)
        );
        assert!(split_block_sorted(&s, &[], &[]).is_empty());
    }

    #[test]
    fn float_grouping_uses_epsilon() {
        let s = RealFloat::default();
        let b = ids(&[0, 1, 2]);
        let w = vec![0.5, 0.5 + 1e-12, 0.7];
        assert_eq!(
            split_block_sorted(&s, &b, &w),
            vec![ids(&[0, 1]), ids(&[2])]
        );
    }

    #[test]
    fn milner_pair_weak_not_strong() {
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
        let (p, q) = (w.state(0), w.state(4));
        assert!(bisimilar(&w, p, q, Equivalence::Weak).unwrap());
        assert!(!bisimilar(&w, p, q, Equivalence::Strong).unwrap());
        assert!(bisimilar(&w, p, p, Equivalence::Strong).unwrap());
        assert!(bisimilar(&w, p, StateId::new(9), Equivalence::Weak).is_err());
    }

    #[test]
    fn generative_tau_prefix_is_invisible() {
        let w = Wlts::from_triples(
            Real,
            5,
            &[
                (0, "tau", 1, q(1, 1)),
                (1, "a", 2, q(1, 1)),
                (3, "a", 4, q(1, 1)),
            ],
        )
        .unwrap();
        assert!(bisimilar(&w, w.state(0), w.state(3), Equivalence::Weak).unwrap());
        assert!(bisimilar(&w, w.state(0), w.state(3), Equivalence::Delay).unwrap());
    }

    #[test]
    fn output_is_stable_and_discrete_passes() {
        let w = Wlts::from_triples(
            Real,
            4,
            &[
                (0, "tau", 1, q(1, 2)),
                (0, "a", 3, q(1, 2)),
                (1, "a", 3, q(1, 1)),
                (2, "a", 3, q(1, 1)),
            ],
        )
        .unwrap();
        for mode in Equivalence::ALL {
            let p = partition(&w, mode);
            assert!(check_is_bisimulation(&w, &p, mode).unwrap().passed());
            let d = Partition::discrete(4);
            assert!(check_is_bisimulation(&w, &d, mode).unwrap().passed());
        }
    }

    #[test]
    fn single_block_violation_names_the_splitter() {
        let w = Wlts::from_triples(Boolean, 2, &[(0, "a", 1, true)]).unwrap();
        let report = check_is_weak_bisimulation(&w, &Partition::single(2)).unwrap();
        assert!(!report.passed());
        let a = w.action_by_name("a").unwrap();
        assert!(report.violations.iter().any(|v| v.label == a));
    }

    #[test]
    fn initial_partition_must_fit() {
        let w = Wlts::from_triples(Boolean, 2, &[]).unwrap();
        let opts = RefineOptions {
            initial: Some(Partition::single(3)),
            ..Default::default()
        };
        assert!(matches!(
            refine(&w, Equivalence::Weak, &opts),
            Err(BisimError::InitialPartitionSize {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn trace_grows_strictly() {
        let w = Wlts::from_triples(
            Boolean,
            4,
            &[(0, "a", 1, true), (1, "a", 2, true), (2, "a", 3, true)],
        )
        .unwrap();
        let r = refine(&w, Equivalence::Strong, &RefineOptions::default()).unwrap();
        assert_eq!(r.partition.num_blocks(), 4);
        assert!(r
            .trace
            .entries
            .iter()
            .all(|e| e.blocks_after > e.blocks_before));
        assert_eq!(r.trace.total_splits(), 3);
    }

    #[test]
    fn equivalence_names_round_trip() {
        for e in Equivalence::ALL {
            assert_eq!(e.name().parse::<Equivalence>().unwrap(), e);
        }
        assert!("branching".parse::<Equivalence>().is_err());
    }
}
