//! Quotient systems of strong bisimulation partitions.

use thiserror::Error;

use crate::semiring::Semiring;
use crate::wlts::{Label, Partition, StateId, Wlts, WltsBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("partition covers {found} states but the system has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Disagreement(Box<Disagreement>),
}

/// Two members of one block with different class weights.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "block {block}: {left} and {right} disagree on {label} into block {target} \
     ({left_weight} vs {right_weight}); the partition is not a strong bisimulation"
)]
pub struct Disagreement {
    pub block: usize,
    pub target: usize,
    pub label: String,
    pub left: String,
    pub right: String,
    pub left_weight: String,
    pub right_weight: String,
}

/// Name of a quotient state: member names in braces.
pub fn block_name<S: Semiring>(w: &Wlts<S>, block: &[StateId]) -> String {
    let names: Vec<&str> = block.iter().map(|&x| w.state_name(x)).collect();
    format!("{{{}}}", names.join(","))
}

/// One state per block; the weight from block `B` to block `B'` on `l` is
/// the class weight of any member of `B` into `B'`. Every member is checked
/// to give the same value.
pub fn emit_quotient<S: Semiring>(w: &Wlts<S>, p: &Partition) -> Result<Wlts<S>, QuotientError> {
    if p.num_states() != w.num_states() {
        return Err(QuotientError::SizeMismatch {
            expected: w.num_states(),
            found: p.num_states(),
        });
    }
    let s = w.semiring();
    let mut b = WltsBuilder::with_tau(s.clone(), w.tau_name());
    let states: Vec<StateId> = p
        .blocks()
        .iter()
        .map(|block| {
            b.add_state(block_name(w, block))
                .expect("block names are distinct")
        })
        .collect();
    let labels: Vec<Label> = w.labels().collect();
    for name in w.action_names() {
        b.add_action(name.clone()).expect("actions are distinct");
    }
    for (bi, block) in p.blocks().iter().enumerate() {
        for ti in 0..p.num_blocks() {
            let member = p.mask(ti);
            for &l in &labels {
                let rep = block[0];
                let value = w.class_weight_masked(rep, l, &member);
                for &x in &block[1..] {
                    let other = w.class_weight_masked(x, l, &member);
                    if !s.values_equal(&value, &other) {
                        return Err(QuotientError::Disagreement(Box::new(Disagreement {
                            block: bi,
                            target: ti,
                            label: w.label_name(l).to_owned(),
                            left: w.state_name(rep).to_owned(),
                            right: w.state_name(x).to_owned(),
                            left_weight: s.format_value(&value),
                            right_weight: s.format_value(&other),
                        })));
                    }
                }
                b.add_transition(states[bi], l, states[ti], value)
                    .expect("quotient states and labels exist");
            }
        }
    }
    Ok(b.build())
}
