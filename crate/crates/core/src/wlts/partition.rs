use thiserror::Error;

use super::StateId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("state {0} appears in more than one block")]
    Overlap(StateId),
    #[error("state {0} is not covered by any block")]
    Uncovered(StateId),
    #[error("state {0} is out of range")]
    OutOfRange(StateId),
}

/// A set of pairwise disjoint, nonempty blocks covering `0..n`.
///
/// Always canonical: members ascending within a block, blocks ordered by
/// their minimum member. Two partitions are equal iff they induce the same
/// equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<StateId>>,
}

impl Partition {
    /// One block holding every state (no block at all when `n == 0`).
    pub fn single(n: usize) -> Self {
        Self::from_assignment(&vec![0; n])
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_assignment(&(0..n).collect::<Vec<_>>())
    }

    /// Builds the partition induced by arbitrary per-state keys: states with
    /// equal keys share a block.
    pub fn from_assignment<K: PartialEq>(keys: &[K]) -> Self {
        let mut block_of = Vec::with_capacity(keys.len());
        let mut blocks: Vec<Vec<StateId>> = Vec::new();
        let mut reps: Vec<usize> = Vec::new();
        for (x, key) in keys.iter().enumerate() {
            match reps.iter().position(|&r| keys[r] == *key) {
                Some(b) => {
                    blocks[b].push(StateId::new(x));
                    block_of.push(b);
                }
                None => {
                    reps.push(x);
                    blocks.push(vec![StateId::new(x)]);
                    block_of.push(blocks.len() - 1);
                }
            }
        }
        Partition { block_of, blocks }
    }

    /// As [`from_assignment`](Self::from_assignment) for dense block ids;
    /// linear time.
    pub fn from_block_ids(ids: &[usize]) -> Self {
        let mut remap = vec![usize::MAX; ids.iter().copied().max().map_or(0, |m| m + 1)];
        let mut block_of = Vec::with_capacity(ids.len());
        let mut blocks: Vec<Vec<StateId>> = Vec::new();
        for (x, &id) in ids.iter().enumerate() {
            if remap[id] == usize::MAX {
                remap[id] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[remap[id]].push(StateId::new(x));
            block_of.push(remap[id]);
        }
        Partition { block_of, blocks }
    }

    pub fn from_blocks(n: usize, blocks: Vec<Vec<StateId>>) -> Result<Self, PartitionError> {
        let mut ids = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock(b));
            }
            for &x in block {
                if x.index() >= n {
                    return Err(PartitionError::OutOfRange(x));
                }
                if ids[x.index()] != usize::MAX {
                    return Err(PartitionError::Overlap(x));
                }
                ids[x.index()] = b;
            }
        }
        if let Some(x) = ids.iter().position(|&b| b == usize::MAX) {
            return Err(PartitionError::Uncovered(StateId::new(x)));
        }
        Ok(Self::from_block_ids(&ids))
    }

    pub fn num_states(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[StateId] {
        &self.blocks[i]
    }

    pub fn block_of(&self, x: StateId) -> usize {
        self.block_of[x.index()]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block_of
    }

    pub fn same_block(&self, x: StateId, y: StateId) -> bool {
        self.block_of(x) == self.block_of(y)
    }

    /// Every block of `self` lies inside some block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.num_states() == coarser.num_states()
            && self.blocks.iter().all(|b| {
                let target = coarser.block_of(b[0]);
                b.iter().all(|&x| coarser.block_of(x) == target)
            })
    }

    /// Membership mask of block `i`, indexed by state.
    pub fn mask(&self, i: usize) -> Vec<bool> {
        let mut m = vec![false; self.num_states()];
        for x in &self.blocks[i] {
            m[x.index()] = true;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> Vec<StateId> {
        v.iter().map(|&i| StateId::new(i)).collect()
    }

    #[test]
    fn canonical_order() {
        let p = Partition::from_blocks(5, vec![ids(&[4, 1]), ids(&[3]), ids(&[2, 0])]).unwrap();
        assert_eq!(p.blocks(), &[ids(&[0, 2]), ids(&[1, 4]), ids(&[3])]);
        assert_eq!(p, Partition::from_assignment(&['x', 'y', 'x', 'z', 'y']));
    }

    #[test]
    fn invalid_blocks() {
        assert_eq!(
            Partition::from_blocks(2, vec![ids(&[0]), vec![]]),
            Err(PartitionError::EmptyBlock(1))
        );
        assert_eq!(
            Partition::from_blocks(2, vec![ids(&[0, 1]), ids(&[1])]),
            Err(PartitionError::Overlap(StateId::new(1)))
        );
        assert_eq!(
            Partition::from_blocks(3, vec![ids(&[0, 1])]),
            Err(PartitionError::Uncovered(StateId::new(2)))
        );
    }

    #[test]
    fn refinement_order() {
        let coarse = Partition::single(4);
        let mid = Partition::from_block_ids(&[0, 0, 1, 1]);
        let fine = Partition::discrete(4);
        assert!(fine.refines(&mid));
        assert!(mid.refines(&coarse));
        assert!(!coarse.refines(&mid));
        assert!(mid.refines(&mid));
        assert_eq!(Partition::single(0).num_blocks(), 0);
    }
}
