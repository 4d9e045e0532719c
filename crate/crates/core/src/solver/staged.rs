//! Backward propagation through a cop turn one cop at a time.
//!
//! A joint cop move is split into `k` single steps: the cops still to move
//! form a multiset `B`, those already moved a multiset `A`, and the smallest
//! member of `B` always moves next. A cop-turn state is the node `(∅, P)`
//! and its successors are the nodes `(P', ∅)`. Every intermediate node is
//! won as soon as one child is, so a newly won robber-turn state is pushed
//! back through the layers with a depth-first walk that stops at nodes
//! already won. Each intermediate node is expanded at most once per solve,
//! instead of re-enumerating the whole joint move set for every won state.

use crate::game::MultisetIndexer;

pub(super) struct Stages {
    k: usize,
    n: usize,
    // by_size[j] ranks multisets of size j
    by_size: Vec<MultisetIndexer>,
    // won[j] for 0 < j < k: nodes with j moved cops, bit per (A, B, robber)
    won: Vec<Vec<u64>>,
}

impl Stages {
    pub(super) fn node_count(sites: usize, k: usize, n: usize) -> u128 {
        (1..k)
            .map(|j| {
                crate::game::placement_count(sites, j)
                    * crate::game::placement_count(sites, k - j)
                    * n as u128
            })
            .sum()
    }

    pub(super) fn new(sites: usize, k: usize, n: usize) -> Stages {
        let by_size: Vec<MultisetIndexer> =
            (0..=k).map(|j| MultisetIndexer::new(sites, j)).collect();
        let won = (0..k)
            .map(|j| {
                if j == 0 {
                    return Vec::new();
                }
                let bits = by_size[j].count() * by_size[k - j].count() * n as u64;
                vec![0u64; bits.div_ceil(64) as usize]
            })
            .collect();
        Stages { k, n, by_size, won }
    }

    fn index(&self, moved: &[usize], unmoved: &[usize], robber: usize) -> u64 {
        let j = moved.len();
        let a = self.by_size[j].rank(moved);
        let b = self.by_size[self.k - j].rank(unmoved);
        (a * self.by_size[self.k - j].count() + b) * self.n as u64 + robber as u64
    }

    /// Marks everything that can reach the robber-turn state `(cops, robber)`
    /// within one cop turn, calling `on_start` with the placement rank of
    /// every cop-turn state found that way. `options[s]` lists the sites one
    /// step from `s`, including `s`; the relation must be symmetric.
    pub(super) fn propagate(
        &mut self,
        options: &[Vec<usize>],
        cops: &[usize],
        robber: usize,
        on_start: &mut dyn FnMut(u64),
    ) {
        let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(cops.to_vec(), Vec::new())];
        while let Some((moved, unmoved)) = stack.pop() {
            let j = moved.len();
            for (i, &dest) in moved.iter().enumerate() {
                if i > 0 && moved[i - 1] == dest {
                    continue;
                }
                let mut earlier = moved.clone();
                earlier.remove(i);
                for &origin in &options[dest] {
                    if unmoved.first().is_some_and(|&first| origin > first) {
                        continue;
                    }
                    let mut waiting = Vec::with_capacity(unmoved.len() + 1);
                    waiting.push(origin);
                    waiting.extend_from_slice(&unmoved);
                    if j == 1 {
                        on_start(self.by_size[self.k].rank(&waiting));
                        continue;
                    }
                    let idx = self.index(&earlier, &waiting, robber);
                    let word = &mut self.won[j - 1][(idx / 64) as usize];
                    let bit = 1u64 << (idx % 64);
                    if *word & bit == 0 {
                        *word |= bit;
                        stack.push((earlier.clone(), waiting));
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{containment_options, cop_joint_moves, GameState, Turn};
    use crate::graph::FamilySpec;
    use std::collections::BTreeSet;

    // with nothing yet won, one propagation reaches exactly the placements
    // whose joint move set contains the target
    #[test]
    fn reaches_exactly_the_joint_move_predecessors() {
        let g = FamilySpec::Petersen.generate().unwrap();
        let options = containment_options(&g);
        for k in 1..=3 {
            let idx = MultisetIndexer::new(g.edge_count(), k);
            for target_rank in [0, idx.count() / 2, idx.count() - 1] {
                let target = idx.unrank(target_rank);
                let mut stages = Stages::new(g.edge_count(), k, g.vertex_count());
                let mut found = BTreeSet::new();
                stages.propagate(&options, &target, 0, &mut |p| {
                    found.insert(p);
                });
                let expected: BTreeSet<u64> = (0..idx.count())
                    .filter(|&p| {
                        let s = GameState::new(idx.unrank(p), 0, Turn::Cops);
                        cop_joint_moves(&g, &s).iter().any(|t| t.cops == target)
                    })
                    .collect();
                assert_eq!(found, expected, "k={k} target={target:?}");
            }
        }
    }
}
