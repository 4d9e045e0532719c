//! Exact minimum dominating set by branch and bound over vertex bitmasks.

use super::{Graph, GraphError};

pub const DOMINATION_MAX_VERTICES: usize = 64;

/// Whether every vertex is in `set` or adjacent to a member of it.
pub fn dominates(g: &Graph, set: &[usize]) -> bool {
    (0..g.vertex_count())
        .all(|v| set.contains(&v) || g.neighbors(v).iter().any(|w| set.contains(w)))
}

/// γ(G) together with a minimum dominating set (ascending vertex order).
pub fn domination_number(g: &Graph) -> Result<(usize, Vec<usize>), GraphError> {
    let n = g.vertex_count();
    if n > DOMINATION_MAX_VERTICES {
        return Err(GraphError::TooLarge {
            what: "domination search",
            limit: DOMINATION_MAX_VERTICES,
            actual: n,
        });
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let closed: Vec<u64> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .fold(1u64 << v, |acc, &w| acc | (1u64 << w))
        })
        .collect();
    let mut search = Search {
        closed: &closed,
        full,
        max_cover: g.max_degree() as u32 + 1,
        best: greedy(&closed, full),
        chosen: Vec::new(),
    };
    search.branch(0);
    let mut best = search.best;
    best.sort_unstable();
    Ok((best.len(), best))
}

fn greedy(closed: &[u64], full: u64) -> Vec<usize> {
    let mut covered = 0u64;
    let mut picked = Vec::new();
    while covered != full {
        let v = (0..closed.len())
            .max_by_key(|&v| ((closed[v] & !covered).count_ones(), std::cmp::Reverse(v)))
            .unwrap();
        picked.push(v);
        covered |= closed[v];
    }
    picked
}

struct Search<'a> {
    closed: &'a [u64],
    full: u64,
    max_cover: u32,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn branch(&mut self, covered: u64) {
        if covered == self.full {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        let missing = (self.full & !covered).count_ones();
        let lower = self.chosen.len() + missing.div_ceil(self.max_cover) as usize;
        if lower >= self.best.len() {
            return;
        }
        // the first undominated vertex must be covered by something in its closed neighbourhood
        let u = (self.full & !covered).trailing_zeros() as usize;
        let mut options: Vec<usize> = (0..self.closed.len())
            .filter(|&w| self.closed[w] >> u & 1 == 1)
            .collect();
        options.sort_by_key(|&w| std::cmp::Reverse((self.closed[w] & !covered).count_ones()));
        for w in options {
            self.chosen.push(w);
            self.branch(covered | self.closed[w]);
            self.chosen.pop();
        }
    }
}
