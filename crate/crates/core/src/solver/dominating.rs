//! The dominating-set strategy: cover every edge at a dominating set, then
//! close in on the robber in a single move.

use serde::{Deserialize, Serialize};

use crate::game::{is_contained, GameState, Turn};
use crate::graph::{domination_number, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DominatingStrategy {
    pub dominating_set: Vec<usize>,
    /// One cop per (dominating vertex, incident edge), listed per cop.
    pub cops: Vec<usize>,
    /// For each robber vertex outside the dominating set, the move of every
    /// cop as `(from, to)` edge pairs, aligned with `cops`. `None` for
    /// vertices in the set, where the placement already contains the robber.
    pub responses: Vec<Option<Vec<(usize, usize)>>>,
}

impl DominatingStrategy {
    pub fn cop_count(&self) -> usize {
        self.cops.len()
    }

    /// Replays the placement and every one-move response and reports whether
    /// each robber placement ends contained. Each cop's step is checked
    /// individually, which is exactly membership in the joint move set
    /// without enumerating it.
    pub fn verify(&self, g: &Graph) -> bool {
        let placement = GameState::new(self.cops.clone(), 0, Turn::Cops);
        (0..g.vertex_count()).all(|x| {
            let start = GameState {
                robber: x,
                ..placement.clone()
            };
            match &self.responses[x] {
                None => is_contained(g, &start),
                Some(moves) => {
                    if moves.len() != self.cops.len()
                        || moves
                            .iter()
                            .zip(&self.cops)
                            .any(|(&(from, _), &c)| from != c)
                        || !moves
                            .iter()
                            .all(|&(from, to)| from == to || g.adjacent_edges(from).contains(&to))
                    {
                        return false;
                    }
                    let after =
                        GameState::new(moves.iter().map(|&(_, to)| to).collect(), x, Turn::Robber);
                    is_contained(g, &after)
                }
            }
        })
    }
}

pub fn dominating_containment_strategy(g: &Graph) -> Result<DominatingStrategy, GraphError> {
    let (_, set) = domination_number(g)?;
    let in_set = |v: usize| set.binary_search(&v).is_ok();
    // cop i guards (owner[i], cops[i])
    let mut owner = Vec::new();
    let mut cops = Vec::new();
    for &v in &set {
        for &e in g.incident_edges(v) {
            owner.push(v);
            cops.push(e);
        }
    }
    let responses = (0..g.vertex_count())
        .map(|x| {
            if in_set(x) {
                return None;
            }
            let mut moves: Vec<(usize, usize)> = cops.iter().map(|&e| (e, e)).collect();
            for &target in g.incident_edges(x) {
                let y = g.other_endpoint(target, x);
                if in_set(y) {
                    // the cop guarding {y, x} for y is already there
                    continue;
                }
                let w = *g
                    .neighbors(y)
                    .iter()
                    .find(|&&w| in_set(w))
                    .expect("dominating set covers y");
                let wy = g.edge_index(w, y).unwrap();
                let i = (0..cops.len())
                    .find(|&i| owner[i] == w && cops[i] == wy)
                    .unwrap();
                moves[i].1 = target;
            }
            Some(moves)
        })
        .collect();
    Ok(DominatingStrategy {
        dominating_set: set,
        cops,
        responses,
    })
}
