//! Simple connected undirected graphs with a canonical edge numbering.
//!
//! Edges are stored as pairs `(u, v)` with `u < v`, sorted lexicographically,
//! so an edge's index is a pure function of the edge set. Both games refer to
//! edges by this index: cops in Containment sit on edge indices, and every
//! wire format and report uses the same numbering.

mod domination;
mod families;
mod graph6;
mod iso;

pub use domination::{dominates, domination_number, DOMINATION_MAX_VERTICES};
pub use families::{prufer_sequences, FamilySpec};
pub use graph6::{parse_graph6, parse_graph6_bytes, to_graph6, GRAPH6_MAX_VERTICES};
pub use iso::{is_isomorphic, ISOMORPHISM_MAX_VERTICES};

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("edge {{{0}, {1}}} has an endpoint outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("invalid family parameter: {0}")]
    FamilyParameter(String),
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("malformed graph6 input: {0}")]
    Graph6(String),
    #[error("{what} limited to {limit} vertices, graph has {actual}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
}

impl GraphError {
    /// Stable machine-readable code for each failure class.
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::SelfLoop(_) => "self_loop",
            GraphError::DuplicateEdge(..) => "duplicate_edge",
            GraphError::VertexOutOfRange(..) => "vertex_out_of_range",
            GraphError::Disconnected => "disconnected",
            GraphError::Empty => "empty",
            GraphError::FamilyParameter(_) => "family_parameter",
            GraphError::UnknownFamily(_) => "unknown_family",
            GraphError::Graph6(_) => "graph6",
            GraphError::TooLarge { .. } => "too_large",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    // vertex -> ascending neighbor list
    neighbors: Vec<Vec<usize>>,
    // vertex -> ascending incident edge indices
    incident: Vec<Vec<usize>>,
    // edge -> ascending indices of the other edges sharing an endpoint
    edge_adjacent: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on vertices `0..n` from unordered pairs.
    ///
    /// Pairs may be given in either orientation and in any order. Loops,
    /// repeated pairs, out-of-range endpoints and disconnected inputs are
    /// rejected.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let g = Graph::assemble(n, edges);
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    fn assemble(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut neighbors = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            neighbors[u].push(v);
            neighbors[v].push(u);
            incident[u].push(i);
            incident[v].push(i);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let edge_adjacent = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| {
                let mut adj: Vec<usize> = incident[u]
                    .iter()
                    .chain(&incident[v])
                    .copied()
                    .filter(|&j| j != i)
                    .collect();
                adj.sort_unstable();
                adj.dedup();
                adj
            })
            .collect();
        Graph {
            n,
            edges,
            neighbors,
            incident,
            edge_adjacent,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge endpoints in canonical order, indexed by edge index.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Edges sharing an endpoint with `e`, excluding `e` itself.
    pub fn adjacent_edges(&self, e: usize) -> &[usize] {
        &self.edge_adjacent[e]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Index of the edge `{u, v}`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// The endpoint of `e` that is not `v`. `v` must lie on `e`.
    pub fn other_endpoint(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        debug_assert!(a == v || b == v);
        if a == v {
            b
        } else {
            a
        }
    }

    /// Minimum vertex degree, δ(G).
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Maximum vertex degree, Δ(G).
    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.neighbors[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for root in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            let mut queue = VecDeque::from([root]);
            dist[root] = 0;
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                    break;
                }
                for &w in &self.neighbors[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Whether `v` lies on a cycle of length 3 or 4.
    pub fn on_short_cycle(&self, v: usize) -> bool {
        let nb = &self.neighbors[v];
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if self.has_edge(a, b) {
                    return true;
                }
                // a and b share a neighbor other than v
                if self.neighbors[a]
                    .iter()
                    .any(|&c| c != v && self.has_edge(c, b))
                {
                    return true;
                }
            }
        }
        false
    }

    /// Vertices within distance one of `v`, `v` first.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        std::iter::once(v)
            .chain(self.neighbors[v].iter().copied())
            .collect()
    }

    /// Recomputes every adjacency map from the edge list alone and reports
    /// whether the stored maps agree.
    pub fn incidence_consistent(&self) -> bool {
        let rebuilt = Graph::assemble(self.n, self.edges.clone());
        rebuilt == *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_connected_graph() {
        let g = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn four_cycle_has_degree_two_everywhere() {
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!((0..4).all(|v| g.degree(v) == 2));
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(g.girth(), Some(4));
    }

    #[test]
    fn rejects_bad_input_with_distinct_codes() {
        let cases = [
            (Graph::from_edge_list(4, &[(0, 1), (2, 3)]), "disconnected"),
            (Graph::from_edge_list(2, &[(0, 0), (0, 1)]), "self_loop"),
            (
                Graph::from_edge_list(2, &[(0, 1), (1, 0)]),
                "duplicate_edge",
            ),
            (Graph::from_edge_list(2, &[(0, 2)]), "vertex_out_of_range"),
            (Graph::from_edge_list(0, &[]), "empty"),
        ];
        for (res, code) in cases {
            assert_eq!(res.unwrap_err().code(), code);
        }
    }

    #[test]
    fn indexing_ignores_input_order() {
        let a = Graph::from_edge_list(3, &[(2, 1), (0, 1)]).unwrap();
        let b = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.adjacent_edges(0), &[1]);
    }

    #[test]
    fn tree_is_acyclic() {
        let g = Graph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.girth(), None);
        assert!(!g.on_short_cycle(0));
    }

    #[test]
    fn short_cycle_membership() {
        let g = FamilySpec::Cycle(5).generate().unwrap();
        assert!((0..5).all(|v| !g.on_short_cycle(v)));
        let g = FamilySpec::Cycle(4).generate().unwrap();
        assert!((0..4).all(|v| g.on_short_cycle(v)));
        let g = FamilySpec::Complete(4).generate().unwrap();
        assert!((0..4).all(|v| g.on_short_cycle(v)));
    }
}
