//! Rules and move generation for Containment and classic vertex pursuit.
//!
//! Both games share one position shape: a sorted multiset of cop locations,
//! a robber vertex and the side to move. In Containment a cop location is an
//! edge index; in vertex pursuit it is a vertex. Play begins with the cops
//! placing, then the robber placing, then the cops moving.

mod multiset;

pub use multiset::MultisetIndexer;

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    /// Cops on edges, robber blocked by occupied edges, cops win by
    /// occupying every edge at the robber's vertex.
    Containment,
    /// Classic Cops and Robbers: everyone on vertices, capture by collocation.
    VertexPursuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Rules {
    pub kind: GameKind,
    pub cop_count: usize,
    /// Only meaningful for Containment; vertex pursuit always allows staying.
    pub robber_may_pass: bool,
}

impl Rules {
    pub fn containment(cop_count: usize) -> Rules {
        Rules {
            kind: GameKind::Containment,
            cop_count,
            robber_may_pass: true,
        }
    }

    /// Containment where the robber must move every turn.
    pub fn containment_no_pass(cop_count: usize) -> Rules {
        Rules {
            robber_may_pass: false,
            ..Rules::containment(cop_count)
        }
    }

    pub fn vertex_pursuit(cop_count: usize) -> Rules {
        Rules {
            kind: GameKind::VertexPursuit,
            cop_count,
            robber_may_pass: true,
        }
    }

    pub fn with_cops(self, cop_count: usize) -> Rules {
        Rules { cop_count, ..self }
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.cop_count == 0 {
            return Err(GameError::NoCops);
        }
        if self.kind == GameKind::VertexPursuit && !self.robber_may_pass {
            return Err(GameError::InvalidRules(
                "vertex pursuit always lets the robber stay".into(),
            ));
        }
        Ok(())
    }

    /// Number of places a single cop can stand on `g`.
    pub fn cop_sites(&self, g: &Graph) -> usize {
        match self.kind {
            GameKind::Containment => g.edge_count(),
            GameKind::VertexPursuit => g.vertex_count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Turn {
    Cops,
    Robber,
}

impl Turn {
    pub fn flip(self) -> Turn {
        match self {
            Turn::Cops => Turn::Robber,
            Turn::Robber => Turn::Cops,
        }
    }
}

/// A position in either game. `cops` is kept sorted; repeated entries mean
/// several cops share a location.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameState {
    pub cops: Vec<usize>,
    pub robber: usize,
    pub turn: Turn,
}

impl GameState {
    /// Builds a state, sorting the cop list.
    pub fn new(mut cops: Vec<usize>, robber: usize, turn: Turn) -> GameState {
        cops.sort_unstable();
        GameState { cops, robber, turn }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("at least one cop is required")]
    NoCops,
    #[error("invalid rules: {0}")]
    InvalidRules(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("it is not the {0:?} side's turn")]
    WrongTurn(Turn),
    #[error("the robber is already contained")]
    RobberContained,
    #[error("state space of {0} positions does not fit a 64-bit key")]
    KeyOverflow(u128),
}

pub fn validate_state(g: &Graph, rules: &Rules, s: &GameState) -> Result<(), GameError> {
    rules.validate()?;
    if s.cops.len() != rules.cop_count {
        return Err(GameError::InvalidState(format!(
            "{} cops listed, rules say {}",
            s.cops.len(),
            rules.cop_count
        )));
    }
    if !s.cops.windows(2).all(|w| w[0] <= w[1]) {
        return Err(GameError::InvalidState("cop list not sorted".into()));
    }
    let sites = rules.cop_sites(g);
    if let Some(&c) = s.cops.iter().find(|&&c| c >= sites) {
        return Err(GameError::InvalidState(format!(
            "cop site {c} out of range"
        )));
    }
    if s.robber >= g.vertex_count() {
        return Err(GameError::InvalidState(format!(
            "robber vertex {} out of range",
            s.robber
        )));
    }
    Ok(())
}

/// True iff every edge at the robber's vertex carries at least one cop.
pub fn is_contained(g: &Graph, s: &GameState) -> bool {
    g.incident_edges(s.robber)
        .iter()
        .all(|e| s.cops.binary_search(e).is_ok())
}

/// Vertex pursuit: a cop stands on the robber's vertex.
pub fn is_captured(s: &GameState) -> bool {
    s.cops.binary_search(&s.robber).is_ok()
}

pub fn is_terminal(g: &Graph, rules: &Rules, s: &GameState) -> bool {
    match rules.kind {
        GameKind::Containment => is_contained(g, s),
        GameKind::VertexPursuit => is_captured(s),
    }
}

/// Robber successors in Containment, ordered by target vertex. Moving along
/// an occupied edge is impossible; staying put is allowed iff the rules
/// permit passing.
pub fn robber_moves(g: &Graph, rules: &Rules, s: &GameState) -> Result<Vec<GameState>, GameError> {
    if s.turn != Turn::Robber {
        return Err(GameError::WrongTurn(Turn::Robber));
    }
    if is_contained(g, s) {
        return Err(GameError::RobberContained);
    }
    let mut targets: Vec<usize> = g
        .incident_edges(s.robber)
        .iter()
        .filter(|e| s.cops.binary_search(e).is_err())
        .map(|&e| g.other_endpoint(e, s.robber))
        .collect();
    if rules.robber_may_pass {
        targets.push(s.robber);
    }
    targets.sort_unstable();
    Ok(targets
        .into_iter()
        .map(|robber| GameState {
            cops: s.cops.clone(),
            robber,
            turn: Turn::Cops,
        })
        .collect())
}

/// Every distinct joint cop move in Containment: each cop stays or slides
/// to an edge sharing an endpoint. Sorted by cop multiset.
pub fn cop_joint_moves(g: &Graph, s: &GameState) -> Vec<GameState> {
    let options = containment_options(g);
    joint_cop_successors(&options, s)
}

/// Moves in vertex pursuit for whichever side is on turn. Cops each stay or
/// step to a neighbour; the robber does the same, unhindered.
pub fn vertex_moves(g: &Graph, s: &GameState) -> Vec<GameState> {
    match s.turn {
        Turn::Cops => joint_cop_successors(&vertex_options(g), s),
        Turn::Robber => {
            let mut targets = g.closed_neighborhood(s.robber);
            targets.sort_unstable();
            targets
                .into_iter()
                .map(|robber| GameState {
                    cops: s.cops.clone(),
                    robber,
                    turn: Turn::Cops,
                })
                .collect()
        }
    }
}

/// All successors of a non-terminal state under `rules`; empty for a
/// terminal one.
pub fn successors(g: &Graph, rules: &Rules, s: &GameState) -> Vec<GameState> {
    if is_terminal(g, rules, s) {
        return Vec::new();
    }
    match (rules.kind, s.turn) {
        (GameKind::Containment, Turn::Cops) => cop_joint_moves(g, s),
        (GameKind::Containment, Turn::Robber) => {
            robber_moves(g, rules, s).expect("non-terminal robber state")
        }
        (GameKind::VertexPursuit, _) => vertex_moves(g, s),
    }
}

/// Every cop multiset of size `k`, in rank order (`C(sites + k - 1, k)` of them).
pub fn initial_cop_placements(g: &Graph, rules: &Rules) -> impl Iterator<Item = Vec<usize>> {
    let idx = MultisetIndexer::new(rules.cop_sites(g), rules.cop_count);
    (0..idx.count()).map(move |r| idx.unrank(r))
}

pub fn initial_robber_choices(g: &Graph) -> Range<usize> {
    0..g.vertex_count()
}

/// Per-site move options, the site itself first.
pub(crate) fn containment_options(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.edge_count())
        .map(|e| {
            std::iter::once(e)
                .chain(g.adjacent_edges(e).iter().copied())
                .collect()
        })
        .collect()
}

pub(crate) fn vertex_options(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.vertex_count())
        .map(|v| g.closed_neighborhood(v))
        .collect()
}

fn joint_cop_successors(options: &[Vec<usize>], s: &GameState) -> Vec<GameState> {
    let mut out = Vec::new();
    let mut scratch = vec![0; s.cops.len()];
    for_each_joint_move(options, &s.cops, &mut scratch, &mut |moved| {
        out.push(moved.to_vec());
    });
    out.sort_unstable();
    out.dedup();
    out.into_iter()
        .map(|cops| GameState {
            cops,
            robber: s.robber,
            turn: Turn::Robber,
        })
        .collect()
}

/// Calls `visit` with the sorted result of every joint move of `cops`
/// (which must be sorted). Cops sharing a site pick options in
/// nondecreasing order, so permutations among them are produced once; other
/// coincidences can still repeat a result.
pub(crate) fn for_each_joint_move(
    options: &[Vec<usize>],
    cops: &[usize],
    scratch: &mut [usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    let mut choice = vec![0usize; cops.len()];
    let mut sorted = vec![0usize; cops.len()];
    recurse(options, cops, 0, &mut choice, scratch, &mut sorted, visit);
}

fn recurse(
    options: &[Vec<usize>],
    cops: &[usize],
    i: usize,
    choice: &mut [usize],
    placed: &mut [usize],
    sorted: &mut [usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    if i == cops.len() {
        sorted.copy_from_slice(placed);
        sorted.sort_unstable();
        visit(sorted);
        return;
    }
    let opts = &options[cops[i]];
    let start = if i > 0 && cops[i - 1] == cops[i] {
        choice[i - 1]
    } else {
        0
    };
    for (j, &o) in opts.iter().enumerate().skip(start) {
        choice[i] = j;
        placed[i] = o;
        recurse(options, cops, i + 1, choice, placed, sorted, visit);
    }
}

/// Bijective integer keys for the states of one `(graph, rules)` pair:
/// `key = (rank(cops) * n + robber) * 2 + turn`.
#[derive(Debug, Clone)]
pub struct StateCodec {
    indexer: MultisetIndexer,
    vertices: usize,
    rules: Rules,
    state_count: u64,
}

impl StateCodec {
    pub fn new(g: &Graph, rules: &Rules) -> Result<StateCodec, GameError> {
        rules.validate()?;
        let total = StateCodec::estimate(g, rules);
        let state_count = u64::try_from(total).map_err(|_| GameError::KeyOverflow(total))?;
        Ok(StateCodec {
            indexer: MultisetIndexer::new(rules.cop_sites(g), rules.cop_count),
            vertices: g.vertex_count(),
            rules: *rules,
            state_count,
        })
    }

    /// Exact number of states `placements * n * 2`, computed without overflow.
    pub fn estimate(g: &Graph, rules: &Rules) -> u128 {
        placement_count(rules.cop_sites(g), rules.cop_count) * g.vertex_count() as u128 * 2
    }

    pub fn state_count(&self) -> u64 {
        self.state_count
    }

    pub fn placement_count(&self) -> u64 {
        self.indexer.count()
    }

    pub fn indexer(&self) -> &MultisetIndexer {
        &self.indexer
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }

    /// Encodes a state; the cop list may be given in any order.
    pub fn encode(&self, s: &GameState) -> Result<u64, GameError> {
        if s.cops.len() != self.rules.cop_count {
            return Err(GameError::InvalidState("wrong number of cops".into()));
        }
        let mut cops = s.cops.clone();
        cops.sort_unstable();
        if cops.last().is_some_and(|&c| c >= self.indexer.sites()) || s.robber >= self.vertices {
            return Err(GameError::InvalidState("index out of range".into()));
        }
        Ok(self.key(self.indexer.rank(&cops), s.robber, s.turn))
    }

    pub fn decode(&self, key: u64) -> Result<GameState, GameError> {
        if key >= self.state_count {
            return Err(GameError::InvalidState(format!("key {key} out of range")));
        }
        let (rank, robber, turn) = self.split(key);
        Ok(GameState {
            cops: self.indexer.unrank(rank),
            robber,
            turn,
        })
    }

    #[inline]
    pub fn key(&self, placement: u64, robber: usize, turn: Turn) -> u64 {
        (placement * self.vertices as u64 + robber as u64) * 2 + (turn == Turn::Robber) as u64
    }

    #[inline]
    pub fn split(&self, key: u64) -> (u64, usize, Turn) {
        let turn = if key & 1 == 1 {
            Turn::Robber
        } else {
            Turn::Cops
        };
        let rest = key >> 1;
        let n = self.vertices as u64;
        (rest / n, (rest % n) as usize, turn)
    }
}

/// `C(sites + k - 1, k)` in 128-bit arithmetic, saturating.
pub fn placement_count(sites: usize, k: usize) -> u128 {
    if sites == 0 {
        return (k == 0) as u128;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = match acc.checked_mul(sites as u128 + i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}
