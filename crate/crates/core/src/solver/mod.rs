//! Exact solving by retrograde analysis.
//!
//! Every position of a `(graph, rules)` game is labelled with the least
//! fixed point of the cop attractor: terminal positions are cop wins at
//! level 0; a cop-turn position is won once any successor is won; a
//! robber-turn position is won once all of its successors are. Robber-turn
//! positions carry a counter of successors not yet known to be won, and a
//! FIFO worklist visits positions in nondecreasing level, so a cop-turn level
//! is one more than the best successor and a robber-turn level is one more
//! than the worst.
//!
//! Levels count plies. A cop-turn position at level `l` is contained after
//! `(l + 1) / 2` cop turns of optimal play.

mod audit;
mod dominating;
mod staged;
mod strategy;

pub use audit::{audit, AuditError, AuditSummary};
pub use dominating::{dominating_containment_strategy, DominatingStrategy};
pub use strategy::{
    certify_cop_strategy, certify_robber_strategy, cop_choice, extract_strategies, play,
    robber_choice, robber_placement, Certificate, Playout, PlayoutOutcome, RobberCertificate,
    StrategyTable,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{
    containment_options, placement_count, vertex_options, GameError, GameKind, GameState, Rules,
    StateCodec, Turn,
};
use crate::graph::{domination_number, to_graph6, Graph, GraphError, GRAPH6_MAX_VERTICES};
use staged::Stages;

pub const DEFAULT_STATE_CAP: u64 = 20_000_000;

const UNLABELED: u32 = u32::MAX;

// One u32 level per state costs 32 bits; allow twice that in staging bits.
const STAGED_BITS_PER_STATE: u128 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Largest state space (`placements * n * 2`) a single solve may build.
    pub state_cap: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("state space of {estimate} positions exceeds the cap of {cap}")]
    CapExceeded { estimate: u128, cap: u64 },
    #[error("the robber wins; no containment time exists")]
    RobberWins,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameValue {
    CopsWin,
    RobberWins,
}

/// A fully labelled game.
#[derive(Debug, Clone)]
pub struct SolveResult {
    graph: Graph,
    rules: Rules,
    codec: StateCodec,
    levels: Vec<u32>,
    value: GameValue,
    best_placement: Option<Vec<usize>>,
    optimal_time: Option<u32>,
}

/// Serializable digest of a [`SolveResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveSummary {
    pub graph6: Option<String>,
    pub vertices: usize,
    pub edges: usize,
    pub rules: Rules,
    pub state_count: u64,
    pub cop_win_states: u64,
    pub value: GameValue,
    pub best_placement: Option<Vec<usize>>,
    pub optimal_time: Option<u32>,
}

pub fn solve(g: &Graph, rules: &Rules, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    rules.validate()?;
    let estimate = StateCodec::estimate(g, rules);
    if estimate > config.state_cap as u128 {
        return Err(SolveError::CapExceeded {
            estimate,
            cap: config.state_cap,
        });
    }
    // the intermediate single-step layers live in bitsets; keep them within
    // a fixed multiple of the state budget
    let staged = Stages::node_count(rules.cop_sites(g), rules.cop_count, g.vertex_count());
    if staged > STAGED_BITS_PER_STATE * config.state_cap as u128 {
        return Err(SolveError::CapExceeded {
            estimate: staged / STAGED_BITS_PER_STATE,
            cap: config.state_cap,
        });
    }
    let codec = StateCodec::new(g, rules)?;
    let levels = label(g, rules, &codec);
    let mut result = SolveResult {
        graph: g.clone(),
        rules: *rules,
        codec,
        levels,
        value: GameValue::RobberWins,
        best_placement: None,
        optimal_time: None,
    };
    let mut best: Option<(u32, u64)> = None;
    for p in 0..result.codec.placement_count() {
        if let Some(t) = result.placement_time_rank(p) {
            if best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, p));
            }
        }
    }
    if let Some((t, p)) = best {
        result.value = GameValue::CopsWin;
        result.best_placement = Some(result.codec.indexer().unrank(p));
        result.optimal_time = Some(t);
    }
    Ok(result)
}

// Move structure shared by both games, specialised once per solve.
struct Arena<'a> {
    g: &'a Graph,
    kind: GameKind,
    pass: bool,
    options: Vec<Vec<usize>>,
}

impl Arena<'_> {
    fn occupied(cops: &[usize], site: usize) -> bool {
        cops.binary_search(&site).is_ok()
    }

    fn terminal(&self, cops: &[usize], v: usize) -> bool {
        match self.kind {
            GameKind::Containment => self
                .g
                .incident_edges(v)
                .iter()
                .all(|&e| Self::occupied(cops, e)),
            GameKind::VertexPursuit => Self::occupied(cops, v),
        }
    }

    fn robber_successor_count(&self, cops: &[usize], v: usize) -> usize {
        match self.kind {
            GameKind::Containment => {
                let free = self
                    .g
                    .incident_edges(v)
                    .iter()
                    .filter(|&&e| !Self::occupied(cops, e))
                    .count();
                free + self.pass as usize
            }
            GameKind::VertexPursuit => self.g.degree(v) + 1,
        }
    }

    /// Robber vertices `u` from which a robber move reaches `w`.
    fn robber_predecessors(&self, cops: &[usize], w: usize, out: &mut Vec<usize>) {
        out.clear();
        if self.pass {
            out.push(w);
        }
        match self.kind {
            GameKind::Containment => {
                for &e in self.g.incident_edges(w) {
                    if !Self::occupied(cops, e) {
                        out.push(self.g.other_endpoint(e, w));
                    }
                }
            }
            GameKind::VertexPursuit => out.extend_from_slice(self.g.neighbors(w)),
        }
    }
}

fn label(g: &Graph, rules: &Rules, codec: &StateCodec) -> Vec<u32> {
    let arena = Arena {
        g,
        kind: rules.kind,
        pass: rules.robber_may_pass || rules.kind == GameKind::VertexPursuit,
        options: match rules.kind {
            GameKind::Containment => containment_options(g),
            GameKind::VertexPursuit => vertex_options(g),
        },
    };
    let n = g.vertex_count();
    let k = rules.cop_count;
    let placements = codec.placement_count();
    let indexer = codec.indexer();
    let mut levels = vec![UNLABELED; codec.state_count() as usize];
    let mut counters = vec![0u8; placements as usize * n];
    let mut queue: Vec<u64> = Vec::new();
    let mut cops = vec![0usize; k];

    for p in 0..placements {
        indexer.unrank_into(p, &mut cops);
        for v in 0..n {
            if arena.terminal(&cops, v) {
                for turn in [Turn::Cops, Turn::Robber] {
                    let key = codec.key(p, v, turn);
                    levels[key as usize] = 0;
                    queue.push(key);
                }
            } else {
                counters[p as usize * n + v] = arena.robber_successor_count(&cops, v) as u8;
            }
        }
    }

    let mut stages = Stages::new(rules.cop_sites(g), k, n);
    let mut head = 0;
    let mut preds = Vec::new();
    while head < queue.len() {
        let key = queue[head];
        head += 1;
        let next = levels[key as usize] + 1;
        let (p, v, turn) = codec.split(key);
        indexer.unrank_into(p, &mut cops);
        match turn {
            Turn::Cops => {
                arena.robber_predecessors(&cops, v, &mut preds);
                for &u in &preds {
                    let rk = codec.key(p, u, Turn::Robber) as usize;
                    if levels[rk] != UNLABELED {
                        continue;
                    }
                    let c = &mut counters[p as usize * n + u];
                    *c -= 1;
                    if *c == 0 {
                        levels[rk] = next;
                        queue.push(rk as u64);
                    }
                }
            }
            Turn::Robber => {
                stages.propagate(&arena.options, &cops, v, &mut |start| {
                    let ck = codec.key(start, v, Turn::Cops) as usize;
                    if levels[ck] == UNLABELED {
                        levels[ck] = next;
                        queue.push(ck as u64);
                    }
                });
            }
        }
    }
    levels
}

impl SolveResult {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }

    pub fn codec(&self) -> &StateCodec {
        &self.codec
    }

    pub fn state_count(&self) -> u64 {
        self.codec.state_count()
    }

    pub fn value(&self) -> GameValue {
        self.value
    }

    pub fn cops_win(&self) -> bool {
        self.value == GameValue::CopsWin
    }

    pub fn best_placement(&self) -> Option<&[usize]> {
        self.best_placement.as_deref()
    }

    /// Cop turns to containment from the best placement against the
    /// robber's best reply, when the cops win.
    pub fn optimal_time(&self) -> Option<u32> {
        self.optimal_time
    }

    pub fn level_by_key(&self, key: u64) -> Option<u32> {
        let l = self.levels[key as usize];
        (l != UNLABELED).then_some(l)
    }

    pub fn is_cop_win_key(&self, key: u64) -> bool {
        self.levels[key as usize] != UNLABELED
    }

    /// Fixed-point level of a cop-win state, `None` outside the cop-win region.
    pub fn level(&self, s: &GameState) -> Option<u32> {
        self.codec
            .encode(s)
            .ok()
            .and_then(|key| self.level_by_key(key))
    }

    pub fn is_cop_win(&self, s: &GameState) -> bool {
        self.level(s).is_some()
    }

    /// Cop turns to containment from a cop-turn state, under optimal play.
    pub fn time_to_win(&self, s: &GameState) -> Option<u32> {
        debug_assert_eq!(s.turn, Turn::Cops);
        self.level(s).map(|l| l.div_ceil(2))
    }

    /// Worst case over robber placements of the time to win after the cops
    /// place on `placement`; `None` if some robber placement escapes.
    pub fn placement_time(&self, placement: &[usize]) -> Option<u32> {
        let mut sorted = placement.to_vec();
        sorted.sort_unstable();
        if sorted.len() != self.rules.cop_count
            || sorted
                .last()
                .is_some_and(|&c| c >= self.codec.indexer().sites())
        {
            return None;
        }
        self.placement_time_rank(self.codec.indexer().rank(&sorted))
    }

    fn placement_time_rank(&self, p: u64) -> Option<u32> {
        (0..self.graph.vertex_count())
            .map(|v| self.level_by_key(self.codec.key(p, v, Turn::Cops)))
            .try_fold(0u32, |acc, l| l.map(|l| acc.max(l.div_ceil(2))))
    }

    /// Placements from which the cops win against every robber placement.
    pub fn winning_placements(&self) -> Vec<Vec<usize>> {
        (0..self.codec.placement_count())
            .filter(|&p| self.placement_time_rank(p).is_some())
            .map(|p| self.codec.indexer().unrank(p))
            .collect()
    }

    pub fn cop_win_state_count(&self) -> u64 {
        self.levels.iter().filter(|&&l| l != UNLABELED).count() as u64
    }

    /// Raw level table, indexed by state key; `u32::MAX` marks robber wins.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn summary(&self) -> SolveSummary {
        SolveSummary {
            graph6: (self.graph.vertex_count() <= GRAPH6_MAX_VERTICES)
                .then(|| to_graph6(&self.graph)),
            vertices: self.graph.vertex_count(),
            edges: self.graph.edge_count(),
            rules: self.rules,
            state_count: self.state_count(),
            cop_win_states: self.cop_win_state_count(),
            value: self.value,
            best_placement: self.best_placement.clone(),
            optimal_time: self.optimal_time,
        }
    }
}

/// Optimal containment time of a cop-win result.
pub fn containment_time(result: &SolveResult) -> Result<u32, SolveError> {
    result.optimal_time.ok_or(SolveError::RobberWins)
}

/// Outcome of an ascending search for the least winning cop count.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Exact {
        value: usize,
        result: Box<SolveResult>,
        /// Cop counts tried and lost, ascending.
        robber_wins: Vec<usize>,
    },
    /// The state cap stopped the search; the answer lies in `low..=high`.
    Bracket {
        low: usize,
        high: usize,
        robber_wins: Vec<usize>,
        estimate: u128,
    },
}

impl SearchOutcome {
    pub fn value(&self) -> Option<usize> {
        match self {
            SearchOutcome::Exact { value, .. } => Some(*value),
            SearchOutcome::Bracket { .. } => None,
        }
    }

    pub fn result(&self) -> Option<&SolveResult> {
        match self {
            SearchOutcome::Exact { result, .. } => Some(result),
            SearchOutcome::Bracket { .. } => None,
        }
    }

    pub fn robber_wins(&self) -> &[usize] {
        match self {
            SearchOutcome::Exact { robber_wins, .. }
            | SearchOutcome::Bracket { robber_wins, .. } => robber_wins,
        }
    }

    pub fn bounds(&self) -> (usize, usize) {
        match *self {
            SearchOutcome::Exact { value, .. } => (value, value),
            SearchOutcome::Bracket { low, high, .. } => (low, high),
        }
    }
}

fn ascending_search(
    g: &Graph,
    base: Rules,
    start: usize,
    upper: usize,
    config: &SolverConfig,
) -> Result<SearchOutcome, SolveError> {
    let mut robber_wins = Vec::new();
    for k in start..=upper {
        let rules = base.with_cops(k);
        match solve(g, &rules, config) {
            Ok(result) if result.cops_win() => {
                return Ok(SearchOutcome::Exact {
                    value: k,
                    result: Box::new(result),
                    robber_wins,
                })
            }
            Ok(_) => robber_wins.push(k),
            Err(SolveError::CapExceeded { estimate, .. }) => {
                return Ok(SearchOutcome::Bracket {
                    low: k,
                    high: upper,
                    robber_wins,
                    estimate,
                })
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("{upper} cops always win, but the search found otherwise")
}

/// Cops needed by the dominating-set strategy: the degree sum of a minimum
/// dominating set, at most γ(G)·Δ(G).
pub fn dominating_upper_bound(g: &Graph) -> Result<usize, GraphError> {
    let (_, set) = domination_number(g)?;
    Ok(set.iter().map(|&v| g.degree(v)).sum())
}

/// Containability number ξ(G): the least k for which k edge-cops win.
///
/// The search starts at δ(G), below which no position is terminal, and is
/// bounded by [`dominating_upper_bound`], which wins in either variant.
pub fn xi(
    g: &Graph,
    robber_may_pass: bool,
    config: &SolverConfig,
) -> Result<SearchOutcome, SolveError> {
    let base = Rules {
        robber_may_pass,
        ..Rules::containment(1)
    };
    let upper = dominating_upper_bound(g)?;
    ascending_search(g, base, g.min_degree().max(1), upper, config)
}

/// Cop number c(G) of classic Cops and Robbers, searched upward from one
/// cop. Cops on a minimum dominating set always win, bounding the search.
pub fn cop_number(g: &Graph, config: &SolverConfig) -> Result<SearchOutcome, SolveError> {
    let (gamma, _) = domination_number(g)?;
    ascending_search(g, Rules::vertex_pursuit(1), 1, gamma, config)
}

/// Exact state count a solve with `rules` would build.
pub fn estimate_states(g: &Graph, rules: &Rules) -> u128 {
    placement_count(rules.cop_sites(g), rules.cop_count) * g.vertex_count() as u128 * 2
}
