//! Play sessions: a human on one side, the solved strategy on the other.
//!
//! Every move, human or engine, is checked against the game kernel before it
//! is applied. Engine cops follow the extracted cop table from their
//! placement; the engine robber follows the robber table.

use std::collections::HashSet;
use std::sync::Arc;

use containment::game::{is_contained, robber_moves, successors};
use containment::solver::{
    cop_choice, extract_strategies, robber_choice, robber_placement, StrategyTable,
};
use containment::{GameState, Graph, Rules, SolveResult, Turn};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

/// A solved game with both strategy tables materialised.
pub struct Engine {
    pub result: SolveResult,
    pub cops: StrategyTable,
    pub robber: StrategyTable,
}

impl Engine {
    pub fn new(result: SolveResult) -> Engine {
        let (cops, robber) = extract_strategies(&result);
        Engine {
            result,
            cops,
            robber,
        }
    }

    fn graph(&self) -> &Graph {
        self.result.graph()
    }

    fn rules(&self) -> &Rules {
        self.result.rules()
    }

    /// The cops' placement: the best one, or the first when the robber wins.
    pub fn cop_placement(&self) -> Vec<usize> {
        self.result
            .best_placement()
            .map(<[usize]>::to_vec)
            .unwrap_or_else(|| self.result.codec().indexer().unrank(0))
    }

    fn table_reply(&self, table: &StrategyTable, s: &GameState) -> Option<GameState> {
        let codec = self.result.codec();
        let key = codec.encode(s).ok()?;
        codec.decode(table.get(key)?).ok()
    }

    pub fn cop_reply(&self, s: &GameState) -> GameState {
        self.table_reply(&self.cops, s)
            .unwrap_or_else(|| cop_choice(&self.result, s))
    }

    pub fn robber_reply(&self, s: &GameState) -> GameState {
        self.table_reply(&self.robber, s)
            .unwrap_or_else(|| robber_choice(&self.result, s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Pass,
    NoPass,
}

impl Variant {
    pub fn rules(self, k: usize) -> Rules {
        match self {
            Variant::Pass => Rules::containment(k),
            Variant::NoPass => Rules::containment_no_pass(k),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Pass => "pass",
            Variant::NoPass => "no_pass",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Cops,
    Robber,
}

impl From<Turn> for Side {
    fn from(t: Turn) -> Side {
        match t {
            Turn::Cops => Side::Cops,
            Turn::Robber => Side::Robber,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    CopPlacement,
    RobberPlacement,
    InPlay,
    Finished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ongoing,
    CopsWin,
    /// A position outside the cop-win region recurred: the robber can
    /// evade forever from here.
    RobberWinsCertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PassWord {
    #[serde(rename = "pass")]
    Pass,
}

/// Where the robber goes: a neighbouring vertex, or `"pass"` to stay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RobberTarget {
    Vertex(usize),
    Pass(PassWord),
}

/// A move on the wire. Cop moves list `(from, to)` edge indices per cop,
/// with staying encoded as `from == to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Move {
    PlaceCops(Vec<usize>),
    PlaceRobber(usize),
    Cops(Vec<(usize, usize)>),
    Robber(RobberTarget),
}

/// The moves available to the side to act.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveSet {
    /// Any multiset of `count` edge indices below `edge_count`.
    PlaceCops {
        count: usize,
        #[serde(rename = "edgeCount")]
        edge_count: usize,
    },
    /// One of the listed placements.
    PlaceCopsAmong {
        placements: Vec<Vec<usize>>,
    },
    PlaceRobber {
        vertices: Vec<usize>,
    },
    Cops {
        moves: Vec<Vec<(usize, usize)>>,
    },
    Robber {
        moves: Vec<RobberTarget>,
    },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Ply {
    pub side: Side,
    pub by_human: bool,
    #[serde(rename = "move")]
    pub mv: Move,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionOptions {
    pub k: usize,
    pub variant: Variant,
    pub human_role: Side,
    #[serde(default)]
    pub hints: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    Finished,
    Illegal(String),
}

pub struct Session {
    pub id: Uuid,
    pub source: String,
    pub options: SessionOptions,
    engine: Arc<Engine>,
    phase: Phase,
    cops: Option<Vec<usize>>,
    robber: Option<usize>,
    turn: Turn,
    status: Status,
    cop_turns: u32,
    history: Vec<Ply>,
    seen: HashSet<GameState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphView {
    pub source: String,
    pub graph6: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub id: Uuid,
    pub graph: GraphView,
    pub k: usize,
    pub variant: Variant,
    pub human_role: Side,
    pub phase: Phase,
    pub to_move: Option<Side>,
    pub cops: Option<Vec<usize>>,
    pub robber: Option<usize>,
    pub status: Status,
    pub cop_turns: u32,
    pub legal_moves: MoveSet,
    pub hint: Option<MoveSet>,
    pub history: Vec<Ply>,
}

impl Session {
    /// Opens a session; when the human plays the robber the engine places
    /// its cops at once.
    pub fn new(source: String, options: SessionOptions, engine: Arc<Engine>) -> Session {
        let mut s = Session {
            id: Uuid::new_v4(),
            source,
            options,
            engine,
            phase: Phase::CopPlacement,
            cops: None,
            robber: None,
            turn: Turn::Cops,
            status: Status::Ongoing,
            cop_turns: 0,
            history: Vec::new(),
            seen: HashSet::new(),
        };
        s.engine_acts();
        s
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn history(&self) -> &[Ply] {
        &self.history
    }

    /// The current position once both sides have placed.
    pub fn state(&self) -> Option<GameState> {
        Some(GameState::new(self.cops.clone()?, self.robber?, self.turn))
    }

    fn acting_side(&self) -> Option<Side> {
        match self.phase {
            Phase::CopPlacement => Some(Side::Cops),
            Phase::RobberPlacement => Some(Side::Robber),
            Phase::InPlay => Some(self.turn.into()),
            Phase::Finished => None,
        }
    }

    fn human_to_act(&self) -> bool {
        self.acting_side() == Some(self.options.human_role)
    }

    pub fn legal_moves(&self) -> MoveSet {
        let g = self.engine.graph();
        match self.phase {
            Phase::CopPlacement => MoveSet::PlaceCops {
                count: self.options.k,
                edge_count: g.edge_count(),
            },
            Phase::RobberPlacement => MoveSet::PlaceRobber {
                vertices: (0..g.vertex_count()).collect(),
            },
            Phase::InPlay => {
                let s = self.state().expect("in play");
                self.moves_from(&s, successors(g, self.engine.rules(), &s))
            }
            Phase::Finished => MoveSet::None,
        }
    }

    // wire form of the successor states `next` of `s`
    fn moves_from(&self, s: &GameState, next: Vec<GameState>) -> MoveSet {
        match s.turn {
            Turn::Cops => MoveSet::Cops {
                moves: next
                    .iter()
                    .map(|t| pair_up(self.engine.graph(), &s.cops, &t.cops).expect("kernel move"))
                    .collect(),
            },
            Turn::Robber => MoveSet::Robber {
                moves: next.iter().map(|t| robber_target(s, t)).collect(),
            },
        }
    }

    /// Moves that keep the mover's game value, when hints are on and the
    /// human is to act.
    pub fn hint(&self) -> Option<MoveSet> {
        if !self.options.hints || !self.human_to_act() {
            return None;
        }
        let r = &self.engine.result;
        let g = self.engine.graph();
        Some(match self.phase {
            Phase::CopPlacement => {
                let winning = r.winning_placements();
                if winning.is_empty() {
                    self.legal_moves()
                } else {
                    MoveSet::PlaceCopsAmong {
                        placements: winning,
                    }
                }
            }
            Phase::RobberPlacement => {
                let cops = self.cops.clone().expect("placed");
                let all: Vec<usize> = (0..g.vertex_count()).collect();
                let safe: Vec<usize> = all
                    .iter()
                    .copied()
                    .filter(|&v| !r.is_cop_win(&GameState::new(cops.clone(), v, Turn::Cops)))
                    .collect();
                MoveSet::PlaceRobber {
                    vertices: if safe.is_empty() { all } else { safe },
                }
            }
            Phase::InPlay => {
                let s = self.state().expect("in play");
                let next = successors(g, self.engine.rules(), &s);
                let keep: Vec<GameState> = if r.is_cop_win(&s) == (s.turn == Turn::Cops) {
                    // the mover is winning: stay on the winning side
                    next.iter()
                        .filter(|t| r.is_cop_win(t) == (s.turn == Turn::Cops))
                        .cloned()
                        .collect()
                } else {
                    next.clone()
                };
                self.moves_from(&s, keep)
            }
            Phase::Finished => MoveSet::None,
        })
    }

    pub fn view(&self) -> SessionView {
        let g = self.engine.graph();
        SessionView {
            id: self.id,
            graph: GraphView {
                source: self.source.clone(),
                graph6: containment::graph::to_graph6(g),
                vertices: g.vertex_count(),
                edges: g.edges().to_vec(),
            },
            k: self.options.k,
            variant: self.options.variant,
            human_role: self.options.human_role,
            phase: self.phase,
            to_move: self.acting_side(),
            cops: self.cops.clone(),
            robber: self.robber,
            status: self.status,
            cop_turns: self.cop_turns,
            legal_moves: self.legal_moves(),
            hint: self.hint(),
            history: self.history.clone(),
        }
    }

    /// Applies a human move, then the engine's replies until the human is
    /// to act again or the game is over.
    pub fn play(&mut self, mv: Move) -> Result<(), MoveError> {
        if self.phase == Phase::Finished {
            return Err(MoveError::Finished);
        }
        if !self.human_to_act() {
            return Err(MoveError::Illegal("not the human side's turn".into()));
        }
        self.apply(mv, true)?;
        self.engine_acts();
        Ok(())
    }

    fn engine_acts(&mut self) {
        while self.phase != Phase::Finished && !self.human_to_act() {
            let mv = self.engine_move();
            self.apply(mv, false).expect("engine moves are legal");
        }
    }

    fn engine_move(&self) -> Move {
        match self.phase {
            Phase::CopPlacement => Move::PlaceCops(self.engine.cop_placement()),
            Phase::RobberPlacement => Move::PlaceRobber(robber_placement(
                &self.engine.result,
                self.cops.as_ref().expect("placed"),
            )),
            Phase::InPlay => {
                let s = self.state().expect("in play");
                match s.turn {
                    Turn::Cops => {
                        let t = self.engine.cop_reply(&s);
                        Move::Cops(
                            pair_up(self.engine.graph(), &s.cops, &t.cops).expect("kernel move"),
                        )
                    }
                    Turn::Robber => Move::Robber(robber_target(&s, &self.engine.robber_reply(&s))),
                }
            }
            Phase::Finished => unreachable!("finished games take no moves"),
        }
    }

    fn apply(&mut self, mv: Move, by_human: bool) -> Result<(), MoveError> {
        let g = self.engine.graph();
        let rules = *self.engine.rules();
        let side = self.acting_side().ok_or(MoveError::Finished)?;
        match (&mv, self.phase) {
            (Move::PlaceCops(edges), Phase::CopPlacement) => {
                if edges.len() != rules.cop_count {
                    return Err(MoveError::Illegal(format!(
                        "{} cops placed, the game has {}",
                        edges.len(),
                        rules.cop_count
                    )));
                }
                if let Some(e) = edges.iter().find(|&&e| e >= g.edge_count()) {
                    return Err(MoveError::Illegal(format!("no edge {e}")));
                }
                let mut cops = edges.clone();
                cops.sort_unstable();
                self.cops = Some(cops);
                self.phase = Phase::RobberPlacement;
            }
            (Move::PlaceRobber(v), Phase::RobberPlacement) => {
                if *v >= g.vertex_count() {
                    return Err(MoveError::Illegal(format!("no vertex {v}")));
                }
                self.robber = Some(*v);
                self.phase = Phase::InPlay;
                self.turn = Turn::Cops;
            }
            (Move::Cops(pairs), Phase::InPlay) if self.turn == Turn::Cops => {
                let s = self.state().expect("in play");
                let mut from: Vec<usize> = pairs.iter().map(|p| p.0).collect();
                from.sort_unstable();
                if from != s.cops {
                    return Err(MoveError::Illegal(format!(
                        "moves start from {from:?}, cops stand on {:?}",
                        s.cops
                    )));
                }
                if let Some(&(a, b)) = pairs
                    .iter()
                    .find(|&&(a, b)| a != b && !g.adjacent_edges(a).contains(&b))
                {
                    return Err(MoveError::Illegal(format!(
                        "edge {b} is not adjacent to edge {a}"
                    )));
                }
                let next =
                    GameState::new(pairs.iter().map(|p| p.1).collect(), s.robber, Turn::Robber);
                debug_assert!(successors(g, &rules, &s).contains(&next));
                self.cops = Some(next.cops);
                self.turn = Turn::Robber;
                self.cop_turns += 1;
            }
            (Move::Robber(target), Phase::InPlay) if self.turn == Turn::Robber => {
                let s = self.state().expect("in play");
                let options =
                    robber_moves(g, &rules, &s).map_err(|e| MoveError::Illegal(e.to_string()))?;
                let to = match *target {
                    RobberTarget::Pass(_) => s.robber,
                    RobberTarget::Vertex(v) if v != s.robber => v,
                    RobberTarget::Vertex(v) => {
                        return Err(MoveError::Illegal(format!(
                            "staying at {v} is written \"pass\""
                        )))
                    }
                };
                if !options.iter().any(|t| t.robber == to) {
                    return Err(MoveError::Illegal(match target {
                        RobberTarget::Pass(_) => "passing is not allowed".to_string(),
                        RobberTarget::Vertex(v) => format!("cannot move from {} to {v}", s.robber),
                    }));
                }
                self.robber = Some(to);
                self.turn = Turn::Cops;
            }
            _ => {
                return Err(MoveError::Illegal(format!(
                    "{side:?} cannot make that move in phase {:?}",
                    self.phase
                )))
            }
        }
        self.history.push(Ply { side, by_human, mv });
        self.after_move();
        Ok(())
    }

    fn after_move(&mut self) {
        let Some(s) = self.state() else { return };
        if is_contained(self.engine.graph(), &s) {
            self.status = Status::CopsWin;
            self.phase = Phase::Finished;
            return;
        }
        if s.turn == Turn::Cops
            && !self.seen.insert(s.clone())
            && !self.engine.result.is_cop_win(&s)
        {
            self.status = Status::RobberWinsCertified;
        }
    }
}

fn robber_target(s: &GameState, t: &GameState) -> RobberTarget {
    if t.robber == s.robber {
        RobberTarget::Pass(PassWord::Pass)
    } else {
        RobberTarget::Vertex(t.robber)
    }
}

/// Matches each cop in `from` with a destination in `to` one step away,
/// staying cops first.
pub fn pair_up(g: &Graph, from: &[usize], to: &[usize]) -> Option<Vec<(usize, usize)>> {
    fn assign(
        g: &Graph,
        from: &[usize],
        to: &[usize],
        used: &mut Vec<bool>,
        out: &mut Vec<(usize, usize)>,
    ) -> bool {
        let Some((&a, rest)) = from.split_first() else {
            return true;
        };
        // prefer staying, then the lowest reachable destination
        let mut order: Vec<usize> = (0..to.len()).collect();
        order.sort_by_key(|&j| (to[j] != a, to[j]));
        for j in order {
            if used[j] || !(to[j] == a || g.adjacent_edges(a).contains(&to[j])) {
                continue;
            }
            used[j] = true;
            out.push((a, to[j]));
            if assign(g, rest, to, used, out) {
                return true;
            }
            out.pop();
            used[j] = false;
        }
        false
    }
    if from.len() != to.len() {
        return None;
    }
    let mut out = Vec::with_capacity(from.len());
    assign(g, from, to, &mut vec![false; to.len()], &mut out).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use containment::{solve, FamilySpec, SolverConfig};

    fn engine(spec: &str, rules: Rules) -> Arc<Engine> {
        let g = spec.parse::<FamilySpec>().unwrap().generate().unwrap();
        Arc::new(Engine::new(
            solve(&g, &rules, &SolverConfig::default()).unwrap(),
        ))
    }

    #[test]
    fn wire_format() {
        let m: Move = serde_json::from_str(r#"{"robber":"pass"}"#).unwrap();
        assert_eq!(m, Move::Robber(RobberTarget::Pass(PassWord::Pass)));
        let m: Move = serde_json::from_str(r#"{"robber":3}"#).unwrap();
        assert_eq!(m, Move::Robber(RobberTarget::Vertex(3)));
        let m: Move = serde_json::from_str(r#"{"cops":[[0,1],[2,2]]}"#).unwrap();
        assert_eq!(m, Move::Cops(vec![(0, 1), (2, 2)]));
        assert_eq!(
            serde_json::to_string(&Move::PlaceCops(vec![1, 2])).unwrap(),
            r#"{"placeCops":[1,2]}"#
        );
        assert!(serde_json::from_str::<Move>(r#"{"robber":"stay"}"#).is_err());
    }

    #[test]
    fn pairing_prefers_staying() {
        let g = "cycle:4".parse::<FamilySpec>().unwrap().generate().unwrap();
        // edges of C4 in order: (0,1) (0,3) (1,2) (2,3)
        assert_eq!(pair_up(&g, &[0, 2], &[0, 3]), Some(vec![(0, 0), (2, 3)]));
        assert_eq!(pair_up(&g, &[0, 0], &[3, 3]), None);
    }

    #[test]
    fn human_robber_on_complete_graph_is_contained_at_once() {
        let e = engine("complete:4", Rules::containment(3));
        for v in 0..4 {
            let options = SessionOptions {
                k: 3,
                variant: Variant::Pass,
                human_role: Side::Robber,
                hints: false,
            };
            let mut s = Session::new("complete:4".into(), options, e.clone());
            assert_eq!(s.phase(), Phase::RobberPlacement);
            s.play(Move::PlaceRobber(v)).unwrap();
            assert_eq!(s.status(), Status::CopsWin);
            assert!(s.view().cop_turns <= 1);
        }
    }
}
