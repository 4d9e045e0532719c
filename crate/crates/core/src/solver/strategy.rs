//! Strategies read off a solved game, and playouts between them.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::SolveResult;
use crate::game::{is_terminal, successors, GameState, Turn};

/// Memoryless strategy for one side: state key -> successor key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyTable {
    pub side: Turn,
    pub moves: BTreeMap<u64, u64>,
}

impl StrategyTable {
    pub fn get(&self, key: u64) -> Option<u64> {
        self.moves.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// The cops' reply in a non-terminal cop-turn state: inside the cop-win
/// region the successor of least level, otherwise the first successor.
/// Ties go to the earliest successor in enumeration order.
pub fn cop_choice(result: &SolveResult, s: &GameState) -> GameState {
    debug_assert_eq!(s.turn, Turn::Cops);
    let succ = successors(result.graph(), result.rules(), s);
    let best = succ
        .iter()
        .enumerate()
        .filter_map(|(i, t)| result.level(t).map(|l| (l, i)))
        .min();
    match best {
        Some((_, i)) => succ[i].clone(),
        None => succ
            .into_iter()
            .next()
            .expect("cop-turn states always have moves"),
    }
}

/// The robber's reply in a non-terminal robber-turn state: the first
/// successor outside the cop-win region, or failing that the one of greatest
/// level.
pub fn robber_choice(result: &SolveResult, s: &GameState) -> GameState {
    debug_assert_eq!(s.turn, Turn::Robber);
    let succ = successors(result.graph(), result.rules(), s);
    pick_for_robber(result, succ)
}

/// The robber's placement against a cop placement, by the same rule as
/// [`robber_choice`].
pub fn robber_placement(result: &SolveResult, cops: &[usize]) -> usize {
    let options: Vec<GameState> = (0..result.graph().vertex_count())
        .map(|v| GameState::new(cops.to_vec(), v, Turn::Cops))
        .collect();
    pick_for_robber(result, options).robber
}

fn pick_for_robber(result: &SolveResult, options: Vec<GameState>) -> GameState {
    if let Some(i) = options.iter().position(|t| !result.is_cop_win(t)) {
        return options[i].clone();
    }
    let mut best = 0;
    let mut best_level = 0;
    for (i, t) in options.iter().enumerate() {
        let l = result.level(t).unwrap_or(0);
        if l > best_level {
            best = i;
            best_level = l;
        }
    }
    options
        .into_iter()
        .nth(best)
        .expect("robber always has an option")
}

/// Materialises both strategies.
///
/// The cop table covers every non-terminal cop-turn state reachable from the
/// cops' placement (the best placement, or the first one when the robber
/// wins) while the cops follow [`cop_choice`] and the robber plays anything.
/// The robber table covers every non-terminal robber-turn state.
pub fn extract_strategies(result: &SolveResult) -> (StrategyTable, StrategyTable) {
    let g = result.graph();
    let rules = result.rules();
    let codec = result.codec();
    let placement = result
        .best_placement()
        .map(<[usize]>::to_vec)
        .unwrap_or_else(|| codec.indexer().unrank(0));

    let mut cop_moves = BTreeMap::new();
    let mut stack: Vec<GameState> = (0..g.vertex_count())
        .map(|v| GameState::new(placement.clone(), v, Turn::Cops))
        .collect();
    while let Some(s) = stack.pop() {
        if is_terminal(g, rules, &s) {
            continue;
        }
        let key = codec.encode(&s).expect("valid state");
        if cop_moves.contains_key(&key) {
            continue;
        }
        let reply = cop_choice(result, &s);
        cop_moves.insert(key, codec.encode(&reply).expect("valid state"));
        stack.extend(successors(g, rules, &reply));
    }

    let mut robber_moves = BTreeMap::new();
    for key in (1..codec.state_count()).step_by(2) {
        let s = codec.decode(key).expect("key in range");
        if is_terminal(g, rules, &s) {
            continue;
        }
        let reply = robber_choice(result, &s);
        robber_moves.insert(key, codec.encode(&reply).expect("valid state"));
    }

    (
        StrategyTable {
            side: Turn::Cops,
            moves: cop_moves,
        },
        StrategyTable {
            side: Turn::Robber,
            moves: robber_moves,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "snake_case",
    rename_all_fields = "camelCase"
)]
pub enum PlayoutOutcome {
    Contained {
        cop_turns: u32,
    },
    /// Both policies are memoryless and a state recurred, so play cycles
    /// forever without containment.
    EvasionCertified {
        first_seen: usize,
        repeated_at: usize,
    },
    TurnLimit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Playout {
    /// Every state from the post-placement position onward.
    pub states: Vec<GameState>,
    pub outcome: PlayoutOutcome,
}

/// Plays from `(placement, robber_start)` with the cops to move.
///
/// Each policy receives a state with its side on turn and returns the
/// successor it picks. `detect_repeats` should only be set when both
/// policies are memoryless.
pub fn play(
    result: &SolveResult,
    placement: &[usize],
    robber_start: usize,
    cops: &mut dyn FnMut(&GameState) -> GameState,
    robber: &mut dyn FnMut(&GameState) -> GameState,
    max_cop_turns: u32,
    detect_repeats: bool,
) -> Playout {
    let g = result.graph();
    let rules = result.rules();
    let mut state = GameState::new(placement.to_vec(), robber_start, Turn::Cops);
    let mut states = vec![state.clone()];
    let mut seen: HashMap<GameState, usize> = HashMap::from([(state.clone(), 0)]);
    let mut cop_turns = 0u32;
    let outcome = loop {
        if is_terminal(g, rules, &state) {
            break PlayoutOutcome::Contained { cop_turns };
        }
        let next = match state.turn {
            Turn::Cops => {
                if cop_turns == max_cop_turns {
                    break PlayoutOutcome::TurnLimit;
                }
                cop_turns += 1;
                cops(&state)
            }
            Turn::Robber => robber(&state),
        };
        debug_assert!(successors(g, rules, &state).contains(&next), "illegal move");
        state = next;
        states.push(state.clone());
        if detect_repeats {
            let at = states.len() - 1;
            if let Some(&first) = seen.get(&state) {
                break PlayoutOutcome::EvasionCertified {
                    first_seen: first,
                    repeated_at: at,
                };
            }
            seen.insert(state.clone(), at);
        }
    };
    Playout { states, outcome }
}

/// A cop win proven by exhaustive replay: from `placement`, the cop policy
/// contains every robber within `cop_turns` cop turns, whatever the robber
/// does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub placement: Vec<usize>,
    pub cop_turns: u32,
    /// Distinct cop-turn positions visited.
    pub positions: usize,
}

/// Plays the memoryless cop policy `cops` from `placement` against every
/// robber placement and every robber reply, checking each cop move against
/// the kernel's successor set. Only the game kernel is trusted; the solver's
/// levels play no part unless the policy consults them.
///
/// On failure returns the line of play, ending in an illegal cop move or a
/// position still open after `horizon` cop turns.
pub fn certify_cop_strategy(
    result: &SolveResult,
    placement: &[usize],
    cops: &mut dyn FnMut(&GameState) -> GameState,
    horizon: u32,
) -> Result<Certificate, Vec<GameState>> {
    let mut memo = HashMap::new();
    let mut worst = 0;
    for v in 0..result.graph().vertex_count() {
        let s = GameState::new(placement.to_vec(), v, Turn::Cops);
        worst = worst.max(certify_from(result, s, horizon, cops, &mut memo)?);
    }
    Ok(Certificate {
        placement: placement.to_vec(),
        cop_turns: worst,
        positions: memo.len(),
    })
}

fn certify_from(
    result: &SolveResult,
    s: GameState,
    budget: u32,
    cops: &mut dyn FnMut(&GameState) -> GameState,
    memo: &mut HashMap<GameState, u32>,
) -> Result<u32, Vec<GameState>> {
    let g = result.graph();
    let rules = result.rules();
    if is_terminal(g, rules, &s) {
        return Ok(0);
    }
    if let Some(&t) = memo.get(&s) {
        return if t <= budget { Ok(t) } else { Err(vec![s]) };
    }
    if budget == 0 {
        return Err(vec![s]);
    }
    let reply = cops(&s);
    if !successors(g, rules, &s).contains(&reply) {
        return Err(vec![s, reply]);
    }
    let mut worst = 0;
    for next in successors(g, rules, &reply) {
        match certify_from(result, next, budget - 1, cops, memo) {
            Ok(t) => worst = worst.max(t),
            Err(mut line) => {
                line.splice(0..0, [s, reply]);
                return Err(line);
            }
        }
    }
    memo.insert(s, worst + 1);
    Ok(worst + 1)
}

/// A robber win proven by exhaustive replay: against every cop placement
/// and every cop move the robber policy is never contained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RobberCertificate {
    pub placements: u64,
    /// Distinct cop-turn positions in the closed evasion region.
    pub positions: usize,
}

/// The robber's counterpart to [`certify_cop_strategy`]: places the robber
/// with `place` against every cop placement, then explores every cop move
/// while the robber follows `robber`, checking each robber move against the
/// kernel. Succeeds when the reachable region closes without a containment.
///
/// On failure returns the line of play ending in the containment or the
/// illegal move.
pub fn certify_robber_strategy(
    result: &SolveResult,
    place: &mut dyn FnMut(&[usize]) -> usize,
    robber: &mut dyn FnMut(&GameState) -> GameState,
) -> Result<RobberCertificate, Vec<GameState>> {
    let g = result.graph();
    let rules = result.rules();
    // cop-turn state -> the state it was reached from, for failure lines
    let mut parent: HashMap<GameState, Option<GameState>> = HashMap::new();
    let line_to = |parent: &HashMap<GameState, Option<GameState>>, s: &GameState| {
        let mut line = vec![s.clone()];
        let mut at = parent.get(s).cloned().flatten();
        while let Some(p) = at {
            at = parent.get(&p).cloned().flatten();
            line.push(p);
        }
        line.reverse();
        line
    };
    let mut stack = Vec::new();
    let placements = result.codec().indexer();
    for cops in placements.iter() {
        let v = place(&cops);
        let s = GameState::new(cops, v, Turn::Cops);
        if is_terminal(g, rules, &s) {
            return Err(vec![s]);
        }
        if parent.insert(s.clone(), None).is_none() {
            stack.push(s);
        }
    }
    while let Some(s) = stack.pop() {
        for moved in successors(g, rules, &s) {
            let fail = |mut tail: Vec<GameState>| {
                let mut line = line_to(&parent, &s);
                line.append(&mut tail);
                line
            };
            if is_terminal(g, rules, &moved) {
                return Err(fail(vec![moved]));
            }
            let reply = robber(&moved);
            if !successors(g, rules, &moved).contains(&reply) || is_terminal(g, rules, &reply) {
                return Err(fail(vec![moved, reply]));
            }
            if !parent.contains_key(&reply) {
                parent.insert(reply.clone(), Some(s.clone()));
                stack.push(reply);
            }
        }
    }
    Ok(RobberCertificate {
        placements: placements.count(),
        positions: parent.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Rules;
    use crate::graph::FamilySpec;
    use crate::solver::{solve, SolverConfig};

    fn solved(spec: &str, rules: Rules) -> SolveResult {
        let g = spec.parse::<FamilySpec>().unwrap().generate().unwrap();
        solve(&g, &rules, &SolverConfig::default()).unwrap()
    }

    fn optimal_playout(r: &SolveResult, placement: &[usize], start: usize) -> Playout {
        play(
            r,
            placement,
            start,
            &mut |s| cop_choice(r, s),
            &mut |s| robber_choice(r, s),
            1000,
            true,
        )
    }

    #[test]
    fn optimal_play_on_cycle_takes_optimal_time() {
        let r = solved("cycle:5", Rules::containment(2));
        let placement = r.best_placement().unwrap().to_vec();
        let start = robber_placement(&r, &placement);
        let p = optimal_playout(&r, &placement, start);
        assert_eq!(
            p.outcome,
            PlayoutOutcome::Contained {
                cop_turns: r.optimal_time().unwrap()
            }
        );
    }

    #[test]
    fn certificate_matches_optimal_time() {
        for (spec, rules) in [
            ("complete:4", Rules::containment(3)),
            ("ring:3", Rules::containment(3)),
            ("petersen", Rules::containment_no_pass(3)),
        ] {
            let r = solved(spec, rules);
            let placement = r.best_placement().unwrap().to_vec();
            let time = r.optimal_time().unwrap();
            let cert =
                certify_cop_strategy(&r, &placement, &mut |s| cop_choice(&r, s), time).unwrap();
            assert_eq!(cert.cop_turns, time, "{spec}");
            if time > 0 {
                let short =
                    certify_cop_strategy(&r, &placement, &mut |s| cop_choice(&r, s), time - 1);
                assert!(short.is_err(), "{spec}");
            }
        }
    }

    #[test]
    fn certificate_rejects_illegal_and_losing_policies() {
        let r = solved("cycle:6", Rules::containment(2));
        let placement = r.best_placement().unwrap().to_vec();
        // teleporting both cops next to the robber is not a legal move
        let line = certify_cop_strategy(
            &r,
            &placement,
            &mut |s| {
                let edges = r.graph().incident_edges(s.robber).to_vec();
                GameState::new(edges, s.robber, Turn::Robber)
            },
            10,
        )
        .unwrap_err();
        assert!(!successors(r.graph(), r.rules(), &line[line.len() - 2])
            .contains(&line[line.len() - 1]));
        // standing still never contains a free robber
        assert!(certify_cop_strategy(
            &r,
            &placement,
            &mut |s| GameState {
                turn: Turn::Robber,
                ..s.clone()
            },
            10
        )
        .is_err());
    }

    #[test]
    fn petersen_robber_evades() {
        let r = solved("petersen", Rules::containment(3));
        let (cops, _) = extract_strategies(&r);
        assert!(!cops.is_empty());
        let placement = r.codec().indexer().unrank(0);
        let start = robber_placement(&r, &placement);
        let p = optimal_playout(&r, &placement, start);
        assert!(matches!(p.outcome, PlayoutOutcome::EvasionCertified { .. }));
        assert!(p.states.iter().all(|s| !r.is_cop_win(s)));
    }

    #[test]
    fn cop_levels_strictly_decrease() {
        let r = solved("track:5", Rules::containment(3));
        let (cops, robbers) = extract_strategies(&r);
        let codec = r.codec();
        for (&from, &to) in &cops.moves {
            let before = r.level_by_key(from).unwrap();
            let after = r.level_by_key(to).unwrap();
            assert!(after < before);
        }
        for (&from, &to) in &robbers.moves {
            let s = codec.decode(from).unwrap();
            let t = codec.decode(to).unwrap();
            assert!(successors(r.graph(), r.rules(), &s).contains(&t));
            if !r.is_cop_win_key(from) {
                assert!(!r.is_cop_win_key(to));
            }
        }
    }

    #[test]
    fn robber_certificate_on_petersen() {
        let r = solved("petersen", Rules::containment(3));
        let cert = certify_robber_strategy(&r, &mut |c| robber_placement(&r, c), &mut |s| {
            robber_choice(&r, s)
        })
        .unwrap();
        assert_eq!(cert.placements, r.codec().placement_count());
        // a robber who never moves is caught
        let line = certify_robber_strategy(&r, &mut |c| robber_placement(&r, c), &mut |s| {
            GameState::new(s.cops.clone(), s.robber, Turn::Cops)
        })
        .unwrap_err();
        assert!(is_terminal(r.graph(), r.rules(), line.last().unwrap()));
    }
}
