//! Independent re-check of a solved game's labelling.
//!
//! Walks every state, regenerates its successors with the game kernel and
//! verifies the local fixed-point equations directly, without any of the
//! solver's counters or worklist.

use thiserror::Error;

use super::{GameValue, SolveResult};
use crate::game::{
    cop_joint_moves, is_terminal, successors, vertex_moves, GameKind, GameState, MultisetIndexer,
    Rules, Turn,
};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("terminal state {0:?} is not a level-0 cop win")]
    Terminal(GameState),
    #[error("cop-turn state {state:?}: labelled {label:?}, successors imply {expected:?}")]
    CopTurn {
        state: GameState,
        label: Option<u32>,
        expected: Option<u32>,
    },
    #[error("robber-turn state {state:?}: labelled {label:?}, successors imply {expected:?}")]
    RobberTurn {
        state: GameState,
        label: Option<u32>,
        expected: Option<u32>,
    },
    #[error("summary mismatch: {0}")]
    Summary(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditSummary {
    pub states: u64,
    pub cop_win_states: u64,
    pub max_level: u32,
}

pub fn audit(result: &SolveResult) -> Result<AuditSummary, AuditError> {
    let g = result.graph();
    let rules = result.rules();
    let codec = result.codec();
    let n = g.vertex_count();
    let mut cop_win_states = 0;
    let mut max_level = 0;
    let indexer = codec.indexer();
    let options = single_cop_options(g, rules);
    let by_size: Vec<MultisetIndexer> = (0..=rules.cop_count)
        .map(|i| MultisetIndexer::new(indexer.sites(), i))
        .collect();
    for rank in 0..indexer.count() {
        let cops = indexer.unrank(rank);
        // the cops' options do not depend on where the robber stands, so
        // generate them once per placement
        let cop_moves = joint_moves(&options, &by_size, &cops);
        for v in 0..n {
            for turn in [Turn::Cops, Turn::Robber] {
                let key = codec.key(rank, v, turn);
                let s = GameState::new(cops.clone(), v, turn);
                let label = result.level_by_key(key);
                if let Some(l) = label {
                    cop_win_states += 1;
                    max_level = max_level.max(l);
                }
                if is_terminal(g, rules, &s) {
                    if label != Some(0) {
                        return Err(AuditError::Terminal(s));
                    }
                    continue;
                }
                match turn {
                    Turn::Cops => {
                        let expected = cop_moves
                            .iter()
                            .filter_map(|&r| result.level_by_key(codec.key(r, v, Turn::Robber)))
                            .min()
                            .map(|l| l + 1);
                        if label != expected {
                            return Err(AuditError::CopTurn {
                                state: s,
                                label,
                                expected,
                            });
                        }
                    }
                    Turn::Robber => {
                        let succ_levels: Vec<Option<u32>> = successors(g, rules, &s)
                            .iter()
                            .map(|t| result.level(t))
                            .collect();
                        let all_won =
                            !succ_levels.is_empty() && succ_levels.iter().all(Option::is_some);
                        let expected =
                            all_won.then(|| succ_levels.iter().flatten().max().unwrap() + 1);
                        if label != expected {
                            return Err(AuditError::RobberTurn {
                                state: s,
                                label,
                                expected,
                            });
                        }
                    }
                }
            }
        }
    }

    // value, best placement and time recomputed from the labels
    let mut best: Option<(u32, Vec<usize>)> = None;
    for placement in crate::game::initial_cop_placements(g, rules) {
        let mut worst = Some(0u32);
        for v in 0..n {
            let s = GameState::new(placement.clone(), v, Turn::Cops);
            worst = match (worst, result.level(&s)) {
                (Some(w), Some(l)) => Some(w.max(l.div_ceil(2))),
                _ => None,
            };
        }
        if let Some(t) = worst {
            if best.as_ref().is_none_or(|(bt, _)| t < *bt) {
                best = Some((t, placement));
            }
        }
    }
    let expected_value = if best.is_some() {
        GameValue::CopsWin
    } else {
        GameValue::RobberWins
    };
    if expected_value != result.value() {
        return Err(AuditError::Summary(format!(
            "value {:?}, labels imply {expected_value:?}",
            result.value()
        )));
    }
    let (time, placement) = best.map_or((None, None), |(t, p)| (Some(t), Some(p)));
    if time != result.optimal_time() || placement.as_deref() != result.best_placement() {
        return Err(AuditError::Summary(format!(
            "best placement {:?}/{:?}, labels imply {placement:?}/{time:?}",
            result.best_placement(),
            result.optimal_time()
        )));
    }
    Ok(AuditSummary {
        states: codec.state_count(),
        cop_win_states,
        max_level,
    })
}

/// Where one cop on each site may go, read off the kernel's move generator.
fn single_cop_options(g: &Graph, rules: &Rules) -> Vec<Vec<usize>> {
    let sites = match rules.kind {
        GameKind::Containment => g.edge_count(),
        GameKind::VertexPursuit => g.vertex_count(),
    };
    (0..sites)
        .map(|site| {
            let one = GameState::new(vec![site], 0, Turn::Cops);
            let moves = match rules.kind {
                GameKind::Containment => cop_joint_moves(g, &one),
                GameKind::VertexPursuit => vertex_moves(g, &one),
            };
            moves.into_iter().map(|t| t.cops[0]).collect()
        })
        .collect()
}

/// Ranks of the distinct multisets reachable by one joint cop move, built
/// one cop at a time with duplicates merged after each step. `by_size[i]`
/// ranks multisets of `i` cops.
fn joint_moves(options: &[Vec<usize>], by_size: &[MultisetIndexer], cops: &[usize]) -> Vec<u64> {
    let mut partial = vec![0u64];
    let mut next = Vec::new();
    let mut buf = vec![0usize; cops.len()];
    let mut tuple = vec![0usize; cops.len()];
    for (i, &c) in cops.iter().enumerate() {
        next.clear();
        for &p in &partial {
            by_size[i].unrank_into(p, &mut buf[..i]);
            for &o in &options[c] {
                let at = buf[..i].partition_point(|&x| x <= o);
                tuple[..at].copy_from_slice(&buf[..at]);
                tuple[at] = o;
                tuple[at + 1..=i].copy_from_slice(&buf[at..i]);
                next.push(by_size[i + 1].rank(&tuple[..=i]));
            }
        }
        next.sort_unstable();
        next.dedup();
        std::mem::swap(&mut partial, &mut next);
    }
    partial
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;
    use crate::solver::{solve, SolverConfig};

    #[test]
    fn audits_small_instances() {
        for (spec, rules) in [
            ("cycle:5", Rules::containment(2)),
            ("cycle:5", Rules::containment(1)),
            ("petersen", Rules::containment(3)),
            ("petersen", Rules::containment_no_pass(3)),
            ("path:4", Rules::containment_no_pass(1)),
            ("cycle:6", Rules::vertex_pursuit(2)),
            ("petersen", Rules::vertex_pursuit(2)),
        ] {
            let g = spec.parse::<FamilySpec>().unwrap().generate().unwrap();
            let r = solve(&g, &rules, &SolverConfig::default()).unwrap();
            let summary = audit(&r).unwrap_or_else(|e| panic!("{spec} {rules:?}: {e}"));
            assert_eq!(summary.cop_win_states, r.cop_win_state_count());
        }
    }

    #[test]
    fn incremental_joint_moves_match_the_kernel() {
        for (spec, rules) in [
            ("complete:5", Rules::containment(3)),
            ("petersen", Rules::containment(2)),
            ("path:4", Rules::vertex_pursuit(3)),
            ("cycle:5", Rules::vertex_pursuit(2)),
        ] {
            let g = spec.parse::<FamilySpec>().unwrap().generate().unwrap();
            let options = single_cop_options(&g, &rules);
            let by_size: Vec<MultisetIndexer> = (0..=rules.cop_count)
                .map(|i| MultisetIndexer::new(options.len(), i))
                .collect();
            let codec = crate::game::StateCodec::new(&g, &rules).unwrap();
            let indexer = codec.indexer();
            for rank in 0..indexer.count() {
                let cops = indexer.unrank(rank);
                let s = GameState::new(cops.clone(), 0, Turn::Cops);
                let mut kernel: Vec<u64> = match rules.kind {
                    GameKind::Containment => cop_joint_moves(&g, &s),
                    GameKind::VertexPursuit => vertex_moves(&g, &s),
                }
                .iter()
                .map(|t| indexer.rank(&t.cops))
                .collect();
                kernel.sort_unstable();
                assert_eq!(
                    joint_moves(&options, &by_size, &cops),
                    kernel,
                    "{spec} {cops:?}"
                );
            }
        }
    }
}
