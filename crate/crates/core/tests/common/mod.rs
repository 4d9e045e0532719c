//! Shared test helpers.
//!
//! [`solve_naive`] is an independent oracle: plain value iteration over
//! every position with every joint move spelled out, sharing nothing with
//! the solver except the graph's edge list. The playout helpers pit an
//! extracted strategy against a seeded random opponent.

#![allow(dead_code)]

use std::collections::BTreeSet;

use containment::game::successors;
use containment::solver::{cop_choice, play, robber_choice, PlayoutOutcome};
use containment::{
    solve, FamilySpec, GameKind, GameState, Graph, Rules, SolveResult, SolverConfig, Turn,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gen(spec: &str) -> Graph {
    spec.parse::<FamilySpec>().unwrap().generate().unwrap()
}

pub struct Naive {
    pub n: usize,
    pub k: usize,
    /// Every cop multiset, sorted, in enumeration order.
    pub placements: Vec<Vec<usize>>,
    /// Ply-counting levels, `None` for robber wins; indexed `[placement][robber]`.
    pub cop_turn: Vec<Vec<Option<u32>>>,
    pub robber_turn: Vec<Vec<Option<u32>>>,
}

impl Naive {
    /// Whether some placement wins against every robber placement.
    pub fn cops_win(&self) -> bool {
        self.best_time().is_some()
    }

    /// Least over placements of the worst robber placement, in cop turns.
    pub fn best_time(&self) -> Option<u32> {
        self.cop_turn
            .iter()
            .filter_map(|row| {
                row.iter()
                    .try_fold(0u32, |w, l| l.map(|l| w.max(l.div_ceil(2))))
            })
            .min()
    }

    pub fn index_of(&self, cops: &[usize]) -> usize {
        self.placements.iter().position(|p| p == cops).unwrap()
    }
}

fn multisets(sites: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(sites: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in from..sites {
            cur.push(s);
            rec(sites, k, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(sites, k, 0, &mut Vec::new(), &mut out);
    out
}

pub fn solve_naive(g: &Graph, rules: &Rules) -> Naive {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().to_vec();
    let k = rules.cop_count;
    let vertex_game = rules.kind == GameKind::VertexPursuit;
    let sites = if vertex_game { n } else { edges.len() };

    // one-step options per site, built from the edge list alone
    let options: Vec<Vec<usize>> = (0..sites)
        .map(|s| {
            if vertex_game {
                let mut o = vec![s];
                for &(a, b) in &edges {
                    if a == s {
                        o.push(b);
                    }
                    if b == s {
                        o.push(a);
                    }
                }
                o
            } else {
                let (a, b) = edges[s];
                (0..edges.len())
                    .filter(|&f| {
                        let (c, d) = edges[f];
                        f == s || a == c || a == d || b == c || b == d
                    })
                    .collect()
            }
        })
        .collect();

    let placements = multisets(sites, k);
    // dense base-`sites` index of a sorted multiset
    let code = |p: &[usize]| p.iter().fold(0usize, |acc, &x| acc * sites + x);
    let mut lookup = vec![usize::MAX; sites.pow(k as u32)];
    for (i, p) in placements.iter().enumerate() {
        lookup[code(p)] = i;
    }

    let terminal = |p: &[usize], v: usize| {
        if vertex_game {
            p.contains(&v)
        } else {
            edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v || b == v)
                .all(|(e, _)| p.contains(&e))
        }
    };
    let robber_targets = |p: &[usize], v: usize| {
        let mut t = Vec::new();
        if rules.robber_may_pass {
            t.push(v);
        }
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a != v && b != v {
                continue;
            }
            let w = if a == v { b } else { a };
            if vertex_game || !p.contains(&e) {
                t.push(w);
            }
        }
        t
    };

    let mut cop_turn = vec![vec![None; n]; placements.len()];
    let mut robber_turn = vec![vec![None; n]; placements.len()];
    for (i, p) in placements.iter().enumerate() {
        for v in 0..n {
            if terminal(p, v) {
                cop_turn[i][v] = Some(0);
                robber_turn[i][v] = Some(0);
            }
        }
    }

    // Jacobi sweeps: sweep `level` labels exactly the positions of that level
    let mut level = 0u32;
    loop {
        level += 1;
        let mut next_cop = cop_turn.clone();
        let mut next_rob = robber_turn.clone();
        let mut changed = false;
        for (i, p) in placements.iter().enumerate() {
            for v in 0..n {
                if robber_turn[i][v].is_none() {
                    let targets = robber_targets(p, v);
                    if !targets.is_empty() && targets.iter().all(|&w| cop_turn[i][w].is_some()) {
                        next_rob[i][v] = Some(level);
                        changed = true;
                    }
                }
                if cop_turn[i][v].is_none() {
                    let mut choice = vec![0usize; k];
                    let mut moved = vec![0usize; k];
                    'joint: loop {
                        for c in 0..k {
                            moved[c] = options[p[c]][choice[c]];
                        }
                        moved.sort_unstable();
                        if robber_turn[lookup[code(&moved)]][v].is_some() {
                            next_cop[i][v] = Some(level);
                            changed = true;
                            break;
                        }
                        // odometer over every cop's options
                        let mut c = 0;
                        loop {
                            if c == k {
                                break 'joint;
                            }
                            choice[c] += 1;
                            if choice[c] < options[p[c]].len() {
                                break;
                            }
                            choice[c] = 0;
                            c += 1;
                        }
                    }
                }
            }
        }
        cop_turn = next_cop;
        robber_turn = next_rob;
        if !changed {
            break;
        }
    }

    Naive {
        n,
        k,
        placements,
        cop_turn,
        robber_turn,
    }
}

/// Least k in `lo..=hi` for which the naive oracle says the cops win.
pub fn naive_xi(g: &Graph, pass: bool, lo: usize, hi: usize) -> Option<usize> {
    (lo..=hi).find(|&k| {
        let rules = Rules {
            robber_may_pass: pass,
            ..Rules::containment(k)
        };
        solve_naive(g, &rules).cops_win()
    })
}

pub const PLAYOUTS_PER_GRAPH: usize = 10_000;

pub fn solved(spec: &str, rules: Rules) -> SolveResult {
    solve(&gen(spec), &rules, &SolverConfig::default()).unwrap()
}

pub fn random_reply(r: &SolveResult, s: &GameState, rng: &mut ChaCha8Rng) -> GameState {
    successors(r.graph(), r.rules(), s)
        .choose(rng)
        .expect("non-terminal states have moves")
        .clone()
}

/// Optimal cops from a random winning placement against a random robber:
/// every playout ends contained within that placement's worst-case time.
pub fn cops_always_win(spec: &str, rules: Rules, seed: u64) {
    let r = solved(spec, rules);
    let winning = r.winning_placements();
    assert!(!winning.is_empty(), "{spec}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = r.graph().vertex_count();
    for _ in 0..PLAYOUTS_PER_GRAPH {
        let placement = winning.choose(&mut rng).unwrap();
        let bound = r.placement_time(placement).unwrap();
        let start = rng.gen_range(0..n);
        let p = play(
            &r,
            placement,
            start,
            &mut |s| cop_choice(&r, s),
            &mut |s| random_reply(&r, s, &mut ChaCha8Rng::seed_from_u64(rng.gen())),
            bound,
            false,
        );
        match p.outcome {
            PlayoutOutcome::Contained { cop_turns } => assert!(cop_turns <= bound, "{spec}"),
            other => panic!("{spec}: {other:?} from {placement:?}/{start}"),
        }
        for w in p.states.windows(2) {
            assert!(
                successors(r.graph(), r.rules(), &w[0]).contains(&w[1]),
                "{spec}"
            );
        }
    }
}

/// The robber's strategy from any losing cop placement against random
/// cops: never contained, and the region is never left.
pub fn robber_always_escapes(spec: &str, rules: Rules, seed: u64, cop_turns: u32) {
    let r = solved(spec, rules);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let placements: Vec<Vec<usize>> = r.codec().indexer().iter().collect();
    let n = r.graph().vertex_count();
    for _ in 0..PLAYOUTS_PER_GRAPH {
        let placement = placements.choose(&mut rng).unwrap();
        let Some(start) =
            (0..n).find(|&v| !r.is_cop_win(&GameState::new(placement.clone(), v, Turn::Cops)))
        else {
            continue;
        };
        let p = play(
            &r,
            placement,
            start,
            &mut |s| random_reply(&r, s, &mut ChaCha8Rng::seed_from_u64(rng.gen())),
            &mut |s| robber_choice(&r, s),
            cop_turns,
            false,
        );
        assert_eq!(p.outcome, PlayoutOutcome::TurnLimit, "{spec}");
        assert!(p.states.iter().all(|s| !r.is_cop_win(s)), "{spec}");
    }
}

/// A random connected graph on `2..=max_n` vertices: a random labelled tree
/// plus a random number of extra edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(2..=max_n);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let tree = FamilySpec::TreeFromPrufer(seq).generate().unwrap();
    let mut edges: BTreeSet<(usize, usize)> = tree.edges().iter().copied().collect();
    for _ in 0..rng.gen_range(0..2 * n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    Graph::from_edge_list(n, &edges).unwrap()
}
