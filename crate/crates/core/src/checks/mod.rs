//! Named, machine-run checks of structural claims about Containment.
//!
//! Each check runs over a fixed list of instances and produces one
//! [`CheckReport`] per instance. [`run_suite`] runs a selection in catalog
//! order and wraps the reports in a versioned [`SuiteReport`]. Solves are
//! memoised across checks, so the order only affects which report carries
//! the runtime of a shared solve.
//!
//! Verdicts are exact: `pass` only when the stated relation holds on the
//! computed values. A solve that would exceed the state cap makes the
//! instance `skipped` with the estimate, never `pass`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::game::{is_terminal, successors, GameState, Rules, Turn};
use crate::graph::{
    domination_number, is_isomorphic, prufer_sequences, to_graph6, FamilySpec, Graph, GraphError,
};
use crate::solver::{
    certify_cop_strategy, cop_choice, dominating_upper_bound, play, robber_choice,
    robber_placement, solve, PlayoutOutcome, SolveError, SolveResult, SolverConfig,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest tree order covered by the tree checks.
pub const TREE_MAX_VERTICES: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped {
        reason: SkipReason,
        detail: String,
    },
    /// Recorded for reference; outside the claim's scope.
    Informational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// A needed solve exceeds the state cap.
    Cap,
    /// The instance falls outside the claim's hypothesis.
    Guard,
    /// The hypothesis holds but the claim says nothing (e.g. no cop win).
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub check_id: String,
    pub claim: String,
    pub graph: String,
    pub graph6: Option<String>,
    pub rules: Option<Rules>,
    pub values: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub witness: Option<Value>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub informational: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub schema_version: u32,
    pub checks: Vec<CheckReport>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    /// The report with every runtime zeroed, for comparing runs.
    pub fn without_runtimes(&self) -> SuiteReport {
        let mut copy = self.clone();
        for c in &mut copy.checks {
            c.runtime_ms = 0;
        }
        copy
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("instance {graph}: {source}")]
    Graph {
        graph: String,
        #[source]
        source: GraphError,
    },
    #[error("instance {graph}: {source}")]
    Solve {
        graph: String,
        #[source]
        source: SolveError,
    },
}

impl SuiteError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Which checks to run. `ids: None` means every check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub ids: Option<Vec<String>>,
    pub include_slow: bool,
}

impl Selection {
    /// Everything except slow instances.
    pub fn fast() -> Selection {
        Selection {
            ids: None,
            include_slow: false,
        }
    }

    pub fn all() -> Selection {
        Selection {
            ids: None,
            include_slow: true,
        }
    }

    pub fn only<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Selection {
        Selection {
            ids: Some(ids.into_iter().map(Into::into).collect()),
            include_slow: true,
        }
    }

    pub fn none() -> Selection {
        Selection::only(Vec::<String>::new())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckInfo {
    pub id: &'static str,
    pub claim: &'static str,
}

const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        id: "cycle_squeeze",
        claim: "xi(C_n) = 2",
    },
    CheckInfo {
        id: "complete_graph",
        claim: "xi(K_n) = n-1, containing within 1 cop turn",
    },
    CheckInfo {
        id: "complete_any_placement",
        claim: "every placement of n-1 cops on distinct edges of K_n contains within 1 cop turn",
    },
    CheckInfo {
        id: "track_cube",
        claim: "4-track isomorphic to Q3, and xi(Q3) = 3",
    },
    CheckInfo {
        id: "track_family",
        claim: "xi(k-track) = 3",
    },
    CheckInfo {
        id: "ring_family",
        claim: "3 cops lose on the k-ring of squares for k >= 4; \
                xi(3-ring) = 3 with optimal time <= 4 cop turns",
    },
    CheckInfo {
        id: "tree_degree",
        claim: "xi(T) = Delta(T) for every tree T",
    },
    CheckInfo {
        id: "tree_no_pass",
        claim: "no-pass: 1 cop contains the robber on every tree",
    },
    CheckInfo {
        id: "petersen_no_pass",
        claim: "no-pass: 3 cops contain the robber on the Petersen graph within 2 cop turns",
    },
    CheckInfo {
        id: "cop_bound_chain",
        claim: "c(G) <= xi(G) <= gamma(G) * Delta(G)",
    },
    CheckInfo {
        id: "delta_cop_conjecture",
        claim: "xi(G) <= Delta(G) * c(G) (conjectured)",
    },
    CheckInfo {
        id: "degree_floor",
        claim: "delta(G) <= xi(G): delta(G)-1 cops lose",
    },
    CheckInfo {
        id: "monotone_in_k",
        claim: "k cops lose for k < xi(G) and win for k = xi(G), xi(G)+1",
    },
    CheckInfo {
        id: "girth5_uncontainable",
        claim: "girth(G) >= 5 and delta(G) >= 3 imply delta(G) cops lose",
    },
    CheckInfo {
        id: "girth7_margin",
        claim: "girth(G) >= 7 and delta(G) >= 3 imply xi(G) > delta(G) + 1",
    },
    CheckInfo {
        id: "containment_locus",
        claim: "delta(G) cops never contain a careful robber at a vertex on no 3- or 4-cycle",
    },
];

pub fn catalog() -> &'static [CheckInfo] {
    CHECKS
}

/// Graphs every cross-cutting check runs on.
pub const SUITE_GRAPHS: &[&str] = &[
    "cycle:4",
    "cycle:5",
    "cycle:6",
    "cycle:7",
    "cycle:8",
    "cycle:9",
    "cycle:10",
    "complete:3",
    "complete:4",
    "complete:5",
    "complete:6",
    "path:4",
    "path:5",
    "star:3",
    "star:4",
    "prufer:1,1,4,4",
    "q3",
    "track:3",
    "track:4",
    "track:5",
    "track:6",
    "track:7",
    "ring:3",
    "ring:4",
    "ring:5",
    "petersen",
];

struct Instance {
    graph: String,
    slow: bool,
}

fn fast(graph: &str) -> Instance {
    Instance {
        graph: graph.to_string(),
        slow: false,
    }
}

fn instances(id: &str) -> Vec<Instance> {
    let list = |names: &[&str]| names.iter().map(|g| fast(g)).collect();
    match id {
        "cycle_squeeze" => (4..=10).map(|n| fast(&format!("cycle:{n}"))).collect(),
        "complete_graph" | "complete_any_placement" => {
            (3..=6).map(|n| fast(&format!("complete:{n}"))).collect()
        }
        "track_cube" => list(&["track:4"]),
        "track_family" => (3..=7).map(|k| fast(&format!("track:{k}"))).collect(),
        "ring_family" => list(&["ring:3", "ring:4", "ring:5"]),
        "tree_degree" | "tree_no_pass" => list(&[&format!("trees:{TREE_MAX_VERTICES}")]),
        "petersen_no_pass" => list(&["petersen"]),
        "girth5_uncontainable" => list(&["petersen", "mcgee", "cycle:5", "cycle:7"]),
        "girth7_margin" => vec![
            Instance {
                graph: "mcgee".into(),
                slow: true,
            },
            fast("cycle:7"),
        ],
        "containment_locus" => {
            let mut all: Vec<Instance> = SUITE_GRAPHS.iter().map(|g| fast(g)).collect();
            all.retain(|i| !i.graph.starts_with("cycle:") || i.graph == "cycle:6");
            all
        }
        _ => list(SUITE_GRAPHS),
    }
}

/// Graph labels the check runs on, with slow ones flagged.
pub fn check_instances(id: &str) -> Vec<(String, bool)> {
    instances(id)
        .into_iter()
        .map(|i| (i.graph, i.slow))
        .collect()
}

type Solved = Result<Arc<SolveResult>, u128>;

/// Least winning cop count, found by ascending search, or the state
/// estimate of the first capped solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Xi {
    Exact(usize),
    Capped { low: usize, estimate: u128 },
}

/// Memo of graphs, solves and searched invariants shared by every check.
pub struct Lab {
    config: SolverConfig,
    graphs: HashMap<String, Graph>,
    solves: HashMap<(String, Rules), Solved>,
    xi: HashMap<(String, bool), Xi>,
    cop_number: HashMap<String, Xi>,
}

impl Lab {
    pub fn new(config: SolverConfig) -> Lab {
        Lab {
            config,
            graphs: HashMap::new(),
            solves: HashMap::new(),
            xi: HashMap::new(),
            cop_number: HashMap::new(),
        }
    }

    fn graph(&mut self, label: &str) -> Result<Graph, SuiteError> {
        if let Some(g) = self.graphs.get(label) {
            return Ok(g.clone());
        }
        let g = label
            .parse::<FamilySpec>()
            .and_then(|f| f.generate())
            .map_err(|source| SuiteError::Graph {
                graph: label.to_string(),
                source,
            })?;
        self.graphs.insert(label.to_string(), g.clone());
        Ok(g)
    }

    fn solve(&mut self, label: &str, rules: Rules) -> Result<Solved, SuiteError> {
        let key = (label.to_string(), rules);
        if let Some(s) = self.solves.get(&key) {
            return Ok(s.clone());
        }
        let g = self.graph(label)?;
        let solved = match solve(&g, &rules, &self.config) {
            Ok(r) => Ok(Arc::new(r)),
            Err(SolveError::CapExceeded { estimate, .. }) => Err(estimate),
            Err(source) => {
                return Err(SuiteError::Solve {
                    graph: label.to_string(),
                    source,
                })
            }
        };
        self.solves.insert(key, solved.clone());
        Ok(solved)
    }

    fn search(
        &mut self,
        label: &str,
        base: Rules,
        start: usize,
        upper: usize,
    ) -> Result<Xi, SuiteError> {
        for k in start..=upper {
            match self.solve(label, base.with_cops(k))? {
                Ok(r) if r.cops_win() => return Ok(Xi::Exact(k)),
                Ok(_) => {}
                Err(estimate) => return Ok(Xi::Capped { low: k, estimate }),
            }
        }
        unreachable!("{upper} cops always win on {label}")
    }

    fn xi(&mut self, label: &str, pass: bool) -> Result<Xi, SuiteError> {
        if let Some(&x) = self.xi.get(&(label.to_string(), pass)) {
            return Ok(x);
        }
        let g = self.graph(label)?;
        let upper = dominating_upper_bound(&g).map_err(|source| SuiteError::Graph {
            graph: label.to_string(),
            source,
        })?;
        let base = Rules {
            robber_may_pass: pass,
            ..Rules::containment(1)
        };
        let x = self.search(label, base, g.min_degree().max(1), upper)?;
        self.xi.insert((label.to_string(), pass), x);
        Ok(x)
    }

    fn cop_number(&mut self, label: &str) -> Result<Xi, SuiteError> {
        if let Some(&x) = self.cop_number.get(label) {
            return Ok(x);
        }
        let g = self.graph(label)?;
        let gamma = self.gamma(&g, label)?;
        let x = self.search(label, Rules::vertex_pursuit(1), 1, gamma)?;
        self.cop_number.insert(label.to_string(), x);
        Ok(x)
    }

    fn gamma(&mut self, g: &Graph, label: &str) -> Result<usize, SuiteError> {
        domination_number(g)
            .map(|(gamma, _)| gamma)
            .map_err(|source| SuiteError::Graph {
                graph: label.to_string(),
                source,
            })
    }
}

/// Runs the selected checks in catalog order.
pub fn run_suite(selection: &Selection, config: &SolverConfig) -> Result<SuiteReport, SuiteError> {
    let mut lab = Lab::new(*config);
    run_suite_with(&mut lab, selection)
}

/// [`run_suite`] against an existing memo, so several runs share solves.
pub fn run_suite_with(lab: &mut Lab, selection: &Selection) -> Result<SuiteReport, SuiteError> {
    if let Some(ids) = &selection.ids {
        if let Some(bad) = ids.iter().find(|id| !CHECKS.iter().any(|c| c.id == *id)) {
            return Err(SuiteError::UnknownCheck(bad.clone()));
        }
    }
    let mut checks = Vec::new();
    for info in CHECKS {
        if selection
            .ids
            .as_ref()
            .is_some_and(|ids| !ids.iter().any(|id| id == info.id))
        {
            continue;
        }
        for inst in instances(info.id) {
            if inst.slow && !selection.include_slow {
                continue;
            }
            checks.push(run_check(lab, info, &inst.graph)?);
        }
    }
    let mut summary = SuiteSummary {
        total: checks.len(),
        ..SuiteSummary::default()
    };
    for c in &checks {
        match c.verdict {
            Verdict::Pass => summary.passed += 1,
            Verdict::Fail => summary.failed += 1,
            Verdict::Skipped { .. } => summary.skipped += 1,
            Verdict::Informational => summary.informational += 1,
        }
    }
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        checks,
        summary,
    })
}

/// Runs one check on one of its instances.
pub fn run_single(lab: &mut Lab, id: &str, graph: &str) -> Result<CheckReport, SuiteError> {
    let info = CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| SuiteError::UnknownCheck(id.to_string()))?;
    run_check(lab, info, graph)
}

// What a check body hands back; the runner adds identity and timing.
struct Outcome {
    rules: Option<Rules>,
    values: BTreeMap<String, Value>,
    verdict: Verdict,
    witness: Option<Value>,
}

impl Outcome {
    fn new(verdict: Verdict) -> Outcome {
        Outcome {
            rules: None,
            values: BTreeMap::new(),
            verdict,
            witness: None,
        }
    }

    fn value(mut self, key: &str, v: impl Serialize) -> Outcome {
        self.values.insert(
            key.to_string(),
            serde_json::to_value(v).expect("serializable"),
        );
        self
    }

    fn rules(mut self, rules: Rules) -> Outcome {
        self.rules = Some(rules);
        self
    }

    fn witness(mut self, w: Value) -> Outcome {
        self.witness = Some(w);
        self
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn capped(estimate: u128) -> Outcome {
    Outcome::new(Verdict::Skipped {
        reason: SkipReason::Cap,
        detail: format!("a solve needs {estimate} states"),
    })
    .value("state_estimate", estimate.to_string())
}

fn guarded(detail: String) -> Outcome {
    Outcome::new(Verdict::Skipped {
        reason: SkipReason::Guard,
        detail,
    })
}

macro_rules! exact {
    ($x:expr) => {
        match $x {
            Xi::Exact(v) => v,
            Xi::Capped { estimate, .. } => return Ok(capped(estimate)),
        }
    };
}

macro_rules! solved {
    ($s:expr) => {
        match $s {
            Ok(r) => r,
            Err(estimate) => return Ok(capped(estimate)),
        }
    };
}

fn run_check(lab: &mut Lab, info: &CheckInfo, graph: &str) -> Result<CheckReport, SuiteError> {
    let started = Instant::now();
    let outcome = match info.id {
        "cycle_squeeze" => check_xi_equals(lab, graph, 2)?,
        "complete_graph" => check_complete(lab, graph)?,
        "complete_any_placement" => check_complete_placements(lab, graph)?,
        "track_cube" => check_track_cube(lab, graph)?,
        "track_family" => check_xi_equals(lab, graph, 3)?,
        "ring_family" => check_ring(lab, graph)?,
        "tree_degree" => check_trees(lab, false)?,
        "tree_no_pass" => check_trees(lab, true)?,
        "petersen_no_pass" => check_petersen_no_pass(lab, graph)?,
        "cop_bound_chain" => check_chain(lab, graph)?,
        "delta_cop_conjecture" => check_conjecture(lab, graph)?,
        "degree_floor" => check_degree_floor(lab, graph)?,
        "monotone_in_k" => check_monotone(lab, graph)?,
        "girth5_uncontainable" => check_girth(lab, graph, 5)?,
        "girth7_margin" => check_girth(lab, graph, 7)?,
        "containment_locus" => check_locus(lab, graph)?,
        other => unreachable!("check {other} has no body"),
    };
    let graph6 = if graph.starts_with("trees:") {
        None
    } else {
        Some(to_graph6(&lab.graph(graph)?))
    };
    Ok(CheckReport {
        check_id: info.id.to_string(),
        claim: info.claim.to_string(),
        graph: graph.to_string(),
        graph6,
        rules: outcome.rules,
        values: outcome.values,
        verdict: outcome.verdict,
        witness: outcome.witness,
        runtime_ms: started.elapsed().as_millis() as u64,
    })
}

fn check_xi_equals(lab: &mut Lab, graph: &str, expected: usize) -> Result<Outcome, SuiteError> {
    let xi = exact!(lab.xi(graph, true)?);
    let r = solved!(lab.solve(graph, Rules::containment(xi))?);
    Ok(Outcome::new(verdict(xi == expected))
        .rules(Rules::containment(xi))
        .value("xi", xi)
        .value("expected", expected)
        .value("optimal_time", r.optimal_time())
        .value("best_placement", r.best_placement()))
}

fn check_complete(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let n = lab.graph(graph)?.vertex_count();
    let xi = exact!(lab.xi(graph, true)?);
    let rules = Rules::containment(n - 1);
    let r = solved!(lab.solve(graph, rules)?);
    let time = r.optimal_time();
    Ok(
        Outcome::new(verdict(xi == n - 1 && time.is_some_and(|t| t <= 1)))
            .rules(rules)
            .value("xi", xi)
            .value("expected", n - 1)
            .value("optimal_time", time)
            .value("best_placement", r.best_placement()),
    )
}

fn check_complete_placements(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let g = lab.graph(graph)?;
    let n = g.vertex_count();
    let rules = Rules::containment(n - 1);
    let r = solved!(lab.solve(graph, rules)?);
    let mut worst_distinct = Some(0);
    let mut worst_any = Some(0);
    let mut slow = None;
    for p in r.codec().indexer().iter() {
        let t = r.placement_time(&p);
        worst_any = worst_any.zip(t).map(|(w, t)| w.max(t));
        if p.windows(2).all(|w| w[0] < w[1]) {
            worst_distinct = worst_distinct.zip(t).map(|(w, t)| w.max(t));
            if t.is_none_or(|t| t > 1) && slow.is_none() {
                slow = Some(p);
            }
        }
    }
    let mut out = Outcome::new(verdict(slow.is_none()))
        .rules(rules)
        .value("worst_time_distinct_edges", worst_distinct)
        .value("worst_time_with_stacking", worst_any);
    if let Some(p) = slow {
        let robber = robber_placement(&r, &p);
        let start = GameState::new(p.clone(), robber, Turn::Cops);
        out = out.witness(json!({
            "placement_edges": p.iter().map(|&e| g.endpoints(e)).collect::<Vec<_>>(),
            "robber": robber,
            "cop_turns": r.time_to_win(&start),
        }));
    }
    Ok(out)
}

fn check_track_cube(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let track = lab.graph(graph)?;
    let cube = lab.graph("q3")?;
    let iso = is_isomorphic(&track, &cube).map_err(|source| SuiteError::Graph {
        graph: graph.to_string(),
        source,
    })?;
    let xi = exact!(lab.xi("q3", true)?);
    Ok(Outcome::new(verdict(iso && xi == 3))
        .value("isomorphic_to_q3", iso)
        .value("xi_q3", xi))
}

fn check_ring(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let rules = Rules::containment(3);
    let r = solved!(lab.solve(graph, rules)?);
    let xi = exact!(lab.xi(graph, true)?);
    let k: usize = graph["ring:".len()..].parse().expect("ring label");
    let base = Outcome::new(Verdict::Pass)
        .rules(rules)
        .value("value", r.value())
        .value("xi", xi);
    let out = if k >= 4 {
        let mut out = base.value("expected", "robber_wins");
        out.verdict = verdict(!r.cops_win());
        if r.cops_win() {
            out = out.witness(json!({ "best_placement": r.best_placement() }));
        }
        out
    } else {
        let time = r.optimal_time();
        let mut out = base.value("optimal_time", time).value("time_bound", 4);
        out.verdict = verdict(xi == 3 && time.is_some_and(|t| t <= 4));
        out
    };
    Ok(out)
}

fn check_trees(lab: &mut Lab, no_pass: bool) -> Result<Outcome, SuiteError> {
    let mut per_order = BTreeMap::new();
    let mut failures = Vec::new();
    for n in 2..=TREE_MAX_VERTICES {
        let mut count = 0usize;
        for seq in prufer_sequences(n) {
            count += 1;
            let g = FamilySpec::TreeFromPrufer(seq.clone())
                .generate()
                .map_err(|source| SuiteError::Graph {
                    graph: format!("prufer:{seq:?}"),
                    source,
                })?;
            let delta_max = g.max_degree();
            let (wins, expected, found) = if no_pass {
                let r =
                    solve(&g, &Rules::containment_no_pass(1), &lab.config).map_err(|source| {
                        SuiteError::Solve {
                            graph: format!("prufer:{seq:?}"),
                            source,
                        }
                    })?;
                (r.cops_win(), 1, r.optimal_time().map(|_| 1))
            } else {
                let lose = Rules::containment(delta_max.saturating_sub(1).max(1));
                let lose_ok = delta_max == 1
                    || !solve(&g, &lose, &lab.config)
                        .map_err(|source| SuiteError::Solve {
                            graph: format!("prufer:{seq:?}"),
                            source,
                        })?
                        .cops_win();
                let win = solve(&g, &Rules::containment(delta_max), &lab.config)
                    .map_err(|source| SuiteError::Solve {
                        graph: format!("prufer:{seq:?}"),
                        source,
                    })?
                    .cops_win();
                (
                    lose_ok && win,
                    delta_max,
                    (lose_ok && win).then_some(delta_max),
                )
            };
            if !wins {
                failures.push(json!({ "prufer": seq, "expected": expected, "found": found }));
            }
        }
        per_order.insert(n.to_string(), count);
    }
    let rules = if no_pass {
        Rules::containment_no_pass(1)
    } else {
        Rules::containment(1)
    };
    let total: usize = per_order.values().sum();
    let mut out = Outcome::new(verdict(failures.is_empty()))
        .value("trees_by_order", per_order)
        .value("trees_checked", total)
        .value("failures", failures.len());
    if no_pass {
        out = out.rules(rules);
    }
    if !failures.is_empty() {
        out = out.witness(Value::Array(failures));
    }
    Ok(out)
}

fn check_petersen_no_pass(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let rules = Rules::containment_no_pass(3);
    let r = solved!(lab.solve(graph, rules)?);
    let time = r.optimal_time();
    Ok(Outcome::new(verdict(time.is_some_and(|t| t <= 2)))
        .rules(rules)
        .value("value", r.value())
        .value("optimal_time", time)
        .value("time_bound", 2)
        .value("best_placement", r.best_placement()))
}

fn check_chain(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let g = lab.graph(graph)?;
    let xi = exact!(lab.xi(graph, true)?);
    let c = exact!(lab.cop_number(graph)?);
    let gamma = lab.gamma(&g, graph)?;
    let upper = gamma * g.max_degree();
    let ok = c <= xi && xi <= upper;
    let mut out = Outcome::new(verdict(ok))
        .value("c", c)
        .value("xi", xi)
        .value("gamma", gamma)
        .value("max_degree", g.max_degree())
        .value("gamma_times_max_degree", upper);
    if !ok {
        out = out.witness(json!({ "pair": if c > xi { [c, xi] } else { [xi, upper] } }));
    }
    Ok(out)
}

fn check_conjecture(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let g = lab.graph(graph)?;
    let xi = exact!(lab.xi(graph, true)?);
    let c = exact!(lab.cop_number(graph)?);
    let bound = g.max_degree() * c;
    let mut out = Outcome::new(verdict(xi <= bound))
        .value("xi", xi)
        .value("c", c)
        .value("max_degree", g.max_degree())
        .value("max_degree_times_c", bound);
    if xi > bound {
        out = out.witness(json!({ "counterexample": graph, "pair": [xi, bound] }));
    }
    Ok(out)
}

fn check_degree_floor(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let g = lab.graph(graph)?;
    let delta = g.min_degree();
    let xi = exact!(lab.xi(graph, true)?);
    let below = if delta >= 2 {
        let r = solved!(lab.solve(graph, Rules::containment(delta - 1))?);
        Some(r.cop_win_state_count())
    } else {
        None
    };
    // below delta no position can be terminal, so no position is won
    let ok = delta <= xi && below.is_none_or(|won| won == 0);
    Ok(Outcome::new(verdict(ok))
        .value("min_degree", delta)
        .value("xi", xi)
        .value("cop_win_states_below", below))
}

fn check_monotone(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let xi = exact!(lab.xi(graph, true)?);
    let mut wins = BTreeMap::new();
    for k in 1..=xi + 1 {
        let r = solved!(lab.solve(graph, Rules::containment(k))?);
        wins.insert(k.to_string(), r.cops_win());
    }
    let ok = (1..=xi + 1).all(|k| wins[&k.to_string()] == (k >= xi));
    let mut out = Outcome::new(verdict(ok))
        .value("xi", xi)
        .value("cops_win_by_k", &wins);
    if !ok {
        out = out.witness(json!({ "cops_win_by_k": wins }));
    }
    Ok(out)
}

fn check_girth(lab: &mut Lab, graph: &str, girth_bound: usize) -> Result<Outcome, SuiteError> {
    let g = lab.graph(graph)?;
    let delta = g.min_degree();
    let girth = g.girth();
    if girth.is_none_or(|gi| gi < girth_bound) {
        return Ok(Outcome::new(Verdict::Skipped {
            reason: SkipReason::Guard,
            detail: format!("girth {girth:?} below {girth_bound}"),
        })
        .value("girth", girth));
    }
    let k = if girth_bound >= 7 { delta + 1 } else { delta };
    if delta < 3 {
        // the unguarded statement fails here; record the evidence
        let xi = exact!(lab.xi(graph, true)?);
        return Ok(guarded(format!("min degree {delta} < 3"))
            .value("girth", girth)
            .value("min_degree", delta)
            .value("xi", xi)
            .value("unguarded_statement_holds", xi > k));
    }
    let rules = Rules::containment(k);
    let r = solved!(lab.solve(graph, rules)?);
    let mut out = Outcome::new(verdict(!r.cops_win()))
        .rules(rules)
        .value("girth", girth)
        .value("min_degree", delta)
        .value("cops", k)
        .value("value", r.value());
    if let (Some(p), Some(t)) = (r.best_placement(), r.optimal_time()) {
        let placement = p.to_vec();
        let cert = certify_cop_strategy(&r, &placement, &mut |s| cop_choice(&r, s), t);
        let start = robber_placement(&r, &placement);
        let line = play(
            &r,
            &placement,
            start,
            &mut |s| cop_choice(&r, s),
            &mut |s| robber_choice(&r, s),
            t,
            false,
        );
        out = out.value("optimal_time", t).witness(json!({
            "placement_edges": placement.iter().map(|&e| g.endpoints(e)).collect::<Vec<_>>(),
            "certificate": cert.ok(),
            "principal_line": line.states,
        }));
    }
    Ok(out)
}

fn check_locus(lab: &mut Lab, graph: &str) -> Result<Outcome, SuiteError> {
    let g = lab.graph(graph)?;
    let delta = g.min_degree();
    let rules = Rules::containment(delta);
    let r = solved!(lab.solve(graph, rules)?);
    let off_cycle: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| !g.on_short_cycle(v))
        .collect();
    if !r.cops_win() {
        return Ok(Outcome::new(Verdict::Skipped {
            reason: SkipReason::Vacuous,
            detail: format!("{delta} cops lose"),
        })
        .rules(rules));
    }

    // optimal play from the best placement against every robber start
    let placement = r.best_placement().expect("cop win").to_vec();
    let mut finals = Vec::new();
    let mut bad_line = None;
    for start in 0..g.vertex_count() {
        let p = play(
            &r,
            &placement,
            start,
            &mut |s| cop_choice(&r, s),
            &mut |s| robber_choice(&r, s),
            r.optimal_time().expect("cop win"),
            false,
        );
        let last = p.states.last().expect("nonempty").robber;
        if matches!(p.outcome, PlayoutOutcome::Contained { .. }) {
            finals.push(last);
            if !g.on_short_cycle(last) && bad_line.is_none() {
                bad_line = Some(p.states);
            }
        }
    }
    finals.sort_unstable();
    finals.dedup();

    // at every robber turn off the short cycles, some reply dodges
    // containment on the cops' next move
    let mut trapped = None;
    if !off_cycle.is_empty() {
        let codec = r.codec();
        for key in (1..codec.state_count()).step_by(2) {
            let s = codec.decode(key).expect("key in range");
            debug_assert_eq!(s.turn, Turn::Robber);
            if g.on_short_cycle(s.robber) || is_terminal(&g, &rules, &s) {
                continue;
            }
            let escapes = successors(&g, &rules, &s)
                .iter()
                .any(|t| r.level(t).is_none_or(|l| l > 1));
            if !escapes {
                trapped = Some(s);
                break;
            }
        }
    }

    let ok = bad_line.is_none() && trapped.is_none();
    let mut out = Outcome::new(if delta >= 3 {
        verdict(ok)
    } else {
        Verdict::Informational
    })
    .rules(rules)
    .value("min_degree", delta)
    .value("vertices_off_short_cycles", off_cycle.len())
    .value("final_robber_vertices", &finals)
    .value("final_vertices_on_short_cycles", bad_line.is_none())
    .value("every_off_cycle_turn_escapes", trapped.is_none());
    if let Some(line) = bad_line {
        out = out.witness(json!({ "line": line }));
    } else if let Some(s) = trapped {
        out = out.witness(json!({ "trapped": s }));
    }
    Ok(out)
}

/// Looks up a check by id.
pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(id: &str, graph: &str) -> CheckReport {
        let mut lab = Lab::new(SolverConfig::default());
        run_single(&mut lab, id, graph).unwrap()
    }

    #[test]
    fn catalog_ids_are_unique_and_have_instances() {
        let mut ids: Vec<&str> = catalog().iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), catalog().len());
        for c in catalog() {
            assert!(!instances(c.id).is_empty(), "{}", c.id);
        }
    }

    #[test]
    fn empty_selection_is_an_empty_passing_report() {
        let r = run_suite(&Selection::none(), &SolverConfig::default()).unwrap();
        assert!(r.checks.is_empty());
        assert_eq!(r.summary, SuiteSummary::default());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn unknown_id_is_an_error() {
        let err = run_suite(&Selection::only(["nope"]), &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, SuiteError::UnknownCheck(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn chain_on_complete_graph_is_tight_above() {
        let r = single("cop_bound_chain", "complete:5");
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.values["c"], 1);
        assert_eq!(r.values["xi"], 4);
        assert_eq!(r.values["gamma_times_max_degree"], 4);
    }

    #[test]
    fn chain_on_cycle_is_tight_below() {
        let r = single("cop_bound_chain", "cycle:8");
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(
            (r.values["c"].clone(), r.values["xi"].clone()),
            (json!(2), json!(2))
        );
    }

    #[test]
    fn short_odd_cycles_are_guard_skipped_with_evidence() {
        for graph in ["cycle:5", "cycle:7"] {
            let r = single("girth5_uncontainable", graph);
            assert!(matches!(
                r.verdict,
                Verdict::Skipped {
                    reason: SkipReason::Guard,
                    ..
                }
            ));
            assert_eq!(r.values["xi"], 2);
            assert_eq!(r.values["unguarded_statement_holds"], false);
        }
    }

    #[test]
    fn petersen_girth5_passes() {
        let r = single("girth5_uncontainable", "petersen");
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.values["value"], "robber_wins");
    }

    #[test]
    fn locus_on_cycle_is_informational() {
        let r = single("containment_locus", "cycle:6");
        assert_eq!(r.verdict, Verdict::Informational);
        assert_eq!(r.values["vertices_off_short_cycles"], 6);
    }

    #[test]
    fn locus_passes_on_track() {
        let r = single("containment_locus", "track:5");
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn capped_solves_skip() {
        let mut lab = Lab::new(SolverConfig { state_cap: 100 });
        let r = run_single(&mut lab, "ring_family", "ring:4").unwrap();
        assert!(matches!(
            r.verdict,
            Verdict::Skipped {
                reason: SkipReason::Cap,
                ..
            }
        ));
        assert!(r.values.contains_key("state_estimate"));
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = run_suite(
            &Selection::only(["complete_graph"]),
            &SolverConfig::default(),
        )
        .unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: SuiteReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(text.contains("\"schemaVersion\":1"));
    }
}
