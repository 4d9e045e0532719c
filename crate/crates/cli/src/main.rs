use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use containment::checks::{self, Selection, SuiteReport, Verdict};
use containment::graph::{domination_number, parse_graph6, to_graph6};
use containment::solver::{
    self, certify_robber_strategy, cop_choice, extract_strategies, play, robber_choice,
    robber_placement, PlayoutOutcome, SearchOutcome, SolveError, DEFAULT_STATE_CAP,
};
use containment::{FamilySpec, GameKind, GameState, Graph, Rules, SolveResult, SolverConfig, Turn};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "containment",
    version,
    about = "Exact solver for Containment and Cops and Robbers on small graphs"
)]
struct Cli {
    /// Print one JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Largest state space a single solve may build
    #[arg(
        long,
        global = true,
        env = "CONTAINMENT_STATE_CAP",
        default_value_t = DEFAULT_STATE_CAP,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    state_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Family spec such as `petersen`, `cycle:9`, `ring:3`
    #[arg(long, conflicts_with = "graph6", required_unless_present = "graph6")]
    family: Option<String>,
    /// File of graph6 strings, one per line
    #[arg(long, value_name = "FILE")]
    graph6: Option<PathBuf>,
    /// Line of the graph6 file to use, counting from 0
    #[arg(long)]
    index: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Optimal,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Least number of edge-cops that contain the robber
    Xi {
        #[command(flatten)]
        source: Source,
        /// Forbid the robber from staying put
        #[arg(long)]
        no_pass: bool,
    },
    /// Cop number of classic vertex Cops and Robbers
    Copnumber {
        #[command(flatten)]
        source: Source,
    },
    /// Domination number with a minimum dominating set
    Gamma {
        #[command(flatten)]
        source: Source,
    },
    /// Length of a shortest cycle
    Girth {
        #[command(flatten)]
        source: Source,
    },
    /// Solve one game exactly
    Solve {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        no_pass: bool,
        /// Classic Cops and Robbers instead of Containment
        #[arg(long, conflicts_with = "no_pass")]
        vertex: bool,
        /// Write both strategy tables as JSON
        #[arg(long, value_name = "FILE")]
        export_strategy: Option<PathBuf>,
    },
    /// Run the structural checks
    Check {
        /// Everything except the slow instances (the default)
        #[arg(long, conflicts_with_all = ["all", "only"])]
        fast: bool,
        /// Include the slow instances
        #[arg(long, conflicts_with = "only")]
        all: bool,
        /// Run only these check ids, slow instances included
        #[arg(long, num_args = 1.., value_name = "ID")]
        only: Vec<String>,
        /// List the check ids and exit
        #[arg(long)]
        list: bool,
    },
    /// Play one game move by move
    Playout {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        no_pass: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Policy::Optimal)]
        cops: Policy,
        #[arg(long, value_enum, default_value_t = Policy::Optimal)]
        robber: Policy,
        /// Cop placement as edge indices; defaults to the best placement
        #[arg(long, value_delimiter = ',')]
        placement: Option<Vec<usize>>,
        /// Robber's starting vertex; defaults to the robber policy's choice
        #[arg(long)]
        start: Option<usize>,
        #[arg(long, default_value_t = 100)]
        max_turns: u32,
    },
    /// Print a family member as graph6
    Generate { family: String },
    /// Run the HTTP service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Persist solve records here
        #[arg(long, value_name = "DIR")]
        cache_dir: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Cap {
        estimate: u128,
        cap: u64,
        bracket: Option<(usize, usize)>,
    },
    ChecksFailed,
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Failure {
        match e {
            SolveError::CapExceeded { estimate, cap } => Failure::Cap {
                estimate,
                cap,
                bracket: None,
            },
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
    config: SolverConfig,
}

impl Ctx {
    fn emit(&self, record: &Value, text: &str) {
        if self.json {
            println!(
                "{}",
                serde_json::to_string_pretty(record).expect("json values serialize")
            );
        } else {
            print!("{text}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        json: cli.json,
        config: SolverConfig {
            state_cap: cli.state_cap,
        },
    };
    let outcome = match cli.command {
        Command::Xi { source, no_pass } => cmd_xi(&ctx, &source, !no_pass),
        Command::Copnumber { source } => cmd_copnumber(&ctx, &source),
        Command::Gamma { source } => cmd_gamma(&ctx, &source),
        Command::Girth { source } => cmd_girth(&ctx, &source),
        Command::Solve {
            source,
            k,
            no_pass,
            vertex,
            export_strategy,
        } => {
            let rules = if vertex {
                Rules::vertex_pursuit(k)
            } else if no_pass {
                Rules::containment_no_pass(k)
            } else {
                Rules::containment(k)
            };
            cmd_solve(&ctx, &source, rules, export_strategy)
        }
        Command::Check {
            fast: _,
            all,
            only,
            list,
        } => cmd_check(&ctx, all, only, list),
        Command::Playout {
            source,
            k,
            no_pass,
            seed,
            cops,
            robber,
            placement,
            start,
            max_turns,
        } => {
            let rules = if no_pass {
                Rules::containment_no_pass(k)
            } else {
                Rules::containment(k)
            };
            let opts = PlayoutOpts {
                seed,
                cops,
                robber,
                placement,
                start,
                max_turns,
            };
            cmd_playout(&ctx, &source, rules, opts)
        }
        Command::Generate { family } => cmd_generate(&ctx, &family),
        Command::Serve {
            port,
            host,
            cache_dir,
        } => cmd_serve(&ctx, SocketAddr::new(host, port), cache_dir),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Cap {
            estimate,
            cap,
            bracket,
        }) => {
            let record = json!({
                "error": "state_cap_exceeded",
                "estimate": estimate.to_string(),
                "cap": cap,
                "bracket": bracket.map(|(low, high)| json!({ "low": low, "high": high })),
            });
            let mut text =
                format!("state space of {estimate} positions exceeds the cap of {cap}\n");
            if let Some((low, high)) = bracket {
                let _ = writeln!(text, "value lies in [{low}, {high}]");
            }
            if ctx.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&record).expect("json values serialize")
                );
            } else {
                eprint!("{text}");
            }
            ExitCode::from(3)
        }
    }
}

fn load(source: &Source) -> Result<(String, Graph), Failure> {
    if let Some(spec) = &source.family {
        if source.index.is_some() {
            return Err(Failure::Usage("--index applies to --graph6 files".into()));
        }
        let family: FamilySpec = spec.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
        let g = family
            .generate()
            .map_err(|e| Failure::Usage(format!("{e}")))?;
        return Ok((spec.clone(), g));
    }
    let path = source.graph6.as_ref().expect("clap requires a source");
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let index = source.index.unwrap_or(0);
    let line = text
        .lines()
        .map(|l| l.trim().trim_start_matches(">>graph6<<"))
        .filter(|l| !l.is_empty())
        .nth(index)
        .ok_or_else(|| {
            Failure::Usage(format!("{} has no graph at index {index}", path.display()))
        })?;
    let g = parse_graph6(line).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((format!("{}#{index}", path.display()), g))
}

fn edge_names(g: &Graph, edges: &[usize]) -> String {
    edges
        .iter()
        .map(|&e| {
            let (a, b) = g.endpoints(e);
            format!("{a}-{b}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn site_names(g: &Graph, rules: &Rules, sites: &[usize]) -> String {
    match rules.kind {
        GameKind::Containment => edge_names(g, sites),
        GameKind::VertexPursuit => sites
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn variant_name(rules: &Rules) -> &'static str {
    match (rules.kind, rules.robber_may_pass) {
        (GameKind::VertexPursuit, _) => "vertex",
        (GameKind::Containment, true) => "pass",
        (GameKind::Containment, false) => "no_pass",
    }
}

// Exact value with the winning placement, plus a certified robber win one
// cop below when the search had to solve that game.
fn search_command(
    ctx: &Ctx,
    name: &str,
    symbol: &str,
    g: &Graph,
    base: Rules,
    found: SearchOutcome,
) -> Outcome {
    let (value, result, robber_wins) = match found {
        SearchOutcome::Exact {
            value,
            result,
            robber_wins,
        } => (value, result, robber_wins),
        SearchOutcome::Bracket {
            low,
            high,
            estimate,
            ..
        } => {
            return Err(Failure::Cap {
                estimate,
                cap: ctx.config.state_cap,
                bracket: Some((low, high)),
            })
        }
    };
    let certificate = match robber_wins.last() {
        Some(&k) => {
            let lost = solver::solve(g, &base.with_cops(k), &ctx.config)?;
            let cert =
                certify_robber_strategy(&lost, &mut |c| robber_placement(&lost, c), &mut |s| {
                    robber_choice(&lost, s)
                })
                .map_err(|line| {
                    Failure::Usage(format!("robber strategy failed its certificate: {line:?}"))
                })?;
            Some((k, cert))
        }
        None => None,
    };
    let placement = result.best_placement().expect("cops win").to_vec();
    let time = result.optimal_time().expect("cops win");
    let record = json!({
        "graph": name,
        "variant": variant_name(&base),
        symbol: value,
        "bestPlacement": placement,
        "optimalTime": time,
        "robberWins": robber_wins,
        "robberCertificate": certificate.as_ref().map(|(k, c)| json!({
            "copCount": k,
            "placements": c.placements,
            "positions": c.positions,
        })),
    });
    let mut text = format!("{symbol}({name}) = {value}\n");
    let _ = writeln!(
        text,
        "  cops at {} win within {time} cop turns",
        site_names(g, &base, &placement)
    );
    if let Some((k, c)) = &certificate {
        let _ = writeln!(
            text,
            "  robber beats {k} cops: certified against all {} placements, {} positions",
            c.placements, c.positions
        );
    }
    if base.kind == GameKind::Containment && g.min_degree() > 1 {
        let _ = writeln!(
            text,
            "  fewer than {} cops never contain anyone: that is the minimum degree",
            g.min_degree()
        );
    }
    ctx.emit(&record, &text);
    Ok(())
}

fn cmd_xi(ctx: &Ctx, source: &Source, pass: bool) -> Outcome {
    let (name, g) = load(source)?;
    let base = Rules {
        robber_may_pass: pass,
        ..Rules::containment(1)
    };
    let found = solver::xi(&g, pass, &ctx.config)?;
    search_command(ctx, &name, "xi", &g, base, found)
}

fn cmd_copnumber(ctx: &Ctx, source: &Source) -> Outcome {
    let (name, g) = load(source)?;
    let found = solver::cop_number(&g, &ctx.config)?;
    search_command(ctx, &name, "c", &g, Rules::vertex_pursuit(1), found)
}

fn cmd_gamma(ctx: &Ctx, source: &Source) -> Outcome {
    let (name, g) = load(source)?;
    let (gamma, set) = domination_number(&g).map_err(|e| Failure::Usage(e.to_string()))?;
    let record = json!({ "graph": name, "gamma": gamma, "dominatingSet": set });
    let text = format!(
        "gamma({name}) = {gamma}\n  dominating set {}\n",
        set.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    );
    ctx.emit(&record, &text);
    Ok(())
}

fn cmd_girth(ctx: &Ctx, source: &Source) -> Outcome {
    let (name, g) = load(source)?;
    let girth = g.girth();
    let record = json!({ "graph": name, "girth": girth.map_or(json!("acyclic"), |n| json!(n)) });
    let text = match girth {
        Some(n) => format!("girth({name}) = {n}\n"),
        None => format!("girth({name}) = acyclic\n"),
    };
    ctx.emit(&record, &text);
    Ok(())
}

fn cmd_solve(ctx: &Ctx, source: &Source, rules: Rules, export: Option<PathBuf>) -> Outcome {
    let (name, g) = load(source)?;
    let result = solver::solve(&g, &rules, &ctx.config)?;
    let summary = result.summary();
    if let Some(path) = &export {
        let (cops, robber) = extract_strategies(&result);
        let doc = json!({ "summary": summary, "copStrategy": cops, "robberStrategy": robber });
        let bytes = serde_json::to_vec(&doc).expect("json values serialize");
        std::fs::write(path, bytes)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let mut record = json!({ "graph": name, "variant": variant_name(&rules) });
    record["summary"] = serde_json::to_value(&summary).expect("summary serializes");
    let mut text = String::new();
    match (&summary.best_placement, summary.optimal_time) {
        (Some(p), Some(t)) => {
            let _ = writeln!(
                text,
                "{name}, k = {} ({}): cops win",
                rules.cop_count,
                variant_name(&rules)
            );
            let _ = writeln!(
                text,
                "  best placement {}, contained within {t} cop turns",
                site_names(&g, &rules, p)
            );
        }
        _ => {
            let _ = writeln!(
                text,
                "{name}, k = {} ({}): robber wins",
                rules.cop_count,
                variant_name(&rules)
            );
        }
    }
    let _ = writeln!(
        text,
        "  {} of {} positions are cop wins",
        summary.cop_win_states, summary.state_count
    );
    if let Some(path) = &export {
        let _ = writeln!(text, "  strategies written to {}", path.display());
    }
    ctx.emit(&record, &text);
    Ok(())
}

fn verdict_word(v: &Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Skipped { .. } => "SKIP",
        Verdict::Informational => "INFO",
    }
}

fn cmd_check(ctx: &Ctx, all: bool, only: Vec<String>, list: bool) -> Outcome {
    if list {
        let catalog = checks::catalog();
        let record = json!(catalog
            .iter()
            .map(|c| json!({ "id": c.id, "claim": c.claim }))
            .collect::<Vec<_>>());
        let mut text = String::new();
        for c in catalog {
            let _ = writeln!(text, "{:24} {}", c.id, c.claim);
        }
        ctx.emit(&record, &text);
        return Ok(());
    }
    let selection = if !only.is_empty() {
        Selection::only(only)
    } else if all {
        Selection::all()
    } else {
        Selection::fast()
    };
    let report: SuiteReport =
        checks::run_suite(&selection, &ctx.config).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut text = String::new();
    for c in &report.checks {
        let values: Vec<String> = c.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = write!(
            text,
            "{} {} {} {}",
            verdict_word(&c.verdict),
            c.check_id,
            c.graph,
            values.join(" ")
        );
        if let Verdict::Skipped { detail, .. } = &c.verdict {
            let _ = write!(text, " ({detail})");
        }
        text.push('\n');
    }
    let s = &report.summary;
    let _ = writeln!(
        text,
        "{} checks: {} passed, {} failed, {} skipped, {} informational",
        s.total, s.passed, s.failed, s.skipped, s.informational
    );
    ctx.emit(
        &serde_json::to_value(&report).expect("report serializes"),
        &text,
    );
    if report.exit_code() == 0 {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

struct PlayoutOpts {
    seed: u64,
    cops: Policy,
    robber: Policy,
    placement: Option<Vec<usize>>,
    start: Option<usize>,
    max_turns: u32,
}

fn cmd_playout(ctx: &Ctx, source: &Source, rules: Rules, opts: PlayoutOpts) -> Outcome {
    let (name, g) = load(source)?;
    let result: SolveResult = solver::solve(&g, &rules, &ctx.config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let placement = match opts.placement {
        Some(mut p) => {
            if p.len() != rules.cop_count || p.iter().any(|&e| e >= g.edge_count()) {
                return Err(Failure::Usage(format!(
                    "placement needs {} edge indices below {}",
                    rules.cop_count,
                    g.edge_count()
                )));
            }
            p.sort_unstable();
            p
        }
        None => result
            .best_placement()
            .map(<[usize]>::to_vec)
            .unwrap_or_else(|| result.codec().indexer().unrank(0)),
    };
    let start = match (opts.start, opts.robber) {
        (Some(v), _) if v < g.vertex_count() => v,
        (Some(v), _) => return Err(Failure::Usage(format!("no vertex {v}"))),
        (None, Policy::Optimal) => robber_placement(&result, &placement),
        (None, Policy::Random) => rng.gen_range(0..g.vertex_count()),
    };
    let random_move = |s: &GameState, rng: &mut ChaCha8Rng| {
        containment::game::successors(result.graph(), result.rules(), s)
            .choose(rng)
            .expect("open positions have moves")
            .clone()
    };
    let mut cop_rng = ChaCha8Rng::seed_from_u64(rng.gen());
    let mut robber_rng = ChaCha8Rng::seed_from_u64(rng.gen());
    let p = play(
        &result,
        &placement,
        start,
        &mut |s| match opts.cops {
            Policy::Optimal => cop_choice(&result, s),
            Policy::Random => random_move(s, &mut cop_rng),
        },
        &mut |s| match opts.robber {
            Policy::Optimal => robber_choice(&result, s),
            Policy::Random => random_move(s, &mut robber_rng),
        },
        opts.max_turns,
        matches!((opts.cops, opts.robber), (Policy::Optimal, Policy::Optimal)),
    );

    let mut text = format!(
        "{name}, k = {} ({}): cops at {}, robber at {start}\n",
        rules.cop_count,
        variant_name(&rules),
        edge_names(&g, &placement)
    );
    let mut moves = Vec::new();
    for w in p.states.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let line = match a.turn {
            Turn::Cops => format!(
                "cops {} -> {}",
                edge_names(&g, &a.cops),
                edge_names(&g, &b.cops)
            ),
            Turn::Robber if a.robber == b.robber => format!("robber stays at {}", a.robber),
            Turn::Robber => format!("robber {} -> {}", a.robber, b.robber),
        };
        let _ = writeln!(text, "  {line}");
        moves.push(line);
    }
    let ending = match p.outcome {
        PlayoutOutcome::Contained { cop_turns } => format!("contained after {cop_turns} cop turns"),
        PlayoutOutcome::EvasionCertified {
            first_seen,
            repeated_at,
        } => {
            format!("evasion certified at state repeat (positions {first_seen} and {repeated_at})")
        }
        PlayoutOutcome::TurnLimit => format!("no containment within {} cop turns", opts.max_turns),
    };
    let _ = writeln!(text, "{ending}");
    let record = json!({
        "graph": name,
        "variant": variant_name(&rules),
        "copCount": rules.cop_count,
        "seed": opts.seed,
        "placement": placement,
        "start": start,
        "moves": moves,
        "states": p.states,
        "outcome": p.outcome,
        "ending": ending,
    });
    ctx.emit(&record, &text);
    Ok(())
}

fn cmd_generate(ctx: &Ctx, spec: &str) -> Outcome {
    let family: FamilySpec = spec.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
    let g = family
        .generate()
        .map_err(|e| Failure::Usage(format!("{e}")))?;
    let graph6 = to_graph6(&g);
    let record = json!({
        "family": spec,
        "graph6": graph6,
        "vertices": g.vertex_count(),
        "edges": g.edges(),
    });
    ctx.emit(&record, &format!("{graph6}\n"));
    Ok(())
}

fn cmd_serve(ctx: &Ctx, addr: SocketAddr, cache_dir: Option<PathBuf>) -> Outcome {
    let config = containment_service::ServiceConfig {
        state_cap: ctx.config.state_cap,
        cache_dir,
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Usage(e.to_string()))?;
    eprintln!("listening on http://{addr}");
    runtime
        .block_on(containment_service::serve(addr, config))
        .map_err(|e| Failure::Usage(format!("{addr}: {e}")))
}
