use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use containment::game::successors;
use containment::{FamilySpec, GameState, Rules, Turn};
use containment_service::session::{
    Engine, Move, MoveSet, RobberTarget, Session, SessionOptions, Side, Variant,
};
use containment_service::{router, AppState, ServiceConfig};
use http_body_util::BodyExt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app(config: ServiceConfig) -> Router {
    router(Arc::new(AppState::new(config).unwrap()))
}

async fn call(
    app: &Router,
    method: &str,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Option<String>, Value, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let cache = resp
        .headers()
        .get("x-cache")
        .map(|v| v.to_str().unwrap().to_string());
    let bytes = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    let json = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, cache, json, bytes)
}

async fn new_session(app: &Router, body: Value) -> Value {
    let (status, _, view, _) = call(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{view}");
    view
}

async fn play(app: &Router, view: &Value, mv: Value) -> (StatusCode, Value) {
    let uri = format!("/sessions/{}/moves", view["id"].as_str().unwrap());
    let (status, _, body, _) = call(app, "POST", &uri, Some(mv)).await;
    (status, body)
}

fn state_of(view: &Value) -> GameState {
    let cops: Vec<usize> = serde_json::from_value(view["cops"].clone()).unwrap();
    let robber = view["robber"].as_u64().unwrap() as usize;
    let turn = if view["toMove"] == "robber" {
        Turn::Robber
    } else {
        Turn::Cops
    };
    GameState::new(cops, robber, turn)
}

#[tokio::test]
async fn health_and_families() {
    let app = app(ServiceConfig::default());
    let (status, _, body, _) = call(&app, "GET", "/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"status": "ok"}));
    let (status, _, body, _) = call(&app, "GET", "/families", None).await;
    assert_eq!(status, StatusCode::OK);
    let names: Vec<&str> = body
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    for name in ["cycle", "complete", "petersen", "mcgee"] {
        assert!(names.contains(&name), "{name} missing from {names:?}");
    }
}

#[tokio::test]
async fn solve_is_cached_in_memory_and_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let config = ServiceConfig {
        cache_dir: Some(dir.path().to_path_buf()),
        ..ServiceConfig::default()
    };
    let req = json!({"family": "cycle:5", "k": 2});
    let first = app(config.clone());
    let (status, cache, body, bytes) = call(&first, "POST", "/solve", Some(req.clone())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(cache.as_deref(), Some("miss"));
    assert_eq!(body["summary"]["value"], "cops_win");
    let (_, cache, _, again) = call(&first, "POST", "/solve", Some(req.clone())).await;
    assert_eq!(cache.as_deref(), Some("hit"));
    assert_eq!(again, bytes);

    // a fresh process reads the record back from disk
    let second = app(config);
    let (status, cache, _, reread) = call(&second, "POST", "/solve", Some(req)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(cache.as_deref(), Some("hit"));
    assert_eq!(reread, bytes);
}

#[tokio::test]
async fn oversized_games_are_refused_with_the_estimate() {
    let app = app(ServiceConfig::default());
    let (status, _, body, _) = call(
        &app,
        "POST",
        "/solve",
        Some(json!({"family": "ring:4", "k": 99})),
    )
    .await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(body["error"], "state_cap_exceeded");
    assert!(
        body["estimate"].as_str().unwrap().parse::<u128>().unwrap()
            > body["cap"].as_u64().unwrap() as u128
    );
    let (status, _, _, _) = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({"family": "ring:4", "k": 99, "humanRole": "robber"})),
    )
    .await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn bad_requests_and_unknown_sessions() {
    let app = app(ServiceConfig::default());
    for body in [
        json!({"family": "dodecahedron", "k": 2}),
        json!({"family": "cycle:2", "k": 2}),
        json!({"family": "cycle:5", "graph6": "Dhc", "k": 2}),
        json!({"family": "cycle:5", "k": 0}),
        json!({"family": "cycle:5"}),
    ] {
        let (status, _, _, _) = call(&app, "POST", "/solve", Some(body.clone())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
    }
    let req = Request::builder()
        .method("POST")
        .uri("/solve")
        .header("content-type", "application/json")
        .body(Body::from("{not json"))
        .unwrap();
    assert_eq!(
        app.clone().oneshot(req).await.unwrap().status(),
        StatusCode::BAD_REQUEST
    );

    let (status, _, _, _) = call(&app, "GET", "/sessions/not-a-uuid", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let uri = format!("/sessions/{}", uuid::Uuid::nil());
    let (status, _, _, _) = call(&app, "GET", &uri, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _, _, _) = call(
        &app,
        "POST",
        &format!("{uri}/moves"),
        Some(json!({"robber": 0})),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn graph6_sessions_work_like_family_sessions() {
    let app = app(ServiceConfig::default());
    // C5 in graph6
    let view = new_session(
        &app,
        json!({"graph6": "Dhc", "k": 2, "humanRole": "robber"}),
    )
    .await;
    assert_eq!(view["graph"]["vertices"], 5);
    assert_eq!(view["phase"], "robber_placement");
}

#[tokio::test]
async fn complete_graph_robber_is_contained_within_one_turn() {
    let app = app(ServiceConfig::default());
    for v in 0..4 {
        let view = new_session(
            &app,
            json!({"family": "complete:4", "k": 3, "humanRole": "robber"}),
        )
        .await;
        assert_eq!(view["legalMoves"]["kind"], "place_robber");
        let (status, view) = play(&app, &view, json!({"placeRobber": v})).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(view["status"], "cops_win", "{view}");
        assert_eq!(view["phase"], "finished");
        assert!(view["copTurns"].as_u64().unwrap() <= 1);
        let (status, body) = play(&app, &view, json!({"robber": "pass"})).await;
        assert_eq!(status, StatusCode::CONFLICT);
        assert_eq!(body["legalMoves"]["kind"], "none");
    }
}

#[tokio::test]
async fn petersen_hints_keep_the_robber_free() {
    let app = app(ServiceConfig::default());
    let rules = Rules::containment(3);
    let g = FamilySpec::Petersen.generate().unwrap();
    let engine = Engine::new(containment::solve(&g, &rules, &Default::default()).unwrap());
    let mut view = new_session(
        &app,
        json!({"family": "petersen", "k": 3, "humanRole": "robber", "hints": true}),
    )
    .await;
    assert_eq!(view["hint"]["kind"], "place_robber");
    let mut plies = 0;
    while plies < 50 {
        let hint: MoveSet = serde_json::from_value(view["hint"].clone()).unwrap();
        let mv = match hint {
            MoveSet::PlaceRobber { vertices } => json!({"placeRobber": vertices[0]}),
            MoveSet::Robber { moves } => json!({ "robber": moves[0] }),
            other => panic!("unexpected hint {other:?}"),
        };
        let (status, next) = play(&app, &view, mv).await;
        assert_eq!(status, StatusCode::OK, "{next}");
        view = next;
        plies += 2;
        assert_ne!(view["status"], "cops_win");
        assert!(!engine.result.is_cop_win(&state_of(&view)), "{view}");
    }
    assert_eq!(view["status"], "robber_wins_certified");
    assert_eq!(view["phase"], "in_play");
}

#[tokio::test]
async fn illegal_moves_get_409_with_the_legal_set() {
    let app = app(ServiceConfig::default());
    let view = new_session(
        &app,
        json!({"family": "cycle:6", "k": 1, "humanRole": "robber"}),
    )
    .await;
    let cop = view["cops"][0].as_u64().unwrap() as usize;
    let g = FamilySpec::Cycle(6).generate().unwrap();
    let (a, b) = g.endpoints(cop);
    let (status, view) = play(&app, &view, json!({"placeRobber": a})).await;
    assert_eq!(status, StatusCode::OK);
    let s = state_of(&view);
    assert_eq!(s.turn, Turn::Robber);
    // the engine cop may have moved; find a neighbour across an occupied edge
    let blocked = g
        .incident_edges(s.robber)
        .iter()
        .find(|e| s.cops.contains(e))
        .map(|&e| g.other_endpoint(e, s.robber));
    let target = blocked.unwrap_or(if s.robber == a { b } else { a });
    if blocked.is_some() {
        let (status, body) = play(&app, &view, json!({ "robber": target })).await;
        assert_eq!(status, StatusCode::CONFLICT, "{body}");
        assert_eq!(body["error"], "illegal_move");
        let legal: Vec<RobberTarget> =
            serde_json::from_value(body["legalMoves"]["moves"].clone()).unwrap();
        assert!(!legal.contains(&RobberTarget::Vertex(target)));
    }
    // a cop move when the robber is to move
    let (status, _) = play(&app, &view, json!({"cops": [[cop, cop]]})).await;
    assert_eq!(status, StatusCode::CONFLICT);
    // malformed move body
    let (status, _) = play(&app, &view, json!({"robber": "stay"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[test]
fn human_cop_moves_start_from_the_placed_edge() {
    let engine = {
        let g = FamilySpec::Path(3).generate().unwrap();
        Arc::new(Engine::new(
            containment::solve(&g, &Rules::containment(1), &Default::default()).unwrap(),
        ))
    };
    let options = SessionOptions {
        k: 1,
        variant: Variant::Pass,
        human_role: Side::Cops,
        hints: false,
    };
    let mut s = Session::new("path:3".into(), options, engine);
    s.play(Move::PlaceCops(vec![1])).unwrap();
    let at = s.state().unwrap();
    assert_eq!(at.turn, Turn::Cops);
    let legal = s.legal_moves();
    let MoveSet::Cops { moves } = legal else {
        panic!()
    };
    assert!(moves.iter().all(|m| m.len() == 1 && m[0].0 == 1));
}

#[tokio::test]
async fn passing_gets_an_engine_reply_and_no_pass_forbids_it() {
    let app = app(ServiceConfig::default());
    let view = new_session(
        &app,
        json!({"family": "cycle:5", "k": 1, "humanRole": "robber"}),
    )
    .await;
    let (_, view) = play(&app, &view, json!({"placeRobber": 2})).await;
    let before = view["history"].as_array().unwrap().len();
    let (status, view) = play(&app, &view, json!({"robber": "pass"})).await;
    assert_eq!(status, StatusCode::OK, "{view}");
    let history = view["history"].as_array().unwrap();
    assert_eq!(history.len(), before + 2);
    assert_eq!(history[before]["move"], json!({"robber": "pass"}));
    assert_eq!(history[before + 1]["side"], "cops");
    assert_eq!(history[before + 1]["byHuman"], false);

    let view = new_session(
        &app,
        json!({"family": "cycle:5", "k": 1, "variant": "no_pass", "humanRole": "robber"}),
    )
    .await;
    let (_, view) = play(&app, &view, json!({"placeRobber": 2})).await;
    let legal: Vec<RobberTarget> =
        serde_json::from_value(view["legalMoves"]["moves"].clone()).unwrap();
    assert!(!legal.is_empty());
    assert!(legal.iter().all(|t| matches!(t, RobberTarget::Vertex(_))));
    let (status, _) = play(&app, &view, json!({"robber": "pass"})).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn engine_cops_make_progress_every_turn() {
    let app = app(ServiceConfig::default());
    let rules = Rules::containment(3);
    let g = FamilySpec::KTrack(5).generate().unwrap();
    let engine = Engine::new(containment::solve(&g, &rules, &Default::default()).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let mut view = new_session(
            &app,
            json!({"family": "track:5", "k": 3, "humanRole": "robber"}),
        )
        .await;
        let start = *(0..g.vertex_count())
            .collect::<Vec<_>>()
            .choose(&mut rng)
            .unwrap();
        let mut last: Option<u32> = None;
        let (_, v) = play(&app, &view, json!({"placeRobber": start})).await;
        view = v;
        while view["phase"] == "in_play" {
            let s = state_of(&view);
            let level = engine.result.level(&s).expect("cop-win region");
            if let Some(l) = last {
                assert!(level < l);
            }
            last = Some(level);
            let legal: Vec<RobberTarget> =
                serde_json::from_value(view["legalMoves"]["moves"].clone()).unwrap();
            let mv = legal.choose(&mut rng).unwrap();
            let (status, v) = play(&app, &view, json!({ "robber": mv })).await;
            assert_eq!(status, StatusCode::OK);
            view = v;
        }
        assert_eq!(view["status"], "cops_win");
        assert!(view["copTurns"].as_u64().unwrap() <= engine.result.optimal_time().unwrap() as u64);
    }
}

#[tokio::test]
async fn random_sessions_replay_through_the_kernel() {
    let app = app(ServiceConfig::default());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (family, k, variant) in [
        ("cycle:6", 2, "pass"),
        ("petersen", 3, "no_pass"),
        ("q3", 2, "pass"),
    ] {
        let g: containment::Graph = family.parse::<FamilySpec>().unwrap().generate().unwrap();
        let rules = if variant == "pass" {
            Rules::containment(k)
        } else {
            Rules::containment_no_pass(k)
        };
        for human in ["cops", "robber"] {
            let mut view = new_session(
                &app,
                json!({"family": family, "k": k, "variant": variant, "humanRole": human}),
            )
            .await;
            for _ in 0..40 {
                if view["phase"] == "finished" {
                    break;
                }
                let mv = match serde_json::from_value::<MoveSet>(view["legalMoves"].clone())
                    .unwrap()
                {
                    MoveSet::PlaceCops { count, edge_count } => {
                        json!({"placeCops": (0..count).map(|_| rand::Rng::gen_range(&mut rng, 0..edge_count)).collect::<Vec<_>>()})
                    }
                    MoveSet::PlaceRobber { vertices } => {
                        json!({"placeRobber": vertices.choose(&mut rng).unwrap()})
                    }
                    MoveSet::Cops { moves } => json!({"cops": moves.choose(&mut rng).unwrap()}),
                    MoveSet::Robber { moves } => json!({"robber": moves.choose(&mut rng).unwrap()}),
                    other => panic!("{other:?}"),
                };
                let (status, v) = play(&app, &view, mv).await;
                assert_eq!(status, StatusCode::OK, "{v}");
                view = v;
            }
            // replay the history through the kernel
            let history: Vec<Move> = view["history"]
                .as_array()
                .unwrap()
                .iter()
                .map(|p| serde_json::from_value(p["move"].clone()).unwrap())
                .collect();
            let (Move::PlaceCops(c), Move::PlaceRobber(r)) = (&history[0], &history[1]) else {
                panic!("{history:?}")
            };
            let mut s = GameState::new(c.clone(), *r, Turn::Cops);
            for mv in &history[2..] {
                let next = match mv {
                    Move::Cops(pairs) => {
                        GameState::new(pairs.iter().map(|p| p.1).collect(), s.robber, Turn::Robber)
                    }
                    Move::Robber(RobberTarget::Vertex(v)) => {
                        GameState::new(s.cops.clone(), *v, Turn::Cops)
                    }
                    Move::Robber(RobberTarget::Pass(_)) => {
                        GameState::new(s.cops.clone(), s.robber, Turn::Cops)
                    }
                    other => panic!("{other:?}"),
                };
                assert!(
                    successors(&g, &rules, &s).contains(&next),
                    "{family}: {s:?} -> {next:?}"
                );
                s = next;
            }
            assert_eq!(
                Some(s),
                view["robber"]
                    .as_u64()
                    .map(|_| state_of(&view))
                    .map(|mut v| {
                        if view["phase"] == "finished" {
                            v.turn = if history.len().is_multiple_of(2) {
                                Turn::Cops
                            } else {
                                Turn::Robber
                            };
                        }
                        v
                    })
            );
        }
    }
}
