use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use forcesynth::api::{router, AppState};
use forcesynth::cli;
use forcesynth::model::ModelFile;
use serde_json::{json, Value};
use tower::ServiceExt;

const LINE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../models/manufacturing_line.json");

fn line_model() -> Value {
    serde_json::from_str(&std::fs::read_to_string(LINE).unwrap()).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value, String) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    let json = serde_json::from_str(&text).unwrap_or(Value::Null);
    (status, json, text)
}

async fn open(app: &Router, body: Value) -> u64 {
    let (status, v, text) = call(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{text}");
    v["id"].as_u64().unwrap()
}

async fn step(app: &Router, id: u64, event: &str) -> (StatusCode, Value) {
    let (s, v, _) = call(app, "POST", &format!("/sessions/{id}/step"), Some(json!({ "event": event }))).await;
    (s, v)
}

#[tokio::test]
async fn walk_to_bi1_and_force() {
    let app = router(AppState::default());
    let id = open(&app, json!({ "model": line_model() })).await;
    let (s, v, _) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["plant_state"], "II0");
    assert_eq!(v["decision"]["mode"], "disable");

    for e in ["start_M1", "end_M1", "start_M1"] {
        assert_eq!(step(&app, id, e).await.0, StatusCode::OK);
    }
    let (_, at_bi1, _) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(at_bi1["sup_state"], "BI1");
    assert_eq!(at_bi1["decision"]["mode"], "force");
    assert_eq!(at_bi1["decision"]["allowed"], json!(["start_M2"]));
    assert_eq!(at_bi1["decision"]["preempted"], json!(["end_M1"]));
    assert_eq!(at_bi1["history"], json!(["start_M1", "end_M1", "start_M1"]));

    let (s, v) = step(&app, id, "end_M1").await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error_kind"], "disabled_by_supervisor");

    let (s, v) = step(&app, id, "start_M2").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["plant_state"], "BB0");

    let (s, v, _) = call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v, at_bi1);
}

#[tokio::test]
async fn error_kinds() {
    let app = router(AppState::default());
    let id = open(&app, json!({ "model": line_model() })).await;
    // end_M1 is uncontrollable, hence allowed, but M1 is idle
    let (s, v) = step(&app, id, "end_M1").await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error_kind"], "not_eligible_in_plant");
    let (s, v) = step(&app, id, "jump").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error_kind"], "unknown_event");
    let (s, v, _) = call(&app, "GET", "/sessions/999", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error_kind"], "unknown_session");
    assert_eq!(step(&app, 999, "start_M1").await.0, StatusCode::NOT_FOUND);
    let (s, v, _) = call(&app, "POST", &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error_kind"], "nothing_to_undo");
    let (s, v, _) = call(&app, "POST", "/sessions", Some(json!({ "model": line_model(), "mode": "x" }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error_kind"], "invalid_mode");
}

#[tokio::test]
async fn classic_mode_and_explicit_supervisor() {
    let app = router(AppState::default());
    let id = open(&app, json!({ "model": line_model(), "mode": "classic" })).await;
    for e in ["start_M1", "end_M1"] {
        step(&app, id, e).await;
    }
    // the classic supervisor disables start_M1 at II1
    let (s, v) = step(&app, id, "start_M1").await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error_kind"], "disabled_by_supervisor");

    // the plant itself as supervisor: nothing is disabled
    let mut sup = line_model();
    let plant = ModelFile::from_json(&sup.to_string()).unwrap().composed_plant(false).unwrap();
    let as_sup = ModelFile::from_automata(&[(forcesynth::model::Kind::Supervisor, &plant, None)]);
    sup = serde_json::to_value(&as_sup).unwrap();
    let id = open(&app, json!({ "model": line_model(), "supervisor": sup })).await;
    for e in ["start_M1", "end_M1", "start_M1"] {
        assert_eq!(step(&app, id, e).await.0, StatusCode::OK);
    }
}

#[tokio::test]
async fn graph_is_dot() {
    let app = router(AppState::default());
    let id = open(&app, json!({ "model": line_model() })).await;
    let (s, _, text) = call(&app, "GET", &format!("/models/{id}/graph"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"BI1\" [style=filled, fillcolor=palegreen];"));
    let (_, _, plant) = call(&app, "GET", &format!("/models/{id}/graph?automaton=plant"), None).await;
    assert!(plant.contains("\"II2\""));
    let (s, _, _) = call(&app, "GET", "/models/42/graph", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn empty_supervisor_is_rejected() {
    let model = json!({
        "version": "1",
        "alphabet": [{"name": "u", "controllable": false}],
        "automata": [{"name": "P", "kind": "plant", "states": ["x", "y"], "initial": "x",
                      "marked": [], "transitions": [{"from": "x", "event": "u", "to": "y"}]}]
    });
    let app = router(AppState::default());
    let (s, v, _) = call(&app, "POST", "/sessions", Some(json!({ "model": model }))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error_kind"], "empty_supervisor");
}

/// Decision columns of a `simulate` transcript line.
fn decision_of(line: &str) -> String {
    let start = line.find("plant=").unwrap();
    let end = line.find(" ->").unwrap_or(line.len());
    line[start..end].replace(" (marked)", "")
}

#[tokio::test]
async fn api_agrees_with_cli_simulate() {
    let trace = ["start_M1", "end_M1", "start_M1", "start_M2", "end_M2", "end_M1", "start_M2"];
    let dir = tempfile::tempdir().unwrap();
    let tpath = dir.path().join("trace.txt");
    std::fs::write(&tpath, trace.join("\n")).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(
        ["forcesynth", "simulate", LINE, "--trace", tpath.to_str().unwrap()],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let cli_lines: Vec<String> = String::from_utf8(out).unwrap().lines().map(decision_of).collect();

    let app = router(AppState::default());
    let id = open(&app, json!({ "model": line_model() })).await;
    let mut api_lines = Vec::new();
    for k in 0..=trace.len() {
        let (_, v, _) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
        let names = |f: &str| {
            v["decision"][f]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap().to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        api_lines.push(format!(
            "plant={} sup={} mode={} allowed={{{}}} disabled={{{}}} preempted={{{}}}",
            v["plant_state"].as_str().unwrap(),
            v["sup_state"].as_str().unwrap(),
            v["decision"]["mode"].as_str().unwrap(),
            names("allowed"),
            names("disabled"),
            names("preempted"),
        ));
        if let Some(e) = trace.get(k) {
            assert_eq!(step(&app, id, e).await.0, StatusCode::OK);
        }
    }
    assert_eq!(cli_lines, api_lines);
}

#[tokio::test]
async fn sessions_are_independent() {
    let app = router(AppState::default());
    let a = open(&app, json!({ "model": line_model() })).await;
    let b = open(&app, json!({ "model": line_model() })).await;
    assert_ne!(a, b);
    let handles: Vec<_> = [a, b]
        .into_iter()
        .map(|id| {
            let app = app.clone();
            tokio::spawn(async move {
                for e in ["start_M1", "end_M1"] {
                    step(&app, id, e).await;
                }
            })
        })
        .collect();
    for h in handles {
        h.await.unwrap();
    }
    for id in [a, b] {
        let (_, v, _) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
        assert_eq!(v["plant_state"], "II1");
    }
}
