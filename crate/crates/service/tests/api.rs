// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use metaglyph_service::{router, CompileRequest, CompileResponse, Config};
use serde_json::{json, Value};
use tower::ServiceExt;

const SQUARE: &str = "beginfig(1);\nside:=10;\ndraw (0,0) \u{2014} (side,0) \u{2014} (side,side) --(0,side) \u{2014} (0,0);\nendfig;\n";

fn app() -> Router {
    router(Config::default())
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, Value) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, value)
}

fn post(body: impl Into<Body>) -> Request<Body> {
    Request::post("/api/compile")
        .header("content-type", "application/json")
        .body(body.into())
        .unwrap()
}

async fn compile(app: Router, req: &CompileRequest) -> (StatusCode, CompileResponse) {
    let (status, v) = send(app, post(serde_json::to_vec(req).unwrap())).await;
    (status, serde_json::from_value(v).unwrap())
}

fn request(source: &str) -> CompileRequest {
    CompileRequest {
        source: source.into(),
        ..Default::default()
    }
}

fn view_box(svg: &str) -> String {
    let doc = roxmltree::Document::parse(svg).unwrap();
    doc.root_element().attribute("viewBox").unwrap().to_string()
}

#[tokio::test]
async fn square_compiles() {
    let (status, resp) = compile(app(), &request(SQUARE)).await;
    assert_eq!(status, StatusCode::OK);
    assert!(resp.diagnostics.iter().all(|d| d.severity != "error"));
    let svg = resp.svg.unwrap();
    assert_eq!(view_box(&svg), "0 0 10 10");
    assert!(svg.contains("M 0 10 L 10 10 L 10 0 L 0 0 Z"));
    assert_eq!(resp.parameters.len(), 1);
    assert_eq!((resp.parameters[0].name.as_str(), resp.parameters[0].value), ("side", 10.0));
}

#[tokio::test]
async fn overrides_replace_assignments() {
    let mut req = request(SQUARE);
    req.overrides = BTreeMap::from([("side".to_string(), 20.0)]);
    let (status, resp) = compile(app(), &req).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(view_box(&resp.svg.unwrap()), "0 0 20 20");
    assert_eq!(resp.parameters[0].value, 20.0);
}

#[tokio::test]
async fn debug_adds_overlay() {
    let mut req = request(SQUARE);
    req.debug = true;
    let (_, resp) = compile(app(), &req).await;
    let svg = resp.svg.unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let knots = doc.descendants().filter(|n| n.attribute("class") == Some("knot")).count();
    assert_eq!(knots, 4);
}

#[tokio::test]
async fn broken_source_gives_located_diagnostics() {
    let src = "side := 10;\ndraw (0,0) -- (side,0;\n";
    let (status, resp) = compile(app(), &request(src)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(resp.svg.is_none());
    let d = &resp.diagnostics[0];
    assert_eq!(d.severity, "error");
    assert_eq!((d.line, d.column), (2, 22), "{d:?}");
}

#[tokio::test]
async fn evaluation_error_is_located() {
    let (status, resp) = compile(app(), &request("a := 1;\n\nb := a + c;\n")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let d = &resp.diagnostics[0];
    assert_eq!((d.line, d.column, d.message.as_str()), (3, 10, "undefined name `c`"));
}

#[tokio::test]
async fn warnings_do_not_block_svg() {
    let (status, resp) = compile(app(), &request("x := 1; x := 2;\nfill (0,0)--(1,0)--(1,1)--cycle;\n")).await;
    assert_eq!(status, StatusCode::OK);
    assert!(resp.svg.is_some());
}

fn runaway() -> String {
    let mut src = String::from("vardef f0 = 1 enddef;\n");
    for i in 1..=40 {
        src.push_str(&format!("vardef f{i} = f{j} + f{j} enddef;\n", j = i - 1));
    }
    src.push_str("x := f40;\n");
    src
}

#[tokio::test]
async fn timeout_is_reported_and_service_recovers() {
    let app = app();
    let mut req = request(&runaway());
    req.timeout_ms = Some(100);
    let start = Instant::now();
    let (status, resp) = compile(app.clone(), &req).await;
    assert!(start.elapsed() < Duration::from_secs(2));
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(resp.diagnostics.iter().any(|d| d.message.contains("timed out")));
    let (status, resp) = compile(app, &request(SQUARE)).await;
    assert_eq!(status, StatusCode::OK);
    assert!(resp.svg.is_some());
}

#[tokio::test]
async fn includes_are_limited_to_the_prelude() {
    let (status, resp) = compile(app(), &request("input plain_ex;\ninput ../../etc/passwd;\n")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(resp.diagnostics[0].line, 2);
}

#[tokio::test]
async fn malformed_bodies_are_rejected() {
    let (status, v) = send(app(), post("{\"source\": 1}")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().starts_with("malformed request"));
    let (status, _) = send(app(), post("not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(app(), post(r#"{"source": "", "colour": "red"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(app(), post(r#"{"source": "", "timeout_ms": 5001}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(app(), post(r#"{"source": "", "timeout_ms": 5000}"#)).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn content_negotiation() {
    let req = Request::post("/api/compile")
        .header("content-type", "text/plain")
        .body(Body::from(r#"{"source": ""}"#))
        .unwrap();
    assert_eq!(send(app(), req).await.0, StatusCode::UNSUPPORTED_MEDIA_TYPE);
    let req = Request::post("/api/compile")
        .header("content-type", "application/json; charset=utf-8")
        .header("accept", "text/html, application/json;q=0.9")
        .body(Body::from(r#"{"source": ""}"#))
        .unwrap();
    assert_eq!(send(app(), req).await.0, StatusCode::OK);
    let req = Request::post("/api/compile")
        .header("accept", "image/png")
        .body(Body::from(r#"{"source": ""}"#))
        .unwrap();
    assert_eq!(send(app(), req).await.0, StatusCode::NOT_ACCEPTABLE);
}

#[tokio::test]
async fn oversized_source_is_refused() {
    let big = "%".repeat(256 * 1024 + 1);
    let (status, v) = send(app(), post(serde_json::to_vec(&json!({ "source": big })).unwrap())).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert!(v["error"].as_str().unwrap().contains("limit is 262144"));
    let fits = "%".repeat(256 * 1024);
    let (status, _) = send(app(), post(serde_json::to_vec(&json!({ "source": fits })).unwrap())).await;
    assert_eq!(status, StatusCode::OK);
    let small = router(Config {
        max_source: 100,
        ..Default::default()
    });
    let (status, _) = send(small.clone(), post(serde_json::to_vec(&json!({ "source": "%".repeat(101) })).unwrap())).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    let (status, _) = send(small, post(vec![b' '; 2 * 1024 * 1024])).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn health_reports_version() {
    let (status, v) = send(app(), Request::get("/api/health").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["version"], metaglyph_service::VERSION);
    assert_eq!(v["status"], "ok");
}

#[tokio::test]
async fn static_ui_is_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>ui</p>").unwrap();
    let app = router(Config {
        static_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    });
    let resp = app.clone().oneshot(Request::get("/").body(Body::empty()).unwrap()).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let body = resp.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(&body[..], b"<p>ui</p>");
    let (status, _) = send(app, Request::get("/api/health").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    let resp = router(Config::default())
        .oneshot(Request::get("/").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
}

fn strip_time(mut r: CompileResponse) -> CompileResponse {
    r.elapsed_ms = 0;
    r
}

/// Good, broken, debug, overridden and timed-out requests.
fn mixed(i: usize) -> CompileRequest {
    match i % 5 {
        0 => request(SQUARE),
        1 => request(&format!("side := {i};\ndraw (0,0)--(side,0;\n")),
        2 => CompileRequest {
            debug: true,
            ..request("z1 = (0,0); z2 = (50,80); z3 = (100,0);\npickup pencircle scaled 8;\ndraw z1..z2..z3;\n")
        },
        3 => CompileRequest {
            overrides: BTreeMap::from([("side".into(), i as f64)]),
            ..request(SQUARE)
        },
        _ => CompileRequest {
            timeout_ms: Some(50),
            ..request(&runaway())
        },
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_requests_are_independent() {
    let app = app();
    let mut serial = Vec::new();
    for i in 0..20 {
        serial.push(compile(app.clone(), &mixed(i)).await);
    }
    let tasks: Vec<_> = (0..20)
        .rev()
        .map(|i| {
            let app = app.clone();
            tokio::spawn(async move { (i, compile(app, &mixed(i)).await) })
        })
        .collect();
    for t in tasks {
        let (i, (status, resp)) = t.await.unwrap();
        assert_eq!(status, serial[i].0, "request {i}");
        let want = if i % 5 == 1 || i % 5 == 4 {
            StatusCode::UNPROCESSABLE_ENTITY
        } else {
            StatusCode::OK
        };
        assert_eq!(status, want, "request {i}");
        if i % 5 == 4 {
            // where a deadline interrupts evaluation depends on timing
            assert_eq!(resp.diagnostics.len(), 1);
            assert_eq!(resp.diagnostics[0].message, "evaluation timed out");
        } else {
            assert_eq!(strip_time(resp), strip_time(serial[i].1.clone()), "request {i}");
        }
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn serves_over_tcp() {
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app()).await.unwrap() });
    let body = serde_json::to_string(&request(SQUARE)).unwrap();
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    let head = format!(
        "POST /api/compile HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes()).await.unwrap();
    stream.write_all(body.as_bytes()).await.unwrap();
    let mut out = String::new();
    stream.read_to_string(&mut out).await.unwrap();
    assert!(out.starts_with("HTTP/1.1 200"), "{out}");
    let json = &out[out.find("\r\n\r\n").unwrap() + 4..];
    let resp: CompileResponse = serde_json::from_str(json).unwrap();
    assert!(resp.svg.is_some());
}
