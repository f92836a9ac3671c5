mod support;

use std::net::TcpStream;
use std::path::Path;
use std::time::{Duration, Instant};

use gbmr_session::fixtures;
use gbmr_session::protocol::to_line;
use gbmr_session::{
    parse_resource, replay, transcript_jsonl, ErrorCode, GestureLog, Handshake, InputEvent,
    Resources, SceneUpdate, Server, ServerConfig, SessionConfig, UpdateBody, WorkflowKind,
    PROTO_VERSION,
};
use tungstenite::stream::MaybeTlsStream;
use tungstenite::{Message, WebSocket};

type Client = WebSocket<MaybeTlsStream<TcpStream>>;

fn all_resources() -> Resources {
    let mut r = Resources::default();
    for name in [
        "tubes.json",
        "layers.json",
        "cell.json",
        "calibration.json",
        "panel.json",
    ] {
        r.add(
            parse_resource(&std::fs::read_to_string(support::fixture_dir().join(name)).unwrap())
                .unwrap(),
        );
    }
    r
}

fn start(log_dir: Option<&Path>) -> String {
    let config = ServerConfig {
        default_workflow: WorkflowKind::TubeIndex,
        resources: all_resources(),
        log_dir: log_dir.map(Path::to_path_buf),
    };
    let server = Server::bind("127.0.0.1:0", config).unwrap();
    let addr = server.local_addr().unwrap();
    std::thread::spawn(move || server.run());
    format!("ws://{addr}")
}

fn connect(url: &str) -> Client {
    tungstenite::connect(url).unwrap().0
}

fn send_text(ws: &mut Client, text: String) {
    ws.send(Message::text(text)).unwrap();
}

fn hello(ws: &mut Client, proto: u32, workflow: Option<WorkflowKind>) -> Handshake {
    send_text(ws, to_line(&Handshake::Hello { proto, workflow }));
    match ws.read().unwrap() {
        Message::Text(t) => serde_json::from_str(&t).unwrap(),
        other => panic!("unexpected {other:?}"),
    }
}

/// Sends one message and collects the updates it caused, using a ping as a
/// fence: the server answers it only after handling everything before it.
fn exchange(ws: &mut Client, message: Message) -> Vec<SceneUpdate> {
    ws.send(message).unwrap();
    ws.send(Message::Ping(Vec::new().into())).unwrap();
    let mut out = Vec::new();
    loop {
        match ws.read().unwrap() {
            Message::Text(t) => out.push(serde_json::from_str(&t).unwrap()),
            Message::Pong(_) => return out,
            _ => {}
        }
    }
}

fn assert_closed(ws: &mut Client) {
    loop {
        match ws.read() {
            Ok(Message::Close(_)) | Err(_) => return,
            Ok(_) => {}
        }
    }
}

#[test]
fn handshake_acknowledges_and_defaults() {
    let url = start(None);
    let mut ws = connect(&url);
    let s1 = match hello(&mut ws, PROTO_VERSION, Some(WorkflowKind::PanelQc)) {
        Handshake::HelloAck {
            workflow,
            session,
            scene,
            ..
        } => {
            assert_eq!(workflow, WorkflowKind::PanelQc);
            assert!(scene
                .iter()
                .any(|u| matches!(u, UpdateBody::Instruction { .. })));
            session
        }
        other => panic!("{other:?}"),
    };
    let mut ws2 = connect(&url);
    let Handshake::HelloAck {
        workflow,
        session: s2,
        ..
    } = hello(&mut ws2, PROTO_VERSION, None)
    else {
        panic!()
    };
    assert_eq!(workflow, WorkflowKind::TubeIndex);
    assert!(s1.starts_with("session-") && s2.starts_with("session-"));
    assert_ne!(s1, s2);
}

#[test]
fn wrong_protocol_or_missing_hello_is_rejected() {
    let url = start(None);
    let mut ws = connect(&url);
    assert!(matches!(
        hello(&mut ws, 99, None),
        Handshake::HelloReject {
            proto: PROTO_VERSION,
            ..
        }
    ));
    assert_closed(&mut ws);

    let mut ws = connect(&url);
    send_text(
        &mut ws,
        "{\"type\":\"command\",\"t\":1,\"command\":{\"name\":\"reset\"}}".into(),
    );
    let Message::Text(t) = ws.read().unwrap() else {
        panic!()
    };
    assert!(matches!(
        serde_json::from_str(&t).unwrap(),
        Handshake::HelloReject { .. }
    ));
    assert_closed(&mut ws);
}

#[test]
fn malformed_messages_get_errors_and_the_session_survives() {
    let url = start(None);
    let mut ws = connect(&url);
    hello(&mut ws, PROTO_VERSION, Some(WorkflowKind::LogHalving));
    for bad in [
        Message::text("not json"),
        Message::text("{\"type\":\"warp\"}"),
        Message::binary(vec![1u8, 2, 3]),
    ] {
        let u = exchange(&mut ws, bad);
        assert!(
            matches!(&u[..], [x] if matches!(x.body, UpdateBody::Error { code: ErrorCode::Malformed, .. })),
            "{u:?}"
        );
    }
    let mut script = fixtures::Script::new();
    script.pinch(gbmr_core::linalg::Vec3::new(0.0, 0.2, 0.3));
    let mut got = Vec::new();
    for e in script.events() {
        got.extend(exchange(&mut ws, Message::text(to_line(e))));
    }
    assert!(got
        .iter()
        .any(|u| matches!(&u.body, UpdateBody::GeometryAdded { id, .. } if id == "point_1")));
    assert_eq!(got[0].rev, 4);
}

fn run_live(url: &str, log: &GestureLog) -> Vec<SceneUpdate> {
    let mut ws = connect(url);
    hello(&mut ws, PROTO_VERSION, log.header.workflow);
    let mut out = Vec::new();
    for e in &log.events {
        out.extend(exchange(&mut ws, Message::text(to_line(e))));
    }
    ws.close(None).unwrap();
    assert_closed(&mut ws);
    out
}

#[test]
fn live_sessions_match_replay() {
    let url = start(None);
    for w in WorkflowKind::ALL {
        let log = support::fixture_log(w);
        let live = run_live(&url, &log);
        let (_, replayed) = replay(&log, &SessionConfig::new(w, all_resources()));
        assert_eq!(transcript_jsonl(&live), transcript_jsonl(&replayed), "{w}");
        assert!(!live.is_empty());
    }
}

#[test]
fn sessions_are_logged_on_disconnect() {
    let dir = tempfile::tempdir().unwrap();
    let url = start(Some(dir.path()));
    let log = support::fixture_log(WorkflowKind::LogHalving);
    let live = run_live(&url, &log);

    let deadline = Instant::now() + Duration::from_secs(10);
    let transcript_path = dir.path().join("session-1.transcript.jsonl");
    while !transcript_path.exists() && Instant::now() < deadline {
        std::thread::sleep(Duration::from_millis(20));
    }
    std::thread::sleep(Duration::from_millis(50));
    let saved = GestureLog::load(dir.path().join("session-1.events.jsonl")).unwrap();
    assert_eq!(saved, log);
    assert_eq!(
        std::fs::read_to_string(transcript_path).unwrap(),
        transcript_jsonl(&live)
    );
}

#[test]
fn events_serialize_the_same_way_the_server_reads_them() {
    for w in WorkflowKind::ALL {
        for e in support::fixture_log(w).events {
            let back: InputEvent = serde_json::from_str(&to_line(&e)).unwrap();
            assert_eq!(back, e);
        }
    }
}
