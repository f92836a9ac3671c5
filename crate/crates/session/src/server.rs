//! WebSocket front end: one session per connection, one thread per session.

use std::io;
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread;

use tungstenite::{Message, WebSocket};

use crate::log::GestureLog;
use crate::protocol::{to_line, Handshake, InputEvent, SceneUpdate, PROTO_VERSION};
use crate::resources::Resources;
use crate::session::{reject_message, step_session, transcript_jsonl, SessionConfig, SessionState};
use crate::workflow::WorkflowKind;

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub default_workflow: WorkflowKind,
    pub resources: Resources,
    /// Where each session's events and transcript are written on disconnect.
    pub log_dir: Option<PathBuf>,
}

pub struct Server {
    listener: TcpListener,
    config: Arc<ServerConfig>,
    sessions: Arc<AtomicU64>,
}

impl Server {
    pub fn bind(addr: &str, config: ServerConfig) -> io::Result<Self> {
        Ok(Self {
            listener: TcpListener::bind(addr)?,
            config: Arc::new(config),
            sessions: Arc::new(AtomicU64::new(0)),
        })
    }

    pub fn local_addr(&self) -> io::Result<std::net::SocketAddr> {
        self.listener.local_addr()
    }

    /// Accepts connections until the listener fails.
    pub fn run(self) -> io::Result<()> {
        for stream in self.listener.incoming() {
            let stream = stream?;
            let config = Arc::clone(&self.config);
            let id = self.sessions.fetch_add(1, Ordering::Relaxed) + 1;
            thread::spawn(move || {
                if let Err(e) = handle_connection(stream, &config, id) {
                    eprintln!("session-{id}: {e}");
                }
            });
        }
        Ok(())
    }
}

fn send<S: serde::Serialize>(
    ws: &mut WebSocket<TcpStream>,
    message: &S,
) -> tungstenite::Result<()> {
    ws.send(Message::text(to_line(message)))
}

/// Runs one session to completion.
pub fn handle_connection(
    stream: TcpStream,
    config: &ServerConfig,
    id: u64,
) -> Result<(), Box<dyn std::error::Error>> {
    let mut ws = tungstenite::accept(stream)?;
    let session = format!("session-{id}");

    let hello = match ws.read()? {
        Message::Text(text) => serde_json::from_str::<Handshake>(&text).ok(),
        _ => None,
    };
    let workflow = match hello {
        Some(Handshake::Hello { proto, workflow }) if proto == PROTO_VERSION => {
            workflow.unwrap_or(config.default_workflow)
        }
        other => {
            let reason = match other {
                Some(Handshake::Hello { proto, .. }) => {
                    format!("protocol {proto} is not supported")
                }
                _ => "expected a hello message".to_owned(),
            };
            send(
                &mut ws,
                &Handshake::HelloReject {
                    proto: PROTO_VERSION,
                    reason,
                },
            )?;
            ws.close(None)?;
            drain(&mut ws);
            return Ok(());
        }
    };
    let mut state = SessionState::new(&SessionConfig::new(workflow, config.resources.clone()));
    send(
        &mut ws,
        &Handshake::HelloAck {
            proto: PROTO_VERSION,
            session: session.clone(),
            workflow,
            scene: state
                .scene
                .iter()
                .map(|(id, item)| item.to_update(id))
                .collect(),
        },
    )?;

    let mut log = GestureLog::new(Some(workflow));
    let mut transcript: Vec<SceneUpdate> = Vec::new();
    loop {
        let message = match ws.read() {
            Ok(m) => m,
            Err(tungstenite::Error::ConnectionClosed | tungstenite::Error::AlreadyClosed) => break,
            Err(tungstenite::Error::Protocol(_)) | Err(tungstenite::Error::Io(_)) => break,
            Err(e) => return Err(e.into()),
        };
        let updates = match message {
            Message::Text(text) => match serde_json::from_str::<InputEvent>(&text) {
                Ok(event) => {
                    let updates = step_session(&mut state, &event);
                    log.events.push(event);
                    updates
                }
                Err(e) => vec![reject_message(
                    &mut state,
                    format!("malformed message: {e}"),
                )],
            },
            Message::Binary(_) => vec![reject_message(
                &mut state,
                "binary messages are not supported",
            )],
            Message::Close(_) => break,
            _ => continue,
        };
        for u in &updates {
            send(&mut ws, u)?;
        }
        transcript.extend(updates);
    }
    drain(&mut ws);

    if let Some(dir) = &config.log_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{session}.events.jsonl")), log.to_jsonl())?;
        std::fs::write(
            dir.join(format!("{session}.transcript.jsonl")),
            transcript_jsonl(&transcript),
        )?;
    }
    Ok(())
}

/// Finishes the closing handshake, ignoring whatever the peer still sends.
fn drain(ws: &mut WebSocket<TcpStream>) {
    while ws.read().is_ok() {}
    let _ = ws.flush();
}
