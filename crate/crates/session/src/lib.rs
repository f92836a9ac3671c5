//! Session service for gesture-driven fabrication: folds hand frames, anchor
//! poses and operator commands into scene updates, over a WebSocket or from a
//! recorded gesture log.

pub mod fixtures;
pub mod log;
pub mod protocol;
pub mod resources;
pub mod server;
pub mod session;
pub mod workflow;

pub use log::{GestureLog, LogError, LogHeader};
pub use protocol::{
    Command, ErrorCode, Geometry, Handshake, InputEvent, SceneUpdate, UpdateBody, PROTO_VERSION,
};
pub use resources::{load_resource, parse_resource, Cell, Resource, ResourceError, Resources};
pub use server::{Server, ServerConfig};
pub use session::{replay, step_session, transcript_jsonl, SessionConfig, SessionState};
pub use workflow::{SceneItem, WorkflowKind};
