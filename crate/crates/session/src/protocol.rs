//! Messages exchanged with clients and stored in gesture logs and transcripts.

use gbmr_core::calibration::{BoardQCRecord, NotationState};
use gbmr_core::geometry::{
    Circle3D, CutPlacement, CylinderModel, HalfLogModel, HalvingSurface, Mesh, Toolpath,
    ValidationResult,
};
use gbmr_core::hand_tracking::HandFrame;
use gbmr_core::identification::IdentificationResult;
use gbmr_core::linalg::{RigidTransform, Vec3};
use serde::{Deserialize, Serialize};

use crate::workflow::WorkflowKind;

pub const PROTO_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Handshake {
    Hello {
        proto: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        workflow: Option<WorkflowKind>,
    },
    HelloAck {
        proto: u32,
        session: String,
        workflow: WorkflowKind,
        /// The scene before any input, as the updates that would build it.
        #[serde(default)]
        scene: Vec<UpdateBody>,
    },
    HelloReject {
        proto: u32,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    Reset,
    UndoPoint,
    Confirm,
    SelectWorkflow { workflow: WorkflowKind },
    SetParam { key: String, value: f64 },
}

/// Client → server. Hand frames carry their own timestamp `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum InputEvent {
    HandFrame(HandFrame<f64>),
    AnchorPose { t: u64, pose: RigidTransform<f64> },
    Command { t: u64, command: Command },
}

impl InputEvent {
    pub fn timestamp(&self) -> u64 {
        match self {
            InputEvent::HandFrame(f) => f.timestamp(),
            InputEvent::AnchorPose { t, .. } | InputEvent::Command { t, .. } => *t,
        }
    }
}

/// Drawable payloads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Point {
        position: Vec3<f64>,
    },
    Circle {
        circle: Circle3D<f64>,
    },
    Cylinder {
        model: CylinderModel<f64>,
        mesh: Mesh<f64>,
    },
    HalvingSurface {
        surface: HalvingSurface<f64>,
    },
    HalfLog {
        model: HalfLogModel<f64>,
    },
    CutPlanes {
        placement: CutPlacement<f64>,
        validation: ValidationResult,
    },
    Polyline {
        points: Vec<Vec3<f64>>,
        closed: bool,
    },
    Segment {
        a: Vec3<f64>,
        b: Vec3<f64>,
    },
    QcRecord {
        record: BoardQCRecord<f64>,
    },
}

/// Server → client, numbered by the session revision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneUpdate {
    pub rev: u64,
    #[serde(flatten)]
    pub body: UpdateBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum UpdateBody {
    GeometryAdded {
        id: String,
        geometry: Geometry,
    },
    /// A previously added item no longer exists (undo, reset, re-anchoring).
    GeometryRemoved {
        id: String,
    },
    Notation {
        subject: String,
        notation: NotationState,
    },
    Instruction {
        text: String,
    },
    ToolpathReady {
        id: String,
        toolpath: Toolpath<f64>,
    },
    Identification {
        subject: String,
        result: IdentificationResult<f64>,
    },
    Error {
        code: ErrorCode,
        message: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Malformed,
    OutOfOrder,
    InvalidFrame,
    InvalidAnchor,
    DegenerateFit,
    Rejected,
    NoMatch,
    Ambiguous,
    AllAssigned,
    BelowGround,
    ExpectingCommand,
    WorkflowComplete,
    NothingToUndo,
    NothingToConfirm,
    WorkflowLocked,
    UnknownParam,
    InvalidParam,
    MissingResource,
    Sequencing,
}

/// One message per line, shortest round-trip float form.
pub fn to_line<S: Serialize>(message: &S) -> String {
    serde_json::to_string(message).expect("protocol messages always serialize")
}
