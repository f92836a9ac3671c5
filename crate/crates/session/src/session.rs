//! Session state as a fold over input events.

use gbmr_core::calibration::{CalibrationSession, TrackOutcome};
use gbmr_core::geometry::LocalizationParams;
use gbmr_core::hand_tracking::{PinchDetector, PinchDetectorConfig, PinchEvent, PinchKind};
use gbmr_core::linalg::{RigidTransform, Vec3};
use serde::{Deserialize, Serialize};

use crate::log::GestureLog;
use crate::protocol::{Command, ErrorCode, InputEvent, SceneUpdate, UpdateBody};
use crate::resources::Resources;
use crate::workflow::{derive, Derived, Inputs, Scene, SceneItem, WorkflowKind};

#[derive(Clone, Debug, PartialEq)]
pub struct SessionConfig {
    pub workflow: WorkflowKind,
    pub resources: Resources,
    pub detector: PinchDetectorConfig<f64>,
    pub params: LocalizationParams<f64>,
}

impl SessionConfig {
    pub fn new(workflow: WorkflowKind, resources: Resources) -> Self {
        let params = LocalizationParams {
            mount_clearance: resources.cell.clearance,
            ..LocalizationParams::default()
        };
        Self {
            workflow,
            resources,
            detector: PinchDetectorConfig::default(),
            params,
        }
    }
}

/// The part of the state that the operator's gestures and commands build up.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Flow {
    pub points: Vec<Vec3<f64>>,
    pub confirmed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationSession<f64>>,
    /// Calibration state at the start of each pinch, for undo.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshots: Vec<CalibrationSession<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub workflow: WorkflowKind,
    pub resources: Resources,
    pub params: LocalizationParams<f64>,
    pub detector: PinchDetector<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<RigidTransform<f64>>,
    pub flow: Flow,
    pub revision: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_timestamp: Option<u64>,
    pub scene: Scene,
}

/// The workflow-relevant view of a state: what undo must restore.
#[derive(Debug, PartialEq)]
pub struct WorkflowView<'a> {
    pub workflow: WorkflowKind,
    pub flow: &'a Flow,
    pub anchor: Option<&'a RigidTransform<f64>>,
    pub params: &'a LocalizationParams<f64>,
    pub scene: &'a Scene,
}

impl SessionState {
    pub fn new(config: &SessionConfig) -> Self {
        let mut state = Self {
            workflow: config.workflow,
            resources: config.resources.clone(),
            params: config.params,
            detector: PinchDetector::new(config.detector)
                .expect("detector config is validated by its default"),
            anchor: None,
            flow: Flow::default(),
            revision: 0,
            last_timestamp: None,
            scene: Scene::new(),
        };
        state.flow = state.initial_flow();
        state.scene = state.derive().scene;
        state
    }

    pub fn view(&self) -> WorkflowView<'_> {
        WorkflowView {
            workflow: self.workflow,
            flow: &self.flow,
            anchor: self.anchor.as_ref(),
            params: &self.params,
            scene: &self.scene,
        }
    }

    /// The anchor in effect: the last anchor pose, else the job's own.
    pub fn effective_anchor(&self) -> Option<RigidTransform<f64>> {
        self.anchor.or_else(|| match self.workflow {
            WorkflowKind::HexnutJig => self.resources.calibration.as_ref()?.anchor_in_meters(),
            WorkflowKind::PanelQc => self.resources.panel.as_ref()?.anchor_in_meters(),
            _ => None,
        })
    }

    fn initial_flow(&self) -> Flow {
        let calibration = match (self.workflow, &self.resources.calibration) {
            (WorkflowKind::HexnutJig, Some(job)) => job
                .targets_in_meters()
                .and_then(CalibrationSession::new)
                .and_then(|mut s| {
                    if let Some(a) = self.effective_anchor() {
                        s.set_anchor(a)?;
                    }
                    Ok(s)
                })
                .ok(),
            _ => None,
        };
        Flow {
            calibration,
            ..Flow::default()
        }
    }

    fn derive(&self) -> Derived {
        let anchor = self.effective_anchor();
        derive(&Inputs {
            kind: self.workflow,
            points: &self.flow.points,
            confirmed: self.flow.confirmed,
            calibration: self.flow.calibration.as_ref(),
            anchor: anchor.unwrap_or_else(RigidTransform::identity),
            anchored: anchor.is_some(),
            params: &self.params,
            resources: &self.resources,
        })
    }

    /// The toolpath currently in the scene, if any.
    pub fn toolpath(&self) -> Option<&gbmr_core::geometry::Toolpath<f64>> {
        self.scene.iter().find_map(|(_, item)| match item {
            SceneItem::Toolpath { toolpath } => Some(toolpath),
            _ => None,
        })
    }

    /// QC records currently in the scene, in pinch order.
    pub fn qc_records(&self) -> Vec<gbmr_core::calibration::BoardQCRecord<f64>> {
        self.scene
            .iter()
            .filter_map(|(_, item)| match item {
                SceneItem::Geometry {
                    geometry: crate::protocol::Geometry::QcRecord { record },
                } => Some(record.clone()),
                _ => None,
            })
            .collect()
    }
}

struct Step<'a> {
    state: &'a mut SessionState,
    out: Vec<SceneUpdate>,
    changed: bool,
}

impl Step<'_> {
    fn emit(&mut self, body: UpdateBody) {
        self.state.revision += 1;
        self.out.push(SceneUpdate {
            rev: self.state.revision,
            body,
        });
    }

    fn error(&mut self, code: ErrorCode, message: impl Into<String>) {
        self.emit(UpdateBody::Error {
            code,
            message: message.into(),
        });
    }

    /// Re-derives the scene and emits what changed: removals first, then
    /// additions and changes in scene order.
    fn sync_scene(&mut self) {
        let next = self.state.derive().scene;
        let prev = std::mem::take(&mut self.state.scene);
        for (id, _) in &prev {
            if !next.iter().any(|(k, _)| k == id) {
                self.emit(UpdateBody::GeometryRemoved { id: id.clone() });
            }
        }
        for (id, item) in &next {
            if prev.iter().find(|(k, _)| k == id).map(|(_, v)| v) != Some(item) {
                self.emit(item.to_update(id));
            }
        }
        self.state.scene = next;
    }

    fn pinch(&mut self, event: &PinchEvent<f64>) {
        if self.state.workflow.digitizes_points() {
            if event.kind == PinchKind::Engaged {
                self.digitize(event.point);
            }
        } else {
            self.track(event);
        }
    }

    fn digitize(&mut self, point: Vec3<f64>) {
        let before = self.state.derive();
        if let Some(reason) = before.awaiting_command {
            return self.error(ErrorCode::ExpectingCommand, reason);
        }
        if before.complete {
            return self.error(
                ErrorCode::WorkflowComplete,
                "workflow complete; undo a point or reset",
            );
        }
        let missing = match self.state.workflow {
            WorkflowKind::LayerTemplate => self
                .state
                .resources
                .layers
                .is_none()
                .then_some("layer catalog"),
            WorkflowKind::TubeIndex => self
                .state
                .resources
                .tubes
                .is_none()
                .then_some("tube catalog"),
            WorkflowKind::PanelQc => self.state.resources.panel.is_none().then_some("panel job"),
            _ => None,
        };
        if let Some(what) = missing {
            return self.error(ErrorCode::MissingResource, format!("no {what} loaded"));
        }
        self.state.flow.points.push(point);
        let index = self.state.flow.points.len() - 1;
        if let Some(issue) = self.state.derive().issue.filter(|i| i.point == index) {
            self.state.flow.points.pop();
            return self.error(issue.code, issue.message);
        }
        self.changed = true;
    }

    fn track(&mut self, event: &PinchEvent<f64>) {
        let Some(session) = self.state.flow.calibration.as_mut() else {
            if event.kind == PinchKind::Engaged {
                self.error(ErrorCode::MissingResource, "no calibration job loaded");
            }
            return;
        };
        if session.is_done() {
            if event.kind == PinchKind::Engaged {
                self.error(ErrorCode::WorkflowComplete, "all locators are placed");
            }
            return;
        }
        if event.kind == PinchKind::Engaged {
            let snapshot = session.clone();
            self.state.flow.snapshots.push(snapshot);
        }
        let session = self.state.flow.calibration.as_mut().expect("checked above");
        match session.track_current(event) {
            TrackOutcome::Completed(_) => {
                let _ = session.advance();
            }
            TrackOutcome::OutOfSequence(n) => {
                let message = n.message().to_owned();
                self.error(ErrorCode::Sequencing, message);
            }
            _ => {}
        }
        self.changed = true;
    }

    fn anchor(&mut self, pose: RigidTransform<f64>) {
        if !pose.is_rigid() {
            return self.error(
                ErrorCode::InvalidAnchor,
                "anchor pose is not a rigid transform",
            );
        }
        self.state.anchor = Some(pose);
        let flow = &mut self.state.flow;
        for s in flow.calibration.iter_mut().chain(flow.snapshots.iter_mut()) {
            s.set_anchor(pose).expect("rigidity checked above");
        }
        self.changed = true;
    }

    fn command(&mut self, command: &Command) {
        match command {
            Command::Reset => {
                self.state.flow = self.state.initial_flow();
                self.changed = true;
            }
            Command::UndoPoint => {
                let flow = &mut self.state.flow;
                let undone = if flow.calibration.is_some() {
                    flow.snapshots
                        .pop()
                        .map(|s| flow.calibration = Some(s))
                        .is_some()
                } else {
                    flow.confirmed = false;
                    flow.points.pop().is_some()
                };
                if undone {
                    self.changed = true;
                } else {
                    self.error(ErrorCode::NothingToUndo, "nothing to undo");
                }
            }
            Command::Confirm => {
                if self.state.derive().toolpath_confirmable {
                    self.state.flow.confirmed = true;
                    self.changed = true;
                } else {
                    self.error(
                        ErrorCode::NothingToConfirm,
                        "nothing is waiting for confirmation",
                    );
                }
            }
            Command::SelectWorkflow { workflow } => {
                if *workflow == self.state.workflow {
                    return;
                }
                let pristine = self.state.flow == self.state.initial_flow();
                if !pristine {
                    return self.error(
                        ErrorCode::WorkflowLocked,
                        "this session already has work in it; open a new session to switch workflows",
                    );
                }
                self.state.workflow = *workflow;
                self.state.flow = self.state.initial_flow();
                self.changed = true;
            }
            Command::SetParam { key, value } => self.set_param(key, *value),
        }
    }

    fn set_param(&mut self, key: &str, value: f64) {
        let p = &mut self.state.params;
        let positive = value.is_finite() && value > 0.0;
        let ok = match key {
            "overcut_margin" if positive => {
                p.overcut_margin = value;
                true
            }
            "retract_clearance" if positive => {
                p.retract_clearance = value;
                true
            }
            "mount_clearance" if value.is_finite() && value >= 0.0 => {
                p.mount_clearance = value;
                true
            }
            "snap_tolerance" if positive => {
                p.snap_tolerance = value;
                true
            }
            "vertical_guard_deg" if (0.0..90.0).contains(&value) => {
                p.vertical_guard_deg = value;
                true
            }
            "tessellation" if value.fract() == 0.0 && (3.0..=4096.0).contains(&value) => {
                p.tessellation = value as usize;
                true
            }
            "overcut_margin" | "retract_clearance" | "mount_clearance" | "snap_tolerance"
            | "vertical_guard_deg" | "tessellation" => false,
            _ => {
                return self.error(
                    ErrorCode::UnknownParam,
                    format!("unknown parameter {key:?}"),
                )
            }
        };
        if ok {
            self.changed = true;
        } else {
            self.error(
                ErrorCode::InvalidParam,
                format!("{value} is not a valid {key}"),
            );
        }
    }
}

/// Applies one event. Rejections become error updates; the state is otherwise
/// unchanged by them apart from the revision counter.
pub fn step_session(state: &mut SessionState, event: &InputEvent) -> Vec<SceneUpdate> {
    let mut step = Step {
        state,
        out: Vec::new(),
        changed: false,
    };
    let t = event.timestamp();
    if let Some(last) = step.state.last_timestamp {
        if t < last {
            step.error(
                ErrorCode::OutOfOrder,
                format!("event at {t} ms precedes {last} ms"),
            );
            return step.out;
        }
    }
    match event {
        InputEvent::HandFrame(frame) => match step.state.detector.step(frame) {
            Ok(events) => {
                for e in &events {
                    step.pinch(e);
                }
            }
            Err(e) => {
                step.error(ErrorCode::InvalidFrame, e.to_string());
                return step.out;
            }
        },
        InputEvent::AnchorPose { pose, .. } => step.anchor(*pose),
        InputEvent::Command { command, .. } => step.command(command),
    }
    step.state.last_timestamp = Some(t);
    if step.changed {
        step.sync_scene();
    }
    step.out
}

/// Folds a whole log from the initial state.
pub fn replay(log: &GestureLog, config: &SessionConfig) -> (SessionState, Vec<SceneUpdate>) {
    let mut state = SessionState::new(config);
    let mut transcript = Vec::new();
    for event in &log.events {
        transcript.extend(step_session(&mut state, event));
    }
    (state, transcript)
}

/// Transcript file contents: one update per line.
pub fn transcript_jsonl(updates: &[SceneUpdate]) -> String {
    let mut out = String::new();
    for u in updates {
        out.push_str(&crate::protocol::to_line(u));
        out.push('\n');
    }
    out
}

/// Answers a client message that is not a valid input event. The session
/// state is untouched apart from the revision counter.
pub fn reject_message(state: &mut SessionState, message: impl Into<String>) -> SceneUpdate {
    state.revision += 1;
    SceneUpdate {
        rev: state.revision,
        body: UpdateBody::Error {
            code: ErrorCode::Malformed,
            message: message.into(),
        },
    }
}
