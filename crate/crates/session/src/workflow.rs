//! The six workflows as pure derivations from digitized points to a scene.

use std::fmt;
use std::str::FromStr;

use gbmr_core::calibration::{qc_board, CalibrationSession, NotationState, Verdict};
use gbmr_core::geometry::{
    circumcircle, cut_toolpath, define_half_log, fit_cylinder, halving_surface, halving_toolpath,
    place_cut, validate_cut, LocalizationParams, Toolpath, ToolpathMetadata,
};
use gbmr_core::identification::{
    identify_layer, identify_tube, GroundPlane, IdentificationResult, TubeAssignments,
};
use gbmr_core::linalg::{RigidTransform, Vec3};
use serde::{Deserialize, Serialize};

use crate::protocol::{ErrorCode, Geometry, UpdateBody};
use crate::resources::Resources;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkflowKind {
    LogHalving,
    HalfLogCutting,
    LayerTemplate,
    TubeIndex,
    HexnutJig,
    PanelQc,
}

impl WorkflowKind {
    pub const ALL: [WorkflowKind; 6] = [
        WorkflowKind::LogHalving,
        WorkflowKind::HalfLogCutting,
        WorkflowKind::LayerTemplate,
        WorkflowKind::TubeIndex,
        WorkflowKind::HexnutJig,
        WorkflowKind::PanelQc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WorkflowKind::LogHalving => "log_halving",
            WorkflowKind::HalfLogCutting => "half_log_cutting",
            WorkflowKind::LayerTemplate => "layer_template",
            WorkflowKind::TubeIndex => "tube_index",
            WorkflowKind::HexnutJig => "hexnut_jig",
            WorkflowKind::PanelQc => "panel_qc",
        }
    }

    /// Workflows driven by discrete pinched points rather than continuous tracking.
    pub fn digitizes_points(self) -> bool {
        self != WorkflowKind::HexnutJig
    }
}

impl fmt::Display for WorkflowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WorkflowKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown workflow {s:?}"))
    }
}

/// Something the operator sees, keyed by a stable id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "item", rename_all = "snake_case")]
pub enum SceneItem {
    Geometry { geometry: Geometry },
    Notation { notation: NotationState },
    Instruction { text: String },
    Toolpath { toolpath: Toolpath<f64> },
    Identification { result: IdentificationResult<f64> },
}

impl SceneItem {
    pub fn to_update(&self, id: &str) -> UpdateBody {
        match self.clone() {
            SceneItem::Geometry { geometry } => UpdateBody::GeometryAdded {
                id: id.into(),
                geometry,
            },
            SceneItem::Notation { notation } => UpdateBody::Notation {
                subject: id.into(),
                notation,
            },
            SceneItem::Instruction { text } => UpdateBody::Instruction { text },
            SceneItem::Toolpath { toolpath } => UpdateBody::ToolpathReady {
                id: id.into(),
                toolpath,
            },
            SceneItem::Identification { result } => UpdateBody::Identification {
                subject: id.into(),
                result,
            },
        }
    }
}

pub type Scene = Vec<(String, SceneItem)>;

/// Why the point at `point` could not be used.
#[derive(Clone, Debug, PartialEq)]
pub struct Issue {
    pub point: usize,
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Derived {
    pub scene: Scene,
    pub issue: Option<Issue>,
    /// The workflow takes no more points.
    pub complete: bool,
    /// The workflow is waiting for a command before it accepts anything else.
    pub awaiting_command: Option<String>,
    pub toolpath_confirmable: bool,
}

/// Everything a derivation reads.
pub struct Inputs<'a> {
    pub kind: WorkflowKind,
    pub points: &'a [Vec3<f64>],
    pub confirmed: bool,
    pub calibration: Option<&'a CalibrationSession<f64>>,
    pub anchor: RigidTransform<f64>,
    pub anchored: bool,
    pub params: &'a LocalizationParams<f64>,
    pub resources: &'a Resources,
}

struct Builder {
    derived: Derived,
}

impl Builder {
    fn push(&mut self, id: impl Into<String>, item: SceneItem) {
        self.derived.scene.push((id.into(), item));
    }

    fn geometry(&mut self, id: impl Into<String>, geometry: Geometry) {
        self.push(id, SceneItem::Geometry { geometry });
    }

    fn issue(&mut self, point: usize, code: ErrorCode, message: impl Into<String>) {
        if self.derived.issue.is_none() {
            self.derived.issue = Some(Issue {
                point,
                code,
                message: message.into(),
            });
        }
    }

    fn instruct(&mut self, text: impl Into<String>) {
        let mut text = text.into();
        if let Some(issue) = &self.derived.issue {
            text = format!("{} ({})", text, issue.message);
        }
        self.push("instruction", SceneItem::Instruction { text });
    }

    fn points(&mut self, points: &[Vec3<f64>]) {
        for (i, &p) in points.iter().enumerate() {
            self.geometry(format!("point_{}", i + 1), Geometry::Point { position: p });
        }
    }
}

fn metadata(workflow: WorkflowKind) -> ToolpathMetadata {
    ToolpathMetadata {
        workflow: workflow.name().into(),
        source: "gesture session".into(),
    }
}

pub fn derive(inputs: &Inputs) -> Derived {
    let mut b = Builder {
        derived: Derived::default(),
    };
    match inputs.kind {
        WorkflowKind::LogHalving => log_halving(inputs, &mut b),
        WorkflowKind::HalfLogCutting => half_log_cutting(inputs, &mut b),
        WorkflowKind::LayerTemplate => layer_template(inputs, &mut b),
        WorkflowKind::TubeIndex => tube_index(inputs, &mut b),
        WorkflowKind::HexnutJig => hexnut_jig(inputs, &mut b),
        WorkflowKind::PanelQc => panel_qc(inputs, &mut b),
    }
    b.derived
}

fn log_halving(inputs: &Inputs, b: &mut Builder) {
    let p = inputs.points;
    b.points(p);
    let start = (p.len() >= 3).then(|| circumcircle(p[0], p[1], p[2]));
    let end = (p.len() >= 6).then(|| circumcircle(p[3], p[4], p[5]));
    for (id, fit, last) in [("circle_start", &start, 2), ("circle_end", &end, 5)] {
        match fit {
            Some(Ok(c)) => b.geometry(id, Geometry::Circle { circle: *c }),
            Some(Err(e)) => b.issue(last, ErrorCode::DegenerateFit, e.to_string()),
            None => {}
        }
    }
    if let (Some(Ok(a)), Some(Ok(z))) = (&start, &end) {
        match fit_cylinder(a, z, inputs.params.tessellation) {
            Ok(cyl) => {
                b.geometry(
                    "cylinder",
                    Geometry::Cylinder {
                        model: cyl,
                        mesh: cyl.mesh(),
                    },
                );
                match halving_surface(&cyl, inputs.params)
                    .and_then(|s| Ok((s, halving_toolpath(&s, inputs.params)?)))
                {
                    Ok((surface, path)) => {
                        b.geometry("halving_surface", Geometry::HalvingSurface { surface });
                        b.push(
                            "toolpath",
                            SceneItem::Toolpath {
                                toolpath: path.with_metadata(metadata(inputs.kind)),
                            },
                        );
                    }
                    Err(e) => b.issue(5, ErrorCode::Rejected, e.to_string()),
                }
            }
            Err(e) => b.issue(5, ErrorCode::DegenerateFit, e.to_string()),
        }
    }
    b.derived.complete = p.len() >= 6;
    match p.len() {
        n @ 0..=2 => b.instruct(format!(
            "Pinch rim point {} of 3 on the first log end",
            n + 1
        )),
        n @ 3..=5 => b.instruct(format!(
            "Pinch rim point {} of 3 on the second log end",
            n - 2
        )),
        _ if b.derived.issue.is_none() => b.instruct("Halving toolpath ready"),
        _ => b.instruct("Undo a rim point and pinch it again"),
    }
}

fn half_log_cutting(inputs: &Inputs, b: &mut Builder) {
    let p = inputs.points;
    let params = inputs.params;
    let cell = &inputs.resources.cell;
    b.points(p);
    if p.len() >= 2 && p[0] == p[1] {
        b.issue(1, ErrorCode::DegenerateFit, "diameter points coincide");
    }
    let log = if p.len() >= 3 && b.derived.issue.is_none() {
        match define_half_log(p[0], p[1], p[2], params.world_up) {
            Ok(h) => {
                b.geometry("half_log", Geometry::HalfLog { model: h });
                Some(h)
            }
            Err(e) => {
                b.issue(2, ErrorCode::DegenerateFit, e.to_string());
                None
            }
        }
    } else {
        None
    };
    let mut passed = false;
    if let (Some(log), true) = (log, p.len() >= 4) {
        match place_cut(&log, p[3], &cell.board_spec, params.snap_tolerance) {
            Ok(placement) => {
                let validation = validate_cut(&placement, &cell.mounts, params.mount_clearance);
                passed = validation.passed();
                b.push(
                    "cut_notation",
                    SceneItem::Notation {
                        notation: validation.notation.clone(),
                    },
                );
                if passed && inputs.confirmed {
                    if let Ok(path) = cut_toolpath(&placement, &validation, params) {
                        b.push(
                            "toolpath",
                            SceneItem::Toolpath {
                                toolpath: path.with_metadata(metadata(inputs.kind)),
                            },
                        );
                    }
                }
                b.geometry(
                    "cut_planes",
                    Geometry::CutPlanes {
                        placement,
                        validation,
                    },
                );
            }
            Err(e) => b.issue(3, ErrorCode::Rejected, e.to_string()),
        }
    }
    b.derived.complete = p.len() >= 4;
    b.derived.toolpath_confirmable = passed && !inputs.confirmed;
    match p.len() {
        0 | 1 => b.instruct(format!(
            "Pinch diameter point {} of 2 across the flat face",
            p.len() + 1
        )),
        2 => b.instruct("Pinch the far end of the half log"),
        3 => b.instruct("Pinch where the first board cut should start"),
        _ if inputs.confirmed && passed => b.instruct("Cutting toolpath ready"),
        _ if passed => {
            b.derived.awaiting_command =
                Some("confirm the cut placement or undo the anchor point".into());
            b.instruct("Cut placement valid; confirm to generate the toolpath")
        }
        _ => {
            b.derived.awaiting_command =
                Some("undo the anchor point before pinching a new one".into());
            b.instruct("Cut placement invalid; undo the anchor point and pinch elsewhere")
        }
    }
}

fn ground(inputs: &Inputs) -> GroundPlane<f64> {
    if inputs.anchored {
        GroundPlane::from_anchor(&inputs.anchor).unwrap_or_default()
    } else {
        GroundPlane::default()
    }
}

fn identification_code(e: &gbmr_core::identification::IdentificationError) -> ErrorCode {
    use gbmr_core::identification::IdentificationError as E;
    match e {
        E::NoMatch { .. } => ErrorCode::NoMatch,
        E::Ambiguous { .. } => ErrorCode::Ambiguous,
        E::AllAssigned { .. } => ErrorCode::AllAssigned,
        E::BelowGround { .. } => ErrorCode::BelowGround,
        E::CoincidentPoints | E::InvalidGround => ErrorCode::Rejected,
    }
}

fn layer_template(inputs: &Inputs, b: &mut Builder) {
    let Some(catalog) = &inputs.resources.layers else {
        b.instruct("No layer catalog loaded");
        return;
    };
    let ground = ground(inputs);
    let mut found = 0;
    for (i, &p) in inputs.points.iter().enumerate() {
        match identify_layer(p, &ground, catalog) {
            Ok(result) => {
                found += 1;
                b.geometry(
                    format!("layer_{}_outline", i + 1),
                    Geometry::Polyline {
                        points: result.payload.outline.clone(),
                        closed: true,
                    },
                );
                b.push(
                    format!("layer_{}", i + 1),
                    SceneItem::Identification { result },
                );
            }
            Err(e) => b.issue(i, identification_code(&e), e.to_string()),
        }
    }
    b.instruct(format!(
        "Pinch the top of a board to find its layer ({found} identified)"
    ));
}

fn tube_index(inputs: &Inputs, b: &mut Builder) {
    let Some(catalog) = &inputs.resources.tubes else {
        b.instruct("No tube catalog loaded");
        return;
    };
    let p = inputs.points;
    let mut assignments = TubeAssignments::default();
    for (k, pair) in p.chunks(2).enumerate() {
        match *pair {
            [a, z] => match identify_tube(a, z, catalog, &mut assignments) {
                Ok(result) => {
                    b.geometry(
                        format!("tube_{}_span", k + 1),
                        Geometry::Segment { a, b: z },
                    );
                    b.push(
                        format!("tube_{}", k + 1),
                        SceneItem::Identification { result },
                    );
                }
                Err(e) => b.issue(2 * k + 1, identification_code(&e), e.to_string()),
            },
            [a] => b.geometry("tube_end", Geometry::Point { position: a }),
            _ => unreachable!(),
        }
    }
    if p.len().is_multiple_of(2) {
        b.instruct(format!(
            "Pinch one end of a tube ({} identified)",
            assignments.len()
        ));
    } else {
        b.instruct("Pinch the other end of the tube");
    }
}

fn hexnut_jig(inputs: &Inputs, b: &mut Builder) {
    let Some(session) = inputs.calibration else {
        b.instruct("No calibration job loaded");
        return;
    };
    for (target, state) in session.targets().iter().zip(session.states()) {
        let id = target.id;
        b.geometry(
            format!("locator_{id}_goal"),
            Geometry::Point {
                position: target.goal,
            },
        );
        if let Some(live) = state.live_position {
            b.geometry(
                format!("locator_{id}_live"),
                Geometry::Point { position: live },
            );
        }
        let notation = if state.completed {
            Some(NotationState::green_check(format!("locator {id} placed")))
        } else {
            state.notation.clone()
        };
        if let Some(notation) = notation {
            b.push(format!("locator_{id}"), SceneItem::Notation { notation });
        }
    }
    b.derived.complete = session.is_done();
    match session.current_target() {
        Some(t) => b.instruct(format!(
            "Slide locator {} to its goal ({} of {})",
            t.id,
            session.current_index() + 1,
            session.targets().len()
        )),
        None => b.instruct("All locators placed"),
    }
}

fn panel_qc(inputs: &Inputs, b: &mut Builder) {
    let Some(job) = &inputs.resources.panel else {
        b.instruct("No panel job loaded");
        return;
    };
    let Ok(boards) = job.boards_in_world(&inputs.anchor) else {
        b.instruct("Panel anchor is not rigid");
        return;
    };
    let tolerance = job.tolerance_in_meters();
    let mut passed = 0;
    for (i, &p) in inputs.points.iter().enumerate() {
        let Ok(record) = qc_board(p, &boards, tolerance) else {
            continue;
        };
        passed += (record.verdict == Verdict::Pass) as usize;
        b.push(
            format!("qc_{}", i + 1),
            SceneItem::Notation {
                notation: record.notation.clone(),
            },
        );
        b.geometry(
            format!("qc_{}_record", i + 1),
            Geometry::QcRecord { record },
        );
    }
    b.instruct(format!(
        "Pinch the finger-joint center of the next board ({passed} of {} within tolerance)",
        inputs.points.len()
    ));
}
