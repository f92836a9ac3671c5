//! Synthetic gesture logs and resource files. The shipped fixtures are
//! generated from here, and headless clients can script sessions with
//! [`Script`].

use gbmr_core::calibration::{CalibrationJob, PanelJob};
use gbmr_core::hand_tracking::synthetic::pinch_frame;
use gbmr_core::hand_tracking::Handedness;
use gbmr_core::linalg::{Quat, RigidTransform, Vec3};
use serde_json::{json, Value};

use crate::log::GestureLog;
use crate::protocol::{Command, InputEvent};
use crate::workflow::WorkflowKind;

pub const FRAME_INTERVAL_MS: u64 = 33;
pub const ENGAGED_TIPS: f64 = 0.005;
pub const RELEASED_TIPS: f64 = 0.06;

/// Builds an event sequence at a steady 30 Hz frame rate.
#[derive(Clone, Debug, Default)]
pub struct Script {
    t: u64,
    events: Vec<InputEvent>,
}

impl Script {
    pub fn new() -> Self {
        Self::default()
    }

    fn tick(&mut self) -> u64 {
        self.t += FRAME_INTERVAL_MS;
        self.t
    }

    pub fn frame(&mut self, point: Vec3<f64>, tips: f64) -> &mut Self {
        let t = self.tick();
        let frame = pinch_frame(t, Handedness::Right, point, tips, 1.0);
        self.events.push(InputEvent::HandFrame(frame));
        self
    }

    pub fn hover(&mut self, point: Vec3<f64>, frames: usize) -> &mut Self {
        for _ in 0..frames {
            self.frame(point, RELEASED_TIPS);
        }
        self
    }

    /// Approach, close the fingers long enough for the smoothed distance to
    /// engage, then open them again. Digitizes `point` once.
    pub fn pinch(&mut self, point: Vec3<f64>) -> &mut Self {
        self.drag(point, point, 0)
    }

    /// Pinch at `from`, carry the hand to `to` over `steps` frames, hold still
    /// until the smoothed point settles and let go.
    pub fn drag(&mut self, from: Vec3<f64>, to: Vec3<f64>, steps: usize) -> &mut Self {
        self.hover(from, 3);
        for _ in 0..6 {
            self.frame(from, ENGAGED_TIPS);
        }
        for k in 1..=steps {
            let s = k as f64 / steps as f64;
            self.frame(from + (to - from) * s, ENGAGED_TIPS);
        }
        if steps > 0 {
            for _ in 0..6 {
                self.frame(to, ENGAGED_TIPS);
            }
        }
        self.hover(to, 4)
    }

    pub fn command(&mut self, command: Command) -> &mut Self {
        let t = self.tick();
        self.events.push(InputEvent::Command { t, command });
        self
    }

    pub fn anchor(&mut self, pose: RigidTransform<f64>) -> &mut Self {
        let t = self.tick();
        self.events.push(InputEvent::AnchorPose { t, pose });
        self
    }

    pub fn events(&self) -> &[InputEvent] {
        &self.events
    }

    pub fn into_log(self, workflow: WorkflowKind) -> GestureLog {
        let mut log = GestureLog::new(Some(workflow));
        log.events = self.events;
        log
    }
}

pub const TUBE_LENGTHS_IN: [f64; 9] = [30.0, 33.0, 36.0, 40.0, 44.0, 48.0, 53.0, 58.0, 64.0];
pub const TUBES_PER_LENGTH: usize = 6;

fn pose(rotation: Quat<f64>, translation: [f64; 3]) -> Value {
    json!({ "quat": rotation, "pos": translation })
}

/// Reciprocal-frame tower: 54 tubes in 9 lengths, three frames.
pub fn tube_catalog() -> Value {
    let mut entries = Vec::new();
    for (g, &length) in TUBE_LENGTHS_IN.iter().enumerate() {
        for j in 0..TUBES_PER_LENGTH {
            let id = g * TUBES_PER_LENGTH + j + 1;
            let angle = std::f64::consts::TAU * j as f64 / TUBES_PER_LENGTH as f64;
            let spin = Quat::from_axis_angle(Vec3::unit_z(), angle);
            let radius = 20.0 + 2.0 * g as f64;
            let level = 12.0 * g as f64;
            entries.push(json!({
                "id": id,
                "length": length,
                "frame": j % 3 + 1,
                "frame_pose": pose(spin, [radius * angle.cos(), radius * angle.sin(), 0.0]),
                "model_pose": pose(spin, [radius * angle.cos(), radius * angle.sin(), level]),
            }));
        }
    }
    json!({
        "kind": "tubes",
        "unit": "in",
        "tolerance": 0.5,
        "expected_entries": TUBE_LENGTHS_IN.len() * TUBES_PER_LENGTH,
        "expected_unique_lengths": TUBE_LENGTHS_IN.len(),
        "entries": entries,
    })
}

pub const LAYER_HEIGHTS_IN: [f64; 6] = [12.0, 13.5, 15.0, 16.5, 18.0, 19.5];

/// Stacked plywood layers, each a shrinking rectangle with four rod holes.
pub fn layer_catalog() -> Value {
    let templates: Vec<Value> = LAYER_HEIGHTS_IN
        .iter()
        .enumerate()
        .map(|(i, &height)| {
            let w = 24.0 - 2.0 * i as f64;
            let h = 16.0 - 1.0 * i as f64;
            json!({
                "layer": i + 1,
                "height": height,
                "outline": [[0.0, 0.0], [w, 0.0], [w, h], [0.0, h], [0.0, 0.0]],
                "rod_holes": [[2.0, 2.0], [w - 2.0, 2.0], [w - 2.0, h - 2.0], [2.0, h - 2.0]],
                "label": format!("Layer {}", i + 1),
            })
        })
        .collect();
    json!({ "kind": "layers", "unit": "in", "tolerance": 0.25, "templates": templates })
}

pub const HALF_LOG_LENGTH: f64 = 2.4;
pub const HALF_LOG_RADIUS: f64 = 0.2;

/// Bandsaw cell with a post under each end of the half log.
pub fn cell() -> Value {
    json!({
        "kind": "cell",
        "unit": "m",
        "mounts": [
            { "center": [-0.12, 0.0, -0.2], "depth": 0.4 },
            { "center": [HALF_LOG_LENGTH + 0.12, 0.0, -0.2], "depth": 0.4 },
        ],
        "board_spec": { "min_width": 0.127, "min_thickness": 0.01905, "board_count": 3 },
        "clearance": 0.0254,
    })
}

fn quarter_turn() -> Quat<f64> {
    Quat::from_axis_angle(Vec3::unit_z(), std::f64::consts::FRAC_PI_2)
}

/// Hexnut jig: four locators along a rod, in inches, placed in the world
/// by a quarter turn about Z.
pub fn calibration_job() -> Value {
    json!({
        "kind": "calibration",
        "unit": "in",
        "anchor": pose(quarter_turn(), [20.0, 10.0, 30.0]),
        "targets": [
            { "id": 1, "goal": [4.0, 0.0, 0.0], "rail": { "point": [0.0, 0.0, 0.0], "direction": [1.0, 0.0, 0.0] } },
            { "id": 2, "goal": [10.0, 0.0, 0.0], "rail": { "point": [0.0, 0.0, 0.0], "direction": [1.0, 0.0, 0.0] } },
            { "id": 3, "goal": [16.5, 0.0, 0.0], "rail": { "point": [0.0, 0.0, 0.0], "direction": [1.0, 0.0, 0.0] } },
            { "id": 4, "goal": [6.0, 8.0, 0.0], "tolerances": { "green": 0.25, "yellow": 1.0 } },
        ],
    })
}

/// Finger-jointed panel: a 2 by 4 grid of boards, 150 mm apart.
pub fn panel_job() -> Value {
    let boards: Vec<Value> = (0..8)
        .map(|i| json!({ "id": i + 1, "center": [0.15 * (i % 4) as f64, 0.15 * (i / 4) as f64, 0.0] }))
        .collect();
    json!({
        "kind": "panel",
        "unit": "m",
        "tolerance": 0.003175,
        "anchor": pose(Quat::identity(), [0.5, 0.2, 0.9]),
        "boards": boards,
    })
}

fn rim(center: Vec3<f64>, radius: f64, degrees: f64) -> Vec3<f64> {
    let a = degrees.to_radians();
    center + Vec3::new(0.0, radius * a.cos(), radius * a.sin())
}

/// Whole log lying along +X: three rim points at each end.
pub fn log_halving_log() -> GestureLog {
    let (r, z) = (0.18, 0.3);
    let start = Vec3::new(0.0, 0.0, z);
    let end = Vec3::new(2.2, 0.0, z);
    let mut s = Script::new();
    s.hover(start, 10);
    for deg in [100.0, 210.0, 330.0] {
        s.pinch(rim(start, r, deg));
    }
    for deg in [80.0, 190.0, 300.0] {
        s.pinch(rim(end, r, deg));
    }
    s.hover(end, 10);
    s.into_log(WorkflowKind::LogHalving)
}

/// Half log on its flat face: diameter, far end, an anchor 40 mm up the end
/// face, then confirmation.
pub fn half_log_cutting_log() -> GestureLog {
    let r = HALF_LOG_RADIUS;
    let mut s = Script::new();
    s.hover(Vec3::zero(), 10);
    s.pinch(Vec3::new(0.0, -r, 0.0));
    s.pinch(Vec3::new(0.0, r, 0.0));
    s.pinch(Vec3::new(HALF_LOG_LENGTH, 0.0, 0.05));
    s.pinch(Vec3::new(0.0, 0.02, 0.04));
    s.command(Command::Confirm);
    s.into_log(WorkflowKind::HalfLogCutting)
}

/// Board tops of layers 2 and 5 with the default ground, one pinch between
/// layers that matches nothing.
pub fn layer_template_log() -> GestureLog {
    let inch = gbmr_core::scalar::METERS_PER_INCH;
    let mut s = Script::new();
    s.hover(Vec3::zero(), 10);
    s.pinch(Vec3::new(0.3, 0.2, 13.5 * inch + 0.002));
    s.pinch(Vec3::new(0.1, 0.1, 14.25 * inch));
    s.pinch(Vec3::new(0.25, 0.15, 18.0 * inch - 0.003));
    s.into_log(WorkflowKind::LayerTemplate)
}

/// Ends of two 40 in tubes and one 58 in tube.
pub fn tube_index_log() -> GestureLog {
    let inch = gbmr_core::scalar::METERS_PER_INCH;
    let mut s = Script::new();
    s.hover(Vec3::zero(), 10);
    let spans = [
        (Vec3::new(0.0, 0.0, 0.8), Vec3::new(40.1 * inch, 0.0, 0.8)),
        (
            Vec3::new(0.0, 0.3, 0.8),
            Vec3::new(0.0, 0.3 + 39.8 * inch, 0.8),
        ),
        (
            Vec3::new(0.1, 0.0, 0.9),
            Vec3::new(0.1 + 58.0 * inch * 0.6, 0.0, 0.9 + 58.0 * inch * 0.8),
        ),
    ];
    for (a, b) in spans {
        s.pinch(a);
        s.pinch(b);
    }
    s.into_log(WorkflowKind::TubeIndex)
}

/// Locator goals in the world, through the job's own anchor.
pub fn calibration_goals() -> Vec<Vec3<f64>> {
    let job: CalibrationJob<f64> =
        serde_json::from_value(calibration_job()).expect("fixture job parses");
    let anchor = job.anchor_in_meters().unwrap_or_default();
    job.targets_in_meters()
        .expect("fixture job is valid")
        .iter()
        .map(|t| anchor.apply(t.goal))
        .collect()
}

/// Each locator slid onto its goal from 40 mm away.
pub fn hexnut_jig_log() -> GestureLog {
    let mut s = Script::new();
    let goals = calibration_goals();
    s.hover(goals[0], 10);
    for goal in goals {
        let start = goal + Vec3::new(0.0, -0.04, 0.0);
        s.drag(start, goal, 8);
    }
    s.into_log(WorkflowKind::HexnutJig)
}

/// Board centers in the world, through the job's own anchor.
pub fn panel_centers() -> Vec<Vec3<f64>> {
    let job: PanelJob<f64> = serde_json::from_value(panel_job()).expect("fixture job parses");
    let anchor = job.anchor_in_meters().unwrap_or_default();
    job.boards_in_world(&anchor)
        .expect("fixture anchor is rigid")
        .iter()
        .map(|b| b.center)
        .collect()
}

/// Four boards checked: three within tolerance, one 6 mm off.
pub fn panel_qc_log() -> GestureLog {
    let c = panel_centers();
    let mut s = Script::new();
    s.hover(c[0], 10);
    s.pinch(c[0] + Vec3::new(0.001, 0.0, 0.0));
    s.pinch(c[1] + Vec3::new(0.0, -0.002, 0.0));
    s.pinch(c[5] + Vec3::new(0.006, 0.0, 0.0));
    s.pinch(c[6]);
    s.into_log(WorkflowKind::PanelQc)
}

/// Every shipped fixture: file name and contents.
pub fn all() -> Vec<(String, String)> {
    let pretty = |v: Value| serde_json::to_string_pretty(&v).expect("json values serialize") + "\n";
    let mut files = vec![
        ("tubes.json".to_owned(), pretty(tube_catalog())),
        ("layers.json".to_owned(), pretty(layer_catalog())),
        ("cell.json".to_owned(), pretty(cell())),
        ("calibration.json".to_owned(), pretty(calibration_job())),
        ("panel.json".to_owned(), pretty(panel_job())),
    ];
    let logs = [
        log_halving_log(),
        half_log_cutting_log(),
        layer_template_log(),
        tube_index_log(),
        hexnut_jig_log(),
        panel_qc_log(),
    ];
    for log in logs {
        let name = log
            .header
            .workflow
            .expect("fixture logs name their workflow")
            .name();
        files.push((format!("{name}.events.jsonl"), log.to_jsonl()));
    }
    files
}

/// The resource files a workflow needs, by fixture file name.
pub fn resources_for(workflow: WorkflowKind) -> &'static [&'static str] {
    match workflow {
        WorkflowKind::LogHalving => &[],
        WorkflowKind::HalfLogCutting => &["cell.json"],
        WorkflowKind::LayerTemplate => &["layers.json"],
        WorkflowKind::TubeIndex => &["tubes.json"],
        WorkflowKind::HexnutJig => &["calibration.json"],
        WorkflowKind::PanelQc => &["panel.json"],
    }
}
