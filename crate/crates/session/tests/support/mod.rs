#![allow(dead_code)]

use std::path::PathBuf;

use gbmr_core::calibration::NotationState;
use gbmr_core::geometry::{
    circumcircle, fit_cylinder, halving_surface, halving_toolpath, LocalizationParams,
};
use gbmr_core::hand_tracking::synthetic::pinch_frame;
use gbmr_core::hand_tracking::{HandFrame, Handedness, JointPose, JOINT_COUNT};
use gbmr_core::linalg::{Quat, RigidTransform, Vec3};
use gbmr_session::fixtures;
use gbmr_session::{
    parse_resource, Command, ErrorCode, Geometry, GestureLog, InputEvent, Resources, SceneUpdate,
    SessionConfig, UpdateBody, WorkflowKind,
};
use rand::Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_log(workflow: WorkflowKind) -> GestureLog {
    GestureLog::load(fixture_dir().join(format!("{}.events.jsonl", workflow.name())))
        .expect("fixture log loads")
}

pub fn fixture_resources(workflow: WorkflowKind) -> Resources {
    let mut resources = Resources::default();
    for name in fixtures::resources_for(workflow) {
        let text =
            std::fs::read_to_string(fixture_dir().join(name)).expect("fixture resource exists");
        resources.add(parse_resource(&text).expect("fixture resource parses"));
    }
    resources
}

pub fn fixture_config(workflow: WorkflowKind) -> SessionConfig {
    SessionConfig::new(workflow, fixture_resources(workflow))
}

fn vec3(rng: &mut impl Rng, scale: f64) -> Vec3<f64> {
    Vec3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

fn quat(rng: &mut impl Rng) -> Quat<f64> {
    Quat::new(rng.gen(), rng.gen(), rng.gen(), rng.gen()).normalized()
}

fn workflow(rng: &mut impl Rng) -> WorkflowKind {
    WorkflowKind::ALL[rng.gen_range(0..WorkflowKind::ALL.len())]
}

fn word(rng: &mut impl Rng) -> String {
    const POOL: [&str; 8] = [
        "pinch",
        "the",
        "rim",
        "«ü»",
        "\"quoted\"",
        "tab\there",
        "line\nbreak",
        "✓",
    ];
    (0..rng.gen_range(0..5))
        .map(|_| POOL[rng.gen_range(0..POOL.len())])
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn random_frame(rng: &mut impl Rng) -> HandFrame<f64> {
    let hand = if rng.gen() {
        Handedness::Left
    } else {
        Handedness::Right
    };
    let base = pinch_frame(
        rng.gen_range(0..u64::MAX / 2),
        hand,
        vec3(rng, 3.0),
        rng.gen_range(0.0..0.1),
        rng.gen(),
    );
    let mut joints = *base.joints();
    for j in joints.iter_mut().take(rng.gen_range(0..JOINT_COUNT)) {
        *j = JointPose::new(j.position + vec3(rng, 0.01), quat(rng));
    }
    HandFrame::new(base.timestamp(), hand, joints, base.confidence())
        .expect("perturbed frame stays valid")
}

pub fn random_event(rng: &mut impl Rng) -> InputEvent {
    let t = rng.gen_range(0..u64::MAX / 2);
    match rng.gen_range(0..8) {
        0..=4 => InputEvent::HandFrame(random_frame(rng)),
        5 => InputEvent::AnchorPose {
            t,
            pose: RigidTransform::new(quat(rng), vec3(rng, 5.0)),
        },
        _ => {
            let command = match rng.gen_range(0..5) {
                0 => Command::Reset,
                1 => Command::UndoPoint,
                2 => Command::Confirm,
                3 => Command::SelectWorkflow {
                    workflow: workflow(rng),
                },
                _ => Command::SetParam {
                    key: word(rng),
                    value: rng.gen::<f64>() * 10f64.powi(rng.gen_range(-12..12)),
                },
            };
            InputEvent::Command { t, command }
        }
    }
}

const CODES: [ErrorCode; 6] = [
    ErrorCode::Malformed,
    ErrorCode::OutOfOrder,
    ErrorCode::DegenerateFit,
    ErrorCode::NoMatch,
    ErrorCode::WorkflowLocked,
    ErrorCode::Sequencing,
];

pub fn random_update(rng: &mut impl Rng) -> SceneUpdate {
    let id = format!("item_{}", rng.gen_range(0..100));
    let body = match rng.gen_range(0..9) {
        0 => UpdateBody::GeometryAdded {
            id,
            geometry: Geometry::Point {
                position: vec3(rng, 3.0),
            },
        },
        1 => UpdateBody::GeometryAdded {
            id,
            geometry: Geometry::Segment {
                a: vec3(rng, 3.0),
                b: vec3(rng, 3.0),
            },
        },
        2 => UpdateBody::GeometryAdded {
            id,
            geometry: Geometry::Polyline {
                points: (0..rng.gen_range(0..6)).map(|_| vec3(rng, 1.0)).collect(),
                closed: rng.gen(),
            },
        },
        3 => match circumcircle(vec3(rng, 1.0), vec3(rng, 1.0), vec3(rng, 1.0)) {
            Ok(circle) => UpdateBody::GeometryAdded {
                id,
                geometry: Geometry::Circle { circle },
            },
            Err(_) => UpdateBody::GeometryRemoved { id },
        },
        4 => {
            let r = rng.gen_range(0.1..0.4);
            let a = circumcircle(
                Vec3::new(0.0, r, 0.0),
                Vec3::new(0.0, -r, 0.0),
                Vec3::new(0.0, 0.0, r),
            )
            .unwrap();
            let mut b = a;
            b.center = Vec3::new(
                rng.gen_range(1.0..3.0),
                rng.gen_range(-0.1..0.1),
                rng.gen_range(-0.1..0.1),
            );
            let params = LocalizationParams::default();
            let cyl = fit_cylinder(&a, &b, rng.gen_range(3..24)).unwrap();
            let surface = halving_surface(&cyl, &params).unwrap();
            UpdateBody::ToolpathReady {
                id,
                toolpath: halving_toolpath(&surface, &params).unwrap(),
            }
        }
        5 => UpdateBody::Notation {
            subject: id,
            notation: match rng.gen_range(0..3) {
                0 => NotationState::green_check(word(rng)),
                1 => NotationState::yellow_cross(word(rng)),
                _ => NotationState::red_cross(word(rng)),
            },
        },
        6 => UpdateBody::Instruction { text: word(rng) },
        7 => UpdateBody::Error {
            code: CODES[rng.gen_range(0..CODES.len())],
            message: word(rng),
        },
        _ => UpdateBody::GeometryRemoved { id },
    };
    SceneUpdate {
        rev: rng.gen_range(0..u64::MAX / 2),
        body,
    }
}

/// Serializes and parses back, reporting the first mismatch.
pub fn round_trips<T>(value: &T) -> Result<(), String>
where
    T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug,
{
    let line = gbmr_session::protocol::to_line(value);
    if line.contains('\n') {
        return Err(format!("line contains a newline: {line}"));
    }
    let back: T = serde_json::from_str(&line).map_err(|e| format!("{e}: {line}"))?;
    if &back != value {
        return Err(format!("{value:?} came back as {back:?}"));
    }
    let again = gbmr_session::protocol::to_line(&back);
    if again != line {
        return Err(format!("reserialized differently:\n{line}\n{again}"));
    }
    Ok(())
}
