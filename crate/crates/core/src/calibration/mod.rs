//! Tracking physical parts toward digital goals with red/yellow/green
//! feedback, and point-based quality control of finished panels.

mod job;
mod notation;
mod qc;
mod session;

use thiserror::Error;

pub use job::{CalibrationJob, JobTarget, PanelBoard, PanelJob, Tolerances};
pub use notation::{Glyph, NotationColor, NotationState};
pub use qc::{qc_board, qc_report_json, BoardQCRecord, QcBoard, Verdict, TIE_EPSILON};
pub use session::{
    apply_anchor, notation_for_distance, CalibrationSession, CalibrationTarget, TargetState,
    TrackOutcome,
};

use crate::scalar::{inches, Scalar};

/// Default green tolerance, 0.125 in.
pub fn default_green_tolerance<T: Scalar>() -> T {
    inches(0.125)
}

/// Default yellow tolerance, 0.5 in.
pub fn default_yellow_tolerance<T: Scalar>() -> T {
    inches(0.5)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("anchor is not a rigid transform")]
    NonRigidAnchor,
    #[error("target {id}: tolerances must satisfy 0 < green < yellow")]
    InvalidTolerances { id: u32 },
    #[error("target {id}: rail direction is not a unit vector")]
    InvalidRail { id: u32 },
    #[error("duplicate target id {id}")]
    DuplicateTarget { id: u32 },
    #[error("unknown target {id}")]
    UnknownTarget { id: u32 },
    #[error("no boards to check against")]
    NoBoards,
    #[error("QC tolerance must be positive")]
    InvalidTolerance,
}
