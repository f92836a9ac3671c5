//! Hand-joint frames in, debounced pinch events out.

mod detector;
mod frame;
mod joint;
pub mod synthetic;

use thiserror::Error;

pub use detector::{
    step_detector, HandDetectorState, PinchDetector, PinchDetectorConfig, PinchEvent, PinchKind,
    PinchPhase,
};
pub use frame::{pinch_distance, smooth, HandFrame, Handedness, JointPose};
pub use joint::{JointId, JOINT_COUNT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackingError {
    #[error("joint {0:?} has a non-finite position")]
    NonFinitePosition(JointId),
    #[error("joint {0:?} orientation is not a unit quaternion")]
    NonUnitOrientation(JointId),
    #[error("confidence {0} outside [0, 1]")]
    InvalidConfidence(f64),
    #[error("frame at {got} ms does not follow {last} ms")]
    OutOfOrder { last: u64, got: u64 },
    #[error("cannot smooth an empty history")]
    EmptyHistory,
    #[error("smoothing history mixes left and right hands")]
    MixedHandedness,
    #[error("detector config needs 0 < engage < release, confidence in [0, 1] and a window of at least one frame")]
    InvalidConfig,
}
