use serde::{Deserialize, Serialize};

use super::joint::{JointId, JOINT_COUNT};
use super::TrackingError;
use crate::linalg::{Quat, Vec3};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub const fn index(self) -> usize {
        match self {
            Handedness::Left => 0,
            Handedness::Right => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct JointPose<T> {
    #[serde(rename = "pos")]
    pub position: Vec3<T>,
    #[serde(rename = "quat")]
    pub orientation: Quat<T>,
}

impl<T: Scalar> JointPose<T> {
    pub fn new(position: Vec3<T>, orientation: Quat<T>) -> Self {
        Self {
            position,
            orientation,
        }
    }

    pub fn at(position: Vec3<T>) -> Self {
        Self::new(position, Quat::identity())
    }

    fn check(&self, joint: JointId) -> Result<(), TrackingError> {
        if !self.position.is_finite() {
            return Err(TrackingError::NonFinitePosition(joint));
        }
        if !self.orientation.is_unit(T::lit(1e-6)) {
            return Err(TrackingError::NonUnitOrientation(joint));
        }
        Ok(())
    }
}

/// One timestamped sample of all 25 joint poses of one hand.
///
/// Construction validates every joint, so a `HandFrame` in hand is always
/// well formed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHandFrame<T>", into = "RawHandFrame<T>")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct HandFrame<T> {
    timestamp: u64,
    handedness: Handedness,
    joints: [JointPose<T>; JOINT_COUNT],
    confidence: T,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct RawHandFrame<T> {
    t: u64,
    hand: Handedness,
    confidence: T,
    joints: [JointPose<T>; JOINT_COUNT],
}

impl<T: Scalar> TryFrom<RawHandFrame<T>> for HandFrame<T> {
    type Error = TrackingError;

    fn try_from(raw: RawHandFrame<T>) -> Result<Self, Self::Error> {
        HandFrame::new(raw.t, raw.hand, raw.joints, raw.confidence)
    }
}

impl<T: Scalar> From<HandFrame<T>> for RawHandFrame<T> {
    fn from(f: HandFrame<T>) -> Self {
        RawHandFrame {
            t: f.timestamp,
            hand: f.handedness,
            confidence: f.confidence,
            joints: f.joints,
        }
    }
}

impl<T: Scalar> HandFrame<T> {
    pub fn new(
        timestamp: u64,
        handedness: Handedness,
        joints: [JointPose<T>; JOINT_COUNT],
        confidence: T,
    ) -> Result<Self, TrackingError> {
        if !(confidence >= T::zero() && confidence <= T::one()) {
            return Err(TrackingError::InvalidConfidence(confidence.to_f64_lossy()));
        }
        for (joint, pose) in JointId::ALL.iter().zip(joints.iter()) {
            pose.check(*joint)?;
        }
        Ok(Self {
            timestamp,
            handedness,
            joints,
            confidence,
        })
    }

    pub fn timestamp(&self) -> u64 {
        self.timestamp
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    pub fn confidence(&self) -> T {
        self.confidence
    }

    pub fn joint(&self, id: JointId) -> &JointPose<T> {
        &self.joints[id.index()]
    }

    pub fn joints(&self) -> &[JointPose<T>; JOINT_COUNT] {
        &self.joints
    }

    /// Distance between the thumb tip and the index fingertip.
    pub fn pinch_distance(&self) -> T {
        self.joint(JointId::ThumbTip)
            .position
            .distance(self.joint(JointId::IndexTip).position)
    }

    /// Midpoint of the thumb tip and the index fingertip: the digitized point.
    pub fn pinch_point(&self) -> Vec3<T> {
        self.joint(JointId::ThumbTip)
            .position
            .midpoint(self.joint(JointId::IndexTip).position)
    }
}

/// Free-function form of [`HandFrame::pinch_distance`].
pub fn pinch_distance<T: Scalar>(frame: &HandFrame<T>) -> T {
    frame.pinch_distance()
}

/// Moving average of joint positions over `history` (oldest first).
///
/// Orientations, timestamp and confidence come from the newest frame.
pub fn smooth<T: Scalar>(history: &[HandFrame<T>]) -> Result<HandFrame<T>, TrackingError> {
    let newest = history.last().ok_or(TrackingError::EmptyHistory)?;
    if history.len() == 1 {
        return Ok(newest.clone());
    }
    if history.iter().any(|f| f.handedness != newest.handedness) {
        return Err(TrackingError::MixedHandedness);
    }
    let count = T::from_usize(history.len()).expect("window length fits scalar");
    let mut joints = newest.joints;
    for (i, joint) in joints.iter_mut().enumerate() {
        let sum = history
            .iter()
            .fold(Vec3::zero(), |acc, f| acc + f.joints[i].position);
        joint.position = sum / count;
    }
    Ok(HandFrame {
        joints,
        ..newest.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hand_tracking::synthetic::pinch_frame;

    #[test]
    fn rejects_non_unit_quaternion() {
        let mut joints = [JointPose::at(Vec3::<f64>::zero()); JOINT_COUNT];
        joints[3].orientation = Quat::new(1.0, 0.1, 0.0, 0.0);
        let err = HandFrame::new(0, Handedness::Right, joints, 1.0).unwrap_err();
        assert!(matches!(
            err,
            TrackingError::NonUnitOrientation(JointId::ThumbDistal)
        ));
    }

    #[test]
    fn rejects_non_finite_position_and_bad_confidence() {
        let mut joints = [JointPose::at(Vec3::<f64>::zero()); JOINT_COUNT];
        assert!(HandFrame::new(0, Handedness::Left, joints, 1.5).is_err());
        joints[0].position.x = f64::NAN;
        assert!(matches!(
            HandFrame::new(0, Handedness::Left, joints, 1.0),
            Err(TrackingError::NonFinitePosition(JointId::Wrist))
        ));
    }

    #[test]
    fn axis_aligned_pinch_distance() {
        let mut joints = [JointPose::at(Vec3::<f64>::zero()); JOINT_COUNT];
        joints[JointId::IndexTip.index()].position = Vec3::new(0.0, 0.0, 0.010);
        let frame = HandFrame::new(0, Handedness::Right, joints, 1.0).unwrap();
        assert_eq!(pinch_distance(&frame), 0.010);

        joints[JointId::IndexTip.index()].position = Vec3::zero();
        let frame = HandFrame::new(0, Handedness::Right, joints, 1.0).unwrap();
        assert_eq!(frame.pinch_distance(), 0.0);
    }

    #[test]
    fn smoothing_single_frame_is_identity() {
        let f = pinch_frame(10, Handedness::Right, Vec3::new(0.1, 0.2, 0.3), 0.02, 0.9);
        assert_eq!(smooth(std::slice::from_ref(&f)).unwrap(), f);
    }

    #[test]
    fn smoothing_two_frames_gives_midpoint() {
        let mut a = [JointPose::at(Vec3::<f64>::zero()); JOINT_COUNT];
        let mut b = a;
        a[JointId::ThumbTip.index()].position.z = 0.0;
        b[JointId::ThumbTip.index()].position.z = 0.02;
        let fa = HandFrame::new(0, Handedness::Right, a, 1.0).unwrap();
        let fb = HandFrame::new(1, Handedness::Right, b, 1.0).unwrap();
        let s = smooth(&[fa, fb]).unwrap();
        assert_eq!(s.joint(JointId::ThumbTip).position.z, 0.01);
        assert_eq!(s.timestamp(), 1);
    }

    #[test]
    fn smoothing_errors() {
        assert!(matches!(
            smooth::<f64>(&[]),
            Err(TrackingError::EmptyHistory)
        ));
        let l = pinch_frame(0, Handedness::Left, Vec3::<f64>::zero(), 0.02, 1.0);
        let r = pinch_frame(1, Handedness::Right, Vec3::zero(), 0.02, 1.0);
        assert!(matches!(
            smooth(&[l, r]),
            Err(TrackingError::MixedHandedness)
        ));
    }

    #[test]
    fn json_round_trip_validates() {
        let f = pinch_frame(42, Handedness::Left, Vec3::new(0.5, -0.25, 1.0), 0.03, 0.75);
        let s = serde_json::to_string(&f).unwrap();
        let back: HandFrame<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let broken = s.replacen("[1.0,0.0,0.0,0.0]", "[2.0,0.0,0.0,0.0]", 1);
        assert!(serde_json::from_str::<HandFrame<f64>>(&broken).is_err());
    }
}
