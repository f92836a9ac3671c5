//! Synthetic hand frames for fixtures, tests and headless clients.

use super::frame::{HandFrame, Handedness, JointPose};
use super::joint::{JointId, JOINT_COUNT};
use crate::linalg::Vec3;
use crate::scalar::Scalar;

/// Builds a well-formed frame whose thumb and index tips straddle `pinch_point`
/// along +X, `tip_distance` apart. The remaining joints sit on a fixed rest
/// pose behind the tips.
pub fn pinch_frame<T: Scalar>(
    timestamp: u64,
    handedness: Handedness,
    pinch_point: Vec3<T>,
    tip_distance: T,
    confidence: T,
) -> HandFrame<T> {
    let half = tip_distance * T::lit(0.5);
    let mut joints = [JointPose::at(pinch_point); JOINT_COUNT];
    let back = |dx: f64, dy: f64, dz: f64| pinch_point + Vec3::from_f64(dx, dy, dz);

    joints[JointId::Wrist.index()] = JointPose::at(back(0.0, -0.12, -0.04));
    let thumb = [
        (JointId::ThumbMetacarpal, -0.09),
        (JointId::ThumbProximal, -0.06),
        (JointId::ThumbDistal, -0.03),
    ];
    for (id, dy) in thumb {
        joints[id.index()] = JointPose::at(back(-0.03, dy, -0.02));
    }
    joints[JointId::ThumbTip.index()] =
        JointPose::at(pinch_point - Vec3::new(half, T::zero(), T::zero()));

    let fingers = [
        (JointId::IndexMetacarpal, 0.0),
        (JointId::MiddleMetacarpal, 0.02),
        (JointId::RingMetacarpal, 0.04),
        (JointId::LittleMetacarpal, 0.06),
    ];
    for (first, dx) in fingers {
        for k in 0..5 {
            let id = JointId::ALL[first.index() + k];
            let dy = -0.09 + 0.02 * k as f64;
            joints[id.index()] = JointPose::at(back(dx + 0.01, dy, 0.0));
        }
    }
    joints[JointId::IndexTip.index()] =
        JointPose::at(pinch_point + Vec3::new(half, T::zero(), T::zero()));

    HandFrame::new(timestamp, handedness, joints, confidence)
        .expect("synthetic frame is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tips_straddle_the_pinch_point() {
        let f = pinch_frame::<f64>(5, Handedness::Right, Vec3::new(1.0, 2.0, 3.0), 0.06, 1.0);
        assert!((f.pinch_distance() - 0.06).abs() < 1e-12);
        assert!((f.pinch_point() - Vec3::new(1.0, 2.0, 3.0)).norm() < 1e-12);
    }

    #[test]
    fn single_precision_frames_are_valid() {
        let f = pinch_frame(
            5,
            Handedness::Left,
            Vec3::<f32>::new(0.1, 0.2, 0.3),
            0.005,
            0.5,
        );
        assert!((f.pinch_distance() - 0.005).abs() < 1e-6);
    }
}
