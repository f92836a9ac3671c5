use serde::{Deserialize, Serialize};

/// One of the 25 tracked joints of a hand.
///
/// The thumb has no intermediate phalanx; every other finger has five joints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum JointId {
    Wrist,
    ThumbMetacarpal,
    ThumbProximal,
    ThumbDistal,
    ThumbTip,
    IndexMetacarpal,
    IndexProximal,
    IndexIntermediate,
    IndexDistal,
    IndexTip,
    MiddleMetacarpal,
    MiddleProximal,
    MiddleIntermediate,
    MiddleDistal,
    MiddleTip,
    RingMetacarpal,
    RingProximal,
    RingIntermediate,
    RingDistal,
    RingTip,
    LittleMetacarpal,
    LittleProximal,
    LittleIntermediate,
    LittleDistal,
    LittleTip,
}

pub const JOINT_COUNT: usize = 25;

impl JointId {
    pub const ALL: [JointId; JOINT_COUNT] = [
        JointId::Wrist,
        JointId::ThumbMetacarpal,
        JointId::ThumbProximal,
        JointId::ThumbDistal,
        JointId::ThumbTip,
        JointId::IndexMetacarpal,
        JointId::IndexProximal,
        JointId::IndexIntermediate,
        JointId::IndexDistal,
        JointId::IndexTip,
        JointId::MiddleMetacarpal,
        JointId::MiddleProximal,
        JointId::MiddleIntermediate,
        JointId::MiddleDistal,
        JointId::MiddleTip,
        JointId::RingMetacarpal,
        JointId::RingProximal,
        JointId::RingIntermediate,
        JointId::RingDistal,
        JointId::RingTip,
        JointId::LittleMetacarpal,
        JointId::LittleProximal,
        JointId::LittleIntermediate,
        JointId::LittleDistal,
        JointId::LittleTip,
    ];

    /// Position of this joint in [`JointId::ALL`] and in a frame's joint array.
    pub const fn index(self) -> usize {
        self as usize
    }
}
