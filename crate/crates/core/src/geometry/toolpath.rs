//! Neutral robot target format for bandsaw passes.
//!
//! Target frames use X = cut travel direction, Z = cut-plane normal,
//! Y = Z × X.

use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::linalg::{Quat, Vec3};
use crate::scalar::Scalar;

pub const TOOLPATH_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MotionKind {
    Approach,
    Cut,
    Retract,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct RobotTarget<T> {
    #[serde(rename = "pos")]
    pub position: Vec3<T>,
    #[serde(rename = "quat")]
    pub orientation: Quat<T>,
    pub kind: MotionKind,
}

impl<T: Scalar> RobotTarget<T> {
    /// `[X, Y, Z]` axes of the target frame.
    pub fn frame(&self) -> [Vec3<T>; 3] {
        self.orientation.axes()
    }
}

/// Orthonormal cut frame from a travel direction and a cut-plane normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutFrame<T> {
    pub travel: Vec3<T>,
    pub side: Vec3<T>,
    pub normal: Vec3<T>,
}

impl<T: Scalar> CutFrame<T> {
    /// `travel` and `normal` must be unit and perpendicular.
    pub fn new(travel: Vec3<T>, normal: Vec3<T>) -> Self {
        Self {
            travel,
            side: normal.cross(travel),
            normal,
        }
    }

    pub fn orientation(&self) -> Quat<T> {
        Quat::from_frame(self.travel, self.side, self.normal)
    }

    /// Approach at `entry`, cut to `exit`, retract `lift` along the side axis.
    pub fn pass(&self, entry: Vec3<T>, exit: Vec3<T>, lift: T) -> [RobotTarget<T>; 3] {
        let orientation = self.orientation();
        let target = |position, kind| RobotTarget {
            position,
            orientation,
            kind,
        };
        [
            target(entry, MotionKind::Approach),
            target(exit, MotionKind::Cut),
            target(exit + self.side * lift, MotionKind::Retract),
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolpathMetadata {
    pub workflow: String,
    pub source: String,
}

/// Ordered robot targets; starts with an approach, ends with a retract.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ToolpathDocument<T>", into = "ToolpathDocument<T>")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Toolpath<T> {
    targets: Vec<RobotTarget<T>>,
    metadata: ToolpathMetadata,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct ToolpathDocument<T> {
    schema: u32,
    targets: Vec<RobotTarget<T>>,
    metadata: ToolpathMetadata,
}

impl<T: Scalar> TryFrom<ToolpathDocument<T>> for Toolpath<T> {
    type Error = GeometryError;

    fn try_from(doc: ToolpathDocument<T>) -> Result<Self, Self::Error> {
        if doc.schema != TOOLPATH_SCHEMA {
            return Err(GeometryError::InvalidToolpath("unsupported schema version"));
        }
        Toolpath::new(doc.targets, doc.metadata)
    }
}

impl<T: Scalar> From<Toolpath<T>> for ToolpathDocument<T> {
    fn from(t: Toolpath<T>) -> Self {
        ToolpathDocument {
            schema: TOOLPATH_SCHEMA,
            targets: t.targets,
            metadata: t.metadata,
        }
    }
}

impl<T: Scalar> Toolpath<T> {
    pub fn new(
        targets: Vec<RobotTarget<T>>,
        metadata: ToolpathMetadata,
    ) -> Result<Self, GeometryError> {
        match (targets.first(), targets.last()) {
            (Some(first), Some(last))
                if first.kind == MotionKind::Approach && last.kind == MotionKind::Retract => {}
            _ => {
                return Err(GeometryError::InvalidToolpath(
                    "must start with approach and end with retract",
                ))
            }
        }
        if targets.windows(2).any(|w| w[0].position == w[1].position) {
            return Err(GeometryError::InvalidToolpath(
                "consecutive targets coincide",
            ));
        }
        if targets
            .iter()
            .any(|t| !t.orientation.is_unit(T::lit(1e-6)) || !t.position.is_finite())
        {
            return Err(GeometryError::InvalidToolpath("target pose is not rigid"));
        }
        Ok(Self { targets, metadata })
    }

    pub fn targets(&self) -> &[RobotTarget<T>] {
        &self.targets
    }

    pub fn metadata(&self) -> &ToolpathMetadata {
        &self.metadata
    }

    pub fn with_metadata(mut self, metadata: ToolpathMetadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("toolpath serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
