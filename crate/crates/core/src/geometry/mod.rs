//! Object localization: fitting logs from digitized points and deriving
//! bandsaw cuts and robot targets.

mod circle;
mod cut;
mod cylinder;
mod half_log;
mod halving;
mod shapes;
mod toolpath;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use circle::{circumcircle, Circle3D, MIN_TRIANGLE_AREA};
pub use cut::{
    cut_toolpath, place_cut, validate_cut, BoardCheck, BoardSpec, CutPlacement, MountBox,
    ValidationResult, ValidationStatus, INSIDE_TOLERANCE,
};
pub use cylinder::{fit_cylinder, CylinderModel, Mesh, DEFAULT_TESSELLATION};
pub use half_log::{chord_width, define_half_log, HalfLogModel, LogCoords};
pub use halving::{halving_surface, halving_toolpath, HalvingSurface};
pub use shapes::{segment_distance, OrientedBox, Rectangle3D};
pub use toolpath::{
    CutFrame, MotionKind, RobotTarget, Toolpath, ToolpathMetadata, TOOLPATH_SCHEMA,
};

use crate::linalg::Vec3;
use crate::scalar::{inches, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("points are collinear (triangle area {area:e} m²); re-place a point")]
    Collinear { area: f64 },
    #[error("end circle centers coincide")]
    CoincidentCenters,
    #[error("diameter points coincide; re-place a point")]
    CoincidentPoints,
    #[error("length point projects to zero length; re-place it at the far end")]
    ZeroLength,
    #[error("log axis is within the vertical guard of world up; halving orientation undefined")]
    VerticalAxis,
    #[error("negative cut depth {0}")]
    NegativeDepth(f64),
    #[error("cut depth {depth} leaves no width on radius {radius}")]
    ZeroWidth { depth: f64, radius: f64 },
    #[error("anchor is {distance:.4} m from the log body")]
    AnchorTooFar { distance: f64 },
    #[error("cut placement has not passed validation")]
    Unvalidated,
    #[error("{0} is not a unit vector")]
    NonUnitVector(&'static str),
    #[error("invalid {0}")]
    InvalidDimension(&'static str),
    #[error("invalid toolpath: {0}")]
    InvalidToolpath(&'static str),
}

/// Tunables of the localization workflows, all in meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct LocalizationParams<T> {
    pub world_up: Vec3<T>,
    /// Halving is refused when the log axis is within this many degrees of up.
    pub vertical_guard_deg: f64,
    pub overcut_margin: T,
    pub retract_clearance: T,
    pub mount_clearance: T,
    pub snap_tolerance: T,
    pub tessellation: usize,
}

impl<T: Scalar> Default for LocalizationParams<T> {
    fn default() -> Self {
        Self {
            world_up: Vec3::unit_z(),
            vertical_guard_deg: 5.0,
            overcut_margin: T::lit(0.05),
            retract_clearance: T::lit(0.15),
            mount_clearance: inches(1.0),
            snap_tolerance: T::lit(0.05),
            tessellation: DEFAULT_TESSELLATION,
        }
    }
}

pub(crate) fn unit_tolerance<T: Scalar>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(64.0))
}
