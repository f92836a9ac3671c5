//! Geometry, gesture and feedback core for gesture-driven mixed reality
//! fabrication: pinch detection on hand-joint streams, log fitting and
//! bandsaw toolpaths, catalog identification and calibration feedback.
//!
//! Everything is generic over the scalar type; the aliases below fix it to
//! `f64`, which is what the session service uses.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod geometry;
pub mod hand_tracking;
pub mod identification;
pub mod linalg;
pub mod scalar;

pub use scalar::Scalar;

pub type Vec3d = linalg::Vec3<f64>;
pub type Quatd = linalg::Quat<f64>;
pub type RigidTransformd = linalg::RigidTransform<f64>;
pub type Planed = linalg::Plane<f64>;
pub type Lined = linalg::Line<f64>;

pub type HandFramed = hand_tracking::HandFrame<f64>;
pub type PinchDetectord = hand_tracking::PinchDetector<f64>;
pub type PinchEventd = hand_tracking::PinchEvent<f64>;

pub type Circle3Dd = geometry::Circle3D<f64>;
pub type CylinderModeld = geometry::CylinderModel<f64>;
pub type HalvingSurfaced = geometry::HalvingSurface<f64>;
pub type HalfLogModeld = geometry::HalfLogModel<f64>;
pub type CutPlacementd = geometry::CutPlacement<f64>;
pub type Toolpathd = geometry::Toolpath<f64>;
pub type LocalizationParamsd = geometry::LocalizationParams<f64>;

pub type TemplateCatalogd = identification::TemplateCatalog<f64>;
pub type TubeCatalogd = identification::TubeCatalog<f64>;
pub type IdentificationResultd = identification::IdentificationResult<f64>;
pub type GroundPlaned = identification::GroundPlane<f64>;

pub type CalibrationSessiond = calibration::CalibrationSession<f64>;
pub type BoardQCRecordd = calibration::BoardQCRecord<f64>;
