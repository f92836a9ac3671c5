use serde::{Deserialize, Serialize};

use super::cylinder::CylinderModel;
use super::shapes::Rectangle3D;
use super::toolpath::{CutFrame, MotionKind, Toolpath, ToolpathMetadata};
use super::{GeometryError, LocalizationParams};
use crate::linalg::{Plane, Vec3};
use crate::scalar::Scalar;

/// Vertical cut surface through the log axis, oversized by the overcut margin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct HalvingSurface<T> {
    pub plane: Plane<T>,
    /// `u_axis` is the log axis, `v_axis` the in-plane upward direction.
    pub rect: Rectangle3D<T>,
    pub start: Vec3<T>,
    pub end: Vec3<T>,
    pub max_radius: T,
}

/// Plane containing the axis and world up; normal = axis × up.
pub fn halving_surface<T: Scalar>(
    cyl: &CylinderModel<T>,
    params: &LocalizationParams<T>,
) -> Result<HalvingSurface<T>, GeometryError> {
    let up = params.world_up;
    let guard = T::lit(params.vertical_guard_deg.to_radians().sin());
    let cross = cyl.axis.cross(up);
    if cross.norm() < guard {
        return Err(GeometryError::VerticalAxis);
    }
    let normal = cross.normalized().ok_or(GeometryError::VerticalAxis)?;
    let v_axis = normal.cross(cyl.axis);
    let margin = params.overcut_margin;
    let half = T::lit(0.5);
    let rect = Rectangle3D {
        center: cyl.midpoint(),
        u_axis: cyl.axis,
        v_axis,
        half_u: cyl.length * half + margin,
        half_v: cyl.max_radius() + margin,
    };
    Ok(HalvingSurface {
        plane: Plane {
            point: cyl.midpoint(),
            normal,
        },
        rect,
        start: cyl.start.center,
        end: cyl.end.center,
        max_radius: cyl.max_radius(),
    })
}

impl<T: Scalar> HalvingSurface<T> {
    /// The same surface traversed from the other end.
    pub fn reversed(&self) -> Self {
        let rect = Rectangle3D {
            u_axis: -self.rect.u_axis,
            ..self.rect
        };
        Self {
            plane: Plane {
                normal: -self.plane.normal,
                ..self.plane
            },
            rect,
            start: self.end,
            end: self.start,
            max_radius: self.max_radius,
        }
    }
}

/// Approach above the entry end, drop to the entry point, cut through to the
/// exit point, retract above the exit end. Entry and exit sit the overcut
/// margin beyond the log ends; the lifted points clear the log top by the
/// retract clearance. All targets lie on the cut plane.
pub fn halving_toolpath<T: Scalar>(
    surface: &HalvingSurface<T>,
    params: &LocalizationParams<T>,
) -> Result<Toolpath<T>, GeometryError> {
    let frame = CutFrame::new(surface.rect.u_axis, surface.plane.normal);
    let entry = surface.start - frame.travel * params.overcut_margin;
    let exit = surface.end + frame.travel * params.overcut_margin;
    let lift = surface.max_radius + params.retract_clearance;
    let [approach, cut, retract] = frame.pass(entry, exit, lift);
    let hover = super::toolpath::RobotTarget {
        position: entry + frame.side * lift,
        kind: MotionKind::Approach,
        ..approach
    };
    Toolpath::new(
        vec![hover, approach, cut, retract],
        ToolpathMetadata {
            workflow: "log_halving".into(),
            source: String::new(),
        },
    )
}
