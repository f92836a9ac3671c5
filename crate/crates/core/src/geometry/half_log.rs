use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::linalg::{Plane, Vec3};
use crate::scalar::Scalar;

/// Half-cylinder resting on its flat sawn face. The body lies on the side of
/// `base.normal`; `base.point` is the center of the first end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct HalfLogModel<T> {
    pub base: Plane<T>,
    pub axis: Vec3<T>,
    pub radius: T,
    pub length: T,
}

/// Coordinates of a point in the half-log frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogCoords<T> {
    /// Along the axis from the first end.
    pub along: T,
    /// Height above the flat face.
    pub height: T,
    /// Sideways, along `normal × axis`.
    pub side: T,
}

/// Half-log from two points across the flat face at one end and one point at
/// the far end. The flat face normal is oriented toward `up` when possible.
pub fn define_half_log<T: Scalar>(
    d1: Vec3<T>,
    d2: Vec3<T>,
    len_pt: Vec3<T>,
    up: Vec3<T>,
) -> Result<HalfLogModel<T>, GeometryError> {
    let diameter = d2 - d1;
    let across = diameter
        .normalized()
        .ok_or(GeometryError::CoincidentPoints)?;
    let center = d1.midpoint(d2);
    let along = (len_pt - center).reject_from(across);
    let length = along.norm();
    if !(length > T::lit(1e-9)) {
        return Err(GeometryError::ZeroLength);
    }
    let axis = along / length;
    let mut normal = across.cross(axis);
    let lean = normal.dot(up);
    if lean < T::zero() && lean.abs() > T::lit(1e-9) {
        normal = -normal;
    }
    Ok(HalfLogModel {
        base: Plane {
            point: center,
            normal,
        },
        axis,
        radius: diameter.norm() * T::lit(0.5),
        length,
    })
}

impl<T: Scalar> HalfLogModel<T> {
    /// Sideways unit direction `normal × axis`.
    pub fn side_axis(&self) -> Vec3<T> {
        self.base.normal.cross(self.axis)
    }

    pub fn coords(&self, p: Vec3<T>) -> LogCoords<T> {
        let d = p - self.base.point;
        LogCoords {
            along: d.dot(self.axis),
            height: d.dot(self.base.normal),
            side: d.dot(self.side_axis()),
        }
    }

    pub fn point(&self, c: LogCoords<T>) -> Vec3<T> {
        self.base.point
            + self.axis * c.along
            + self.base.normal * c.height
            + self.side_axis() * c.side
    }

    /// Membership in the closed solid, inflated by `tolerance`.
    pub fn contains(&self, p: Vec3<T>, tolerance: T) -> bool {
        let c = self.coords(p);
        let r = self.radius + tolerance;
        c.along >= -tolerance
            && c.along <= self.length + tolerance
            && c.height >= -tolerance
            && c.height * c.height + c.side * c.side <= r * r
    }

    /// Euclidean distance from `p` to the solid (zero inside).
    pub fn distance_to(&self, p: Vec3<T>) -> T {
        let c = self.coords(p);
        let zero = T::zero();
        let axial = (-c.along).max(c.along - self.length).max(zero);
        let section = if c.height >= zero {
            (c.height.hypot(c.side) - self.radius).max(zero)
        } else if c.side.abs() <= self.radius {
            -c.height
        } else {
            (c.side.abs() - self.radius).hypot(c.height)
        };
        axial.hypot(section)
    }
}

/// Width of the chord at `depth` above the flat face: `2·√(r² − d²)`.
pub fn chord_width<T: Scalar>(radius: T, depth: T) -> Result<T, GeometryError> {
    if depth < T::zero() {
        return Err(GeometryError::NegativeDepth(depth.to_f64_lossy()));
    }
    if !(depth < radius) {
        return Err(GeometryError::ZeroWidth {
            depth: depth.to_f64_lossy(),
            radius: radius.to_f64_lossy(),
        });
    }
    Ok(T::lit(2.0) * (radius * radius - depth * depth).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up() -> Vec3<f64> {
        Vec3::unit_z()
    }

    #[test]
    fn axis_aligned_half_log() {
        let h = define_half_log(
            Vec3::new(0.0, -0.15, 0.0),
            Vec3::new(0.0, 0.15, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            up(),
        )
        .unwrap();
        assert_eq!(h.base.point, Vec3::zero());
        assert_eq!(h.radius, 0.15);
        assert_eq!(h.axis, Vec3::unit_x());
        assert_eq!(h.length, 2.0);
        assert_eq!(h.base.normal, Vec3::unit_z());
    }

    #[test]
    fn diametral_component_is_removed() {
        let h = define_half_log(
            Vec3::new(0.0, -0.15, 0.0),
            Vec3::new(0.0, 0.15, 0.0),
            Vec3::new(2.0, 0.03, 0.0),
            up(),
        )
        .unwrap();
        assert_eq!(h.axis, Vec3::unit_x());
        assert_eq!(h.length, 2.0);
    }

    #[test]
    fn degenerate_inputs() {
        let d1 = Vec3::new(0.0, -0.15, 0.0);
        let d2 = Vec3::new(0.0, 0.15, 0.0);
        assert!(matches!(
            define_half_log(d1, d2, Vec3::zero(), up()),
            Err(GeometryError::ZeroLength)
        ));
        assert!(matches!(
            define_half_log(d1, d1, Vec3::unit_x(), up()),
            Err(GeometryError::CoincidentPoints)
        ));
    }

    #[test]
    fn chord_widths() {
        assert_eq!(chord_width(0.2, 0.0).unwrap(), 0.4);
        assert!((chord_width(0.2, 0.1).unwrap() - 2.0 * 0.03f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            chord_width(0.2, 0.2),
            Err(GeometryError::ZeroWidth { .. })
        ));
        assert!(matches!(
            chord_width(0.2, -0.01),
            Err(GeometryError::NegativeDepth(_))
        ));
    }

    #[test]
    fn distance_matches_membership() {
        let h = define_half_log(
            Vec3::new(0.0, -0.15, 0.0),
            Vec3::new(0.0, 0.15, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            up(),
        )
        .unwrap();
        assert_eq!(h.distance_to(Vec3::new(1.0, 0.0, 0.1)), 0.0);
        assert!((h.distance_to(Vec3::new(1.0, 0.0, -0.2)) - 0.2).abs() < 1e-15);
        assert!((h.distance_to(Vec3::new(1.0, 0.0, 0.35)) - 0.2).abs() < 1e-15);
        assert!((h.distance_to(Vec3::new(-0.3, 0.0, 0.1)) - 0.3).abs() < 1e-15);
        assert!((h.distance_to(Vec3::new(1.0, 0.18, -0.04)) - 0.05).abs() < 1e-15);
        assert!(h.contains(Vec3::new(2.0, 0.15, 0.0), 1e-12));
        assert!(!h.contains(Vec3::new(1.0, 0.0, -0.001), 1e-12));
    }
}
