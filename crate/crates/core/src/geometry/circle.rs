use serde::{Deserialize, Serialize};

use super::{unit_tolerance, GeometryError};
use crate::linalg::Vec3;
use crate::scalar::Scalar;

/// Smallest triangle area (m²) accepted as three distinct rim points.
pub const MIN_TRIANGLE_AREA: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Circle3D<T> {
    pub center: Vec3<T>,
    pub normal: Vec3<T>,
    pub radius: T,
}

impl<T: Scalar> Circle3D<T> {
    pub fn new(center: Vec3<T>, normal: Vec3<T>, radius: T) -> Result<Self, GeometryError> {
        if !((normal.norm() - T::one()).abs() <= unit_tolerance::<T>()) {
            return Err(GeometryError::NonUnitVector("circle normal"));
        }
        if !(radius > T::zero()) || !center.is_finite() {
            return Err(GeometryError::InvalidDimension("circle radius"));
        }
        Ok(Self {
            center,
            normal,
            radius,
        })
    }

    /// Point on the circle at `angle` radians, measured in an arbitrary but
    /// fixed in-plane basis.
    pub fn point_at(&self, angle: T) -> Vec3<T> {
        let e1 = self.normal.any_perpendicular();
        let e2 = self.normal.cross(e1);
        self.center + (e1 * angle.cos() + e2 * angle.sin()) * self.radius
    }
}

/// The unique circle through three points.
///
/// The normal follows the right-hand rule on `(p2 − p1, p3 − p1)`.
pub fn circumcircle<T: Scalar>(
    p1: Vec3<T>,
    p2: Vec3<T>,
    p3: Vec3<T>,
) -> Result<Circle3D<T>, GeometryError> {
    let a = p2 - p1;
    let b = p3 - p1;
    let axb = a.cross(b);
    let twice_area = axb.norm();
    let area = twice_area * T::lit(0.5);
    if !(area >= T::lit(MIN_TRIANGLE_AREA)) {
        return Err(GeometryError::Collinear {
            area: area.to_f64_lossy(),
        });
    }
    // circumcenter relative to p1: (|a|² b − |b|² a) × (a × b) / (2 |a × b|²)
    let numerator = (b * a.norm_squared() - a * b.norm_squared()).cross(axb);
    let offset = numerator / (T::lit(2.0) * axb.norm_squared());
    let center = p1 + offset;
    let radius = (offset.norm() + (center - p2).norm() + (center - p3).norm()) / T::lit(3.0);
    Circle3D::new(center, axb / twice_area, radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_triangle_uses_hypotenuse_as_diameter() {
        let c = circumcircle(Vec3::<f64>::zero(), Vec3::unit_x(), Vec3::unit_y()).unwrap();
        assert!((c.center - Vec3::new(0.5, 0.5, 0.0)).norm() < 1e-15);
        assert!((c.radius - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(c.normal, Vec3::unit_z());
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let r = circumcircle(
            Vec3::<f64>::zero(),
            Vec3::unit_x(),
            Vec3::new(2.0, 0.0, 0.0),
        );
        assert!(matches!(r, Err(GeometryError::Collinear { .. })));
        let r = circumcircle(Vec3::<f64>::zero(), Vec3::zero(), Vec3::unit_y());
        assert!(matches!(r, Err(GeometryError::Collinear { .. })));
    }

    #[test]
    fn reversed_winding_flips_normal() {
        let c = circumcircle(Vec3::<f64>::zero(), Vec3::unit_y(), Vec3::unit_x()).unwrap();
        assert_eq!(c.normal, -Vec3::unit_z());
    }

    #[test]
    fn single_precision_fit() {
        let c = circumcircle(
            Vec3::<f32>::zero(),
            Vec3::new(0.3, 0.0, 0.0),
            Vec3::new(0.0, 0.3, 0.0),
        )
        .unwrap();
        assert!((c.radius - 0.3 * std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }
}
