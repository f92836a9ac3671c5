use serde::{Deserialize, Serialize};

use super::circle::Circle3D;
use super::GeometryError;
use crate::linalg::Vec3;
use crate::scalar::Scalar;

pub const DEFAULT_TESSELLATION: usize = 32;

/// Log stand-in: a frustum between two end circles whose planes are
/// perpendicular to the center line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct CylinderModel<T> {
    pub start: Circle3D<T>,
    pub end: Circle3D<T>,
    pub axis: Vec3<T>,
    pub length: T,
    pub tessellation: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Mesh<T> {
    pub vertices: Vec<Vec3<T>>,
    pub triangles: Vec<[u32; 3]>,
}

/// Builds the cylinder through two fitted end circles. Radii are kept; the
/// end planes are re-projected to be perpendicular to the center line.
pub fn fit_cylinder<T: Scalar>(
    end_a: &Circle3D<T>,
    end_b: &Circle3D<T>,
    tessellation: usize,
) -> Result<CylinderModel<T>, GeometryError> {
    let delta = end_b.center - end_a.center;
    let length = delta.norm();
    let axis = delta.normalized().ok_or(GeometryError::CoincidentCenters)?;
    if tessellation < 3 {
        return Err(GeometryError::InvalidDimension("tessellation"));
    }
    Ok(CylinderModel {
        start: Circle3D {
            normal: axis,
            ..*end_a
        },
        end: Circle3D {
            normal: axis,
            ..*end_b
        },
        axis,
        length,
        tessellation,
    })
}

impl<T: Scalar> CylinderModel<T> {
    pub fn max_radius(&self) -> T {
        self.start.radius.max(self.end.radius)
    }

    pub fn midpoint(&self) -> Vec3<T> {
        self.start.center.midpoint(self.end.center)
    }

    /// Ring vertices (start ring, then end ring) and side triangles.
    pub fn mesh(&self) -> Mesh<T> {
        let n = self.tessellation;
        let e1 = self.axis.any_perpendicular();
        let e2 = self.axis.cross(e1);
        let step = T::lit(std::f64::consts::TAU) / T::from_usize(n).unwrap();
        let mut vertices = Vec::with_capacity(2 * n);
        for ring in [&self.start, &self.end] {
            for i in 0..n {
                let angle = step * T::from_usize(i).unwrap();
                vertices.push(ring.center + (e1 * angle.cos() + e2 * angle.sin()) * ring.radius);
            }
        }
        let mut triangles = Vec::with_capacity(2 * n);
        let n32 = n as u32;
        for i in 0..n32 {
            let j = (i + 1) % n32;
            triangles.push([i, j, n32 + i]);
            triangles.push([j, n32 + j, n32 + i]);
        }
        Mesh {
            vertices,
            triangles,
        }
    }
}
