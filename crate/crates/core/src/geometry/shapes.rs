//! Rectangles, oriented boxes and exact distances between them.

use serde::{Deserialize, Serialize};

use crate::linalg::{Plane, Quat, Vec3};
use crate::scalar::Scalar;

/// Planar rectangle: `center ± half_u·u_axis ± half_v·v_axis`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Rectangle3D<T> {
    pub center: Vec3<T>,
    pub u_axis: Vec3<T>,
    pub v_axis: Vec3<T>,
    pub half_u: T,
    pub half_v: T,
}

impl<T: Scalar> Rectangle3D<T> {
    pub fn normal(&self) -> Vec3<T> {
        self.u_axis.cross(self.v_axis)
    }

    pub fn plane(&self) -> Plane<T> {
        Plane {
            point: self.center,
            normal: self.normal(),
        }
    }

    /// Point at normalized coordinates `(a, b) ∈ [-1, 1]²`.
    pub fn at(&self, a: T, b: T) -> Vec3<T> {
        self.center + self.u_axis * (a * self.half_u) + self.v_axis * (b * self.half_v)
    }

    pub fn corners(&self) -> [Vec3<T>; 4] {
        let one = T::one();
        [
            self.at(-one, -one),
            self.at(one, -one),
            self.at(one, one),
            self.at(-one, one),
        ]
    }

    pub fn width(&self) -> T {
        self.half_v * T::lit(2.0)
    }

    pub fn length(&self) -> T {
        self.half_u * T::lit(2.0)
    }

    pub fn distance_to_point(&self, p: Vec3<T>) -> T {
        let d = p - self.center;
        let a = d.dot(self.u_axis);
        let b = d.dot(self.v_axis);
        let c = d.dot(self.normal());
        let da = a - a.max(-self.half_u).min(self.half_u);
        let db = b - b.max(-self.half_v).min(self.half_v);
        Vec3::new(da, db, c).norm()
    }
}

/// Oriented box; `half_extents` are along the rotation's local axes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct OrientedBox<T> {
    pub center: Vec3<T>,
    #[serde(rename = "quat")]
    pub rotation: Quat<T>,
    pub half_extents: Vec3<T>,
}

impl<T: Scalar> OrientedBox<T> {
    fn local(&self, p: Vec3<T>) -> Vec3<T> {
        self.rotation.conjugate().rotate(p - self.center)
    }

    pub fn distance_to_point(&self, p: Vec3<T>) -> T {
        let q = self.local(p);
        let e = self.half_extents;
        Vec3::new(
            (q.x.abs() - e.x).max(T::zero()),
            (q.y.abs() - e.y).max(T::zero()),
            (q.z.abs() - e.z).max(T::zero()),
        )
        .norm()
    }

    pub fn vertices(&self) -> [Vec3<T>; 8] {
        let e = self.half_extents;
        let mut out = [Vec3::zero(); 8];
        for (i, v) in out.iter_mut().enumerate() {
            let sx = if i & 1 == 0 { -e.x } else { e.x };
            let sy = if i & 2 == 0 { -e.y } else { e.y };
            let sz = if i & 4 == 0 { -e.z } else { e.z };
            *v = self.center + self.rotation.rotate(Vec3::new(sx, sy, sz));
        }
        out
    }

    pub fn edges(&self) -> [(Vec3<T>, Vec3<T>); 12] {
        let v = self.vertices();
        let pairs = [
            (0, 1),
            (2, 3),
            (4, 5),
            (6, 7),
            (0, 2),
            (1, 3),
            (4, 6),
            (5, 7),
            (0, 4),
            (1, 5),
            (2, 6),
            (3, 7),
        ];
        pairs.map(|(a, b)| (v[a], v[b]))
    }

    /// Exact minimum distance to a rectangle; zero when they intersect.
    pub fn distance_to_rectangle(&self, rect: &Rectangle3D<T>) -> T {
        if self.intersects_rectangle(rect) {
            return T::zero();
        }
        let corners = rect.corners();
        let mut best = T::infinity();
        for c in corners {
            best = best.min(self.distance_to_point(c));
        }
        for v in self.vertices() {
            best = best.min(rect.distance_to_point(v));
        }
        for i in 0..4 {
            let (a0, a1) = (corners[i], corners[(i + 1) % 4]);
            for (b0, b1) in self.edges() {
                best = best.min(segment_distance(a0, a1, b0, b1));
            }
        }
        best
    }

    /// Separating-axis test between this box and a rectangle.
    pub fn intersects_rectangle(&self, rect: &Rectangle3D<T>) -> bool {
        let box_axes = self.rotation.axes();
        let e = [
            self.half_extents.x,
            self.half_extents.y,
            self.half_extents.z,
        ];
        let offset = rect.center - self.center;
        let mut axes = Vec::with_capacity(10);
        axes.extend_from_slice(&box_axes);
        axes.push(rect.normal());
        for b in box_axes {
            axes.push(b.cross(rect.u_axis));
            axes.push(b.cross(rect.v_axis));
        }
        let tiny = T::lit(1e-12);
        for axis in axes {
            if axis.norm_squared() < tiny {
                continue;
            }
            let box_radius =
                (0..3).fold(T::zero(), |acc, i| acc + e[i] * box_axes[i].dot(axis).abs());
            let rect_radius = rect.half_u * rect.u_axis.dot(axis).abs()
                + rect.half_v * rect.v_axis.dot(axis).abs();
            if offset.dot(axis).abs() > box_radius + rect_radius {
                return false;
            }
        }
        true
    }
}

/// Minimum distance between segments `[p0, p1]` and `[q0, q1]`.
pub fn segment_distance<T: Scalar>(p0: Vec3<T>, p1: Vec3<T>, q0: Vec3<T>, q1: Vec3<T>) -> T {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let zero = T::zero();
    let one = T::one();
    let eps = T::lit(1e-24);
    let clamp = |x: T| x.max(zero).min(one);

    let (s, t) = if a <= eps && e <= eps {
        (zero, zero)
    } else if a <= eps {
        (zero, clamp(f / e))
    } else {
        let c = d1.dot(r);
        if e <= eps {
            (clamp(-c / a), zero)
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s = if denom > eps {
                clamp((b * f - c * e) / denom)
            } else {
                zero
            };
            let mut t = (b * s + f) / e;
            if t < zero {
                t = zero;
                s = clamp(-c / a);
            } else if t > one {
                t = one;
                s = clamp((b - c) / a);
            }
            (s, t)
        }
    };
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}
