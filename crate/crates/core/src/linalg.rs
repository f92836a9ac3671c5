//! Small fixed-size vector, quaternion and rigid-transform types.
//!
//! Vectors serialize as `[x, y, z]` and quaternions as `[w, x, y, z]`.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[T; 3]", into = "[T; 3]")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T> From<[T; 3]> for Vec3<T> {
    fn from([x, y, z]: [T; 3]) -> Self {
        Self { x, y, z }
    }
}

impl<T> From<Vec3<T>> for [T; 3] {
    fn from(v: Vec3<T>) -> Self {
        [v.x, v.y, v.z]
    }
}

impl<T: Scalar> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_f64(x: f64, y: f64, z: f64) -> Self {
        Self::new(T::lit(x), T::lit(y), T::lit(z))
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        // hypot chain keeps sqrt(x^2) == |x| exact for single-axis offsets
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Unit vector in the same direction, or `None` for a (near) zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::epsilon() * T::lit(16.0) && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn midpoint(self, other: Self) -> Self {
        (self + other) * T::lit(0.5)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Removes the component of `self` along the unit vector `dir`.
    pub fn reject_from(self, dir: Self) -> Self {
        self - dir * self.dot(dir)
    }

    /// Some unit vector perpendicular to `self` (which must be non-zero).
    pub fn any_perpendicular(self) -> Self {
        let ax = self.x.abs();
        let ay = self.y.abs();
        let az = self.z.abs();
        let helper = if ax <= ay && ax <= az {
            Self::unit_x()
        } else if ay <= az {
            Self::unit_y()
        } else {
            Self::unit_z()
        };
        self.cross(helper)
            .normalized()
            .expect("non-zero vector has a perpendicular")
    }

    pub fn map(self, f: impl Fn(T) -> T) -> Self {
        Self::new(f(self.x), f(self.y), f(self.z))
    }

    pub fn cast<U: Scalar>(self) -> Vec3<U> {
        Vec3::new(
            U::lit(self.x.to_f64_lossy()),
            U::lit(self.y.to_f64_lossy()),
            U::lit(self.z.to_f64_lossy()),
        )
    }
}

impl<T: Scalar> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> SubAssign for Vec3<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Scalar> Div<T> for Vec3<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Scalar> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Rotation quaternion `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[T; 4]", into = "[T; 4]")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Quat<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T> From<[T; 4]> for Quat<T> {
    fn from([w, x, y, z]: [T; 4]) -> Self {
        Self { w, x, y, z }
    }
}

impl<T> From<Quat<T>> for [T; 4] {
    fn from(q: Quat<T>) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl<T: Scalar> Default for Quat<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Scalar> Quat<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    /// Rotation by `angle` radians about `axis` (normalized internally).
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Self {
        let axis = axis.normalized().unwrap_or_else(Vec3::unit_z);
        let half = angle * T::lit(0.5);
        let s = half.sin();
        Self::new(half.cos(), axis.x * s, axis.y * s, axis.z * s)
    }

    /// Quaternion whose rotation matrix has columns `x_axis`, `y_axis`, `z_axis`.
    ///
    /// The columns must form a right-handed orthonormal frame.
    pub fn from_frame(x_axis: Vec3<T>, y_axis: Vec3<T>, z_axis: Vec3<T>) -> Self {
        let (m00, m01, m02) = (x_axis.x, y_axis.x, z_axis.x);
        let (m10, m11, m12) = (x_axis.y, y_axis.y, z_axis.y);
        let (m20, m21, m22) = (x_axis.z, y_axis.z, z_axis.z);
        let one = T::one();
        let two = T::lit(2.0);
        let quarter = T::lit(0.25);
        let trace = m00 + m11 + m22;
        let q = if trace > T::zero() {
            let s = (trace + one).sqrt() * two;
            Self::new(
                quarter * s,
                (m21 - m12) / s,
                (m02 - m20) / s,
                (m10 - m01) / s,
            )
        } else if m00 > m11 && m00 > m22 {
            let s = (one + m00 - m11 - m22).sqrt() * two;
            Self::new(
                (m21 - m12) / s,
                quarter * s,
                (m01 + m10) / s,
                (m02 + m20) / s,
            )
        } else if m11 > m22 {
            let s = (one + m11 - m00 - m22).sqrt() * two;
            Self::new(
                (m02 - m20) / s,
                (m01 + m10) / s,
                quarter * s,
                (m12 + m21) / s,
            )
        } else {
            let s = (one + m22 - m00 - m11).sqrt() * two;
            Self::new(
                (m10 - m01) / s,
                (m02 + m20) / s,
                (m12 + m21) / s,
                quarter * s,
            )
        };
        let q = q.normalized();
        // canonical sign so equal frames give bit-identical quaternions
        if q.w < T::zero() {
            q.scale(-one)
        } else {
            q
        }
    }

    pub fn norm(self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        self.scale(T::one() / n)
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn is_unit(self, tolerance: T) -> bool {
        let finite =
            self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite();
        finite && (self.norm() - T::one()).abs() <= tolerance
    }

    pub fn rotate(self, v: Vec3<T>) -> Vec3<T> {
        let u = Vec3::new(self.x, self.y, self.z);
        let two = T::lit(2.0);
        let t = u.cross(v) * two;
        v + t * self.w + u.cross(t)
    }

    /// Local axes of the rotation (columns of its matrix).
    pub fn axes(self) -> [Vec3<T>; 3] {
        [
            self.rotate(Vec3::unit_x()),
            self.rotate(Vec3::unit_y()),
            self.rotate(Vec3::unit_z()),
        ]
    }

    pub fn cast<U: Scalar>(self) -> Quat<U> {
        Quat::new(
            U::lit(self.w.to_f64_lossy()),
            U::lit(self.x.to_f64_lossy()),
            U::lit(self.y.to_f64_lossy()),
            U::lit(self.z.to_f64_lossy()),
        )
    }
}

impl<T: Scalar> Mul for Quat<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// Rigid transform `p ↦ rotation · p + translation`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct RigidTransform<T> {
    #[serde(rename = "quat")]
    pub rotation: Quat<T>,
    #[serde(rename = "pos")]
    pub translation: Vec3<T>,
}

impl<T: Scalar> Default for RigidTransform<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Scalar> RigidTransform<T> {
    pub fn new(rotation: Quat<T>, translation: Vec3<T>) -> Self {
        Self {
            rotation,
            translation,
        }
    }

    pub fn identity() -> Self {
        Self::new(Quat::identity(), Vec3::zero())
    }

    pub fn from_translation(translation: Vec3<T>) -> Self {
        Self::new(Quat::identity(), translation)
    }

    /// True when the rotation is a unit quaternion (within `1e-6`) and the
    /// translation is finite.
    pub fn is_rigid(&self) -> bool {
        self.rotation.is_unit(T::lit(1e-6)) && self.translation.is_finite()
    }

    pub fn apply(&self, p: Vec3<T>) -> Vec3<T> {
        self.rotation.rotate(p) + self.translation
    }

    pub fn apply_vector(&self, v: Vec3<T>) -> Vec3<T> {
        self.rotation.rotate(v)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(
            self.rotation * other.rotation,
            self.apply(other.translation),
        )
    }

    pub fn inverse(&self) -> Self {
        let inv = self.rotation.conjugate();
        Self::new(inv, -inv.rotate(self.translation))
    }
}

/// Infinite plane through `point` with unit `normal`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Plane<T> {
    pub point: Vec3<T>,
    pub normal: Vec3<T>,
}

impl<T: Scalar> Plane<T> {
    pub fn signed_distance(&self, p: Vec3<T>) -> T {
        (p - self.point).dot(self.normal)
    }

    pub fn project(&self, p: Vec3<T>) -> Vec3<T> {
        p - self.normal * self.signed_distance(p)
    }
}

/// Infinite line through `point` with unit `direction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Line<T> {
    pub point: Vec3<T>,
    pub direction: Vec3<T>,
}

impl<T: Scalar> Line<T> {
    pub fn project(&self, p: Vec3<T>) -> Vec3<T> {
        self.point + self.direction * (p - self.point).dot(self.direction)
    }
}
