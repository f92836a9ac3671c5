use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::catalog::{TemplateCatalog, TubeCatalog};
use super::IdentificationError;
use crate::linalg::{Quat, RigidTransform, Vec3};
use crate::scalar::Scalar;

/// Scale of the whole-tower coordination view.
pub const MODEL_VIEW_SCALE: f64 = 0.1;

/// Ground plane with an in-plane frame, taken from the anchor pose.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct GroundPlane<T> {
    pub point: Vec3<T>,
    pub normal: Vec3<T>,
    pub x_axis: Vec3<T>,
}

impl<T: Scalar> GroundPlane<T> {
    /// Plane through `point` with unit `normal`; the in-plane X is arbitrary.
    pub fn new(point: Vec3<T>, normal: Vec3<T>) -> Result<Self, IdentificationError> {
        let normal = normal
            .normalized()
            .ok_or(IdentificationError::InvalidGround)?;
        Ok(Self {
            point,
            normal,
            x_axis: normal.any_perpendicular(),
        })
    }

    /// Anchor XY plane, normal along the anchor's local Z.
    pub fn from_anchor(anchor: &RigidTransform<T>) -> Result<Self, IdentificationError> {
        if !anchor.is_rigid() {
            return Err(IdentificationError::InvalidGround);
        }
        let [x, _, z] = anchor.rotation.axes();
        Ok(Self {
            point: anchor.translation,
            normal: z,
            x_axis: x,
        })
    }

    pub fn height_of(&self, p: Vec3<T>) -> T {
        (p - self.point).dot(self.normal)
    }

    /// Ground frame lifted to `height`.
    pub fn frame_at(&self, height: T) -> RigidTransform<T> {
        let y = self.normal.cross(self.x_axis);
        RigidTransform::new(
            Quat::from_frame(self.x_axis, y, self.normal),
            self.point + self.normal * height,
        )
    }
}

impl<T: Scalar> Default for GroundPlane<T> {
    fn default() -> Self {
        Self {
            point: Vec3::zero(),
            normal: Vec3::unit_z(),
            x_axis: Vec3::unit_x(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub enum MatchedEntry<T> {
    Layer {
        layer: u32,
        nominal_height: T,
        label: String,
    },
    Tube {
        tube_id: u32,
        nominal_length: T,
        frame: u8,
    },
}

/// What the viewer needs to show where the identified part goes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct CoordinationPayload<T> {
    /// 1:1 pose: template at the board top, or tube within its frame.
    pub local_pose: RigidTransform<T>,
    /// Pose within the whole tower model, shown at `model_scale`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_pose: Option<RigidTransform<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_scale: Option<T>,
    pub notation: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outline: Vec<Vec3<T>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rod_holes: Vec<Vec3<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct IdentificationResult<T> {
    pub entry: MatchedEntry<T>,
    pub measured: T,
    /// Absolute difference between measured and nominal value.
    pub deviation: T,
    pub payload: CoordinationPayload<T>,
}

/// Indices of the sorted `nominals` within `tolerance` of `measured`.
fn within_tolerance<T: Scalar>(
    nominals: &[T],
    measured: T,
    tolerance: T,
) -> (Vec<usize>, Option<usize>) {
    let split = nominals.partition_point(|&n| n < measured);
    let mut hits = Vec::new();
    let mut i = split;
    while i > 0 && (measured - nominals[i - 1]).abs() <= tolerance {
        i -= 1;
        hits.push(i);
    }
    hits.reverse();
    let mut j = split;
    while j < nominals.len() && (nominals[j] - measured).abs() <= tolerance {
        hits.push(j);
        j += 1;
    }
    let nearest = [
        split.checked_sub(1),
        (split < nominals.len()).then_some(split),
    ]
    .into_iter()
    .flatten()
    .min_by(|&a, &b| {
        let da = (nominals[a] - measured).abs();
        let db = (nominals[b] - measured).abs();
        da.partial_cmp(&db).unwrap()
    });
    (hits, nearest)
}

/// Matches the height of `point` above the ground to a layer template.
pub fn identify_layer<T: Scalar>(
    point: Vec3<T>,
    ground: &GroundPlane<T>,
    catalog: &TemplateCatalog<T>,
) -> Result<IdentificationResult<T>, IdentificationError> {
    let height = ground.height_of(point);
    if height < T::zero() {
        return Err(IdentificationError::BelowGround {
            height: height.to_f64_lossy(),
        });
    }
    let nominals: Vec<T> = catalog.templates.iter().map(|t| t.height).collect();
    let (hits, nearest) = within_tolerance(&nominals, height, catalog.tolerance);
    let index = match hits[..] {
        [i] => i,
        [] => {
            return Err(IdentificationError::NoMatch {
                measured: height.to_f64_lossy(),
                nearest: nearest.map(|i| nominals[i].to_f64_lossy()),
            })
        }
        _ => {
            return Err(IdentificationError::Ambiguous {
                measured: height.to_f64_lossy(),
            })
        }
    };
    let template = &catalog.templates[index];
    let pose = ground.frame_at(height);
    let place = |xy: &[T; 2]| pose.apply(Vec3::new(xy[0], xy[1], T::zero()));
    Ok(IdentificationResult {
        entry: MatchedEntry::Layer {
            layer: template.layer,
            nominal_height: template.height,
            label: template.label.clone(),
        },
        measured: height,
        deviation: (height - template.height).abs(),
        payload: CoordinationPayload {
            local_pose: pose,
            model_pose: None,
            model_scale: None,
            notation: template.label.clone(),
            outline: template.outline.iter().map(place).collect(),
            rod_holes: template.rod_holes.iter().map(place).collect(),
        },
    })
}

/// Tube ids already matched to physical tubes in this session.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubeAssignments {
    assigned: BTreeSet<u32>,
}

impl TubeAssignments {
    pub fn is_assigned(&self, id: u32) -> bool {
        self.assigned.contains(&id)
    }

    /// Operator undo of an identification.
    pub fn unassign(&mut self, id: u32) -> bool {
        self.assigned.remove(&id)
    }

    pub fn len(&self) -> usize {
        self.assigned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assigned.is_empty()
    }
}

/// Matches the distance between two pinched tube ends to a catalog length and
/// assigns the lowest-id unassigned tube of that length.
pub fn identify_tube<T: Scalar>(
    p1: Vec3<T>,
    p2: Vec3<T>,
    catalog: &TubeCatalog<T>,
    assignments: &mut TubeAssignments,
) -> Result<IdentificationResult<T>, IdentificationError> {
    if p1 == p2 {
        return Err(IdentificationError::CoincidentPoints);
    }
    let measured = (p2 - p1).norm();
    let groups = catalog.nominal_groups();
    let nominals: Vec<T> = groups.iter().map(|g| g.length).collect();
    let (hits, nearest) = within_tolerance(&nominals, measured, catalog.tolerance);
    let group = match hits[..] {
        [i] => &groups[i],
        [] => {
            return Err(IdentificationError::NoMatch {
                measured: measured.to_f64_lossy(),
                nearest: nearest.map(|i| nominals[i].to_f64_lossy()),
            })
        }
        _ => {
            return Err(IdentificationError::Ambiguous {
                measured: measured.to_f64_lossy(),
            })
        }
    };
    let entry = group
        .members
        .iter()
        .map(|&i| &catalog.entries[i])
        .find(|e| !assignments.is_assigned(e.id))
        .ok_or(IdentificationError::AllAssigned {
            nominal: group.length.to_f64_lossy(),
        })?;
    assignments.assigned.insert(entry.id);
    Ok(IdentificationResult {
        entry: MatchedEntry::Tube {
            tube_id: entry.id,
            nominal_length: entry.length,
            frame: entry.frame,
        },
        measured,
        deviation: (measured - entry.length).abs(),
        payload: CoordinationPayload {
            local_pose: entry.frame_pose,
            model_pose: Some(entry.model_pose),
            model_scale: Some(T::lit(MODEL_VIEW_SCALE)),
            notation: format!(
                "Tube {} · frame {} · {:.4} m",
                entry.id, entry.frame, entry.length
            ),
            outline: Vec::new(),
            rod_holes: Vec::new(),
        },
    })
}
