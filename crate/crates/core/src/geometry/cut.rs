use serde::{Deserialize, Serialize};

use super::half_log::{chord_width, HalfLogModel, LogCoords};
use super::shapes::{OrientedBox, Rectangle3D};
use super::toolpath::{CutFrame, Toolpath, ToolpathMetadata};
use super::{GeometryError, LocalizationParams};
use crate::calibration::NotationState;
use crate::linalg::{Plane, Quat, Vec3};
use crate::scalar::{inches, Scalar};

/// Tolerance for a rectangle corner counting as inside the half-log.
pub const INSIDE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct BoardSpec<T> {
    pub min_width: T,
    pub min_thickness: T,
    pub board_count: usize,
}

impl<T: Scalar> Default for BoardSpec<T> {
    /// 5 in × 0.75 in boards, three per half log.
    fn default() -> Self {
        Self {
            min_width: inches(5.0),
            min_thickness: inches(0.75),
            board_count: 3,
        }
    }
}

impl<T: Scalar> BoardSpec<T> {
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.min_width > T::zero())
            || !(self.min_thickness > T::zero())
            || self.board_count == 0
        {
            return Err(GeometryError::InvalidDimension("board spec"));
        }
        Ok(())
    }
}

/// Log mount post: 4 in × 4 in cross-section, `depth` along its local Z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct MountBox<T> {
    pub bounds: OrientedBox<T>,
}

impl<T: Scalar> MountBox<T> {
    pub fn new(center: Vec3<T>, rotation: Quat<T>, depth: T) -> Result<Self, GeometryError> {
        Self::with_section(center, rotation, inches(4.0), depth)
    }

    pub fn with_section(
        center: Vec3<T>,
        rotation: Quat<T>,
        section: T,
        depth: T,
    ) -> Result<Self, GeometryError> {
        if !(section > T::zero()) || !(depth > T::zero()) {
            return Err(GeometryError::InvalidDimension("mount extents"));
        }
        let half = T::lit(0.5);
        Ok(Self {
            bounds: OrientedBox {
                center,
                rotation,
                half_extents: Vec3::new(section * half, section * half, depth * half),
            },
        })
    }
}

/// Stack of parallel board cuts anchored at a pinched point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct CutPlacement<T> {
    pub anchor: Vec3<T>,
    pub half_log: HalfLogModel<T>,
    pub spec: BoardSpec<T>,
    /// Height of each cut plane above the flat face, first plane first.
    pub depths: Vec<T>,
    pub planes: Vec<Plane<T>>,
    pub boards: Vec<Rectangle3D<T>>,
}

/// Places `spec.board_count` cuts parallel to the flat face, the first through
/// the anchor's height, each following one `min_thickness` further out.
pub fn place_cut<T: Scalar>(
    half_log: &HalfLogModel<T>,
    anchor: Vec3<T>,
    spec: &BoardSpec<T>,
    snap_tolerance: T,
) -> Result<CutPlacement<T>, GeometryError> {
    spec.validate()?;
    let gap = half_log.distance_to(anchor);
    if gap > snap_tolerance {
        return Err(GeometryError::AnchorTooFar {
            distance: gap.to_f64_lossy(),
        });
    }
    let first = half_log.coords(anchor).height;
    let half = T::lit(0.5);
    let mut depths = Vec::with_capacity(spec.board_count);
    let mut planes = Vec::with_capacity(spec.board_count);
    let mut boards = Vec::with_capacity(spec.board_count);
    for k in 0..spec.board_count {
        let depth = first + spec.min_thickness * T::from_usize(k).unwrap();
        let span = (half_log.radius * half_log.radius - depth * depth)
            .max(T::zero())
            .sqrt();
        let center = half_log.point(LogCoords {
            along: half_log.length * half,
            height: depth,
            side: T::zero(),
        });
        depths.push(depth);
        planes.push(Plane {
            point: center,
            normal: half_log.base.normal,
        });
        boards.push(Rectangle3D {
            center,
            u_axis: half_log.axis,
            v_axis: half_log.side_axis(),
            half_u: half_log.length * half,
            half_v: span,
        });
    }
    Ok(CutPlacement {
        anchor,
        half_log: *half_log,
        spec: *spec,
        depths,
        planes,
        boards,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationStatus {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardCheck {
    pub inside_boundary: bool,
    pub clear_of_mounts: bool,
    pub width_ok: bool,
}

impl BoardCheck {
    pub fn ok(&self) -> bool {
        self.inside_boundary && self.clear_of_mounts && self.width_ok
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationResult {
    pub status: ValidationStatus,
    pub reasons: Vec<BoardCheck>,
    pub notation: NotationState,
}

impl ValidationResult {
    pub fn passed(&self) -> bool {
        self.status == ValidationStatus::Pass
    }
}

/// Checks every board: inside the half-log, at least `clearance` from every
/// mount, and at least `min_width` wide.
pub fn validate_cut<T: Scalar>(
    placement: &CutPlacement<T>,
    mounts: &[MountBox<T>],
    clearance: T,
) -> ValidationResult {
    let log = &placement.half_log;
    let tol = T::lit(INSIDE_TOLERANCE);
    let reasons: Vec<BoardCheck> = placement
        .boards
        .iter()
        .zip(&placement.depths)
        .map(|(board, &depth)| BoardCheck {
            inside_boundary: board.corners().iter().all(|c| log.contains(*c, tol)),
            clear_of_mounts: mounts
                .iter()
                .all(|m| m.bounds.distance_to_rectangle(board) >= clearance),
            width_ok: chord_width(log.radius, depth).is_ok_and(|w| w >= placement.spec.min_width),
        })
        .collect();

    let failing =
        |pick: fn(&BoardCheck) -> bool| reasons.iter().position(|r| !pick(r)).map(|i| i + 1);
    let notation = if let Some(i) = failing(|r| r.inside_boundary) {
        NotationState::red_cross(format!("board {i} falls outside the log"))
    } else if let Some(i) = failing(|r| r.clear_of_mounts) {
        NotationState::red_cross(format!("board {i} is too close to a log mount"))
    } else if let Some(i) = failing(|r| r.width_ok) {
        NotationState::red_cross(format!("board {i} is narrower than the minimum width"))
    } else {
        NotationState::green_check("cut placement valid")
    };
    let status = if reasons.iter().all(BoardCheck::ok) {
        ValidationStatus::Pass
    } else {
        ValidationStatus::Fail
    };
    ValidationResult {
        status,
        reasons,
        notation,
    }
}

/// One approach/cut/retract triple per board, outermost board first.
pub fn cut_toolpath<T: Scalar>(
    placement: &CutPlacement<T>,
    validation: &ValidationResult,
    params: &LocalizationParams<T>,
) -> Result<Toolpath<T>, GeometryError> {
    if !validation.passed() || validation.reasons.len() != placement.boards.len() {
        return Err(GeometryError::Unvalidated);
    }
    let log = &placement.half_log;
    let frame = CutFrame::new(log.axis, log.base.normal);
    let lift = log.radius + params.retract_clearance;
    let mut order: Vec<usize> = (0..placement.depths.len()).collect();
    order.sort_by(|&a, &b| {
        placement.depths[b]
            .partial_cmp(&placement.depths[a])
            .unwrap()
    });
    let mut targets = Vec::with_capacity(3 * order.len());
    for k in order {
        let at = |along| {
            log.point(LogCoords {
                along,
                height: placement.depths[k],
                side: T::zero(),
            })
        };
        let entry = at(-params.overcut_margin);
        let exit = at(log.length + params.overcut_margin);
        targets.extend(frame.pass(entry, exit, lift));
    }
    Toolpath::new(
        targets,
        ToolpathMetadata {
            workflow: "half_log_cutting".into(),
            source: String::new(),
        },
    )
}
