use serde::{Deserialize, Serialize};

use super::{CalibrationError, NotationState};
use crate::hand_tracking::{PinchEvent, PinchKind};
use crate::linalg::{Line, RigidTransform, Vec3};
use crate::scalar::Scalar;

/// Maps a distance to goal onto the feedback badge. Both bounds are inclusive.
pub fn notation_for_distance<T: Scalar>(distance: T, green: T, yellow: T) -> NotationState {
    let mm = distance.to_f64_lossy() * 1000.0;
    if distance <= green {
        NotationState::green_check(format!("{mm:.1} mm from goal"))
    } else if distance <= yellow {
        NotationState::yellow_cross(format!("{mm:.1} mm from goal"))
    } else {
        NotationState::red_cross(format!("{mm:.1} mm from goal"))
    }
}

/// Goal of one locator, in whichever frame the session is tracking in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct CalibrationTarget<T> {
    pub id: u32,
    pub sequence: usize,
    pub goal: Vec3<T>,
    /// Motion is constrained to this line when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rail: Option<Line<T>>,
    pub green_tolerance: T,
    pub yellow_tolerance: T,
}

impl<T: Scalar> CalibrationTarget<T> {
    pub fn validate(&self) -> Result<(), CalibrationError> {
        let zero = T::zero();
        if !(self.green_tolerance > zero && self.green_tolerance < self.yellow_tolerance) {
            return Err(CalibrationError::InvalidTolerances { id: self.id });
        }
        if let Some(rail) = self.rail {
            if (rail.direction.norm() - T::one()).abs() > T::lit(1e-9) {
                return Err(CalibrationError::InvalidRail { id: self.id });
            }
        }
        Ok(())
    }

    /// Where the tracked part actually is, given a pinch point.
    pub fn constrain(&self, p: Vec3<T>) -> Vec3<T> {
        match self.rail {
            Some(rail) => rail.project(p),
            None => p,
        }
    }

    pub fn transformed(&self, anchor: &RigidTransform<T>) -> Self {
        Self {
            goal: anchor.apply(self.goal),
            rail: self.rail.map(|r| Line {
                point: anchor.apply(r.point),
                direction: anchor.apply_vector(r.direction),
            }),
            ..*self
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct TargetState<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub live_position: Option<Vec3<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub live_distance: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notation: Option<NotationState>,
    pub completed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrackOutcome {
    /// The live notation of the tracked target changed or was refreshed.
    Tracked(NotationState),
    /// Release while green: the target is placed.
    Completed(NotationState),
    /// Release without reaching green; the target stays active.
    ReleasedShort(NotationState),
    /// The event addressed a target other than the current one.
    OutOfSequence(NotationState),
    /// Every target is already complete.
    Done,
}

impl TrackOutcome {
    pub fn notation(&self) -> Option<&NotationState> {
        match self {
            TrackOutcome::Tracked(n)
            | TrackOutcome::Completed(n)
            | TrackOutcome::ReleasedShort(n)
            | TrackOutcome::OutOfSequence(n) => Some(n),
            TrackOutcome::Done => None,
        }
    }
}

/// Locators placed strictly in order. Goals are kept in the model frame and
/// expressed in the world through the current anchor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct CalibrationSession<T> {
    model_targets: Vec<CalibrationTarget<T>>,
    targets: Vec<CalibrationTarget<T>>,
    anchor: RigidTransform<T>,
    states: Vec<TargetState<T>>,
    current: usize,
}

impl<T: Scalar> CalibrationSession<T> {
    /// Targets are taken in the given order; their `sequence` is rewritten
    /// to match.
    pub fn new(targets: Vec<CalibrationTarget<T>>) -> Result<Self, CalibrationError> {
        let mut seen = std::collections::BTreeSet::new();
        let mut model_targets = targets;
        for (i, t) in model_targets.iter_mut().enumerate() {
            t.validate()?;
            if !seen.insert(t.id) {
                return Err(CalibrationError::DuplicateTarget { id: t.id });
            }
            t.sequence = i;
        }
        let states = vec![TargetState::default(); model_targets.len()];
        Ok(Self {
            targets: model_targets.clone(),
            model_targets,
            anchor: RigidTransform::identity(),
            states,
            current: 0,
        })
    }

    /// Re-expresses every goal through `anchor`. This replaces any previous
    /// anchor rather than composing with it. Live readings are cleared
    /// because they were measured against the old goals.
    pub fn set_anchor(&mut self, anchor: RigidTransform<T>) -> Result<(), CalibrationError> {
        if !anchor.is_rigid() {
            return Err(CalibrationError::NonRigidAnchor);
        }
        self.anchor = anchor;
        self.targets = self
            .model_targets
            .iter()
            .map(|t| t.transformed(&anchor))
            .collect();
        for s in self.states.iter_mut().filter(|s| !s.completed) {
            *s = TargetState::default();
        }
        Ok(())
    }

    pub fn anchor(&self) -> &RigidTransform<T> {
        &self.anchor
    }

    /// World-frame targets.
    pub fn targets(&self) -> &[CalibrationTarget<T>] {
        &self.targets
    }

    pub fn states(&self) -> &[TargetState<T>] {
        &self.states
    }

    pub fn current_index(&self) -> usize {
        self.current
    }

    pub fn current_target(&self) -> Option<&CalibrationTarget<T>> {
        self.targets.get(self.current)
    }

    pub fn is_done(&self) -> bool {
        self.current >= self.targets.len()
    }

    pub fn completed_count(&self) -> usize {
        self.states.iter().filter(|s| s.completed).count()
    }

    /// Tracks a pinch on the current target.
    pub fn track_current(&mut self, event: &PinchEvent<T>) -> TrackOutcome {
        match self.current_target() {
            Some(t) => {
                let id = t.id;
                self.track(id, event)
            }
            None => TrackOutcome::Done,
        }
    }

    /// Tracks a pinch that addresses target `id`. Only the current target
    /// responds; the others get a sequencing notice and are left untouched.
    pub fn track(&mut self, id: u32, event: &PinchEvent<T>) -> TrackOutcome {
        if self.is_done() {
            return TrackOutcome::Done;
        }
        let Some(index) = self.targets.iter().position(|t| t.id == id) else {
            return TrackOutcome::OutOfSequence(NotationState::red_cross(format!(
                "unknown locator {id}"
            )));
        };
        if index != self.current {
            let current_id = self.targets[self.current].id;
            let message = if self.states[index].completed {
                format!("locator {id} is already placed; continue with locator {current_id}")
            } else {
                format!("place locator {current_id} before locator {id}")
            };
            return TrackOutcome::OutOfSequence(NotationState::red_cross(message));
        }
        let target = self.targets[index];
        let state = &mut self.states[index];
        match event.kind {
            PinchKind::Engaged | PinchKind::Moved => {
                let live = target.constrain(event.point);
                let distance = live.distance(target.goal);
                let notation = notation_for_distance(
                    distance,
                    target.green_tolerance,
                    target.yellow_tolerance,
                );
                state.live_position = Some(live);
                state.live_distance = Some(distance);
                state.notation = Some(notation.clone());
                TrackOutcome::Tracked(notation)
            }
            PinchKind::Released => match &state.notation {
                Some(n) if n.is_green() => {
                    state.completed = true;
                    TrackOutcome::Completed(NotationState::green_check(format!(
                        "locator {id} placed"
                    )))
                }
                Some(n) => TrackOutcome::ReleasedShort(n.clone()),
                None => TrackOutcome::ReleasedShort(NotationState::red_cross(format!(
                    "locator {id} has not been tracked yet"
                ))),
            },
        }
    }

    /// Moves on to the next target iff the current one is complete.
    pub fn advance(&mut self) -> Result<usize, NotationState> {
        if self.is_done() {
            return Ok(self.current);
        }
        if self.states[self.current].completed {
            self.current += 1;
            Ok(self.current)
        } else {
            let id = self.targets[self.current].id;
            Err(NotationState::yellow_cross(format!(
                "locator {id} must show a green check before moving on"
            )))
        }
    }
}

/// Expresses model points in the world through a rigid anchor.
pub fn apply_anchor<T: Scalar>(
    anchor: &RigidTransform<T>,
    points: &[Vec3<T>],
) -> Result<Vec<Vec3<T>>, CalibrationError> {
    if !anchor.is_rigid() {
        return Err(CalibrationError::NonRigidAnchor);
    }
    Ok(points.iter().map(|&p| anchor.apply(p)).collect())
}
