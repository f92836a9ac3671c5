use serde::{Deserialize, Serialize};

use super::{
    default_green_tolerance, default_yellow_tolerance, CalibrationError, CalibrationTarget, QcBoard,
};
use crate::identification::LengthUnit;
use crate::linalg::{Line, RigidTransform, Vec3};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Tolerances<T> {
    pub green: T,
    pub yellow: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct JobTarget<T> {
    pub id: u32,
    pub goal: Vec3<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rail: Option<Line<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances<T>>,
}

/// Ordered locator goals in the model frame, plus an optional anchor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct CalibrationJob<T> {
    #[serde(default)]
    pub unit: LengthUnit,
    pub targets: Vec<JobTarget<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<RigidTransform<T>>,
}

fn scaled_anchor<T: Scalar>(anchor: Option<RigidTransform<T>>, k: T) -> Option<RigidTransform<T>> {
    anchor.map(|a| RigidTransform::new(a.rotation, a.translation * k))
}

impl<T: Scalar> CalibrationJob<T> {
    /// Targets in meters, in file order, with default tolerances filled in.
    pub fn targets_in_meters(&self) -> Result<Vec<CalibrationTarget<T>>, CalibrationError> {
        let k = T::lit(self.unit.to_meters());
        self.targets
            .iter()
            .enumerate()
            .map(|(sequence, t)| {
                let tol = t.tolerances.map(|tol| (tol.green * k, tol.yellow * k));
                let target = CalibrationTarget {
                    id: t.id,
                    sequence,
                    goal: t.goal * k,
                    rail: t.rail.map(|r| Line {
                        point: r.point * k,
                        direction: r.direction,
                    }),
                    green_tolerance: tol.map_or_else(default_green_tolerance, |t| t.0),
                    yellow_tolerance: tol.map_or_else(default_yellow_tolerance, |t| t.1),
                };
                target.validate()?;
                Ok(target)
            })
            .collect()
    }

    pub fn anchor_in_meters(&self) -> Option<RigidTransform<T>> {
        scaled_anchor(self.anchor, T::lit(self.unit.to_meters()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct PanelBoard<T> {
    pub id: u32,
    /// Finger-joint center in the model frame.
    pub center: Vec3<T>,
}

/// Digital boards of a finished panel, checked one point per board.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct PanelJob<T> {
    #[serde(default)]
    pub unit: LengthUnit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<T>,
    pub boards: Vec<PanelBoard<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<RigidTransform<T>>,
}

impl<T: Scalar> PanelJob<T> {
    pub fn tolerance_in_meters(&self) -> T {
        self.tolerance.map_or_else(default_green_tolerance, |t| {
            t * T::lit(self.unit.to_meters())
        })
    }

    /// Board centers in meters, expressed in the world through `anchor`.
    pub fn boards_in_world(
        &self,
        anchor: &RigidTransform<T>,
    ) -> Result<Vec<QcBoard<T>>, CalibrationError> {
        if !anchor.is_rigid() {
            return Err(CalibrationError::NonRigidAnchor);
        }
        let k = T::lit(self.unit.to_meters());
        Ok(self
            .boards
            .iter()
            .map(|b| QcBoard {
                id: b.id,
                center: anchor.apply(b.center * k),
            })
            .collect())
    }

    pub fn anchor_in_meters(&self) -> Option<RigidTransform<T>> {
        scaled_anchor(self.anchor, T::lit(self.unit.to_meters()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn job_defaults_and_units() {
        let json = r#"{"unit":"in","targets":[
            {"id":3,"goal":[10,0,0],"rail":{"point":[0,0,0],"direction":[1,0,0]}},
            {"id":4,"goal":[20,0,0],"tolerances":{"green":0.25,"yellow":1}}]}"#;
        let job: CalibrationJob<f64> = serde_json::from_str(json).unwrap();
        let t = job.targets_in_meters().unwrap();
        assert_eq!(t[0].green_tolerance, 0.003175);
        assert_eq!(t[0].yellow_tolerance, 0.0127);
        assert!((t[0].goal.x - 0.254).abs() < 1e-15);
        assert_eq!((t[1].sequence, t[1].green_tolerance), (1, 0.00635));
    }

    #[test]
    fn panel_boards_follow_anchor() {
        let job = PanelJob {
            unit: LengthUnit::Meters,
            tolerance: None,
            boards: vec![PanelBoard {
                id: 1,
                center: Vec3::new(0.1, 0.0, 0.0),
            }],
            anchor: None,
        };
        let a = RigidTransform::from_translation(Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(
            job.boards_in_world(&a).unwrap()[0].center,
            Vec3::new(0.1, 1.0, 0.0)
        );
        assert_eq!(job.tolerance_in_meters(), 0.003175);
    }
}
