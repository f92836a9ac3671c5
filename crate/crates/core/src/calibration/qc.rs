use serde::{Deserialize, Serialize};

use super::{CalibrationError, NotationState};
use crate::linalg::Vec3;
use crate::scalar::Scalar;

/// Boards whose distances differ by no more than this are treated as tied.
pub const TIE_EPSILON: f64 = 1e-9;

/// A digital board and the center of its finger joint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct QcBoard<T> {
    pub id: u32,
    pub center: Vec3<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct BoardQCRecord<T> {
    pub point: Vec3<T>,
    pub board_id: u32,
    pub reference: Vec3<T>,
    pub deviation: T,
    pub verdict: Verdict,
    pub notation: NotationState,
}

/// Checks one digitized finger-joint point against the closest digital board.
pub fn qc_board<T: Scalar>(
    point: Vec3<T>,
    boards: &[QcBoard<T>],
    tolerance: T,
) -> Result<BoardQCRecord<T>, CalibrationError> {
    if !(tolerance > T::zero()) {
        return Err(CalibrationError::InvalidTolerance);
    }
    let nearest = boards
        .iter()
        .map(|b| b.center.distance(point))
        .fold(None, |m: Option<T>, d| Some(m.map_or(d, |m| m.min(d))))
        .ok_or(CalibrationError::NoBoards)?;
    let cutoff = nearest + T::lit(TIE_EPSILON);
    let board = boards
        .iter()
        .filter(|b| b.center.distance(point) <= cutoff)
        .min_by_key(|b| b.id)
        .expect("the nearest board passes its own cutoff");
    let deviation = board.center.distance(point);
    let mm = deviation.to_f64_lossy() * 1000.0;
    let (verdict, notation) = if deviation <= tolerance {
        (
            Verdict::Pass,
            NotationState::green_check(format!("board {}: {mm:.1} mm", board.id)),
        )
    } else {
        (
            Verdict::Fail,
            NotationState::red_cross(format!("board {}: {mm:.1} mm, out of tolerance", board.id)),
        )
    };
    Ok(BoardQCRecord {
        point,
        board_id: board.id,
        reference: board.center,
        deviation,
        verdict,
        notation,
    })
}

/// The QC report file: a JSON array of records.
pub fn qc_report_json<T: Scalar>(records: &[BoardQCRecord<T>]) -> String {
    serde_json::to_string_pretty(records).expect("QC records always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::NotationColor;

    fn boards() -> Vec<QcBoard<f64>> {
        (0..3)
            .map(|i| QcBoard {
                id: i + 1,
                center: Vec3::new(0.1 * i as f64, 0.0, 0.0),
            })
            .collect()
    }

    #[test]
    fn nearest_board_passes() {
        let r = qc_board(Vec3::new(0.101, 0.002, 0.0), &boards(), 0.003175).unwrap();
        assert_eq!(r.board_id, 2);
        assert!((r.deviation - 0.0022360679775).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.notation.color(), NotationColor::Green);
    }

    #[test]
    fn exact_center_and_far_point() {
        let r = qc_board(Vec3::new(0.2, 0.0, 0.0), &boards(), 0.003175).unwrap();
        assert_eq!(
            (r.board_id, r.deviation, r.verdict),
            (3, 0.0, Verdict::Pass)
        );
        let r = qc_board(Vec3::new(0.1, 0.0, 0.01), &boards(), 0.003175).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.notation.color(), NotationColor::Red);
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let r = qc_board(Vec3::new(0.05, 0.0, 0.0), &boards(), 0.003175).unwrap();
        assert_eq!(r.board_id, 1);
    }

    #[test]
    fn verdict_boundary_is_inclusive() {
        let b = [QcBoard {
            id: 7,
            center: Vec3::zero(),
        }];
        let on = qc_board(Vec3::new(0.003175, 0.0, 0.0), &b, 0.003175).unwrap();
        assert_eq!(on.verdict, Verdict::Pass);
        let off = qc_board(Vec3::new(0.003175 + 1e-9, 0.0, 0.0), &b, 0.003175).unwrap();
        assert_eq!(off.verdict, Verdict::Fail);
        assert_eq!(
            qc_board(Vec3::zero(), &[], 0.003175).unwrap_err(),
            CalibrationError::NoBoards
        );
    }
}
