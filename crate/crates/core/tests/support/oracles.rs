//! Plain re-statements of the detector, tube matcher and QC lookup, used as
//! references for the optimized implementations.

use gbmr_core::calibration::QcBoard;
use gbmr_core::hand_tracking::synthetic::pinch_frame;
use gbmr_core::hand_tracking::{
    Handedness, PinchDetector, PinchDetectorConfig, PinchEvent, PinchKind,
};
use gbmr_core::identification::TubeCatalog;
use gbmr_core::linalg::Vec3;

/// (gap to previous frame in ms, tip distance in m, confidence)
pub type Sample = (u64, f64, f64);

pub fn run_detector(samples: &[Sample]) -> Vec<PinchEvent<f64>> {
    let mut det = PinchDetector::new(PinchDetectorConfig::default()).unwrap();
    let mut t = 0;
    let mut out = Vec::new();
    for (i, &(dt, d, c)) in samples.iter().enumerate() {
        t += dt;
        let p = Vec3::new(0.3, 0.01 * i as f64, 1.0);
        out.extend(
            det.step(&pinch_frame(t, Handedness::Left, p, d, c))
                .unwrap(),
        );
    }
    out
}

/// The automaton over scalar distances.
pub fn reference_events(samples: &[Sample]) -> Vec<(u64, PinchKind)> {
    let mut t = 0;
    let mut window: Vec<f64> = Vec::new();
    let mut pinched = false;
    let mut last_release: Option<u64> = None;
    let mut out = Vec::new();
    for &(dt, d, c) in samples {
        t += dt;
        if c < 0.5 {
            continue;
        }
        window.push(d);
        if window.len() > 5 {
            window.remove(0);
        }
        let mean = window.iter().sum::<f64>() / window.len() as f64;
        if !pinched {
            if mean < 0.015 && last_release.is_none_or(|r| t - r >= 200) {
                pinched = true;
                out.push((t, PinchKind::Engaged));
            }
        } else if mean > 0.025 {
            pinched = false;
            last_release = Some(t);
            out.push((t, PinchKind::Released));
        } else {
            out.push((t, PinchKind::Moved));
        }
    }
    out
}

/// Engaged (Moved)* Released from idle, with 200 ms between a release and the
/// next engage. Returns the first violation.
pub fn check_alternation(events: &[PinchEvent<f64>]) -> Result<(), String> {
    let mut pinched = false;
    let mut last_release = None;
    for (i, e) in events.iter().enumerate() {
        match e.kind {
            PinchKind::Engaged => {
                if pinched {
                    return Err(format!("event {i}: engaged twice"));
                }
                if let Some(r) = last_release {
                    if e.timestamp - r < 200 {
                        return Err(format!(
                            "event {i}: engaged {} ms after release",
                            e.timestamp - r
                        ));
                    }
                }
                pinched = true;
            }
            PinchKind::Moved if !pinched => return Err(format!("event {i}: moved while idle")),
            PinchKind::Moved => {}
            PinchKind::Released => {
                if !pinched {
                    return Err(format!("event {i}: released while idle"));
                }
                pinched = false;
                last_release = Some(e.timestamp);
            }
        }
    }
    Ok(())
}

#[derive(Debug, PartialEq)]
pub enum Scan {
    Tube(u32),
    NoMatch,
    Ambiguous,
    AllAssigned,
}

/// Linear scan over every entry, no sorting or grouping.
pub fn scan_tubes(catalog: &TubeCatalog<f64>, measured: f64, taken: &[u32]) -> Scan {
    let mut nominals: Vec<f64> = Vec::new();
    for e in &catalog.entries {
        if (measured - e.length).abs() <= catalog.tolerance && !nominals.contains(&e.length) {
            nominals.push(e.length);
        }
    }
    match nominals[..] {
        [] => Scan::NoMatch,
        [len] => catalog
            .entries
            .iter()
            .filter(|e| e.length == len && !taken.contains(&e.id))
            .map(|e| e.id)
            .min()
            .map_or(Scan::AllAssigned, Scan::Tube),
        _ => Scan::Ambiguous,
    }
}

/// Nearest board by distance, lowest id among ties within 1e-9 m:
/// (id, center, distance).
pub fn nearest_board(point: Vec3<f64>, boards: &[QcBoard<f64>]) -> (u32, Vec3<f64>, f64) {
    let mut ranked: Vec<(f64, u32, Vec3<f64>)> = boards
        .iter()
        .map(|b| ((b.center - point).norm(), b.id, b.center))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best = ranked
        .iter()
        .filter(|r| r.0 <= ranked[0].0 + 1e-9)
        .min_by_key(|r| r.1)
        .unwrap();
    (best.1, best.2, best.0)
}

/// The largest float whose distance from `nominal` still computes to ≤ tol.
pub fn upper_boundary(nominal: f64, tol: f64) -> f64 {
    let mut m = nominal + tol;
    while m - nominal > tol {
        m = f64::from_bits(m.to_bits() - 1);
    }
    while f64::from_bits(m.to_bits() + 1) - nominal <= tol {
        m = f64::from_bits(m.to_bits() + 1);
    }
    m
}

/// The smallest float whose distance below `nominal` still computes to ≤ tol.
pub fn lower_boundary(nominal: f64, tol: f64) -> f64 {
    let mut m = nominal - tol;
    while nominal - m > tol {
        m = f64::from_bits(m.to_bits() + 1);
    }
    while nominal - f64::from_bits(m.to_bits() - 1) <= tol {
        m = f64::from_bits(m.to_bits() - 1);
    }
    m
}
