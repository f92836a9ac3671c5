use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::frame::{smooth, HandFrame, Handedness};
use super::TrackingError;
use crate::linalg::Vec3;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct PinchDetectorConfig<T> {
    /// Tip distance below which an idle hand engages (meters).
    pub engage_threshold: T,
    /// Tip distance above which a pinched hand releases (meters).
    pub release_threshold: T,
    pub min_confidence: T,
    /// Minimum time between a release and the next engage (ms).
    pub debounce_ms: u64,
    /// Frames in the positional moving average.
    pub smoothing_window: usize,
}

impl<T: Scalar> Default for PinchDetectorConfig<T> {
    fn default() -> Self {
        Self {
            engage_threshold: T::lit(0.015),
            release_threshold: T::lit(0.025),
            min_confidence: T::lit(0.5),
            debounce_ms: 200,
            smoothing_window: 5,
        }
    }
}

impl<T: Scalar> PinchDetectorConfig<T> {
    pub fn validate(&self) -> Result<(), TrackingError> {
        let ordered =
            T::zero() < self.engage_threshold && self.engage_threshold < self.release_threshold;
        let confidence_ok = self.min_confidence >= T::zero() && self.min_confidence <= T::one();
        if !ordered || !confidence_ok || self.smoothing_window == 0 {
            return Err(TrackingError::InvalidConfig);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PinchKind {
    Engaged,
    Moved,
    Released,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct PinchEvent<T> {
    #[serde(rename = "t")]
    pub timestamp: u64,
    #[serde(rename = "hand")]
    pub handedness: Handedness,
    pub kind: PinchKind,
    pub point: Vec3<T>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PinchPhase {
    #[default]
    Idle,
    Pinched,
}

/// Hysteresis state of one hand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct HandDetectorState<T> {
    pub phase: PinchPhase,
    pub last_timestamp: Option<u64>,
    pub last_release: Option<u64>,
    history: VecDeque<HandFrame<T>>,
}

impl<T> Default for HandDetectorState<T> {
    fn default() -> Self {
        Self {
            phase: PinchPhase::Idle,
            last_timestamp: None,
            last_release: None,
            history: VecDeque::new(),
        }
    }
}

/// Per-hand pinch automaton: IDLE → PINCHED below the engage threshold,
/// PINCHED → IDLE above the release threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct PinchDetector<T> {
    config: PinchDetectorConfig<T>,
    hands: [HandDetectorState<T>; 2],
}

impl<T: Scalar> PinchDetector<T> {
    pub fn new(config: PinchDetectorConfig<T>) -> Result<Self, TrackingError> {
        config.validate()?;
        Ok(Self {
            config,
            hands: [HandDetectorState::default(), HandDetectorState::default()],
        })
    }

    pub fn config(&self) -> &PinchDetectorConfig<T> {
        &self.config
    }

    pub fn hand(&self, handedness: Handedness) -> &HandDetectorState<T> {
        &self.hands[handedness.index()]
    }

    /// Feeds one frame. A rejected frame leaves the state untouched.
    pub fn step(&mut self, frame: &HandFrame<T>) -> Result<Vec<PinchEvent<T>>, TrackingError> {
        let cfg = self.config;
        let hand = &mut self.hands[frame.handedness().index()];
        let t = frame.timestamp();
        if let Some(last) = hand.last_timestamp {
            if t <= last {
                return Err(TrackingError::OutOfOrder { last, got: t });
            }
        }
        hand.last_timestamp = Some(t);

        // low-confidence frames hold state and stay out of the average
        if frame.confidence() < cfg.min_confidence {
            return Ok(Vec::new());
        }

        hand.history.push_back(frame.clone());
        while hand.history.len() > cfg.smoothing_window {
            hand.history.pop_front();
        }
        let smoothed = smooth(hand.history.make_contiguous())?;
        let distance = smoothed.pinch_distance();
        let event = |kind| PinchEvent {
            timestamp: t,
            handedness: frame.handedness(),
            kind,
            point: smoothed.pinch_point(),
        };

        let mut events = Vec::new();
        match hand.phase {
            PinchPhase::Idle => {
                let debounced = hand
                    .last_release
                    .is_none_or(|r| t.saturating_sub(r) >= cfg.debounce_ms);
                if distance < cfg.engage_threshold && debounced {
                    hand.phase = PinchPhase::Pinched;
                    events.push(event(PinchKind::Engaged));
                }
            }
            PinchPhase::Pinched => {
                if distance > cfg.release_threshold {
                    hand.phase = PinchPhase::Idle;
                    hand.last_release = Some(t);
                    events.push(event(PinchKind::Released));
                } else {
                    events.push(event(PinchKind::Moved));
                }
            }
        }
        Ok(events)
    }

    /// Runs a whole frame sequence, stopping at the first rejected frame.
    pub fn run<'a>(
        &mut self,
        frames: impl IntoIterator<Item = &'a HandFrame<T>>,
    ) -> Result<Vec<PinchEvent<T>>, TrackingError> {
        let mut out = Vec::new();
        for f in frames {
            out.extend(self.step(f)?);
        }
        Ok(out)
    }
}

/// Functional form of [`PinchDetector::step`].
pub fn step_detector<T: Scalar>(
    mut state: PinchDetector<T>,
    frame: &HandFrame<T>,
) -> Result<(PinchDetector<T>, Vec<PinchEvent<T>>), TrackingError> {
    let events = state.step(frame)?;
    Ok((state, events))
}
