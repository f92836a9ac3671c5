use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::RigidTransform;
use crate::scalar::Scalar;

/// Lengths closer than this are the same nominal length.
pub const NOMINAL_EPSILON: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct LayerTemplate<T> {
    pub layer: u32,
    /// Nominal height of the board top above the ground (m).
    pub height: T,
    /// Closed planar outline (first point repeated last), ground-frame XY.
    pub outline: Vec<[T; 2]>,
    /// Threaded-rod hole centers, ground-frame XY.
    pub rod_holes: Vec<[T; 2]>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct TemplateCatalog<T> {
    pub templates: Vec<LayerTemplate<T>>,
    pub tolerance: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct TubeEntry<T> {
    pub id: u32,
    pub length: T,
    /// Reciprocal frame the tube belongs to (1, 2 or 3).
    pub frame: u8,
    /// Pose inside its own frame (1:1 coordination view).
    pub frame_pose: RigidTransform<T>,
    /// Pose inside the tower model (1:10 coordination view).
    pub model_pose: RigidTransform<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct TubeCatalog<T> {
    pub entries: Vec<TubeEntry<T>>,
    pub tolerance: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_entries: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_unique_lengths: Option<usize>,
}

/// One distinct nominal length and the entry indices sharing it, by id.
#[derive(Clone, Debug, PartialEq)]
pub struct NominalGroup<T> {
    pub length: T,
    pub members: Vec<usize>,
}

impl<T: Scalar> TubeCatalog<T> {
    /// Distinct nominal lengths in increasing order.
    pub fn nominal_groups(&self) -> Vec<NominalGroup<T>> {
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_by(|&a, &b| {
            let (ea, eb) = (&self.entries[a], &self.entries[b]);
            ea.length
                .partial_cmp(&eb.length)
                .unwrap()
                .then(ea.id.cmp(&eb.id))
        });
        let eps = T::lit(NOMINAL_EPSILON);
        let mut groups: Vec<NominalGroup<T>> = Vec::new();
        for i in order {
            let len = self.entries[i].length;
            match groups.last_mut() {
                Some(g) if (len - g.length).abs() <= eps => g.members.push(i),
                _ => groups.push(NominalGroup {
                    length: len,
                    members: vec![i],
                }),
            }
        }
        for g in &mut groups {
            g.members.sort_by_key(|&i| self.entries[i].id);
        }
        groups
    }
}

#[derive(Clone, Debug, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    #[error("catalog has no entries")]
    Empty,
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("nominals {lower} and {upper} are {gap} apart, not more than twice the tolerance")]
    GapTooSmall { lower: f64, upper: f64, gap: f64 },
    #[error("layer heights must strictly increase (template {index})")]
    NotIncreasing { index: usize },
    #[error("layer {layer} has a negative height")]
    NegativeHeight { layer: u32 },
    #[error("layer {layer} outline is not closed")]
    OpenOutline { layer: u32 },
    #[error("duplicate id {id}")]
    DuplicateId { id: u32 },
    #[error("tube {id} has a non-positive length")]
    NonPositiveLength { id: u32 },
    #[error("tube {id} names frame {frame}; expected 1, 2 or 3")]
    InvalidFrame { id: u32, frame: u8 },
    #[error("expected {expected} entries, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("expected {expected} distinct lengths, found {found}")]
    UniqueLengthMismatch { expected: usize, found: usize },
}

fn check_gaps<T: Scalar>(
    nominals: impl Iterator<Item = T>,
    tolerance: T,
    out: &mut Vec<Violation>,
) {
    let limit = tolerance * T::lit(2.0);
    let nominals: Vec<T> = nominals.collect();
    for w in nominals.windows(2) {
        let gap = w[1] - w[0];
        if gap > T::zero() && gap <= limit {
            out.push(Violation::GapTooSmall {
                lower: w[0].to_f64_lossy(),
                upper: w[1].to_f64_lossy(),
                gap: gap.to_f64_lossy(),
            });
        }
    }
}

impl<T: Scalar> TemplateCatalog<T> {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.templates.is_empty() {
            out.push(Violation::Empty);
        }
        if !(self.tolerance > T::zero()) {
            out.push(Violation::NonPositiveTolerance);
        }
        let mut seen = std::collections::BTreeSet::new();
        for (i, t) in self.templates.iter().enumerate() {
            if !seen.insert(t.layer) {
                out.push(Violation::DuplicateId { id: t.layer });
            }
            if t.height < T::zero() {
                out.push(Violation::NegativeHeight { layer: t.layer });
            }
            if t.outline.len() < 4 || t.outline.first() != t.outline.last() {
                out.push(Violation::OpenOutline { layer: t.layer });
            }
            if i > 0 && !(t.height > self.templates[i - 1].height) {
                out.push(Violation::NotIncreasing { index: i });
            }
        }
        check_gaps(
            self.templates.iter().map(|t| t.height),
            self.tolerance,
            &mut out,
        );
        out
    }
}

impl<T: Scalar> TubeCatalog<T> {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.entries.is_empty() {
            out.push(Violation::Empty);
        }
        if !(self.tolerance > T::zero()) {
            out.push(Violation::NonPositiveTolerance);
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(e.id) {
                out.push(Violation::DuplicateId { id: e.id });
            }
            if !(e.length > T::zero()) {
                out.push(Violation::NonPositiveLength { id: e.id });
            }
            if !(1..=3).contains(&e.frame) {
                out.push(Violation::InvalidFrame {
                    id: e.id,
                    frame: e.frame,
                });
            }
        }
        let groups = self.nominal_groups();
        check_gaps(groups.iter().map(|g| g.length), self.tolerance, &mut out);
        if let Some(expected) = self.expected_entries {
            if expected != self.entries.len() {
                out.push(Violation::CountMismatch {
                    expected,
                    found: self.entries.len(),
                });
            }
        }
        if let Some(expected) = self.expected_unique_lengths {
            if expected != groups.len() {
                out.push(Violation::UniqueLengthMismatch {
                    expected,
                    found: groups.len(),
                });
            }
        }
        out
    }
}

/// Either kind of identification catalog.
#[derive(Clone, Debug, PartialEq)]
pub enum Catalog<T> {
    Layers(TemplateCatalog<T>),
    Tubes(TubeCatalog<T>),
}

/// Reports every invariant violation; an empty list means the catalog is valid.
pub fn validate_catalog<T: Scalar>(catalog: &Catalog<T>) -> Vec<Violation> {
    match catalog {
        Catalog::Layers(c) => c.validate(),
        Catalog::Tubes(c) => c.validate(),
    }
}
