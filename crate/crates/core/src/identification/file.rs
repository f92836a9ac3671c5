use std::path::Path;

use serde::{Deserialize, Serialize};

use super::catalog::{Catalog, LayerTemplate, TemplateCatalog, TubeCatalog, TubeEntry};
use super::CatalogFileError;
use crate::linalg::RigidTransform;
use crate::scalar::{Scalar, METERS_PER_INCH};

pub const DEFAULT_LAYER_TOLERANCE_IN: f64 = 0.25;
pub const DEFAULT_TUBE_TOLERANCE_IN: f64 = 0.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LengthUnit {
    #[default]
    #[serde(rename = "m")]
    Meters,
    #[serde(rename = "in")]
    Inches,
}

impl LengthUnit {
    pub fn to_meters(self) -> f64 {
        match self {
            LengthUnit::Meters => 1.0,
            LengthUnit::Inches => METERS_PER_INCH,
        }
    }
}

/// On-disk catalog. Every length, including tolerances, outlines and pose
/// translations, is in `unit`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub enum CatalogFile<T> {
    Layers {
        #[serde(default)]
        unit: LengthUnit,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<T>,
        templates: Vec<LayerTemplate<T>>,
    },
    Tubes {
        #[serde(default)]
        unit: LengthUnit,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<T>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected_entries: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected_unique_lengths: Option<usize>,
        entries: Vec<TubeEntry<T>>,
    },
}

fn scale_pose<T: Scalar>(pose: RigidTransform<T>, k: T) -> RigidTransform<T> {
    RigidTransform::new(pose.rotation, pose.translation * k)
}

impl<T: Scalar> CatalogFile<T> {
    /// Converts to meters, filling in the default tolerance of each kind.
    pub fn into_catalog(self) -> Catalog<T> {
        match self {
            CatalogFile::Layers {
                unit,
                tolerance,
                templates,
            } => {
                let k = T::lit(unit.to_meters());
                let tolerance = tolerance
                    .map(|t| t * k)
                    .unwrap_or_else(|| T::lit(DEFAULT_LAYER_TOLERANCE_IN * METERS_PER_INCH));
                let scale2 = |p: [T; 2]| [p[0] * k, p[1] * k];
                let templates = templates
                    .into_iter()
                    .map(|t| LayerTemplate {
                        height: t.height * k,
                        outline: t.outline.into_iter().map(scale2).collect(),
                        rod_holes: t.rod_holes.into_iter().map(scale2).collect(),
                        ..t
                    })
                    .collect();
                Catalog::Layers(TemplateCatalog {
                    templates,
                    tolerance,
                })
            }
            CatalogFile::Tubes {
                unit,
                tolerance,
                expected_entries,
                expected_unique_lengths,
                entries,
            } => {
                let k = T::lit(unit.to_meters());
                let tolerance = tolerance
                    .map(|t| t * k)
                    .unwrap_or_else(|| T::lit(DEFAULT_TUBE_TOLERANCE_IN * METERS_PER_INCH));
                let entries = entries
                    .into_iter()
                    .map(|e| TubeEntry {
                        length: e.length * k,
                        frame_pose: scale_pose(e.frame_pose, k),
                        model_pose: scale_pose(e.model_pose, k),
                        ..e
                    })
                    .collect();
                Catalog::Tubes(TubeCatalog {
                    entries,
                    tolerance,
                    expected_entries,
                    expected_unique_lengths,
                })
            }
        }
    }
}

/// Parses and converts a catalog without validating it.
pub fn parse_catalog<T: Scalar>(json: &str) -> Result<Catalog<T>, CatalogFileError> {
    let file: CatalogFile<T> = serde_json::from_str(json)?;
    Ok(file.into_catalog())
}

/// Reads, converts and validates a catalog file.
pub fn load_catalog<T: Scalar>(path: impl AsRef<Path>) -> Result<Catalog<T>, CatalogFileError> {
    let text = std::fs::read_to_string(path)?;
    let catalog = parse_catalog(&text)?;
    let violations = super::validate_catalog(&catalog);
    if violations.is_empty() {
        Ok(catalog)
    } else {
        Err(CatalogFileError::Invalid(violations))
    }
}
