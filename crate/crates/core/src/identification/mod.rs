//! Classifying a gestural measurement against a catalog of layer templates
//! or steel tubes.

mod catalog;
mod file;
mod matching;

use thiserror::Error;

pub use catalog::{
    validate_catalog, Catalog, LayerTemplate, NominalGroup, TemplateCatalog, TubeCatalog,
    TubeEntry, Violation, NOMINAL_EPSILON,
};
pub use file::{
    load_catalog, parse_catalog, CatalogFile, LengthUnit, DEFAULT_LAYER_TOLERANCE_IN,
    DEFAULT_TUBE_TOLERANCE_IN,
};
pub use matching::{
    identify_layer, identify_tube, CoordinationPayload, GroundPlane, IdentificationResult,
    MatchedEntry, TubeAssignments, MODEL_VIEW_SCALE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentificationError {
    #[error("measured {measured:.4} m matches no catalog entry; measure again")]
    NoMatch { measured: f64, nearest: Option<f64> },
    #[error("measured {measured:.4} m is within tolerance of more than one nominal")]
    Ambiguous { measured: f64 },
    #[error("every tube of length {nominal:.4} m is already assigned")]
    AllAssigned { nominal: f64 },
    #[error("point is {height:.4} m below the ground plane")]
    BelowGround { height: f64 },
    #[error("tube end points coincide")]
    CoincidentPoints,
    #[error("ground plane needs a rigid anchor and a nonzero normal")]
    InvalidGround,
}

#[derive(Debug, Error)]
pub enum CatalogFileError {
    #[error("cannot read catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed catalog: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("catalog failed validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}
