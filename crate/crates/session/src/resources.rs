//! Catalogs, jobs and the cutting cell, loaded from JSON files tagged by `kind`.

use std::path::Path;

use gbmr_core::calibration::{CalibrationJob, PanelJob};
use gbmr_core::geometry::{BoardSpec, MountBox};
use gbmr_core::identification::{
    validate_catalog, Catalog, CatalogFile, LengthUnit, TemplateCatalog, TubeCatalog, Violation,
};
use gbmr_core::linalg::{Quat, Vec3};
use gbmr_core::scalar::inches;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("file not found: {0}")]
    NotFound(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed resource: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown resource kind {0:?}")]
    UnknownKind(String),
    #[error("{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("invalid {0}")]
    InvalidContent(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct MountSpec {
    center: Vec3<f64>,
    #[serde(default = "Quat::identity")]
    quat: Quat<f64>,
    /// Square cross-section edge; a 4 in post when omitted.
    #[serde(default)]
    section: Option<f64>,
    depth: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CellFile {
    #[serde(default)]
    unit: LengthUnit,
    #[serde(default)]
    mounts: Vec<MountSpec>,
    #[serde(default)]
    board_spec: Option<BoardSpec<f64>>,
    #[serde(default)]
    clearance: Option<f64>,
}

/// The bandsaw cell: log mounts and the board requirements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub mounts: Vec<MountBox<f64>>,
    pub board_spec: BoardSpec<f64>,
    pub clearance: f64,
}

impl Default for Cell {
    fn default() -> Self {
        Self {
            mounts: Vec::new(),
            board_spec: BoardSpec::default(),
            clearance: inches(1.0),
        }
    }
}

impl CellFile {
    fn into_cell(self) -> Result<Cell, ResourceError> {
        let k = self.unit.to_meters();
        let mounts = self
            .mounts
            .into_iter()
            .map(|m| {
                let section = m.section.map_or(inches(4.0), |s| s * k);
                MountBox::with_section(m.center * k, m.quat, section, m.depth * k)
                    .map_err(|e| ResourceError::InvalidContent(e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let board_spec = self
            .board_spec
            .map_or_else(BoardSpec::default, |b| BoardSpec {
                min_width: b.min_width * k,
                min_thickness: b.min_thickness * k,
                board_count: b.board_count,
            });
        board_spec
            .validate()
            .map_err(|e| ResourceError::InvalidContent(e.to_string()))?;
        Ok(Cell {
            mounts,
            board_spec,
            clearance: self.clearance.map_or(inches(1.0), |c| c * k),
        })
    }
}

/// One parsed resource file.
#[derive(Clone, Debug, PartialEq)]
pub enum Resource {
    Layers(TemplateCatalog<f64>),
    Tubes(TubeCatalog<f64>),
    Calibration(CalibrationJob<f64>),
    Panel(PanelJob<f64>),
    Cell(Cell),
}

impl Resource {
    pub fn kind(&self) -> &'static str {
        match self {
            Resource::Layers(_) => "layers",
            Resource::Tubes(_) => "tubes",
            Resource::Calibration(_) => "calibration",
            Resource::Panel(_) => "panel",
            Resource::Cell(_) => "cell",
        }
    }
}

/// Parses a resource, converting to meters, without validating catalogs.
pub fn parse_resource(text: &str) -> Result<Resource, ResourceError> {
    let value: Value = serde_json::from_str(text)?;
    let kind = value
        .get("kind")
        .and_then(Value::as_str)
        .unwrap_or_default()
        .to_owned();
    Ok(match kind.as_str() {
        "layers" | "tubes" => {
            match serde_json::from_value::<CatalogFile<f64>>(value)?.into_catalog() {
                Catalog::Layers(c) => Resource::Layers(c),
                Catalog::Tubes(c) => Resource::Tubes(c),
            }
        }
        "calibration" => {
            let job: CalibrationJob<f64> = serde_json::from_value(value)?;
            job.targets_in_meters()
                .map_err(|e| ResourceError::InvalidContent(e.to_string()))?;
            Resource::Calibration(job)
        }
        "panel" => {
            let job: PanelJob<f64> = serde_json::from_value(value)?;
            if job.boards.is_empty() {
                return Err(ResourceError::InvalidContent(
                    "panel job has no boards".into(),
                ));
            }
            Resource::Panel(job)
        }
        "cell" => Resource::Cell(serde_json::from_value::<CellFile>(value)?.into_cell()?),
        _ => return Err(ResourceError::UnknownKind(kind)),
    })
}

/// Catalog violations of a resource; other kinds have none once parsed.
pub fn violations(resource: &Resource) -> Vec<Violation> {
    match resource {
        Resource::Layers(c) => validate_catalog(&Catalog::Layers(c.clone())),
        Resource::Tubes(c) => validate_catalog(&Catalog::Tubes(c.clone())),
        _ => Vec::new(),
    }
}

fn read(path: &Path) -> Result<String, ResourceError> {
    std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            ResourceError::NotFound(path.display().to_string())
        } else {
            ResourceError::Io {
                path: path.display().to_string(),
                source,
            }
        }
    })
}

/// Reads, parses and validates a resource file.
pub fn load_resource(path: impl AsRef<Path>) -> Result<Resource, ResourceError> {
    let resource = parse_resource(&read(path.as_ref())?)?;
    let v = violations(&resource);
    if v.is_empty() {
        Ok(resource)
    } else {
        Err(ResourceError::Invalid(v))
    }
}

/// Everything a session may draw on. Read-only once the session starts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Resources {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<TemplateCatalog<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tubes: Option<TubeCatalog<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationJob<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panel: Option<PanelJob<f64>>,
    #[serde(default)]
    pub cell: Cell,
}

impl Resources {
    /// Later resources of the same kind replace earlier ones.
    pub fn add(&mut self, resource: Resource) {
        match resource {
            Resource::Layers(c) => self.layers = Some(c),
            Resource::Tubes(c) => self.tubes = Some(c),
            Resource::Calibration(j) => self.calibration = Some(j),
            Resource::Panel(j) => self.panel = Some(j),
            Resource::Cell(c) => self.cell = c,
        }
    }

    pub fn load_all<P: AsRef<Path>>(paths: &[P]) -> Result<Self, ResourceError> {
        let mut out = Self::default();
        for p in paths {
            out.add(load_resource(p)?);
        }
        Ok(out)
    }
}
