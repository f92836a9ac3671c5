//! Gesture logs: a header line then one input event per line.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{to_line, InputEvent};
use crate::workflow::WorkflowKind;

pub const LOG_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogHeader {
    pub schema: u32,
    pub units: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workflow: Option<WorkflowKind>,
}

impl Default for LogHeader {
    fn default() -> Self {
        Self {
            schema: LOG_SCHEMA,
            units: "m".into(),
            workflow: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GestureLog {
    pub header: LogHeader,
    pub events: Vec<InputEvent>,
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error("cannot read log: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl GestureLog {
    pub fn new(workflow: Option<WorkflowKind>) -> Self {
        Self {
            header: LogHeader {
                workflow,
                ..LogHeader::default()
            },
            events: Vec::new(),
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = to_line(&self.header);
        out.push('\n');
        for e in &self.events {
            out.push_str(&to_line(e));
            out.push('\n');
        }
        out
    }

    /// Blank lines are skipped; an empty input is an empty log.
    pub fn parse(text: &str) -> Result<Self, LogError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let Some((i, first)) = lines.next() else {
            return Ok(Self::default());
        };
        let header: LogHeader = serde_json::from_str(first).map_err(|e| LogError::Parse {
            line: i + 1,
            message: format!("bad header: {e}"),
        })?;
        if header.schema != LOG_SCHEMA || header.units != "m" {
            return Err(LogError::Parse {
                line: i + 1,
                message: format!(
                    "unsupported schema {} / units {:?}",
                    header.schema, header.units
                ),
            });
        }
        let events = lines
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| LogError::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { header, events })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LogError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
