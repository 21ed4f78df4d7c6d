//! File formats: graph and configuration documents, run manifests, atomic
//! writes and PPM rendering.

mod graph_json;
mod ppm;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{FamilySpec, GraphError};
use crate::sandpile::Configuration;

pub use graph_json::{graph_from_json, graph_to_json};
pub use ppm::{render, DEFAULT_WIDTH};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has no coordinates to render")]
    MissingCoords,
    #[error("{0}")]
    Format(String),
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so a failed write leaves no partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| IoError::Io(e.error))?;
    Ok(())
}

pub fn config_to_json(c: &Configuration) -> Result<String, IoError> {
    Ok(serde_json::to_string(c)?)
}

pub fn config_from_json(s: &str) -> Result<Configuration, IoError> {
    Ok(serde_json::from_str(s)?)
}

#[derive(Serialize, Deserialize)]
struct ConfigRow {
    vertex_id: usize,
    grains: u64,
}

pub fn config_to_csv(c: &Configuration) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (vertex_id, &grains) in c.as_slice().iter().enumerate() {
        w.serialize(ConfigRow { vertex_id, grains })?;
    }
    if c.is_empty() {
        w.write_record(["vertex_id", "grains"])?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| IoError::Format(e.to_string()))
}

pub fn config_from_csv(s: &str) -> Result<Configuration, IoError> {
    let mut r = csv::Reader::from_reader(s.as_bytes());
    let mut grains = Vec::new();
    for (i, row) in r.deserialize::<ConfigRow>().enumerate() {
        let row = row?;
        if row.vertex_id != i {
            return Err(IoError::Format(format!("row {i} is for vertex {}", row.vertex_id)));
        }
        grains.push(row.grains);
    }
    Ok(Configuration(grains))
}

/// Serializes records as CSV with a header row.
pub fn records_to_csv<T: Serialize>(rows: &[T]) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| IoError::Format(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCaps {
    pub max_level: u32,
    pub max_states: usize,
    pub max_steps: u64,
}

impl ResourceCaps {
    pub fn validate(&self) -> Result<(), IoError> {
        if self.max_level == 0 || self.max_states == 0 || self.max_steps == 0 {
            return Err(IoError::Format("resource caps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub spec: Option<FamilySpec>,
    pub seed: u64,
    pub outputs: Vec<String>,
    pub caps: ResourceCaps,
    pub version: String,
    pub wall_time_secs: f64,
}

/// A result document with the manifest of the run that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document<T> {
    pub manifest: RunManifest,
    pub result: T,
}
