use serde::{Deserialize, Serialize};

use super::IoError;
use crate::graph::{Boundary, Corner, Family, FamilySpec, GraphError, SinkedGraph, VertexId};

#[derive(Debug, Serialize, Deserialize)]
struct VertexDoc {
    id: VertexId,
    degree: u32,
    sink_multiplicity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    family: Option<Family>,
    level: Option<u32>,
    boundary: Option<Boundary>,
    n_sinks: usize,
    vertices: Vec<VertexDoc>,
    edges: Vec<[VertexId; 2]>,
    corners: Vec<Corner>,
    center: Option<VertexId>,
}

pub fn graph_to_json(g: &SinkedGraph) -> Result<String, IoError> {
    let spec = g.spec();
    let doc = GraphDoc {
        family: spec.map(|s| s.family),
        level: spec.map(|s| s.level),
        boundary: spec.map(|s| s.boundary),
        n_sinks: g.n_sinks(),
        vertices: (0..g.n_vertices())
            .map(|v| VertexDoc {
                id: v,
                degree: g.degree(v),
                sink_multiplicity: g.sink_multiplicity(v),
                coords: g.has_coords().then(|| g.coords()[v]),
            })
            .collect(),
        edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        corners: g.corners().to_vec(),
        center: g.center(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn graph_from_json(s: &str) -> Result<SinkedGraph, IoError> {
    let doc: GraphDoc = serde_json::from_str(s)?;
    let n = doc.vertices.len();
    for (i, v) in doc.vertices.iter().enumerate() {
        if v.id != i {
            return Err(GraphError::Malformed(format!("vertex {i} listed with id {}", v.id)).into());
        }
    }
    let edges: Vec<(VertexId, VertexId)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
    let sink_edges = doc.vertices.iter().map(|v| v.sink_multiplicity).collect();
    let with_coords = doc.vertices.iter().filter(|v| v.coords.is_some()).count();
    let coords = if with_coords == n { doc.vertices.iter().map(|v| v.coords.unwrap()).collect() } else { Vec::new() };
    if with_coords != 0 && with_coords != n {
        return Err(GraphError::Malformed("only some vertices have coordinates".into()).into());
    }
    let g = SinkedGraph::from_edges(n, &edges, sink_edges, coords)?;
    for v in &doc.vertices {
        if g.degree(v.id) != v.degree {
            return Err(GraphError::Malformed(format!(
                "vertex {} declares degree {} but has {}",
                v.id,
                v.degree,
                g.degree(v.id)
            ))
            .into());
        }
    }
    if let Some(c) = doc.center {
        g.check_vertex(c)?;
    }
    let spec = match (doc.family, doc.level, doc.boundary) {
        (Some(family), Some(level), Some(boundary)) => Some(FamilySpec { family, level, boundary }),
        (None, None, None) => None,
        _ => return Err(GraphError::Malformed("family, level and boundary must be given together".into()).into()),
    };
    Ok(g.with_metadata(spec, doc.corners, doc.center, doc.n_sinks))
}
