use serde::{Deserialize, Serialize};

use super::builders::build_vertex_graph;
use super::{Boundary, Family, GraphError, SinkedGraph, VertexId};

/// One cut: the union of the level-`n` cells meeting `v0`, split into its
/// outer corner points (`boundary`) and everything else (`interior`,
/// which contains `v0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub n: u32,
    pub boundary: Vec<VertexId>,
    pub interior: Vec<VertexId>,
}

impl Cut {
    /// The interior as a graph of its own with `boundary` (and everything
    /// else outside) turned into sinks. Returns the new-to-original id map too.
    pub fn graph(&self, g: &SinkedGraph) -> Result<(SinkedGraph, Vec<VertexId>), GraphError> {
        g.restricted(&self.interior)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSystem {
    pub v0: VertexId,
    pub cuts: Vec<Cut>,
}

impl CutSystem {
    /// Checks nesting, that `v0` is interior and that each boundary separates
    /// its interior from the rest of the graph.
    pub fn verify(&self, g: &SinkedGraph) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::Malformed(msg));
        let n = g.n_vertices();
        for (i, cut) in self.cuts.iter().enumerate() {
            let mut inside = vec![false; n];
            let mut fence = vec![false; n];
            for &v in &cut.interior {
                g.check_vertex(v)?;
                inside[v] = true;
            }
            for &v in &cut.boundary {
                g.check_vertex(v)?;
                if inside[v] {
                    return bad(format!("cut {}: vertex {v} is both interior and boundary", cut.n));
                }
                fence[v] = true;
            }
            if !inside[self.v0] {
                return bad(format!("cut {}: v0 is not interior", cut.n));
            }
            for &v in &cut.interior {
                if let Some(&u) = g.neighbors(v).iter().find(|&&u| !inside[u] && !fence[u]) {
                    return bad(format!("cut {}: edge {v}-{u} crosses the boundary", cut.n));
                }
            }
            if let Some(prev) = i.checked_sub(1).map(|j| &self.cuts[j]) {
                if prev.interior.iter().any(|&v| !inside[v]) {
                    return bad(format!("cut {} is not contained in cut {}", prev.n, cut.n));
                }
            }
        }
        Ok(())
    }
}

/// Cuts around the designated center `v0` of an SG or MG graph for
/// `n = 1..=level-2`. The graph must come from [`super::build`] with
/// sinked corners.
pub fn junction_cuts(g: &SinkedGraph, v0: VertexId) -> Result<CutSystem, GraphError> {
    let spec = g.spec().ok_or_else(|| GraphError::Config("cuts need a graph built from a family spec".into()))?;
    let supported = matches!(spec.family, Family::Sg | Family::Mg)
        && matches!(spec.boundary, Boundary::CornerSinks | Boundary::CollapsedSink);
    if !supported {
        return Err(GraphError::Config(format!(
            "no cut system for {spec}; supported: sg and mg with corner-sinks or collapsed boundary"
        )));
    }
    if spec.level < 3 {
        return Err(GraphError::Config(format!("cuts need level ≥ 3, got {}", spec.level)));
    }
    let (_, map) = build_vertex_graph(spec)?;
    let layout = &map.layout;
    if g.center() != Some(v0) {
        return Err(GraphError::Config(format!(
            "cuts are only defined around the center vertex {:?}, got {v0}",
            g.center()
        )));
    }
    let p0 = map.vertex_of.iter().position(|&v| v == Some(v0)).expect("center is a vertex");
    let mut cuts = Vec::new();
    for n in 1..=spec.level - 2 {
        let depth = spec.level - n;
        let cells = layout.cells_containing(p0, depth);
        let mut corner_pts: Vec<usize> = cells.iter().flat_map(|&c| layout.cell_corners(c, depth)).collect();
        corner_pts.sort_unstable();
        corner_pts.dedup();
        corner_pts.retain(|&p| p != p0);
        let mut points: Vec<usize> = cells.iter().flat_map(|&c| layout.points_of_cell(c, depth)).collect();
        points.sort_unstable();
        points.dedup();
        let to_vertices = |pts: &[usize]| {
            let mut vs: Vec<VertexId> = pts.iter().filter_map(|&p| map.vertex_of[p]).collect();
            vs.sort_unstable();
            vs
        };
        let interior_pts: Vec<usize> = points.into_iter().filter(|p| corner_pts.binary_search(p).is_err()).collect();
        cuts.push(Cut { n, boundary: to_vertices(&corner_pts), interior: to_vertices(&interior_pts) });
    }
    let system = CutSystem { v0, cuts };
    system.verify(g)?;
    Ok(system)
}
