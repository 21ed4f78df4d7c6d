//! Finite sinked graph approximations of p.c.f. fractals.
//!
//! Sinks are never materialized: every non-sink vertex carries the number of
//! edges it has to the (possibly several) sinks. Vertex ids are contiguous,
//! 0-based and deterministic for a given [`FamilySpec`].

mod builders;
mod cuts;
mod ifs;
mod metric;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::IntegerMatrix;

pub use builders::{build, triangle_chain};
pub use cuts::{junction_cuts, Cut, CutSystem};
pub use metric::{ball_size, distance_map, edges_within};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Sierpinski gasket vertex graph.
    #[serde(rename = "SG")]
    Sg,
    /// Sierpinski gasket cell graph: one vertex per cell.
    #[serde(rename = "SGC")]
    Sgc,
    /// Hexagasket.
    #[serde(rename = "HG")]
    Hg,
    /// Pentagasket.
    #[serde(rename = "PG")]
    Pg,
    /// Mitsubishi gasket.
    #[serde(rename = "MG")]
    Mg,
    /// Ring of level-1 triangles used by the SGC identity argument.
    #[serde(rename = "TRIANGLE_CHAIN")]
    TriangleChain,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Sg,
        Family::Sgc,
        Family::Hg,
        Family::Pg,
        Family::Mg,
        Family::TriangleChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sg => "sg",
            Family::Sgc => "sgc",
            Family::Hg => "hg",
            Family::Pg => "pg",
            Family::Mg => "mg",
            Family::TriangleChain => "triangle-chain",
        }
    }

    /// Exponent `D` in the growth law `R = Θ(N^{1/D})` measured in the graph
    /// metric. For PG this is the resistance-type exponent, not the Euclidean
    /// dimension.
    pub fn growth_exponent(self) -> Option<f64> {
        match self {
            Family::Sg => Some(3f64.ln() / 2f64.ln()),
            Family::Hg => Some(6f64.ln() / 3f64.ln()),
            Family::Mg => Some(6f64.ln() / 2f64.ln()),
            Family::Pg => Some(5f64.ln() / (1.0 + 3f64.sqrt()).ln()),
            Family::Sgc | Family::TriangleChain => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == lower || (lower == "triangle_chain" && *f == Family::TriangleChain))
            .ok_or_else(|| GraphError::Config(format!("unknown family `{s}`")))
    }
}

/// How the outer boundary of an approximation is attached to the sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Boundary {
    /// Each boundary corner is its own sink. For SGC the three corner cells
    /// stay in the graph and each carries one sink edge.
    CornerSinks,
    /// All boundary corners merged into one sink. Same reduced Laplacian as
    /// [`Boundary::CornerSinks`].
    CollapsedSink,
    /// Boundary corners stay in the graph and receive sink edges bringing them
    /// up to the interior degree (SG: two per corner; SGC: one per corner cell).
    Normal,
    /// SGC only: the three corner cells themselves become sinks.
    CornerCells,
}

impl Boundary {
    pub const ALL: [Boundary; 4] = [
        Boundary::CornerSinks,
        Boundary::CollapsedSink,
        Boundary::Normal,
        Boundary::CornerCells,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Boundary::CornerSinks => "corner-sinks",
            Boundary::CollapsedSink => "collapsed",
            Boundary::Normal => "normal",
            Boundary::CornerCells => "corner-cells",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Boundary {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase().replace('_', "-");
        match lower.as_str() {
            "corner-sinks" => Ok(Boundary::CornerSinks),
            "collapsed" | "collapsed-sink" => Ok(Boundary::CollapsedSink),
            "normal" => Ok(Boundary::Normal),
            "corner-cells" => Ok(Boundary::CornerCells),
            _ => Err(GraphError::Config(format!("unknown boundary `{s}`"))),
        }
    }
}

/// Which graph to build: family, approximation level (chain length for
/// [`Family::TriangleChain`]) and boundary treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub level: u32,
    pub boundary: Boundary,
}

impl FamilySpec {
    pub fn new(family: Family, level: u32, boundary: Boundary) -> Self {
        FamilySpec { family, level, boundary }
    }

    pub fn sinked(family: Family, level: u32) -> Self {
        Self::new(family, level, Boundary::CornerSinks)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]/{}", self.family, self.level, self.boundary)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("vertex {0} has no path to a sink")]
    NoSinkPath(VertexId),
    #[error("graph has no non-sink vertices")]
    Empty,
    #[error("level {level} exceeds the cap of {cap}")]
    LevelCap { level: u32, cap: u32 },
}

/// A marker for one corner of the embedding: either a real vertex or a sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Corner {
    Vertex(VertexId),
    Sink { sink: usize },
}

/// Immutable undirected multigraph over non-sink vertices plus per-vertex
/// sink-edge multiplicities. Adjacency is stored in CSR form.
#[derive(Debug, Clone, PartialEq)]
pub struct SinkedGraph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    sink_edges: Vec<u32>,
    degree: Vec<u32>,
    coords: Vec<[f64; 2]>,
    corners: Vec<Corner>,
    center: Option<VertexId>,
    n_sinks: usize,
    spec: Option<FamilySpec>,
}

impl SinkedGraph {
    /// Assembles a graph from an undirected edge list among `n` non-sink
    /// vertices and per-vertex sink multiplicities. Parallel edges are kept;
    /// self-loops are rejected, as is any vertex that cannot reach a sink.
    pub fn from_edges(
        n: usize,
        edges: &[(VertexId, VertexId)],
        sink_edges: Vec<u32>,
        coords: Vec<[f64; 2]>,
    ) -> Result<Self, GraphError> {
        if sink_edges.len() != n {
            return Err(GraphError::Malformed(format!(
                "{} sink multiplicities for {n} vertices",
                sink_edges.len()
            )));
        }
        if !coords.is_empty() && coords.len() != n {
            return Err(GraphError::Malformed(format!("{} coordinates for {n} vertices", coords.len())));
        }
        let mut counts = vec![0usize; n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Malformed(format!("self-loop at vertex {u}")));
            }
            counts[u] += 1;
            counts[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for c in &counts {
            offsets.push(offsets.last().unwrap() + c);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        let mut degree = Vec::with_capacity(n);
        for v in 0..n {
            let d = (offsets[v + 1] - offsets[v]) as u64 + u64::from(sink_edges[v]);
            degree.push(u32::try_from(d).map_err(|_| GraphError::Malformed(format!("degree overflow at {v}")))?);
        }
        let g = SinkedGraph {
            offsets,
            targets,
            sink_edges,
            degree,
            coords,
            corners: Vec::new(),
            center: None,
            n_sinks: 1,
            spec: None,
        };
        g.check_drains()?;
        Ok(g)
    }

    pub(crate) fn with_metadata(
        mut self,
        spec: Option<FamilySpec>,
        corners: Vec<Corner>,
        center: Option<VertexId>,
        n_sinks: usize,
    ) -> Self {
        self.spec = spec;
        self.corners = corners;
        self.center = center;
        self.n_sinks = n_sinks;
        self
    }

    fn check_drains(&self) -> Result<(), GraphError> {
        // multi-source BFS backwards from every sink-adjacent vertex
        let n = self.n_vertices();
        let mut seen = vec![false; n];
        let mut queue: std::collections::VecDeque<VertexId> =
            (0..n).filter(|&v| self.sink_edges[v] > 0).collect();
        for &v in &queue {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(GraphError::NoSinkPath(v)),
            None => Ok(()),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }

    /// Non-sink neighbors of `v`, repeated once per parallel edge.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> u32 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }

    #[inline]
    pub fn sink_multiplicity(&self, v: VertexId) -> u32 {
        self.sink_edges[v]
    }

    pub fn sink_multiplicities(&self) -> &[u32] {
        &self.sink_edges
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn has_coords(&self) -> bool {
        !self.is_empty() && self.coords.len() == self.n_vertices()
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    /// Designated drop vertex `v0`, if the family defines one.
    pub fn center(&self) -> Option<VertexId> {
        self.center
    }

    pub fn n_sinks(&self) -> usize {
        self.n_sinks
    }

    pub fn spec(&self) -> Option<FamilySpec> {
        self.spec
    }

    /// Number of undirected edges among non-sink vertices.
    pub fn n_edges(&self) -> usize {
        self.targets.len() / 2
    }

    /// Undirected edges `(u, v)` with `u < v`, one entry per parallel edge,
    /// sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.n_edges());
        for u in 0..self.n_vertices() {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Number of edges between `u` and `v`.
    pub fn edge_multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        let nb = self.neighbors(u);
        let start = nb.partition_point(|&w| w < v);
        nb[start..].iter().take_while(|&&w| w == v).count()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n_vertices() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex { vertex: v, n: self.n_vertices() })
        }
    }

    /// Vertices with at least one sink edge.
    pub fn boundary_vertices(&self) -> Vec<VertexId> {
        (0..self.n_vertices()).filter(|&v| self.sink_edges[v] > 0).collect()
    }

    /// The subgraph on `keep` where every vertex outside `keep` becomes a sink.
    /// Returns the graph and, for each new id, the original id. Existing sink
    /// edges are kept.
    pub fn restricted(&self, keep: &[VertexId]) -> Result<(SinkedGraph, Vec<VertexId>), GraphError> {
        let n = self.n_vertices();
        let mut new_id = vec![usize::MAX; n];
        let mut order: Vec<VertexId> = keep.to_vec();
        order.sort_unstable();
        order.dedup();
        for (i, &v) in order.iter().enumerate() {
            self.check_vertex(v)?;
            new_id[v] = i;
        }
        let mut sink_edges = Vec::with_capacity(order.len());
        let mut edges = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            let mut s = self.sink_edges[v];
            for &u in self.neighbors(v) {
                if new_id[u] == usize::MAX {
                    s += 1;
                } else if i < new_id[u] {
                    edges.push((i, new_id[u]));
                }
            }
            sink_edges.push(s);
        }
        let coords = if self.has_coords() { order.iter().map(|&v| self.coords[v]).collect() } else { Vec::new() };
        let center = self.center.and_then(|c| (new_id[c] != usize::MAX).then_some(new_id[c]));
        let g = SinkedGraph::from_edges(order.len(), &edges, sink_edges, coords)?.with_metadata(
            None,
            Vec::new(),
            center,
            1,
        );
        Ok((g, order))
    }

    /// Square matrix over non-sink vertices: degree on the diagonal (sink
    /// edges included), minus the edge multiplicity off the diagonal.
    pub fn reduced_laplacian(&self) -> Result<IntegerMatrix, GraphError> {
        if self.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = self.n_vertices();
        let mut m = IntegerMatrix::zeros(n);
        for v in 0..n {
            m.set(v, v, i64::from(self.degree[v]));
            for &u in self.neighbors(v) {
                m.add(v, u, -1);
            }
        }
        Ok(m)
    }
}

/// Bottom-edge midpoint of an SG approximation of level ≥ 1.
pub fn bottom_center_vertex(g: &SinkedGraph) -> Result<VertexId, GraphError> {
    match g.spec() {
        Some(FamilySpec { family: Family::Sg, level, .. }) if level >= 1 => {
            g.center().ok_or_else(|| GraphError::Config("SG graph without a bottom center".into()))
        }
        Some(spec) => Err(GraphError::Config(format!("no bottom-center vertex defined for {spec}"))),
        None => Err(GraphError::Config("no bottom-center vertex defined for a derived graph".into())),
    }
}

/// Non-sink vertex count of SG level `n` with corner sinks: `3(3^n+1)/2 − 3`.
pub fn sg_vertex_count(level: u32) -> usize {
    let p = 3usize.pow(level);
    3 * (p + 1) / 2 - 3
}
