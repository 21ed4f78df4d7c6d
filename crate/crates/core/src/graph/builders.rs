use super::ifs::{CellStructure, Layout};
use super::{Boundary, Corner, Family, FamilySpec, GraphError, SinkedGraph, VertexId};

/// Largest number of point slots a single build may allocate.
const MAX_SLOTS: usize = 1 << 26;

/// Builds the canonical graph for `spec`. Identical specs give identical
/// graphs, id for id.
pub fn build(spec: FamilySpec) -> Result<SinkedGraph, GraphError> {
    match spec.family {
        Family::TriangleChain => {
            if !matches!(spec.boundary, Boundary::CornerSinks | Boundary::CollapsedSink) {
                return Err(unsupported(spec));
            }
            if spec.level == 0 {
                return Err(GraphError::Config("a triangle chain needs t ≥ 1".into()));
            }
            let g = triangle_chain(spec.level as usize)?;
            let corners = g.corners().to_vec();
            let n_sinks = if spec.boundary == Boundary::CollapsedSink { 1 } else { spec.level as usize };
            Ok(g.with_metadata(Some(spec), corners, None, n_sinks))
        }
        Family::Sgc => build_cell_graph(spec),
        Family::Sg | Family::Hg | Family::Pg | Family::Mg => build_vertex_graph(spec).map(|(g, _)| g),
    }
}

fn unsupported(spec: FamilySpec) -> GraphError {
    GraphError::Config(format!(
        "boundary `{}` is not supported for family `{}`",
        spec.boundary, spec.family
    ))
}

fn check_size(cs: &CellStructure, level: u32) -> Result<(), GraphError> {
    let fits = |l: u32| {
        (cs.maps as u128).checked_pow(l).map(|c| c * cs.n_boundary() as u128 <= MAX_SLOTS as u128).unwrap_or(false)
    };
    if fits(level) {
        Ok(())
    } else {
        let cap = (0..level).rev().find(|&l| fits(l)).unwrap_or(0);
        Err(GraphError::LevelCap { level, cap })
    }
}

/// Vertex graph plus the mapping from layout points to vertex ids
/// (`None` for sinks).
pub(crate) fn build_vertex_graph(
    spec: FamilySpec,
) -> Result<(SinkedGraph, VertexMap), GraphError> {
    let cs = CellStructure::for_family(spec.family).ok_or_else(|| unsupported(spec))?;
    let extra_corner_edges = match (spec.family, spec.boundary) {
        (_, Boundary::CornerSinks | Boundary::CollapsedSink) => None,
        (Family::Sg, Boundary::Normal) => Some(2),
        _ => return Err(unsupported(spec)),
    };
    check_size(&cs, spec.level)?;
    let layout = cs.layout(spec.level);
    let mut is_sink = vec![false; layout.n_points];
    if extra_corner_edges.is_none() {
        for &p in &layout.corner_points {
            is_sink[p] = true;
        }
    }
    let mut vertex_of = vec![None; layout.n_points];
    let mut n = 0;
    for p in 0..layout.n_points {
        if !is_sink[p] {
            vertex_of[p] = Some(n);
            n += 1;
        }
    }
    let mut sink_edges = vec![0u32; n];
    if let Some(extra) = extra_corner_edges {
        for &p in &layout.corner_points {
            sink_edges[vertex_of[p].unwrap()] += extra;
        }
    }
    let mut edges = Vec::with_capacity(layout.n_cells() * cs.base_edges.len());
    for cell in 0..layout.n_cells() {
        for &(a, b) in &cs.base_edges {
            let (pa, pb) = (layout.slot(cell, a), layout.slot(cell, b));
            match (vertex_of[pa], vertex_of[pb]) {
                (Some(u), Some(v)) => edges.push((u, v)),
                (Some(u), None) => sink_edges[u] += 1,
                (None, Some(v)) => sink_edges[v] += 1,
                (None, None) => {}
            }
        }
    }
    let all_coords = cs.point_coords(&layout);
    let coords = (0..layout.n_points).filter(|&p| !is_sink[p]).map(|p| all_coords[p]).collect();
    let corners = layout
        .corner_points
        .iter()
        .enumerate()
        .map(|(a, &p)| match (vertex_of[p], spec.boundary) {
            (Some(v), _) => Corner::Vertex(v),
            (None, Boundary::CollapsedSink) => Corner::Sink { sink: 0 },
            (None, _) => Corner::Sink { sink: a },
        })
        .collect();
    let center = if spec.level == 0 {
        None
    } else {
        let ((i, a), _) = cs.gluing[0];
        let below = cs.maps.pow(spec.level - 1);
        let tail = if spec.level == 1 { 0 } else { a * (below - 1) / (cs.maps - 1) };
        vertex_of[layout.slot(i * below + tail, a)]
    };
    let n_sinks = match spec.boundary {
        Boundary::CollapsedSink => 1,
        _ => cs.n_boundary(),
    };
    let g = SinkedGraph::from_edges(n, &edges, sink_edges, coords)?.with_metadata(Some(spec), corners, center, n_sinks);
    Ok((g, VertexMap { layout, vertex_of }))
}

pub(crate) struct VertexMap {
    pub layout: Layout,
    pub vertex_of: Vec<Option<VertexId>>,
}

fn build_cell_graph(spec: FamilySpec) -> Result<SinkedGraph, GraphError> {
    let cs = CellStructure::for_family(Family::Sgc).expect("gasket structure");
    check_size(&cs, spec.level)?;
    let n = spec.level;
    let cells = 3usize.pow(n);
    let corner_cell = |a: usize| if n == 0 { 0 } else { a * (cells - 1) / 2 };
    let mut edges = Vec::new();
    for k in 0..n {
        let r = n - k - 1;
        let tail = 3usize.pow(r);
        let rep = |a: usize| if r == 0 { 0 } else { a * (tail - 1) / 2 };
        for u in 0..3usize.pow(k) {
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let x = (u * 3 + a) * tail + rep(b);
                let y = (u * 3 + b) * tail + rep(a);
                edges.push((x.min(y), x.max(y)));
            }
        }
    }
    edges.sort_unstable();
    let mut sink_edges = vec![0u32; cells];
    for a in 0..3 {
        sink_edges[corner_cell(a)] += 1;
    }
    let coords = cs
        .cell_affines(n)
        .iter()
        .map(|f| {
            let pts: Vec<[f64; 2]> = cs.points.iter().map(|&p| CellStructure::apply(f, p)).collect();
            [(pts[0][0] + pts[1][0] + pts[2][0]) / 3.0, (pts[0][1] + pts[1][1] + pts[2][1]) / 3.0]
        })
        .collect();
    let base = SinkedGraph::from_edges(cells, &edges, sink_edges, coords)?;
    match spec.boundary {
        Boundary::CornerSinks | Boundary::Normal | Boundary::CollapsedSink => {
            let corners = (0..3).map(|a| Corner::Vertex(corner_cell(a))).collect();
            let n_sinks = if spec.boundary == Boundary::CollapsedSink { 1 } else { 3 };
            Ok(base.with_metadata(Some(spec), corners, None, n_sinks))
        }
        Boundary::CornerCells => {
            let corner_ids: Vec<usize> = (0..3).map(corner_cell).collect();
            let keep: Vec<usize> = (0..cells).filter(|c| !corner_ids.contains(c)).collect();
            let (g, _) = base.restricted(&keep)?;
            let corners = (0..3).map(|a| Corner::Sink { sink: a }).collect();
            Ok(g.with_metadata(Some(spec), corners, None, 3))
        }
    }
}

/// Closed ring of `t` level-1 triangles. Triangle `i` has an outer vertex
/// `3i` with one sink edge and inner vertices `3i+1`, `3i+2`; vertex `3i+2`
/// is joined to `3(i+1)+1` (indices mod `t`). For `t = 1` the two inner
/// vertices are joined by a double edge, so every vertex has degree 3.
pub fn triangle_chain(t: usize) -> Result<SinkedGraph, GraphError> {
    if t == 0 {
        return Err(GraphError::Config("a triangle chain needs t ≥ 1".into()));
    }
    let n = 3 * t;
    let mut edges = Vec::with_capacity(4 * t);
    let mut sink_edges = vec![0u32; n];
    let mut coords = Vec::with_capacity(n);
    let tau = std::f64::consts::TAU;
    let spread = std::f64::consts::PI / (t as f64 + 1.0) * 0.6;
    for i in 0..t {
        let (o, a, b) = (3 * i, 3 * i + 1, 3 * i + 2);
        edges.extend([(o, a), (o, b), (a, b), (b, 3 * ((i + 1) % t) + 1)]);
        sink_edges[o] = 1;
        let theta = tau / 4.0 - tau * i as f64 / t as f64;
        let at = |r: f64, th: f64| [r * th.cos(), r * th.sin()];
        coords.push(at(1.6, theta));
        coords.push(at(1.0, theta + spread));
        coords.push(at(1.0, theta - spread));
    }
    let min_x = coords.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let max_x = coords.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let min_y = coords.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let w = (max_x - min_x).max(1e-12);
    let coords = coords.into_iter().map(|p| [(p[0] - min_x) / w, (p[1] - min_y) / w]).collect();
    let corners = (0..t).map(|i| Corner::Vertex(3 * i)).collect();
    let spec = FamilySpec::new(Family::TriangleChain, t as u32, Boundary::CornerSinks);
    Ok(SinkedGraph::from_edges(n, &edges, sink_edges, coords)?.with_metadata(Some(spec), corners, None, t))
}
