use std::collections::VecDeque;

use super::{GraphError, SinkedGraph, VertexId};

/// Graph distance from `source` to every non-sink vertex, `None` where
/// unreachable without passing through a sink.
pub fn distance_map(g: &SinkedGraph, source: VertexId) -> Result<Vec<Option<u32>>, GraphError> {
    g.check_vertex(source)?;
    let mut dist = vec![None; g.n_vertices()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap() + 1;
        for &u in g.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(d);
                queue.push_back(u);
            }
        }
    }
    Ok(dist)
}

/// Number of vertices within distance `r` of `source`.
pub fn ball_size(g: &SinkedGraph, source: VertexId, r: u32) -> Result<usize, GraphError> {
    Ok(distance_map(g, source)?.iter().filter(|d| matches!(d, Some(d) if *d <= r)).count())
}

/// Number of edges with both endpoints within distance `r` of `source`.
pub fn edges_within(g: &SinkedGraph, source: VertexId, r: u32) -> Result<usize, GraphError> {
    let dist = distance_map(g, source)?;
    let inside = |v: VertexId| matches!(dist[v], Some(d) if d <= r);
    Ok(g.edges().into_iter().filter(|&(u, v)| inside(u) && inside(v)).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build, Family, FamilySpec};

    #[test]
    fn path_distances() {
        let g = SinkedGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)], vec![1, 0, 0, 1], vec![]).unwrap();
        assert_eq!(distance_map(&g, 0).unwrap(), vec![Some(0), Some(1), Some(2), Some(3)]);
        assert_eq!(ball_size(&g, 1, 1).unwrap(), 3);
        assert_eq!(edges_within(&g, 1, 1).unwrap(), 2);
        assert!(distance_map(&g, 9).is_err());
    }

    #[test]
    fn sg_balls_around_bottom_center() {
        let g = build(FamilySpec::sinked(Family::Sg, 6)).unwrap();
        let v0 = g.center().unwrap();
        for k in 1..=4 {
            let r = 1 << k;
            assert_eq!(ball_size(&g, v0, r).unwrap(), 3usize.pow(k + 1) + 2);
            assert_eq!(edges_within(&g, v0, r).unwrap(), 6 * 3usize.pow(k));
        }
    }
}
