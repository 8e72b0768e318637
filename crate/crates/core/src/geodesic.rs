//! Shortest paths on a [`LengthGraph`]: geodesics as concatenations of
//! cell edges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{GasketError, Result};
use crate::graph::LengthGraph;
use crate::word::{EdgeId, VertexId};

/// Relative slack when deciding whether an edge lies on a shortest path.
const ON_PATH_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Entry {
    dist: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on vertex index
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distances from vertex `source` (by index) to every vertex.
pub fn dijkstra(graph: &LengthGraph, source: usize) -> Vec<f64> {
    let n = graph.vertices().len();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        vertex: source,
    });
    while let Some(Entry { dist: d, vertex: u }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, e) in graph.neighbours(u) {
            let nd = d + graph.edges()[e].length;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Entry { dist: nd, vertex: v });
            }
        }
    }
    dist
}

/// Shortest-path distance between two vertices of the graph.
pub fn geodesic_distance(p: &VertexId, q: &VertexId, graph: &LengthGraph) -> Result<f64> {
    let (ip, iq) = (graph.vertex_index(p)?, graph.vertex_index(q)?);
    let d = dijkstra(graph, ip)[iq];
    if !d.is_finite() {
        return Err(GasketError::Invariant(format!("{q} unreachable from {p}")));
    }
    Ok(d)
}

/// All-pairs distance matrix, row `i` = distances from vertex `i`.
pub fn distance_matrix(graph: &LengthGraph) -> Vec<Vec<f64>> {
    (0..graph.vertices().len()).map(|i| dijkstra(graph, i)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub from: VertexId,
    pub to: VertexId,
    pub edges: Vec<EdgeId>,
    pub length: f64,
}

/// A shortest path from `p` to `q`. Among all shortest paths the
/// lexicographically smallest edge sequence is returned.
pub fn geodesic_path(p: &VertexId, q: &VertexId, graph: &LengthGraph) -> Result<GeodesicPath> {
    let (ip, iq) = (graph.vertex_index(p)?, graph.vertex_index(q)?);
    let from_p = dijkstra(graph, ip);
    let to_q = dijkstra(graph, iq);
    let total = from_p[iq];
    if !total.is_finite() {
        return Err(GasketError::Invariant(format!("{q} unreachable from {p}")));
    }
    let slack = ON_PATH_RTOL * total.max(f64::MIN_POSITIVE);

    let mut edges = Vec::new();
    let mut length = 0.0;
    let mut at = ip;
    while at != iq {
        // the smallest edge id out of `at` that stays on some shortest path
        let next = graph
            .neighbours(at)
            .iter()
            .filter(|&&(v, e)| {
                let alpha = graph.edges()[e].length;
                from_p[at] + alpha <= from_p[v] + slack
                    && from_p[at] + alpha + to_q[v] <= total + slack
            })
            .min_by(|a, b| graph.edges()[a.1].id.cmp(&graph.edges()[b.1].id))
            .copied();
        let Some((v, e)) = next else {
            return Err(GasketError::Invariant(format!(
                "no shortest-path edge leaves {} towards {q}",
                graph.vertices()[at]
            )));
        };
        edges.push(graph.edges()[e].id.clone());
        length += graph.edges()[e].length;
        at = v;
        if edges.len() > graph.edges().len() {
            return Err(GasketError::Invariant("path reconstruction looped".into()));
        }
    }
    Ok(GeodesicPath {
        from: p.clone(),
        to: q.clone(),
        edges,
        length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_length_graph, BuildOptions};
    use crate::ifs::Geometry;
    use crate::word::{Side, Word};

    fn v(s: &str) -> VertexId {
        s.parse().unwrap()
    }

    fn euclid(level: usize) -> LengthGraph {
        build_length_graph(Geometry::Euclidean, level, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn trivial_distances() {
        let g = euclid(2);
        assert_eq!(geodesic_distance(&v("0:1"), &v("0:1"), &g).unwrap(), 0.0);
        for level in 0..5 {
            let g = euclid(level);
            assert_eq!(geodesic_distance(&v("0:1"), &v("0:2"), &g).unwrap(), 1.0);
        }
    }

    #[test]
    fn adjacent_midpoints() {
        let g = euclid(1);
        // midpoints of p_1p_2 and p_1p_3 share the level-1 edge 1/r
        assert_eq!(geodesic_distance(&v("1:2"), &v("1:3"), &g).unwrap(), 0.5);
    }

    #[test]
    fn unknown_vertex_is_an_error() {
        let g = euclid(1);
        assert!(matches!(
            geodesic_distance(&v("12:3"), &v("0:1"), &g),
            Err(GasketError::VertexNotInGraph(..))
        ));
    }

    #[test]
    fn base_paths() {
        let p = geodesic_path(&v("0:1"), &v("0:2"), &euclid(0)).unwrap();
        assert_eq!(p.edges, vec![EdgeId::new(Word::empty(), Side::B)]);
        let p = geodesic_path(&v("0:1"), &v("0:2"), &euclid(2)).unwrap();
        let names: Vec<String> = p.edges.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["11/b", "12/b", "21/b", "22/b"]);
        assert_eq!(p.length, 1.0);
    }

    #[test]
    fn ties_resolve_to_smallest_sequence() {
        // 0:1 -> 2:3 at level 2: two routes of length 1, along the bottom
        // (starting 11/b) or through 1:3 (starting 11/l); l sorts first.
        let g = euclid(2);
        let p = geodesic_path(&v("0:1"), &v("2:3"), &g).unwrap();
        assert_eq!(p.length, 1.0);
        let first = p.edges[0].to_string();
        assert_eq!(first, "11/l");
    }
}
