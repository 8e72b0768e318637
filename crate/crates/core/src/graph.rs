//! Level-`m` graph approximations `Gamma_m` with cell-edge lengths.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::curves::{EdgeLengthTable, DEFAULT_REFINEMENT};
use crate::error::{GasketError, Result};
use crate::ifs::{Geometry, Ifs, Vec2};
use crate::word::{EdgeId, Side, VertexId, Word};

/// Limits on graph construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Refinement of harmonic edge polylines (ignored for Euclidean graphs).
    pub refinement: usize,
    /// Maximum number of edges, `3^(m+1)`.
    pub max_edges: u64,
    /// Maximum number of chord evaluations, `3^(m+1) * 2^k`, for harmonic graphs.
    pub max_chords: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            refinement: DEFAULT_REFINEMENT,
            max_edges: 3u64.pow(13),
            max_chords: 1 << 31,
        }
    }
}

impl BuildOptions {
    pub fn with_refinement(refinement: usize) -> Self {
        BuildOptions {
            refinement,
            ..Default::default()
        }
    }

    pub fn check(&self, geometry: Geometry, level: usize) -> Result<()> {
        let edges = edge_count(level);
        if level > 40 || edges > self.max_edges {
            return Err(GasketError::BudgetExceeded {
                what: "edges",
                requested: edges,
                limit: self.max_edges,
            });
        }
        if geometry == Geometry::Harmonic {
            let chords = edges.saturating_mul(1u64 << self.refinement.min(63));
            if chords > self.max_chords {
                return Err(GasketError::BudgetExceeded {
                    what: "chord evaluations",
                    requested: chords,
                    limit: self.max_chords,
                });
            }
        }
        Ok(())
    }
}

/// `3^(m+1)`.
pub fn edge_count(level: usize) -> u64 {
    3u64.saturating_pow(level as u32 + 1)
}

/// `(3^(m+1) + 3) / 2`.
pub fn vertex_count(level: usize) -> u64 {
    (edge_count(level) + 3) / 2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub id: EdgeId,
    pub length: f64,
    /// Indices into [`LengthGraph::vertices`], in side traversal order.
    pub ends: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LengthGraph {
    pub level: usize,
    pub geometry: Geometry,
    /// Polyline refinement behind harmonic lengths; `None` when exact.
    pub refinement: Option<usize>,
    vertices: Vec<VertexId>,
    coords: Vec<Vec2>,
    index: HashMap<VertexId, usize>,
    edges: Vec<GraphEdge>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

/// Builds `Gamma_m` for either geometry.
pub fn build_length_graph(geometry: Geometry, level: usize, opts: &BuildOptions) -> Result<LengthGraph> {
    opts.check(geometry, level)?;
    let table = EdgeLengthTable::build(geometry, level, opts.refinement)?;
    LengthGraph::from_table(&table, level)
}

impl LengthGraph {
    /// Graph at `level` with lengths looked up in `table`.
    pub fn from_table(table: &EdgeLengthTable, level: usize) -> Result<Self> {
        let lengths = table.level(level).ok_or_else(|| {
            GasketError::InvalidArgument(format!(
                "length table stops at level {}, level {level} requested",
                table.max_level()
            ))
        })?;
        Self::from_lengths(table.geometry, level, table.refinement, |i, _| lengths[i])
    }

    /// Graph at `level` whose `i`-th edge (enumeration order) gets `length(i, id)`.
    pub fn from_lengths(
        geometry: Geometry,
        level: usize,
        refinement: Option<usize>,
        mut length: impl FnMut(usize, &EdgeId) -> f64,
    ) -> Result<Self> {
        let ifs = Ifs::for_geometry(geometry);
        let mut ids: Vec<EdgeId> = Vec::with_capacity(edge_count(level) as usize);
        for w in Word::all_of_length(level) {
            for side in Side::ALL {
                ids.push(EdgeId::new(w.clone(), side));
            }
        }

        let mut vertices: Vec<VertexId> = ids
            .iter()
            .flat_map(|e| {
                let (a, b) = e.endpoints();
                [a, b]
            })
            .collect();
        vertices.sort();
        vertices.dedup();
        let index: HashMap<VertexId, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let coords = vertices
            .iter()
            .map(|v| ifs.vertex_point(v.word(), v.corner()))
            .collect();

        let mut adjacency = vec![Vec::new(); vertices.len()];
        let mut edges = Vec::with_capacity(ids.len());
        for (i, id) in ids.into_iter().enumerate() {
            let alpha = length(i, &id);
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(GasketError::Invariant(format!("edge {id} has length {alpha}")));
            }
            let (a, b) = id.endpoints();
            let ends = (index[&a], index[&b]);
            adjacency[ends.0].push((ends.1, i));
            adjacency[ends.1].push((ends.0, i));
            edges.push(GraphEdge { id, length: alpha, ends });
        }

        Ok(LengthGraph {
            level,
            geometry,
            refinement,
            vertices,
            coords,
            index,
            edges,
            adjacency,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// Ambient coordinates (plane for Euclidean, `(u_1, u_2)` for harmonic).
    pub fn coords(&self) -> &[Vec2] {
        &self.coords
    }

    pub fn vertex_index(&self, v: &VertexId) -> Result<usize> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| GasketError::VertexNotInGraph(v.to_string(), self.level))
    }

    /// `(neighbour, edge index)` pairs at vertex `i`.
    /// Position of a level-`m` edge in [`LengthGraph::edges`].
    pub fn edge_index(&self, e: &EdgeId) -> Result<usize> {
        if e.level() != self.level {
            return Err(GasketError::InvalidArgument(format!(
                "edge {e} is not an edge of the level-{} graph",
                self.level
            )));
        }
        Ok(3 * e.cell.index() + e.side.index())
    }

    pub fn neighbours(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn min_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min)
    }

    pub fn max_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(0.0, f64::max)
    }

    /// Same graph with every length multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(GasketError::InvalidArgument(format!("scale factor {c}")));
        }
        let mut out = self.clone();
        for e in &mut out.edges {
            e.length *= c;
        }
        Ok(out)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &(j, _) in &self.adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
