//! The spectral distance `sup { |f(p) - f(q)| : ||D f||_inf <= 1 }` on a
//! graph approximation.
//!
//! On `Gamma_m` the commutator condition becomes one Lipschitz constraint per
//! edge, `|f(u) - f(v)| <= alpha_uv`, so the supremum is the optimum of a
//! difference-constraint linear program. [`LipschitzProgram::solve`] finds
//! it by label-correcting relaxation of the constraint system; a generic
//! simplex solve is kept as an independent check on small graphs.

use std::collections::{BTreeMap, VecDeque};

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::{GasketError, Result};
use crate::geodesic::{dijkstra, distance_matrix};
use crate::graph::LengthGraph;
use crate::harmonic::VertexFunction;
use crate::word::VertexId;

/// Largest graph handed to the generic LP solver.
pub const ORACLE_MAX_VERTICES: usize = 30;

/// Constraint slack accepted when checking feasibility.
const FEASIBILITY_RTOL: f64 = 1e-12;

/// Maximise `f(target) - f(source)` subject to `|f(u) - f(v)| <= alpha_uv`
/// on every edge.
#[derive(Clone, Copy, Debug)]
pub struct LipschitzProgram<'g> {
    pub graph: &'g LengthGraph,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzSolution {
    pub value: f64,
    /// Optimal `f` with `f(source) = 0`, indexed like the graph's vertices.
    pub potential: Vec<f64>,
}

impl<'g> LipschitzProgram<'g> {
    pub fn new(graph: &'g LengthGraph, p: &VertexId, q: &VertexId) -> Result<Self> {
        Ok(LipschitzProgram {
            graph,
            source: graph.vertex_index(p)?,
            target: graph.vertex_index(q)?,
        })
    }

    /// Constraint count: two per edge.
    pub fn constraint_count(&self) -> usize {
        2 * self.graph.edges().len()
    }

    /// Largest feasible potential pinned at `f(source) = 0`.
    ///
    /// Each constraint `f(v) <= f(u) + alpha_uv` is relaxed until none is
    /// violated; the result is the pointwise largest feasible `f`, so it
    /// maximises `f(target)` for every target at once.
    pub fn solve(&self) -> Result<LipschitzSolution> {
        let n = self.graph.vertices().len();
        let mut f = vec![f64::INFINITY; n];
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        f[self.source] = 0.0;
        queue.push_back(self.source);
        queued[self.source] = true;
        let mut relaxations = 0usize;
        let limit = n.saturating_mul(self.graph.edges().len()).max(16) * 2;
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            for &(v, e) in self.graph.neighbours(u) {
                let bound = f[u] + self.graph.edges()[e].length;
                if bound < f[v] {
                    f[v] = bound;
                    relaxations += 1;
                    if !queued[v] {
                        queued[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            if relaxations > limit {
                return Err(GasketError::Invariant("constraint relaxation did not settle".into()));
            }
        }
        if f.iter().any(|x| !x.is_finite()) {
            return Err(GasketError::Invariant("graph is not connected".into()));
        }
        let solution = LipschitzSolution {
            value: f[self.target] - f[self.source],
            potential: f,
        };
        let violation = self.max_violation(&solution.potential);
        if violation > FEASIBILITY_RTOL * solution.value.abs().max(1.0) {
            return Err(GasketError::Invariant(format!(
                "relaxed potential violates a constraint by {violation}"
            )));
        }
        Ok(solution)
    }

    /// Largest `|f(u) - f(v)| - alpha_uv` over the edges (`<= 0` when feasible).
    pub fn max_violation(&self, f: &[f64]) -> f64 {
        self.graph
            .edges()
            .iter()
            .map(|e| (f[e.ends.0] - f[e.ends.1]).abs() - e.length)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Generic simplex solve on the bounded polytope `|f| <= sum of lengths`.
    pub fn solve_with_lp(&self) -> Result<f64> {
        let n = self.graph.vertices().len();
        if n > ORACLE_MAX_VERTICES {
            return Err(GasketError::BudgetExceeded {
                what: "oracle vertices",
                requested: n as u64,
                limit: ORACLE_MAX_VERTICES as u64,
            });
        }
        if self.source == self.target {
            return Ok(0.0);
        }
        let radius: f64 = self.graph.edges().iter().map(|e| e.length).sum();
        let mut problem = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = (0..n)
            .map(|i| {
                let objective = if i == self.target { 1.0 } else { 0.0 };
                let bounds = if i == self.source { (0.0, 0.0) } else { (-radius, radius) };
                problem.add_var(objective, bounds)
            })
            .collect();
        for e in self.graph.edges() {
            let (u, v) = (vars[e.ends.0], vars[e.ends.1]);
            problem.add_constraint(&[(u, 1.0), (v, -1.0)], ComparisonOp::Le, e.length);
            problem.add_constraint(&[(v, 1.0), (u, -1.0)], ComparisonOp::Le, e.length);
        }
        let solution = problem
            .solve()
            .map_err(|err| GasketError::Invariant(format!("oracle LP failed: {err}")))?;
        Ok(solution.objective())
    }
}

/// Spectral distance between two distinct vertices of the graph.
pub fn connes_distance(p: &VertexId, q: &VertexId, graph: &LengthGraph) -> Result<f64> {
    if p == q {
        return Err(GasketError::InvalidArgument(
            "connes_distance needs two distinct vertices".into(),
        ));
    }
    Ok(LipschitzProgram::new(graph, p, q)?.solve()?.value)
}

/// The same distance from the generic LP solver (graphs up to
/// [`ORACLE_MAX_VERTICES`] vertices; `p = q` gives 0).
pub fn connes_distance_oracle(p: &VertexId, q: &VertexId, graph: &LengthGraph) -> Result<f64> {
    LipschitzProgram::new(graph, p, q)?.solve_with_lp()
}

/// `h(x) = d(p, x)`, the function that attains the supremum for every `q`.
pub fn witness_function(p: &VertexId, graph: &LengthGraph) -> Result<VertexFunction> {
    let dist = dijkstra(graph, graph.vertex_index(p)?);
    Ok(graph_function(graph, |i| dist[i]))
}

/// A vertex function built from graph vertex indices.
pub fn graph_function(graph: &LengthGraph, mut f: impl FnMut(usize) -> f64) -> VertexFunction {
    let values: BTreeMap<VertexId, f64> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), f(i)))
        .collect();
    VertexFunction::new(graph.level, values)
}

/// `a x + b y` in the graph's ambient coordinates.
pub fn linear_function(graph: &LengthGraph, a: f64, b: f64) -> VertexFunction {
    graph_function(graph, |i| {
        let c = graph.coords()[i];
        a * c.x + b * c.y
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormCheck {
    /// `max |f(u) - f(v)| / alpha_uv` over edges.
    pub edge_sup: f64,
    /// `max |f(x) - f(y)| / d(x, y)` over distinct vertex pairs.
    pub pairwise_sup: f64,
}

impl SeminormCheck {
    pub fn gap(&self) -> f64 {
        (self.edge_sup - self.pairwise_sup).abs()
    }
}

/// Edge-wise and pairwise Lipschitz constants of `f` on the graph.
pub fn seminorm_equality_check(f: &VertexFunction, graph: &LengthGraph) -> Result<SeminormCheck> {
    let values: Vec<f64> = graph
        .vertices()
        .iter()
        .map(|v| f.value(v))
        .collect::<Result<_>>()?;
    let edge_sup = graph
        .edges()
        .iter()
        .map(|e| (values[e.ends.0] - values[e.ends.1]).abs() / e.length)
        .fold(0.0, f64::max);
    let dist = distance_matrix(graph);
    let mut pairwise_sup: f64 = 0.0;
    for (i, row) in dist.iter().enumerate() {
        for j in (i + 1)..row.len() {
            pairwise_sup = pairwise_sup.max((values[i] - values[j]).abs() / row[j]);
        }
    }
    Ok(SeminormCheck {
        edge_sup,
        pairwise_sup,
    })
}
