//! Simple undirected graphs in compressed sparse adjacency form.
//!
//! A [`Graph`] is immutable once built. Vertex ids are `0..n`, every neighbor
//! list is sorted ascending, and the adjacency structure is symmetric without
//! loops or parallel edges. Everything else in the crate (lifts, spectra,
//! walks, metrics) reads graphs through this type.

mod generators;
mod io;
mod lift;
mod traversal;

pub use generators::{
    make_complete, make_cycle, make_erdos_renyi, make_petersen, make_random_regular,
    RANDOM_REGULAR_RESTARTS,
};
pub use io::{parse_graph, serialize_graph};
pub use lift::{
    bipartite_double_cover, hl2_lift, hl2_tower, line_graph, predict_tower_sizes, BipartiteCover,
    CoverEdge, DegreeInfo, Lift, Orientation, Side, Tower, TowerLevel, TowerSummary,
    DEFAULT_VERTEX_BUDGET,
};
pub use traversal::{bfs_sample, connected_components, is_bipartite, Bipartiteness, Components, Sample};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("random generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("level {level} would have {predicted_vertices} vertices, over the budget of {budget}")]
    BudgetExceeded {
        level: usize,
        predicted_vertices: u128,
        budget: usize,
    },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Immutable simple undirected graph.
///
/// Equality compares structure only; the provenance label is ignored.
#[derive(Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    label: Option<String>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints. Edge orientation is irrelevant.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::InvalidParams(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(GraphError::InvalidParams(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::InvalidParams(format!(
                    "duplicate edge ({}, {})",
                    u.min(w[0]),
                    u.max(w[0])
                )));
            }
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    /// Packs per-vertex neighbor lists that are already sorted, symmetric
    /// and simple.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let total: usize = adj.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for list in adj {
            debug_assert!(list.windows(2).all(|w| w[0] < w[1]));
            neighbors.extend(list);
            offsets.push(neighbors.len());
        }
        let g = Self {
            offsets,
            neighbors,
            label: None,
        };
        debug_assert!(g.check_symmetric());
        g
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_adjacency(vec![Vec::new(); n])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n() == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..self.n()).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Sparse product `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(v).iter().map(|&w| x[w]).sum();
        }
    }

    /// Dense column-major adjacency matrix.
    pub fn dense_adjacency(&self) -> Vec<f64> {
        let n = self.n();
        let mut a = vec![0.0; n * n];
        for (u, v) in self.edges() {
            a[u * n + v] = 1.0;
            a[v * n + u] = 1.0;
        }
        a
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<usize> = self
                    .neighbors(v)
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Self::from_sorted_adjacency(adj)
    }

    fn check_symmetric(&self) -> bool {
        (0..self.n()).all(|u| {
            self.neighbors(u)
                .iter()
                .all(|&v| v != u && self.neighbors(v).binary_search(&u).is_ok())
        })
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets && self.neighbors == other.neighbors
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .field("label", &self.label)
            .finish()
    }
}
