//! Bipartite double cover, line graph, and the symmetric lift built from them.
//!
//! The lift of `G` is the line graph of its bipartite double cover. Cover
//! vertices `0..n` are the left copies `u'` and `n..2n` the right copies
//! `u''`; the base edge `{u, v}` becomes the cover edges `u' -- v''` and
//! `v' -- u''`. Line-graph vertices follow the lexicographic order of the
//! cover edges, which makes every lift (and everything computed from it)
//! reproducible bit for bit.

use serde::Serialize;

use super::{connected_components, Graph, GraphError};
use crate::coherence::CoherenceReport;

/// Default construction budget, in vertices.
pub const DEFAULT_VERTEX_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Which of the two cover edges a base edge `{u, v}` (`u < v`) produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// `u' -- v''`
    Forward,
    /// `v' -- u''`
    Reverse,
}

/// Provenance of a cover edge, and therefore of a lift vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverEdge {
    /// Originating base edge, smaller endpoint first.
    pub base: (usize, usize),
    pub orientation: Orientation,
}

impl CoverEdge {
    /// Base vertex whose left copy the edge touches.
    pub fn tail(&self) -> usize {
        match self.orientation {
            Orientation::Forward => self.base.0,
            Orientation::Reverse => self.base.1,
        }
    }

    /// Base vertex whose right copy the edge touches.
    pub fn head(&self) -> usize {
        match self.orientation {
            Orientation::Forward => self.base.1,
            Orientation::Reverse => self.base.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BipartiteCover {
    pub graph: Graph,
    /// Side of every cover vertex.
    pub side: Vec<Side>,
    /// Origin of every cover edge, aligned with `graph.edges()`.
    pub edge_origin: Vec<CoverEdge>,
}

pub fn bipartite_double_cover(g: &Graph) -> BipartiteCover {
    let n = g.n();
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(2 * n);
    for u in 0..n {
        adj.push(g.neighbors(u).iter().map(|&v| n + v).collect());
    }
    for u in 0..n {
        adj.push(g.neighbors(u).to_vec());
    }
    let graph = Graph::from_sorted_adjacency(adj);
    // Cover edges in lexicographic order are (a', b'') for a ascending, then
    // b ascending over the neighbors of a: exactly the arcs of g in order.
    let edge_origin = (0..n)
        .flat_map(|a| {
            g.neighbors(a).iter().map(move |&b| CoverEdge {
                base: (a.min(b), a.max(b)),
                orientation: if a < b {
                    Orientation::Forward
                } else {
                    Orientation::Reverse
                },
            })
        })
        .collect();
    let side = (0..2 * n)
        .map(|v| if v < n { Side::Left } else { Side::Right })
        .collect();
    BipartiteCover {
        graph,
        side,
        edge_origin,
    }
}

/// Line graph of `b`. Vertex `i` is the `i`-th edge of `b.edges()`.
pub fn line_graph(b: &Graph) -> Graph {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); b.n()];
    let mut ends = Vec::with_capacity(b.m());
    for (id, (x, y)) in b.edges().enumerate() {
        incident[x].push(id);
        incident[y].push(id);
        ends.push((x, y));
    }
    let adj = ends
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| {
            // Two distinct edges of a simple graph share at most one endpoint,
            // so the two lists are disjoint apart from `id` itself.
            let mut list: Vec<usize> = incident[x]
                .iter()
                .chain(&incident[y])
                .copied()
                .filter(|&e| e != id)
                .collect();
            list.sort_unstable();
            list
        })
        .collect();
    Graph::from_sorted_adjacency(adj)
}

/// A lifted graph together with the cover edge behind each of its vertices.
#[derive(Debug, Clone)]
pub struct Lift {
    pub graph: Graph,
    pub origin: Vec<CoverEdge>,
}

pub fn hl2_lift(g: &Graph) -> Result<Lift, GraphError> {
    if g.m() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let cover = bipartite_double_cover(g);
    let label = format!("HL({})", g.label().unwrap_or("G"));
    let graph = line_graph(&cover.graph).with_label(label);
    Ok(Lift {
        graph,
        origin: cover.edge_origin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DegreeInfo {
    Regular { degree: u128 },
    Irregular { min: u128, max: u128 },
}

impl DegreeInfo {
    fn of(g: &Graph) -> Self {
        match g.regular_degree() {
            Some(d) => DegreeInfo::Regular { degree: d as u128 },
            None => DegreeInfo::Irregular {
                min: g.min_degree() as u128,
                max: g.max_degree() as u128,
            },
        }
    }

    pub fn min(&self) -> u128 {
        match *self {
            DegreeInfo::Regular { degree } => degree,
            DegreeInfo::Irregular { min, .. } => min,
        }
    }

    pub fn max(&self) -> u128 {
        match *self {
            DegreeInfo::Regular { degree } => degree,
            DegreeInfo::Irregular { max, .. } => max,
        }
    }
}

/// One row of a tower summary.
#[derive(Debug, Clone, Serialize)]
pub struct TowerLevel {
    pub level: usize,
    pub vertices: u128,
    pub edges: u128,
    pub degree: DegreeInfo,
    /// Only known for constructed levels.
    pub components: Option<usize>,
    /// Whether this row comes from the size recurrence rather than a built graph.
    pub predicted: bool,
    /// `V_r = 2 E_{r-1}` and, for regular predecessors, `d_r = 2 d_{r-1} - 2`.
    pub recurrence_ok: bool,
    pub distinct_eigenvalues: Option<Vec<f64>>,
    pub coherence: Option<CoherenceReport>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TowerSummary {
    pub rows: Vec<TowerLevel>,
}

#[derive(Debug, Clone)]
pub struct Tower {
    /// `graphs[r]` is the level-`r` graph; `graphs[0]` is the base.
    pub graphs: Vec<Graph>,
    pub summary: TowerSummary,
}

fn recurrence_holds(prev: &TowerLevel, row: &TowerLevel) -> bool {
    let sizes = row.vertices == 2 * prev.edges;
    match (prev.degree, row.degree) {
        (DegreeInfo::Regular { degree: d }, DegreeInfo::Regular { degree: next }) => {
            sizes && d >= 1 && next == 2 * d - 2 && row.edges * 2 == row.vertices * next
        }
        (DegreeInfo::Regular { .. }, DegreeInfo::Irregular { .. }) => false,
        _ => sizes,
    }
}

fn level_row(level: usize, g: &Graph) -> TowerLevel {
    TowerLevel {
        level,
        vertices: g.n() as u128,
        edges: g.m() as u128,
        degree: DegreeInfo::of(g),
        components: Some(connected_components(g).count),
        predicted: false,
        recurrence_ok: true,
        distinct_eigenvalues: None,
        coherence: None,
    }
}

/// Builds `[G_0, .., G_levels]` with `G_{r+1} = HL(G_r)`.
///
/// Fails with [`GraphError::BudgetExceeded`] before building any level whose
/// vertex count `2 E_r` would exceed `budget`.
pub fn hl2_tower(g: &Graph, levels: usize, budget: usize) -> Result<Tower, GraphError> {
    if g.n() > budget {
        return Err(GraphError::BudgetExceeded {
            level: 0,
            predicted_vertices: g.n() as u128,
            budget,
        });
    }
    let mut graphs = vec![g.clone()];
    let mut rows = vec![level_row(0, g)];
    for level in 1..=levels {
        let prev = &graphs[level - 1];
        let predicted = 2 * prev.m() as u128;
        if predicted > budget as u128 {
            return Err(GraphError::BudgetExceeded {
                level,
                predicted_vertices: predicted,
                budget,
            });
        }
        let next = hl2_lift(prev)?.graph;
        let mut row = level_row(level, &next);
        row.recurrence_ok = recurrence_holds(&rows[level - 1], &row);
        assert!(
            row.vertices == 2 * rows[level - 1].edges,
            "lift size recurrence violated at level {level}"
        );
        graphs.push(next);
        rows.push(row);
    }
    Ok(Tower {
        graphs,
        summary: TowerSummary { rows },
    })
}

/// Sizes of tower levels `0..=levels` without building them.
///
/// Level 1 is exact for any base (`E_1 = sum_v deg(v)(deg(v) - 1)`); later
/// levels need a regular base and follow `V' = V d`, `d' = 2d - 2`,
/// `E' = V' d' / 2`. Rows stop early when a level is not predictable or the
/// numbers overflow.
pub fn predict_tower_sizes(g: &Graph, levels: usize) -> Vec<TowerLevel> {
    let mut rows = vec![level_row(0, g)];
    if levels == 0 || g.m() == 0 {
        return rows;
    }
    let lift_degrees = g.edges().map(|(u, v)| (g.degree(u) + g.degree(v) - 2) as u128);
    let (lo, hi) = lift_degrees.fold((u128::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)));
    let degree = if lo == hi {
        DegreeInfo::Regular { degree: lo }
    } else {
        DegreeInfo::Irregular { min: lo, max: hi }
    };
    let edges: u128 = (0..g.n())
        .map(|v| {
            let d = g.degree(v) as u128;
            d * d.saturating_sub(1)
        })
        .sum();
    let first = TowerLevel {
        level: 1,
        vertices: 2 * g.m() as u128,
        edges,
        degree,
        components: None,
        predicted: true,
        recurrence_ok: true,
        distinct_eigenvalues: None,
        coherence: None,
    };
    rows.push(first);
    for level in 2..=levels {
        let prev = &rows[level - 1];
        let DegreeInfo::Regular { degree: d } = prev.degree else {
            break;
        };
        let Some(vertices) = prev.edges.checked_mul(2) else {
            break;
        };
        let next_d = (2 * d).saturating_sub(2);
        let Some(edges) = vertices.checked_mul(next_d).map(|x| x / 2) else {
            break;
        };
        rows.push(TowerLevel {
            level,
            vertices,
            edges,
            degree: DegreeInfo::Regular { degree: next_d },
            components: None,
            predicted: true,
            recurrence_ok: true,
            distinct_eigenvalues: None,
            coherence: None,
        });
    }
    rows
}
