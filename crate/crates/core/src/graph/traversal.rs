use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{Graph, GraphError};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartiteness {
    /// Proper 2-coloring, one entry per vertex.
    Bipartite { coloring: Vec<u8> },
    /// Closed walk `cycle[0] -- cycle[1] -- .. -- cycle[last] -- cycle[0]` of odd length.
    OddCycle { cycle: Vec<usize> },
}

impl Bipartiteness {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartiteness::Bipartite { .. })
    }
}

pub fn is_bipartite(g: &Graph) -> Bipartiteness {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    parent[w] = u;
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    return Bipartiteness::OddCycle {
                        cycle: tree_cycle(&parent, &depth, u, w),
                    };
                }
            }
        }
    }
    Bipartiteness::Bipartite { coloring: color }
}

/// Cycle formed by the BFS-tree paths from `u` and `w` to their common
/// ancestor plus the non-tree edge `u -- w`.
fn tree_cycle(parent: &[usize], depth: &[usize], u: usize, w: usize) -> Vec<usize> {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    left.extend(right.into_iter().rev());
    left
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component id per vertex, numbered `0..count` by smallest member.
    pub labels: Vec<usize>,
}

pub fn connected_components(g: &Graph) -> Components {
    let mut labels = vec![usize::MAX; g.n()];
    let mut count = 0;
    let mut stack = Vec::new();
    for root in 0..g.n() {
        if labels[root] != usize::MAX {
            continue;
        }
        labels[root] = count;
        stack.push(root);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if labels[w] == usize::MAX {
                    labels[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    Components { count, labels }
}

/// Induced subgraph grown by BFS.
#[derive(Debug, Clone)]
pub struct Sample {
    pub graph: Graph,
    /// `vertex_map[i]` is the original id of sample vertex `i`; entry 0 is the start.
    pub vertex_map: Vec<usize>,
}

/// Grows a connected region of at most `n_max` vertices by breadth-first
/// search from a uniformly drawn start vertex, visiting each vertex's
/// neighbors in a shuffled order. Returns the induced subgraph, numbered in
/// discovery order.
pub fn bfs_sample(g: &Graph, n_max: usize, seed: u64) -> Result<Sample, GraphError> {
    if n_max == 0 || g.n() == 0 {
        return Err(GraphError::InvalidParams(
            "sampling needs n_max >= 1 and a nonempty graph".into(),
        ));
    }
    let mut rng = seeded_rng(seed, 0);
    let start = rng.random_range(0..g.n());
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    let mut scratch = Vec::new();
    'grow: while let Some(u) = queue.pop_front() {
        scratch.clear();
        scratch.extend_from_slice(g.neighbors(u));
        scratch.shuffle(&mut rng);
        for &w in &scratch {
            if order.len() >= n_max {
                break 'grow;
            }
            if !seen[w] {
                seen[w] = true;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let graph = g.induced_subgraph(&order);
    let graph = match g.label() {
        Some(l) => graph.with_label(format!("bfs({l},{n_max},{seed})")),
        None => graph,
    };
    Ok(Sample {
        graph,
        vertex_map: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{hl2_tower, make_complete, make_cycle, make_petersen};

    fn assert_odd_cycle(g: &Graph, cycle: &[usize]) {
        assert!(cycle.len() % 2 == 1, "{cycle:?}");
        for i in 0..cycle.len() {
            assert!(g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]), "{cycle:?}");
        }
    }

    #[test]
    fn even_cycle_is_bipartite() {
        let g = make_cycle(6).unwrap();
        match is_bipartite(&g) {
            Bipartiteness::Bipartite { coloring } => {
                for (u, v) in g.edges() {
                    assert_ne!(coloring[u], coloring[v]);
                }
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(connected_components(&g).count, 1);
    }

    #[test]
    fn odd_witnesses() {
        for g in [make_petersen(), make_cycle(7).unwrap(), make_complete(4)] {
            match is_bipartite(&g) {
                Bipartiteness::OddCycle { cycle } => assert_odd_cycle(&g, &cycle),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn component_labels_are_contiguous() {
        let g = Graph::from_edges(6, [(0, 3), (1, 4), (2, 5), (4, 2)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.count, 2);
        assert_eq!(c.labels, vec![0, 1, 1, 0, 1, 1]);
        assert_eq!(connected_components(&Graph::empty(3)).count, 3);
    }

    #[test]
    fn sample_whole_small_graph() {
        let s = bfs_sample(&make_complete(4), 10, 5).unwrap();
        assert_eq!(s.graph, make_complete(4));
        let mut sorted = s.vertex_map.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
    }

    #[test]
    fn sample_cap_one() {
        let s = bfs_sample(&make_petersen(), 1, 9).unwrap();
        assert_eq!((s.graph.n(), s.graph.m()), (1, 0));
        assert!(bfs_sample(&make_petersen(), 0, 9).is_err());
    }

    #[test]
    fn sample_large_lift() {
        let tower = hl2_tower(&make_complete(4), 4, 100_000).unwrap();
        let big = &tower.graphs[4];
        let s = bfs_sample(big, 3000, 17).unwrap();
        assert_eq!(s.graph.n(), 2880);
        let s = bfs_sample(big, 1000, 17).unwrap();
        assert_eq!(s.graph.n(), 1000);
        assert_eq!(connected_components(&s.graph).count, 1);
        for (a, b) in s.graph.edges() {
            assert!(big.has_edge(s.vertex_map[a], s.vertex_map[b]));
        }
        let again = bfs_sample(big, 1000, 17).unwrap();
        assert_eq!(again.vertex_map, s.vertex_map);
    }
}
