//! Deterministic graph families.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{Graph, GraphError};
use crate::rng::seeded_rng;

/// Restart budget for the pairing model.
pub const RANDOM_REGULAR_RESTARTS: usize = 1000;

/// Complete graph `K_n`.
pub fn make_complete(n: usize) -> Graph {
    let adj = (0..n)
        .map(|u| (0..n).filter(|&v| v != u).collect())
        .collect();
    Graph::from_sorted_adjacency(adj).with_label(format!("complete:{n}"))
}

/// Petersen graph: outer 5-cycle `0..5`, spokes `i -- i+5`, inner pentagram on `5..10`.
pub fn make_petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges)
        .expect("petersen edge list is simple")
        .with_label("petersen")
}

/// Cycle `C_n`, `n >= 3`.
pub fn make_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParams(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?.with_label(format!("cycle:{n}")))
}

/// Uniform-ish random `d`-regular graph from the pairing (configuration) model.
///
/// Each attempt draws from ChaCha stream `attempt` of `seed`: the `n*d`
/// half-edge points `[0,0,..,1,1,..]` are Fisher-Yates shuffled and paired
/// consecutively. Pairings with a loop or a repeated edge are discarded and the
/// next stream is tried, up to [`RANDOM_REGULAR_RESTARTS`] attempts.
pub fn make_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(GraphError::InvalidParams(format!(
            "random regular graph needs d < n and n*d even (n={n}, d={d})"
        )));
    }
    let label = format!("rr:{d},{n},{seed}");
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let base = points.clone();
    'attempt: for attempt in 0..RANDOM_REGULAR_RESTARTS {
        let mut rng = seeded_rng(seed, attempt as u64);
        points.copy_from_slice(&base);
        points.shuffle(&mut rng);
        let mut seen = HashSet::with_capacity(n * d / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        let g = Graph::from_edges(n, seen.into_iter().collect::<Vec<_>>())?;
        return Ok(g.with_label(label));
    }
    Err(GraphError::GenerationFailed {
        attempts: RANDOM_REGULAR_RESTARTS,
    })
}

/// Erdős–Rényi `G(n, p)`: each pair `u < v`, in lexicographic order, is kept
/// when a uniform `[0, 1)` draw from ChaCha stream 0 of `seed` is below `p`.
pub fn make_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParams(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = seeded_rng(seed, 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, edges)?.with_label(format!("er:{n},{p},{seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::serialize_graph;
    use std::collections::VecDeque;

    /// Shortest cycle length by BFS from every vertex.
    fn girth(g: &Graph) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..g.n() {
            let mut dist = vec![usize::MAX; g.n()];
            let mut parent = vec![usize::MAX; g.n()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in g.neighbors(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    #[test]
    fn complete_graphs() {
        let k4 = make_complete(4);
        assert_eq!((k4.n(), k4.m(), k4.regular_degree()), (4, 6, Some(3)));
        let k1 = make_complete(1);
        assert_eq!((k1.n(), k1.m()), (1, 0));
        let k5 = make_complete(5);
        assert_eq!((k5.n(), k5.m(), k5.regular_degree()), (5, 10, Some(4)));
    }

    #[test]
    fn petersen_shape() {
        let g = make_petersen();
        assert_eq!((g.n(), g.m(), g.regular_degree()), (10, 15, Some(3)));
        assert_eq!(girth(&g), Some(5));
        assert_eq!(girth(&make_complete(4)), Some(3));
        assert_eq!(girth(&make_cycle(7).unwrap()), Some(7));
    }

    #[test]
    fn cycle_rejects_tiny() {
        assert!(make_cycle(2).is_err());
        assert_eq!(make_cycle(6).unwrap().regular_degree(), Some(2));
    }

    #[test]
    fn random_regular_small_is_k4() {
        for seed in 0..5 {
            assert_eq!(make_random_regular(4, 3, seed).unwrap(), make_complete(4));
        }
    }

    #[test]
    fn random_regular_is_deterministic_and_regular() {
        let a = make_random_regular(20, 3, 11).unwrap();
        let b = make_random_regular(20, 3, 11).unwrap();
        assert_eq!(serialize_graph(&a), serialize_graph(&b));
        assert_eq!(a.regular_degree(), Some(3));
        let c = make_random_regular(20, 4, 11).unwrap();
        assert_eq!(c.regular_degree(), Some(4));
    }

    #[test]
    fn random_regular_rejects_bad_params() {
        assert!(matches!(
            make_random_regular(5, 3, 0),
            Err(GraphError::InvalidParams(_))
        ));
        assert!(make_random_regular(4, 4, 0).is_err());
        assert!(make_random_regular(0, 0, 0).is_err());
    }

    #[test]
    fn erdos_renyi_bounds() {
        assert!(make_erdos_renyi(5, 1.5, 0).is_err());
        assert!(make_erdos_renyi(5, -0.1, 0).is_err());
        assert!(make_erdos_renyi(5, f64::NAN, 0).is_err());
        assert_eq!(make_erdos_renyi(6, 1.0, 3).unwrap(), make_complete(6));
        assert_eq!(make_erdos_renyi(6, 0.0, 3).unwrap().m(), 0);
    }

    #[test]
    fn erdos_renyi_edge_count_statistics() {
        // Edge count is Binomial(780, 0.3); the mean over 100 seeds has
        // standard error sqrt(780 * 0.3 * 0.7 / 100).
        let pairs = 40.0 * 39.0 / 2.0;
        let counts: Vec<f64> = (0..100)
            .map(|s| make_erdos_renyi(40, 0.3, s).unwrap().m() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / counts.len() as f64;
        let sigma = (pairs * 0.3 * 0.7 / 100.0_f64).sqrt();
        assert!((mean - 234.0).abs() < 3.0 * sigma, "mean {mean}");
    }
}
