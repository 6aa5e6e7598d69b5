//! Walk-combinatorial indicators: closed 4-walks, triangles and clustering.

use serde::Serialize;

use crate::graph::Graph;

/// `Tr(A⁴) = Σ_ij (A²)_ij²`, accumulated exactly.
///
/// Row `i` of `A²` is gathered by counting 2-hop paths from `i` into a
/// scratch array, so the cost is `Σ_v deg(v)²` and `A²` is never stored.
pub fn trace_a4(g: &Graph) -> u128 {
    let n = g.n();
    let mut counts = vec![0u64; n];
    let mut touched = Vec::new();
    let mut total: u128 = 0;
    for i in 0..n {
        for &u in g.neighbors(i) {
            for &j in g.neighbors(u) {
                if counts[j] == 0 {
                    touched.push(j);
                }
                counts[j] += 1;
            }
        }
        for &j in &touched {
            let c = counts[j] as u128;
            total += c * c;
            counts[j] = 0;
        }
        touched.clear();
    }
    total
}

/// Triangles through each vertex.
pub fn triangles_per_vertex(g: &Graph) -> Vec<u64> {
    let mut per = vec![0u64; g.n()];
    for (u, v) in g.edges() {
        let (a, b) = (g.neighbors(u), g.neighbors(v));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let w = a[i];
                    // Count each triangle once, at its lexicographically smallest edge.
                    if w > v {
                        per[u] += 1;
                        per[v] += 1;
                        per[w] += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    per
}

pub fn triangle_count(g: &Graph) -> u64 {
    triangles_per_vertex(g).iter().sum::<u64>() / 3
}

/// Local clustering `t(v) / C(deg v, 2)`, zero for degree below two.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    triangles_per_vertex(g)
        .iter()
        .enumerate()
        .map(|(v, &t)| {
            let d = g.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                t as f64 / (d * (d - 1.0) / 2.0)
            }
        })
        .collect()
}

pub fn average_clustering(g: &Graph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    local_clustering(g).iter().sum::<f64>() / g.n() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralReport {
    pub n: usize,
    pub m: usize,
    pub trace_a4: u128,
    pub trace_a4_per_vertex: f64,
    /// Vertices of degree below two contribute zero.
    pub avg_clustering: f64,
    pub triangle_count: u64,
    pub triangles_per_vertex: f64,
}

pub fn structural_report(g: &Graph) -> StructuralReport {
    let n = g.n();
    let per_vertex = |x: f64| if n == 0 { 0.0 } else { x / n as f64 };
    let tr = trace_a4(g);
    let tri = triangle_count(g);
    StructuralReport {
        n,
        m: g.m(),
        trace_a4: tr,
        trace_a4_per_vertex: per_vertex(tr as f64),
        avg_clustering: average_clustering(g),
        triangle_count: tri,
        triangles_per_vertex: per_vertex(tri as f64),
    }
}
