//! Adjacency spectra: dense and Lanczos eigensolvers, distinct-value
//! extraction, and the lift spectrum rule.
//!
//! Degenerate eigenspaces make individual eigenvectors basis dependent. To
//! keep results reproducible every eigenvector is normalized with its
//! largest-magnitude entry (first such index) positive, and the solvers run
//! deterministically for a fixed input.

mod dense;
mod lanczos;

pub(crate) use dense::symmetric_eigen;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Largest graph handed to the dense solver by default.
pub const DEFAULT_DENSE_CUTOFF: usize = 4096;
/// Default residual tolerance, relative to the norm bound of `A`.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
/// Eigenvalues closer than this (times `max(1, ‖A‖)`) count as equal.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph has {n} vertices, above the dense cutoff of {cutoff}")]
    TooLarge { n: usize, cutoff: usize },
    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("base graph is not regular")]
    NotRegular,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// How equal magnitudes `+x` and `-x` are ordered when selecting top pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Prefer the algebraically larger eigenvalue.
    #[default]
    Positive,
    Negative,
}

impl FromStr for TieBreak {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(TieBreak::Positive),
            "negative" => Ok(TieBreak::Negative),
            other => Err(format!("unknown tie-break {other:?} (positive|negative)")),
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieBreak::Positive => "positive",
            TieBreak::Negative => "negative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumMode {
    /// All pairs, eigenvalues descending.
    Full,
    /// Leading pairs by magnitude (see [`magnitude_order`]).
    TopK { k: usize },
}

#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// Unit eigenvectors aligned with `values`.
    pub vectors: Vec<Vec<f64>>,
    pub mode: SpectrumMode,
    /// Whether each eigenvalue has multiplicity above one in the full spectrum.
    pub degenerate: Vec<bool>,
}

impl EigenSystem {
    pub fn k(&self) -> usize {
        self.values.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub tie_break: TieBreak,
    pub dense_cutoff: usize,
    pub tol: f64,
    /// Seed for Lanczos start vectors.
    pub seed: u64,
    /// Use Lanczos even when the graph is below the dense cutoff.
    pub force_lanczos: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tie_break: TieBreak::Positive,
            dense_cutoff: DEFAULT_DENSE_CUTOFF,
            tol: DEFAULT_RESIDUAL_TOL,
            seed: 0x5eed,
            force_lanczos: false,
        }
    }
}

/// Upper bound on the spectral norm of the adjacency matrix, floored at 1.
pub(crate) fn norm_bound(g: &Graph) -> f64 {
    (g.max_degree() as f64).max(1.0)
}

/// Flip `v` so its first largest-magnitude entry is positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    if let Some(p) = v.iter().position(|x| x.abs() >= max * (1.0 - 1e-9)) {
        if v[p] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn degeneracy_flags(values: &[f64], tol: f64) -> Vec<bool> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut flags = vec![false; values.len()];
    for w in order.windows(2) {
        if (values[w[1]] - values[w[0]]).abs() <= tol {
            flags[w[0]] = true;
            flags[w[1]] = true;
        }
    }
    flags
}

/// Indices of `values` ordered by magnitude, largest first.
///
/// Magnitudes within `tol` of the first member of their group tie; ties go to
/// the algebraically larger value under [`TieBreak::Positive`] (smaller under
/// `Negative`), then to the lower index.
pub fn magnitude_order(values: &[f64], tie: TieBreak, tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[b]
            .abs()
            .total_cmp(&values[a].abs())
            .then(a.cmp(&b))
    });
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let lead = values[idx[start]].abs();
        let mut end = start + 1;
        while end < idx.len() && lead - values[idx[end]].abs() <= tol {
            end += 1;
        }
        let group = &mut idx[start..end];
        group.sort_by(|&a, &b| match tie {
            TieBreak::Positive => values[b].total_cmp(&values[a]),
            TieBreak::Negative => values[a].total_cmp(&values[b]),
        });
        // Runs of values equal up to tol go by index.
        let mut run = 0;
        while run < group.len() {
            let mut stop = run + 1;
            while stop < group.len() && (values[group[stop]] - values[group[run]]).abs() <= tol {
                stop += 1;
            }
            group[run..stop].sort_unstable();
            run = stop;
        }
        out.extend_from_slice(group);
        start = end;
    }
    out
}

/// All eigenpairs via the dense solver, eigenvalues descending.
pub fn full_spectrum(g: &Graph) -> Result<EigenSystem, SpectralError> {
    full_spectrum_with_cutoff(g, DEFAULT_DENSE_CUTOFF)
}

pub fn full_spectrum_with_cutoff(g: &Graph, cutoff: usize) -> Result<EigenSystem, SpectralError> {
    let n = g.n();
    if n > cutoff {
        return Err(SpectralError::TooLarge { n, cutoff });
    }
    let (asc, vecs) = symmetric_eigen(&g.dense_adjacency(), n, true)?;
    let vecs = vecs.unwrap_or_default();
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for i in (0..n).rev() {
        values.push(asc[i]);
        let mut v = vecs[i * n..(i + 1) * n].to_vec();
        fix_sign(&mut v);
        vectors.push(v);
    }
    let degenerate = degeneracy_flags(&values, DEGENERACY_TOL * norm_bound(g));
    Ok(EigenSystem {
        values,
        vectors,
        mode: SpectrumMode::Full,
        degenerate,
    })
}

/// All eigenvalues, descending, without eigenvectors.
pub fn eigenvalues(g: &Graph, cutoff: usize) -> Result<Vec<f64>, SpectralError> {
    let n = g.n();
    if n > cutoff {
        return Err(SpectralError::TooLarge { n, cutoff });
    }
    let (mut asc, _) = symmetric_eigen(&g.dense_adjacency(), n, false)?;
    asc.reverse();
    Ok(asc)
}

/// The `min(k, n)` leading eigenpairs by magnitude.
///
/// Graphs up to `opts.dense_cutoff` vertices are solved densely and
/// truncated; larger ones (or any with `force_lanczos`) go through Lanczos
/// with full reorthogonalization, locking and restarts.
pub fn top_k_eigenpairs(g: &Graph, k: usize, opts: &EigenOptions) -> Result<EigenSystem, SpectralError> {
    if k == 0 {
        return Err(SpectralError::InvalidParams("k must be at least 1".into()));
    }
    let tie_tol = DEGENERACY_TOL * norm_bound(g);
    if g.n() <= opts.dense_cutoff && !opts.force_lanczos {
        let full = full_spectrum_with_cutoff(g, opts.dense_cutoff)?;
        let order = magnitude_order(&full.values, opts.tie_break, tie_tol);
        let take = k.min(g.n());
        let pick = &order[..take];
        return Ok(EigenSystem {
            values: pick.iter().map(|&i| full.values[i]).collect(),
            vectors: pick.iter().map(|&i| full.vectors[i].clone()).collect(),
            mode: SpectrumMode::TopK { k },
            degenerate: pick.iter().map(|&i| full.degenerate[i]).collect(),
        });
    }
    let pairs = lanczos::top_k(g, k, opts)?;
    let values: Vec<f64> = pairs.iter().map(|p| p.value).collect();
    let order = magnitude_order(&values, opts.tie_break, tie_tol);
    let flags = degeneracy_flags(&values, tie_tol);
    let take = k.min(g.n());
    let mut out = EigenSystem {
        values: Vec::with_capacity(take),
        vectors: Vec::with_capacity(take),
        mode: SpectrumMode::TopK { k },
        degenerate: Vec::with_capacity(take),
    };
    for &i in &order[..take] {
        let mut v = pairs[i].vector.clone();
        fix_sign(&mut v);
        out.values.push(values[i]);
        out.vectors.push(v);
        out.degenerate.push(flags[i]);
    }
    Ok(out)
}

/// Clusters eigenvalues lying within `tol` of their neighbor and reports one
/// representative per cluster, descending: the nearest integer when the
/// cluster mean is within `tol` of it, else the mean.
pub fn distinct_eigenvalues(values: &[f64], tol: f64) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j - 1] - sorted[j] <= tol {
            j += 1;
        }
        let mean = sorted[i..j].iter().sum::<f64>() / (j - i) as f64;
        let rounded = mean.round();
        out.push(if (mean - rounded).abs() <= tol {
            rounded + 0.0
        } else {
            mean
        });
        i = j;
    }
    out
}

/// Whether every distinct value is an integer (as produced by [`distinct_eigenvalues`]).
pub fn is_integer_spectrum(distinct: &[f64]) -> bool {
    distinct.iter().all(|x| x.fract() == 0.0)
}

/// Shift used by a lift-spectrum rule: eigenvalue `λ` of a `d`-regular base
/// maps to `shift ± λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum LiftSpectrumRule {
    /// `d - 2 ± λ`, plus `-2` with multiplicity `2m - 2n`. Matches constructed lifts.
    #[default]
    DegreeMinusTwo,
    /// `2d - 2 ± λ` with the same `-2` padding; kept for comparison only.
    TwiceDegreeMinusTwo,
}

/// Predicted spectrum (descending) of the lift of a `d`-regular graph with
/// spectrum `spectrum`, `n` vertices and `m` edges.
pub fn predict_lift_spectrum(
    spectrum: &[f64],
    d: usize,
    n: usize,
    m: usize,
) -> Result<Vec<f64>, SpectralError> {
    predict_lift_spectrum_with(spectrum, d, n, m, LiftSpectrumRule::DegreeMinusTwo)
}

pub fn predict_lift_spectrum_with(
    spectrum: &[f64],
    d: usize,
    n: usize,
    m: usize,
    rule: LiftSpectrumRule,
) -> Result<Vec<f64>, SpectralError> {
    if spectrum.len() != n || n * d != 2 * m {
        return Err(SpectralError::NotRegular);
    }
    if d < 2 {
        return Err(SpectralError::InvalidParams(format!(
            "lift spectrum rule needs degree >= 2, got {d}"
        )));
    }
    let shift = match rule {
        LiftSpectrumRule::DegreeMinusTwo => d as f64 - 2.0,
        LiftSpectrumRule::TwiceDegreeMinusTwo => 2.0 * d as f64 - 2.0,
    };
    let mut out = Vec::with_capacity(2 * m);
    for &lambda in spectrum {
        out.push(shift + lambda);
        out.push(shift - lambda);
    }
    out.extend(std::iter::repeat_n(-2.0, 2 * m - 2 * n));
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Largest pointwise gap between two multisets after sorting, or `None` when
/// their sizes differ.
pub fn multiset_deviation(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(a.iter().zip(&b).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{hl2_lift, hl2_tower, make_complete, make_cycle, make_petersen};

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    fn check_pairs(g: &Graph, sys: &EigenSystem) {
        let n = g.n();
        let anorm = norm_bound(g);
        let mut av = vec![0.0; n];
        for (lambda, v) in sys.values.iter().zip(&sys.vectors) {
            g.mul_vec(v, &mut av);
            let res = av
                .iter()
                .zip(v)
                .map(|(a, x)| (a - lambda * x).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-8 * anorm, "residual {res}");
        }
        for i in 0..sys.k() {
            for j in 0..sys.k() {
                let dot: f64 = sys.vectors[i].iter().zip(&sys.vectors[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-8, "({i},{j}) {dot}");
            }
        }
    }

    #[test]
    fn k4_spectrum() {
        let sys = full_spectrum(&make_complete(4)).unwrap();
        assert_close(&sys.values, &[3.0, -1.0, -1.0, -1.0], 1e-12);
        assert_eq!(sys.degenerate, vec![false, true, true, true]);
        check_pairs(&make_complete(4), &sys);
    }

    #[test]
    fn edgeless_spectrum_is_zero() {
        let sys = full_spectrum(&Graph::empty(5)).unwrap();
        assert!(sys.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn dense_cutoff() {
        assert_eq!(
            full_spectrum_with_cutoff(&make_complete(5), 4).unwrap_err(),
            SpectralError::TooLarge { n: 5, cutoff: 4 }
        );
    }

    #[test]
    fn sign_convention() {
        let sys = full_spectrum(&make_petersen()).unwrap();
        for v in &sys.vectors {
            let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let p = v.iter().position(|x| x.abs() >= max * (1.0 - 1e-9)).unwrap();
            assert!(v[p] > 0.0);
        }
    }

    #[test]
    fn petersen_spectrum() {
        let sys = full_spectrum(&make_petersen()).unwrap();
        let mut want = vec![3.0];
        want.extend([1.0; 5]);
        want.extend([-2.0; 4]);
        assert_close(&sys.values, &want, 1e-10);
    }

    #[test]
    fn lift_of_k4_distinct() {
        let lift = hl2_lift(&make_complete(4)).unwrap().graph;
        let vals = full_spectrum(&lift).unwrap().values;
        assert_eq!(distinct_eigenvalues(&vals, 1e-6), vec![4.0, 2.0, 0.0, -2.0]);
    }

    #[test]
    fn k4_tower_distinct_sets() {
        let tower = hl2_tower(&make_complete(4), 3, 1000).unwrap();
        let want: Vec<Vec<f64>> = vec![
            vec![3.0, -1.0],
            vec![4.0, 2.0, 0.0, -2.0],
            vec![6.0, 4.0, 2.0, 0.0, -2.0],
            vec![10.0, 8.0, 6.0, 4.0, 2.0, 0.0, -2.0],
        ];
        for (g, w) in tower.graphs.iter().zip(want) {
            let vals = eigenvalues(g, DEFAULT_DENSE_CUTOFF).unwrap();
            assert_eq!(distinct_eigenvalues(&vals, 1e-6), w);
        }
    }

    #[test]
    fn distinct_clusters_non_integers() {
        let s = 5f64.sqrt();
        let d = distinct_eigenvalues(&[s, s + 1e-9, 1.0 + 1e-8, -s], 1e-6);
        assert_close(&d, &[s, 1.0, -s], 1e-8);
        assert_eq!(d[1], 1.0);
        assert!(!is_integer_spectrum(&d));
        assert!(is_integer_spectrum(&distinct_eigenvalues(&[-0.0000000001, 2.0], 1e-6)));
    }

    #[test]
    fn magnitude_order_tie_break() {
        let vals = [-2.0, 4.0, 2.0, 0.0, -2.0, 2.0];
        assert_eq!(magnitude_order(&vals, TieBreak::Positive, 1e-9), vec![1, 2, 5, 0, 4, 3]);
        assert_eq!(magnitude_order(&vals, TieBreak::Negative, 1e-9), vec![1, 0, 4, 2, 5, 3]);
    }

    #[test]
    fn top_k_truncates_to_n() {
        let sys = top_k_eigenpairs(&make_complete(4), 5, &EigenOptions::default()).unwrap();
        assert_eq!(sys.k(), 4);
        assert_eq!(sys.mode, SpectrumMode::TopK { k: 5 });
        assert!(top_k_eigenpairs(&make_complete(4), 0, &EigenOptions::default()).is_err());
    }

    #[test]
    fn top_k_petersen_magnitudes() {
        let sys = top_k_eigenpairs(&make_petersen(), 5, &EigenOptions::default()).unwrap();
        let mags: Vec<f64> = sys.values.iter().map(|x| x.abs()).collect();
        assert_close(&mags, &[3.0, 2.0, 2.0, 2.0, 2.0], 1e-10);
        check_pairs(&make_petersen(), &sys);
    }

    #[test]
    fn top_k_lift_prefers_positive_ties() {
        let lift = hl2_lift(&make_complete(4)).unwrap().graph;
        let sys = top_k_eigenpairs(&lift, 5, &EigenOptions::default()).unwrap();
        assert_close(&sys.values, &[4.0, 2.0, 2.0, 2.0, -2.0], 1e-10);
        let neg = EigenOptions {
            tie_break: TieBreak::Negative,
            ..EigenOptions::default()
        };
        let sys = top_k_eigenpairs(&lift, 5, &neg).unwrap();
        assert_close(&sys.values, &[4.0, -2.0, -2.0, -2.0, -2.0], 1e-10);
    }

    #[test]
    fn predict_k4_lift() {
        let pred = predict_lift_spectrum(&[3.0, -1.0, -1.0, -1.0], 3, 4, 6).unwrap();
        assert_eq!(pred.len(), 12);
        assert_eq!(
            pred,
            vec![4.0, 2.0, 2.0, 2.0, 0.0, 0.0, 0.0, -2.0, -2.0, -2.0, -2.0, -2.0]
        );
        assert_eq!(distinct_eigenvalues(&pred, 1e-6), vec![4.0, 2.0, 0.0, -2.0]);
    }

    #[test]
    fn predict_c5_lift_matches_construction() {
        let c5 = make_cycle(5).unwrap();
        let spec = eigenvalues(&c5, 100).unwrap();
        let pred = predict_lift_spectrum(&spec, 2, 5, 5).unwrap();
        let built = eigenvalues(&hl2_lift(&c5).unwrap().graph, 100).unwrap();
        assert!(multiset_deviation(&pred, &built).unwrap() < 1e-8);
    }

    #[test]
    fn predict_perron_value() {
        let pred = predict_lift_spectrum(&[5.0, -1.0, -1.0, -1.0, -1.0, -1.0], 5, 6, 15).unwrap();
        assert_eq!(pred[0], 8.0);
    }

    #[test]
    fn predict_rejects_irregular() {
        assert_eq!(
            predict_lift_spectrum(&[1.0, -1.0, 0.0], 2, 3, 2).unwrap_err(),
            SpectralError::NotRegular
        );
        assert!(predict_lift_spectrum(&[1.0, -1.0], 1, 2, 1).is_err());
    }

    #[test]
    fn alternate_rule_disagrees() {
        let pred = predict_lift_spectrum_with(
            &[3.0, -1.0, -1.0, -1.0],
            3,
            4,
            6,
            LiftSpectrumRule::TwiceDegreeMinusTwo,
        )
        .unwrap();
        assert_eq!(pred[0], 7.0);
        let built = eigenvalues(&hl2_lift(&make_complete(4)).unwrap().graph, 100).unwrap();
        assert!(multiset_deviation(&pred, &built).unwrap() > 1.0);
    }
}
