//! Coherence measures over the leading adjacency eigenstates: inverse
//! participation ratio, mixed-state purity, relative entropy of coherence and
//! an approximate logarithmic coherence number.
//!
//! The mixed state `ρ = Σ w_i |ψ_i⟩⟨ψ_i|` is kept as its ensemble; every
//! quantity needed here follows from the `k × k` Gram matrix or the diagonal,
//! so `ρ` is never formed densely.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ctqw::{return_series, series_stats, KrylovOptions, WalkError, WalkStats, DEFAULT_T_MIN};
use crate::graph::Graph;
use crate::spectral::{symmetric_eigen, top_k_eigenpairs, EigenOptions, EigenSystem, SpectralError, TieBreak};

/// Eigenvalues of `ρ` at or below this count as zero in entropies.
pub const ENTROPY_FLOOR: f64 = 1e-12;
pub const DEFAULT_K: usize = 5;
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-6;

const HERMITIAN_TOL: f64 = 1e-10;
const PSD_FLOOR: f64 = -1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoherenceError {
    #[error("matrix is not symmetric (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPSD(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Normalization of the eigenstate mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceMode {
    /// Weights `1/k_requested`; the trace is `k_used / k_requested`.
    #[default]
    Paper,
    /// Weights `1/k_used`; unit trace.
    Unit,
}

impl FromStr for TraceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(TraceMode::Paper),
            "unit" => Ok(TraceMode::Unit),
            other => Err(format!("unknown trace mode {other:?} (paper|unit)")),
        }
    }
}

impl fmt::Display for TraceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceMode::Paper => "paper",
            TraceMode::Unit => "unit",
        })
    }
}

/// Denominator of the log-coherence average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LcDivisor {
    #[default]
    Used,
    Requested,
}

impl FromStr for LcDivisor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "used" => Ok(LcDivisor::Used),
            "requested" => Ok(LcDivisor::Requested),
            other => Err(format!("unknown log-coherence divisor {other:?} (used|requested)")),
        }
    }
}

impl fmt::Display for LcDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LcDivisor::Used => "used",
            LcDivisor::Requested => "requested",
        })
    }
}

/// `Σ_j ψ_j⁴` of a normalized real state.
pub fn ipr(psi: &[f64]) -> f64 {
    psi.iter().map(|x| x.powi(4)).sum()
}

/// Mean IPR over the eigenvectors of `sys`.
pub fn avg_ipr(sys: &EigenSystem) -> f64 {
    if sys.k() == 0 {
        return 0.0;
    }
    sys.vectors.iter().map(|v| ipr(v)).sum::<f64>() / sys.k() as f64
}

/// `ρ = Σ w_i |v_i⟩⟨v_i|` over real unit vectors.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    weights: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    n: usize,
    pub k_requested: usize,
    pub k_used: usize,
    pub trace_mode: TraceMode,
}

impl DensityMatrix {
    /// Uniform mixture of the eigenvectors in `sys`.
    pub fn from_eigensystem(sys: &EigenSystem, k_requested: usize, mode: TraceMode, n: usize) -> Self {
        let k_used = sys.k();
        let denom = match mode {
            TraceMode::Paper => k_requested,
            TraceMode::Unit => k_used,
        } as f64;
        Self {
            weights: vec![1.0 / denom; k_used],
            vectors: sys.vectors.clone(),
            n,
            k_requested,
            k_used,
            trace_mode: mode,
        }
    }

    /// From a dense real symmetric matrix in row-major order.
    pub fn from_dense(rho: &[f64], n: usize) -> Result<Self, CoherenceError> {
        if rho.len() != n * n {
            return Err(CoherenceError::InvalidParams(format!(
                "expected {} entries, got {}",
                n * n,
                rho.len()
            )));
        }
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                asym = asym.max((rho[i * n + j] - rho[j * n + i]).abs());
            }
        }
        if asym > HERMITIAN_TOL {
            return Err(CoherenceError::NotHermitian(asym));
        }
        let (values, vecs) = symmetric_eigen(rho, n, true)?;
        let vecs = vecs.unwrap_or_default();
        if let Some(&low) = values.first() {
            if low < PSD_FLOOR {
                return Err(CoherenceError::NotPSD(low));
            }
        }
        let (weights, vectors) = values
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| (w, vecs[i * n..(i + 1) * n].to_vec()))
            .unzip();
        Ok(Self {
            weights,
            vectors,
            n,
            k_requested: n,
            k_used: n,
            trace_mode: TraceMode::Unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn trace(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.vectors)
            .map(|(w, v)| w * v.iter().map(|x| x * x).sum::<f64>())
            .sum()
    }

    /// Entry `ρ_ij`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights
            .iter()
            .zip(&self.vectors)
            .map(|(w, v)| w * v[i] * v[j])
            .sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for (w, v) in self.weights.iter().zip(&self.vectors) {
            d.iter_mut().zip(v).for_each(|(d, x)| *d += w * x * x);
        }
        d
    }

    /// `G_ij = √(w_i w_j) ⟨v_i, v_j⟩`, which shares its nonzero spectrum with `ρ`.
    fn gram(&self) -> Vec<f64> {
        let k = self.vectors.len();
        let mut g = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..=i {
                let dot: f64 = self.vectors[i].iter().zip(&self.vectors[j]).map(|(a, b)| a * b).sum();
                let x = (self.weights[i] * self.weights[j]).sqrt() * dot;
                g[i * k + j] = x;
                g[j * k + i] = x;
            }
        }
        g
    }

    /// Nonzero part of the spectrum of `ρ`, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, CoherenceError> {
        let k = self.vectors.len();
        Ok(symmetric_eigen(&self.gram(), k, false)?.0)
    }
}

/// `ρ = (1/k') Σ |ψ_i⟩⟨ψ_i|` over the `min(k, n)` leading eigenvectors.
pub fn mixed_density(
    g: &Graph,
    k: usize,
    mode: TraceMode,
    opts: &EigenOptions,
) -> Result<DensityMatrix, CoherenceError> {
    let sys = top_k_eigenpairs(g, k, opts)?;
    Ok(DensityMatrix::from_eigensystem(&sys, k, mode, g.n()))
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.gram().iter().map(|x| x * x).sum()
}

/// `-Σ μ log₂ μ` over `μ > ENTROPY_FLOOR`, with no renormalization.
pub fn entropy_bits(mu: &[f64]) -> f64 {
    -mu.iter()
        .filter(|&&x| x > ENTROPY_FLOOR)
        .map(|x| x * x.log2())
        .sum::<f64>()
}

/// `S(ρ_diag) - S(ρ)` in bits.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> Result<f64, CoherenceError> {
    let mu = rho.eigenvalues()?;
    if let Some(&low) = mu.first() {
        if low < PSD_FLOOR {
            return Err(CoherenceError::NotPSD(low));
        }
    }
    Ok(entropy_bits(&rho.diagonal()) - entropy_bits(&mu))
}

/// Mean of `log₂ |{j : |ψ_j| > threshold}|` over the eigenvectors of `sys`.
pub fn log_coherence(sys: &EigenSystem, k_requested: usize, threshold: f64, divisor: LcDivisor) -> f64 {
    let denom = match divisor {
        LcDivisor::Used => sys.k(),
        LcDivisor::Requested => k_requested,
    };
    if denom == 0 {
        return 0.0;
    }
    let total: f64 = sys
        .vectors
        .iter()
        .map(|v| {
            let support = v.iter().filter(|x| x.abs() > threshold).count();
            (support.max(1) as f64).log2()
        })
        .sum();
    total / denom as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceOptions {
    pub k: usize,
    pub threshold: f64,
    pub trace_mode: TraceMode,
    pub lc_divisor: LcDivisor,
    pub eigen: EigenOptions,
}

impl Default for CoherenceOptions {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            threshold: DEFAULT_SUPPORT_THRESHOLD,
            trace_mode: TraceMode::Paper,
            lc_divisor: LcDivisor::Used,
            eigen: EigenOptions::default(),
        }
    }
}

impl CoherenceOptions {
    pub fn with_tie_break(mut self, tie: TieBreak) -> Self {
        self.eigen.tie_break = tie;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub t_max: f64,
    pub steps: usize,
    pub start_vertex: usize,
    pub t_min: f64,
    pub krylov: KrylovOptions,
}

impl WalkParams {
    /// `(T, steps) = (30, 400)` for a base graph, `(60, 600)` for lifts.
    pub fn for_level(level: usize) -> Self {
        let (t_max, steps) = if level == 0 { (30.0, 400) } else { (60.0, 600) };
        Self {
            t_max,
            steps,
            start_vertex: 0,
            t_min: DEFAULT_T_MIN,
            krylov: KrylovOptions::default(),
        }
    }
}

/// One table row of coherence and walk metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub graph: String,
    pub n: usize,
    pub level: usize,
    pub k: usize,
    pub avg_ipr: f64,
    pub purity: f64,
    pub rel_entropy_bits: f64,
    pub log_coherence_bits: f64,
    pub mean_return: f64,
    pub peak: f64,
    pub revival_peak: Option<f64>,
    pub std: f64,
    /// Some selected eigenvalue is degenerate, so IPR, log coherence and
    /// possibly the relative entropy depend on the eigenbasis chosen.
    pub basis_sensitive: bool,
}

/// Spectral metrics without the walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCoherence {
    pub avg_ipr: f64,
    pub purity: f64,
    pub rel_entropy_bits: f64,
    pub log_coherence_bits: f64,
    pub basis_sensitive: bool,
}

pub fn spectral_coherence(g: &Graph, opts: &CoherenceOptions) -> Result<SpectralCoherence, CoherenceError> {
    let sys = top_k_eigenpairs(g, opts.k, &opts.eigen)?;
    let rho = DensityMatrix::from_eigensystem(&sys, opts.k, opts.trace_mode, g.n());
    Ok(SpectralCoherence {
        avg_ipr: avg_ipr(&sys),
        purity: purity(&rho),
        rel_entropy_bits: relative_entropy_coherence(&rho)?,
        log_coherence_bits: log_coherence(&sys, opts.k, opts.threshold, opts.lc_divisor),
        basis_sensitive: sys.degenerate.iter().any(|&d| d),
    })
}

pub fn coherence_report(
    g: &Graph,
    level: usize,
    opts: &CoherenceOptions,
    walk: &WalkParams,
) -> Result<CoherenceReport, CoherenceError> {
    let spec = spectral_coherence(g, opts)?;
    let stats: WalkStats = series_stats(
        &return_series(g, walk.start_vertex, walk.t_max, walk.steps, &walk.krylov)?,
        walk.t_min,
    );
    Ok(CoherenceReport {
        graph: g.label().unwrap_or("graph").to_owned(),
        n: g.n(),
        level,
        k: opts.k,
        avg_ipr: spec.avg_ipr,
        purity: spec.purity,
        rel_entropy_bits: spec.rel_entropy_bits,
        log_coherence_bits: spec.log_coherence_bits,
        mean_return: stats.mean,
        peak: stats.peak,
        revival_peak: stats.revival_peak,
        std: stats.std,
        basis_sensitive: spec.basis_sensitive,
    })
}
