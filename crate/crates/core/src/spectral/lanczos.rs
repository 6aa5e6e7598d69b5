//! Lanczos iteration for the largest-magnitude adjacency eigenpairs.
//!
//! Plain Lanczos sees a single direction per eigenspace, which is useless on
//! graphs whose spectra are massively degenerate (lift towers have a handful
//! of distinct eigenvalues). This driver therefore
//!
//! * fully reorthogonalizes every new basis vector (two Gram-Schmidt passes),
//! * continues past breakdown with a fresh random direction, leaving a zero
//!   coupling in the tridiagonal factor,
//! * locks converged Ritz pairs and restarts in their orthogonal complement.
//!
//! It stops once at least `k` pairs are locked and a run in the complement
//! finds nothing whose magnitude, error bar included, reaches the `k`-th
//! locked one, so every copy of an eigenvalue tied at the cut is present.

use rand::Rng as _;

use super::dense::tridiagonal_eigen;
use super::{magnitude_order, norm_bound, EigenOptions, SpectralError};
use crate::graph::Graph;
use crate::rng::{seeded_rng, Rng};

pub(crate) struct RitzPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

const MAX_RESTARTS: usize = 400;
const MIN_BASIS: usize = 40;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

/// Two passes of classical Gram-Schmidt against `locked` and `basis`.
fn orthogonalize(v: &mut [f64], locked: &[RitzPair], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for p in locked {
            let c = dot(&p.vector, v);
            axpy(-c, &p.vector, v);
        }
        for b in basis {
            let c = dot(b, v);
            axpy(-c, b, v);
        }
    }
}

fn random_unit(
    n: usize,
    rng: &mut Rng,
    locked: &[RitzPair],
    basis: &[Vec<f64>],
) -> Option<Vec<f64>> {
    for _ in 0..4 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let before = norm(&v);
        orthogonalize(&mut v, locked, basis);
        let after = norm(&v);
        if after > 1e-8 * before {
            v.iter_mut().for_each(|x| *x /= after);
            return Some(v);
        }
    }
    None
}

struct Run {
    basis: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// Coupling of the last basis vector to the (discarded) next one.
    beta_last: f64,
}

fn lanczos_run(
    g: &Graph,
    start: Vec<f64>,
    dim: usize,
    locked: &[RitzPair],
    rng: &mut Rng,
    breakdown: f64,
) -> Run {
    let n = g.n();
    let mut basis = vec![start];
    let mut alpha = Vec::with_capacity(dim);
    let mut beta = Vec::with_capacity(dim);
    let mut w = vec![0.0; n];
    loop {
        let j = basis.len() - 1;
        g.mul_vec(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        orthogonalize(&mut w, locked, &basis);
        let b = norm(&w);
        if basis.len() == dim {
            return Run {
                basis,
                alpha,
                beta,
                beta_last: b,
            };
        }
        if b > breakdown {
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        } else {
            // Invariant subspace: continue with a fresh direction.
            match random_unit(n, rng, locked, &basis) {
                Some(v) => {
                    beta.push(0.0);
                    basis.push(v);
                }
                None => {
                    return Run {
                        basis,
                        alpha,
                        beta,
                        beta_last: 0.0,
                    }
                }
            }
        }
    }
}

fn residual(g: &Graph, value: f64, v: &[f64], scratch: &mut [f64]) -> f64 {
    g.mul_vec(v, scratch);
    scratch
        .iter()
        .zip(v)
        .map(|(a, x)| (a - value * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn top_k(g: &Graph, k: usize, opts: &EigenOptions) -> Result<Vec<RitzPair>, SpectralError> {
    let n = g.n();
    let anorm = norm_bound(g);
    let lock_tol = 0.1 * opts.tol * anorm;
    let gap = 1e-6 * anorm;
    let tie_tol = super::DEGENERACY_TOL * anorm;
    let breakdown = 1e-10 * anorm;
    let dim_cap = (2 * k + 20).max(MIN_BASIS);

    let mut locked: Vec<RitzPair> = Vec::new();
    let mut scratch = vec![0.0; n];
    let mut next_start: Option<Vec<f64>> = None;

    for restart in 0..MAX_RESTARTS {
        let available = n - locked.len();
        if available == 0 {
            return Ok(locked);
        }
        let mut rng = seeded_rng(opts.seed, restart as u64);
        let start = match next_start.take() {
            Some(mut v) => {
                orthogonalize(&mut v, &locked, &[]);
                let len = norm(&v);
                if len > 1e-8 {
                    v.iter_mut().for_each(|x| *x /= len);
                    Some(v)
                } else {
                    random_unit(n, &mut rng, &locked, &[])
                }
            }
            None => random_unit(n, &mut rng, &locked, &[]),
        };
        let Some(start) = start else {
            return Ok(locked);
        };
        let run = lanczos_run(g, start, available.min(dim_cap), &locked, &mut rng, breakdown);
        let m = run.basis.len();
        let (theta, s) = tridiagonal_eigen(&run.alpha, &run.beta)?;
        let estimate = |i: usize| run.beta_last * s[i * m + m - 1].abs();
        let ritz_vector = |i: usize| {
            let mut y = vec![0.0; n];
            for (j, b) in run.basis.iter().enumerate() {
                axpy(s[i * m + j], b, &mut y);
            }
            y
        };

        let kth = |locked: &[RitzPair]| -> Option<f64> {
            if locked.len() < k {
                return None;
            }
            let vals: Vec<f64> = locked.iter().map(|p| p.value).collect();
            let order = magnitude_order(&vals, opts.tie_break, tie_tol);
            Some(vals[order[k - 1]].abs())
        };
        let threshold = kth(&locked);
        let order = magnitude_order(&theta, opts.tie_break, tie_tol);
        let still_needed = k.saturating_sub(locked.len());

        let mut newly_locked = 0;
        let mut pending = Vec::new();
        for (rank, &i) in order.iter().enumerate() {
            let wanted = match threshold {
                Some(t) => theta[i].abs() >= t - gap,
                None => rank < still_needed,
            };
            if !wanted {
                break;
            }
            if estimate(i) > lock_tol * 10.0 {
                pending.push(i);
                continue;
            }
            let mut y = ritz_vector(i);
            orthogonalize(&mut y, &locked, &[]);
            let len = norm(&y);
            if len < 0.5 {
                continue;
            }
            y.iter_mut().for_each(|x| *x /= len);
            g.mul_vec(&y, &mut scratch);
            let value = dot(&y, &scratch);
            if residual(g, value, &y, &mut scratch) <= lock_tol {
                locked.push(RitzPair { value, vector: y });
                newly_locked += 1;
            } else {
                pending.push(i);
            }
        }

        let exhausted = m == available && run.beta_last <= breakdown;
        if newly_locked == 0 && locked.len() >= k {
            let t = kth(&locked).unwrap_or(0.0);
            // Each end of the Ritz spectrum must be converged or sit below
            // the cut by more than its error bar.
            let settled = |i: usize| estimate(i) <= lock_tol || theta[i].abs() + estimate(i) < t - gap;
            let below = theta.iter().all(|x| x.abs() < t - gap);
            if exhausted || (settled(0) && settled(m - 1) && below) {
                return Ok(locked);
            }
        }
        if exhausted && newly_locked == 0 && locked.len() < k {
            return Err(SpectralError::ConvergenceFailure(format!(
                "complement exhausted with {} of {k} pairs locked",
                locked.len()
            )));
        }
        next_start = if pending.is_empty() {
            // Restart from the largest unconverged end of the Ritz spectrum.
            let lead = order.iter().copied().find(|&i| estimate(i) > lock_tol);
            lead.map(ritz_vector)
        } else {
            let mut v = vec![0.0; n];
            for &i in &pending {
                axpy(1.0, &ritz_vector(i), &mut v);
            }
            Some(v)
        };
    }
    Err(SpectralError::ConvergenceFailure(format!(
        "{} of {k} pairs locked after {MAX_RESTARTS} restarts",
        locked.len()
    )))
}
