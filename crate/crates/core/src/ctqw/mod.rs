//! Continuous-time quantum walks `ψ(t) = exp(-i t A) ψ(0)` on adjacency
//! matrices, return-probability series, and their statistics.

mod krylov;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use krylov::{cnorm, KrylovBasis};

/// Allowed deviation of a state norm from one.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("Krylov propagation did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("state norm {norm} deviates from 1")]
    NotNormalized { norm: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, WalkError> {
        let norm = cnorm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(WalkError::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// `δ_v` in dimension `n`.
    pub fn basis(n: usize, v: usize) -> Result<Self, WalkError> {
        if v >= n {
            return Err(WalkError::InvalidParams(format!("vertex {v} out of range for {n}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        amplitudes[v] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        cnorm(&self.amplitudes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Target error of the propagated state (2-norm).
    pub tol: f64,
    /// Largest Krylov basis.
    pub max_dim: usize,
    /// Smallest sub-step, relative to the total time, before giving up.
    pub min_step: f64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_dim: 64,
            min_step: 1e-9,
        }
    }
}

fn check_norm(state: &mut [Complex64]) -> Result<(), WalkError> {
    let norm = cnorm(state);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(WalkError::NotNormalized { norm });
    }
    state.iter_mut().for_each(|x| *x /= norm);
    Ok(())
}

/// Advances `state` by `t`, halving sub-steps until each meets its share
/// of the error budget.
fn advance(g: &Graph, state: &mut Vec<Complex64>, t: f64, opts: &KrylovOptions) -> Result<(), WalkError> {
    let total = t.abs();
    let sign = t.signum();
    let floor = opts.min_step * total.max(1.0);
    let mut done = 0.0;
    let mut step = total;
    while done < total {
        step = step.min(total - done);
        let basis = KrylovBasis::build(g, state, opts.max_dim)?;
        loop {
            let (y, err) = basis.coefficients(sign * step);
            if basis.is_exact() || err <= opts.tol * step / total {
                *state = basis.state(&y);
                done += step;
                if err < 0.1 * opts.tol * step / total {
                    step *= 2.0;
                }
                break;
            }
            step *= 0.5;
            if step < floor {
                return Err(WalkError::ConvergenceFailure(format!(
                    "sub-step fell below {floor:e} at t = {}",
                    sign * done
                )));
            }
        }
    }
    Ok(())
}

/// `exp(-i t A) ψ0`.
///
/// The result is renormalized when its norm is within [`NORM_TOL`] of one;
/// larger drift is reported as [`WalkError::NotNormalized`].
pub fn propagate(
    g: &Graph,
    psi0: &QuantumState,
    t: f64,
    opts: &KrylovOptions,
) -> Result<QuantumState, WalkError> {
    if psi0.len() != g.n() {
        return Err(WalkError::InvalidParams(format!(
            "state has length {}, graph has {} vertices",
            psi0.len(),
            g.n()
        )));
    }
    let mut state = psi0.amplitudes.clone();
    check_norm(&mut state)?;
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    if !t.is_finite() {
        return Err(WalkError::InvalidParams(format!("time {t} is not finite")));
    }
    advance(g, &mut state, t, opts)?;
    check_norm(&mut state)?;
    Ok(QuantumState { amplitudes: state })
}

/// Return probabilities from one start vertex on a uniform grid.
#[derive(Debug, Clone, Serialize)]
pub struct WalkSeries {
    pub times: Vec<f64>,
    pub p_return: Vec<f64>,
    pub start_vertex: usize,
    pub graph: Option<String>,
}

/// Uniform inclusive grid of `steps` points on `[0, t_max]`.
pub fn time_grid(t_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|j| t_max * j as f64 / (steps - 1) as f64)
        .collect()
}

/// `P(t) = |ψ_v(t)|²` for `ψ(0) = δ_v` on [`time_grid`]`(t_max, steps)`.
///
/// One Krylov basis serves consecutive grid points as long as its error
/// estimate stays within budget; the state is then re-expanded at the last
/// accepted point.
pub fn return_series(
    g: &Graph,
    v: usize,
    t_max: f64,
    steps: usize,
    opts: &KrylovOptions,
) -> Result<WalkSeries, WalkError> {
    if steps < 2 || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(WalkError::InvalidParams(format!(
            "need steps >= 2 and a positive horizon (steps={steps}, T={t_max})"
        )));
    }
    let times = time_grid(t_max, steps);
    let mut state = QuantumState::basis(g.n(), v)?.amplitudes;
    let mut p_return = Vec::with_capacity(steps);
    p_return.push(state[v].norm_sqr());

    let mut origin = 0.0;
    let mut basis = KrylovBasis::build(g, &state, opts.max_dim)?;
    let mut last_ok: Option<(f64, Vec<Complex64>)> = None;
    let mut j = 1;
    while j < steps {
        let tau = times[j] - origin;
        let (y, err) = basis.coefficients(tau);
        if basis.is_exact() || err <= opts.tol * tau / t_max {
            p_return.push(basis.amplitude(&y, v).norm_sqr());
            last_ok = Some((times[j], y));
            j += 1;
            continue;
        }
        match last_ok.take() {
            Some((t_ok, y_ok)) => {
                state = basis.state(&y_ok);
                origin = t_ok;
            }
            None => {
                advance(g, &mut state, tau, opts)?;
                origin = times[j];
                p_return.push(state[v].norm_sqr());
                j += 1;
            }
        }
        check_norm(&mut state)?;
        basis = KrylovBasis::build(g, &state, opts.max_dim)?;
    }
    Ok(WalkSeries {
        times,
        p_return,
        start_vertex: v,
        graph: g.label().map(str::to_owned),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkStats {
    pub mean: f64,
    pub peak: f64,
    pub peak_time: f64,
    /// Population standard deviation.
    pub std: f64,
    /// Largest return probability at `t >= t_min`, if the grid reaches it.
    pub revival_peak: Option<f64>,
    pub revival_time: Option<f64>,
    pub t_min: f64,
}

pub const DEFAULT_T_MIN: f64 = 1.0;

/// Grid statistics of a series. Mean, peak and std include `t = 0`.
pub fn series_stats(s: &WalkSeries, t_min: f64) -> WalkStats {
    let n = s.p_return.len() as f64;
    let mean = s.p_return.iter().sum::<f64>() / n;
    let var = s.p_return.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / n;
    let argmax = |pick: &dyn Fn(usize) -> bool| {
        (0..s.p_return.len())
            .filter(|&i| pick(i))
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if s.p_return[b] >= s.p_return[i] => Some(b),
                _ => Some(i),
            })
    };
    let peak = argmax(&|_| true).unwrap_or(0);
    let revival = argmax(&|i| s.times[i] >= t_min);
    WalkStats {
        mean,
        peak: s.p_return.get(peak).copied().unwrap_or(0.0),
        peak_time: s.times.get(peak).copied().unwrap_or(0.0),
        std: var.sqrt(),
        revival_peak: revival.map(|i| s.p_return[i]),
        revival_time: revival.map(|i| s.times[i]),
        t_min,
    }
}
