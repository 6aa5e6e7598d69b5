//! Krylov approximation of `exp(-i t A) v` for a real symmetric `A`.
//!
//! Lanczos (with full reorthogonalization) reduces `A` on
//! `span{v, Av, A^2 v, ..}` to a real tridiagonal `T = S Θ Sᵀ`, and
//!
//! ```text
//! exp(-i τ A) v ≈ ‖v‖ V S exp(-i τ Θ) Sᵀ e_1
//! ```
//!
//! The a posteriori estimate `β_m |e_mᵀ y(τ)|` (coupling to the next Krylov
//! vector times the last coefficient) decides how far in time one basis can
//! be trusted. A basis that hits breakdown spans an invariant subspace and is
//! exact for all `τ`.

use num_complex::Complex64;

use crate::graph::Graph;
use crate::spectral::symmetric_eigen;

use super::WalkError;

pub(crate) fn mul_complex(g: &Graph, x: &[Complex64], y: &mut [Complex64]) {
    for (v, out) in y.iter_mut().enumerate() {
        *out = g.neighbors(v).iter().map(|&w| x[w]).sum();
    }
}

fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn cnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) struct KrylovBasis {
    vectors: Vec<Vec<Complex64>>,
    theta: Vec<f64>,
    /// Eigenvectors of `T`, column `i` at `s[i * m..(i + 1) * m]`.
    s: Vec<f64>,
    beta_last: f64,
    scale: f64,
}

impl KrylovBasis {
    pub(crate) fn build(
        g: &Graph,
        v: &[Complex64],
        max_dim: usize,
    ) -> Result<Self, WalkError> {
        let n = g.n();
        let scale = cnorm(v);
        if scale == 0.0 {
            return Err(WalkError::InvalidParams("zero start vector".into()));
        }
        let breakdown = 1e-12 * (g.max_degree() as f64).max(1.0);
        let dim = max_dim.min(n).max(1);
        let mut vectors = vec![v.iter().map(|x| x / scale).collect::<Vec<_>>()];
        let mut alpha = Vec::with_capacity(dim);
        let mut beta = Vec::with_capacity(dim);
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        let beta_last = loop {
            let j = vectors.len() - 1;
            mul_complex(g, &vectors[j], &mut w);
            alpha.push(cdot(&vectors[j], &w).re);
            for _ in 0..2 {
                for b in &vectors {
                    let c = cdot(b, &w);
                    w.iter_mut().zip(b).for_each(|(w, b)| *w -= c * b);
                }
            }
            let b = cnorm(&w);
            if b <= breakdown {
                break 0.0;
            }
            if vectors.len() == dim {
                break b;
            }
            beta.push(b);
            vectors.push(w.iter().map(|x| x / b).collect());
        };
        let m = vectors.len();
        let mut t = vec![0.0; m * m];
        for i in 0..m {
            t[i * m + i] = alpha[i];
        }
        for (i, &b) in beta.iter().enumerate() {
            t[i * m + i + 1] = b;
            t[(i + 1) * m + i] = b;
        }
        let (theta, s) = symmetric_eigen(&t, m, true)
            .map_err(|e| WalkError::ConvergenceFailure(e.to_string()))?;
        Ok(Self {
            vectors,
            theta,
            s: s.unwrap_or_default(),
            beta_last,
            scale,
        })
    }

    pub(crate) fn is_exact(&self) -> bool {
        self.beta_last == 0.0
    }

    /// Coefficients `y(τ)` in the Krylov basis and the error estimate.
    pub(crate) fn coefficients(&self, tau: f64) -> (Vec<Complex64>, f64) {
        let m = self.vectors.len();
        let mut y = vec![Complex64::new(0.0, 0.0); m];
        for (i, &th) in self.theta.iter().enumerate() {
            let col = &self.s[i * m..(i + 1) * m];
            let c = Complex64::from_polar(self.scale * col[0], -tau * th);
            for (yj, &sj) in y.iter_mut().zip(col) {
                *yj += c * sj;
            }
        }
        let err = self.beta_last * y[m - 1].norm();
        (y, err)
    }

    pub(crate) fn state(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.vectors[0].len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (yj, vj) in y.iter().zip(&self.vectors) {
            out.iter_mut().zip(vj).for_each(|(o, v)| *o += yj * v);
        }
        out
    }

    pub(crate) fn amplitude(&self, y: &[Complex64], vertex: usize) -> Complex64 {
        y.iter().zip(&self.vectors).map(|(yj, vj)| yj * vj[vertex]).sum()
    }
}
