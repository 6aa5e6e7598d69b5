use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::{Mat, Par};

use super::SpectralError;

/// Eigen-decomposition of a dense symmetric matrix given column-major.
///
/// Eigenvalues come back ascending; with `vectors`, eigenvector `i` occupies
/// `vecs[i * n..(i + 1) * n]`. Runs sequentially so results do not depend on
/// thread scheduling.
pub(crate) fn symmetric_eigen(
    a: &[f64],
    n: usize,
    vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>), SpectralError> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), vectors.then(Vec::new)));
    }
    let mat = Mat::<f64>::from_fn(n, n, |i, j| a[j * n + i]);
    let mut s = Diag::<f64>::zeros(n);
    let compute = if vectors {
        ComputeEigenvectors::Yes
    } else {
        ComputeEigenvectors::No
    };
    let mut u = vectors.then(|| Mat::<f64>::zeros(n, n));
    let mut buf = MemBuffer::new(self_adjoint_evd_scratch::<f64>(
        n,
        compute,
        Par::Seq,
        Default::default(),
    ));
    self_adjoint_evd(
        mat.as_ref(),
        s.as_mut(),
        u.as_mut().map(|u| u.as_mut()),
        Par::Seq,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|e| SpectralError::ConvergenceFailure(format!("dense eigensolver: {e:?}")))?;
    let values = (0..n).map(|i| s[i]).collect();
    let vecs = u.map(|u| {
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            out.extend((0..n).map(|i| u[(i, j)]));
        }
        out
    });
    Ok((values, vecs))
}

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`.
pub(crate) fn tridiagonal_eigen(
    alpha: &[f64],
    beta: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
    let m = alpha.len();
    let mut t = vec![0.0; m * m];
    for i in 0..m {
        t[i * m + i] = alpha[i];
    }
    for (i, &b) in beta.iter().enumerate().take(m.saturating_sub(1)) {
        t[i * m + i + 1] = b;
        t[(i + 1) * m + i] = b;
    }
    let (values, vectors) = symmetric_eigen(&t, m, true)?;
    Ok((values, vectors.unwrap_or_default()))
}
