//! Small dense linear-algebra helpers shared by the chain and Hamiltonian code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenpairs of a symmetric matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub(crate) struct SortedEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub(crate) fn symmetric_eigen_desc(m: &DMatrix<f64>) -> Result<SortedEigen> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Eigensolver("symmetric QR iteration did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        orient_first_nonzero_positive(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok(SortedEigen { values, vectors })
}

/// Flips the sign of `v` so that its first entry of non-negligible size is positive.
pub(crate) fn orient_first_nonzero_positive(v: &mut DVector<f64>) {
    let scale = v.amax();
    if scale == 0.0 {
        return;
    }
    if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-8 * scale) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

/// Largest absolute deviation of `uᵀu` from the identity.
#[cfg(test)]
pub(crate) fn orthonormality_error(u: &DMatrix<f64>) -> f64 {
    let gram = u.transpose() * u;
    (gram - DMatrix::identity(u.ncols(), u.ncols())).amax()
}

/// Solves `a x = b` by LU with partial pivoting, rejecting numerically singular systems.
pub(crate) fn lu_solve(
    a: DMatrix<f64>,
    b: &DVector<f64>,
    what: &'static str,
) -> Result<DVector<f64>> {
    let lu = a.lu();
    let x = lu.solve(b).ok_or(Error::SingularSystem(what))?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::SingularSystem(what))
    }
}
